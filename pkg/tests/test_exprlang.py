from fractions import Fraction

import pytest

from core.errors import ExpressionError, ExpressionSyntaxError
from core.exprlang import (
    And,
    Bel,
    Description,
    Evaluator,
    Nat,
    Not,
    Or,
    believed_value,
    conj,
    depth,
    desc_contains,
    disj,
    evaluate,
    parse,
    to_text,
    walk,
)


@pytest.mark.parametrize('text', [
    'nat(h)',
    'not nat(t)',
    'and(nat(h), B[b,1](nat(t)))',
    'or(nat(h), not B[a,1/2](nat(t)))',
    'B[a,0](B[b,2/3](and(nat(h), nat(t))))',
])
def test_canonical_text_round_trips(text):
    expr = parse(text)
    assert to_text(expr) == text
    assert parse(to_text(expr)) == expr


def test_parser_builds_nodes():
    expr = parse('B[a, 1/2]( and( nat(h) , not nat(t) ) )')
    assert expr == Bel('a', Fraction(1, 2), And((Nat('h'), Not(Nat('t')))))


def test_syntax_errors_carry_a_position():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse('and(nat(h), )')
    assert info.value.line == 1
    assert info.value.column is not None
    with pytest.raises(ExpressionSyntaxError):
        parse('nat(h')


@pytest.mark.parametrize('text', ['B[a,3/2](nat(h))', 'B[a,-1](nat(h))', 'B[a,1/0](nat(h))'])
def test_thresholds_must_be_probabilities(text):
    with pytest.raises(ExpressionError):
        parse(text)


def test_names_are_checked_against_the_space(nature):
    assert parse('B[a,1](nat(h))', nature, ('a', 'b')) == Bel('a', 1, Nat('h'))
    with pytest.raises(ExpressionError):
        parse('nat(rain)', nature)
    with pytest.raises(ExpressionError):
        parse('B[c,1](nat(h))', nature, ('a', 'b'))


def test_depth_counts_nested_beliefs():
    assert depth(parse('nat(h)')) == 0
    assert depth(parse('not B[a,1](nat(h))')) == 1
    assert depth(parse('and(B[a,1](B[b,1](nat(h))), B[b,1](nat(t)))')) == 2
    assert depth(parse('or(nat(h), B[a,1/3](not B[b,1](B[a,1](nat(t)))))')) == 3


def test_conj_and_disj_flatten_single_items():
    assert conj(Nat('h')) == Nat('h')
    assert disj(Nat('h'), Nat('t')) == Or((Nat('h'), Nat('t')))
    with pytest.raises(ExpressionError):
        And(())


def test_walk_visits_every_node():
    expr = parse('and(nat(h), B[a,1](not nat(t)))')
    assert [type(node).__name__ for node in walk(expr)] == ['And', 'Nat', 'Bel', 'Not', 'Nat']


# --- SEMANTICS ---

def test_evaluate_on_two_state(two_state):
    assert evaluate(two_state, parse('nat(h)')) == {'m1'}
    assert evaluate(two_state, parse('B[a,1/2](nat(h))')) == {'m1', 'm2'}
    assert evaluate(two_state, parse('B[a,1](nat(h))')) == frozenset()
    assert evaluate(two_state, parse('B[a,0](nat(t))')) == {'m1', 'm2'}


def test_or_evaluates_as_its_expansion(two_state):
    expr = parse('or(nat(h), B[b,1](nat(t)))')
    assert evaluate(two_state, expr) == evaluate(two_state, expr.expand()) == {'m1'}


def test_lopsided_beliefs(lopsided):
    sure_of_h = parse('B[a,1](nat(h))')
    assert evaluate(lopsided, sure_of_h) == {'x'}
    assert believed_value(lopsided, 'a', 'y', parse('nat(t)')) == Fraction(1, 2)
    assert desc_contains(lopsided, 'y', parse('B[a,1/2](nat(t))'))
    assert not desc_contains(lopsided, 'x', parse('B[a,1/2](nat(t))'))


def test_evaluator_reuses_subexpressions(lopsided):
    run = Evaluator(lopsided)
    inner = parse('B[a,1](nat(h))')
    run(parse('and(nat(h), B[b,1](B[a,1](nat(h))))'))
    assert inner in run.events
    assert run(inner) is run.events[inner]


def test_unknown_names_fail_at_evaluation(two_state):
    with pytest.raises(ExpressionError):
        evaluate(two_state, Nat('rain'))
    with pytest.raises(ExpressionError):
        evaluate(two_state, Bel('c', 1, Nat('h')))


def test_description_membership(lopsided):
    desc = Description(lopsided, 'x')
    assert parse('B[a,1](nat(h))') in desc
    assert parse('nat(t)') not in desc
    assert desc.fingerprint(1) == Description(lopsided, 'x').fingerprint(1)
    with pytest.raises(ExpressionError):
        Description(lopsided, 'w')
