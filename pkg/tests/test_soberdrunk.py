from fractions import Fraction

import pytest

from core.errors import BudgetExceededError, RecordError
from core.exprlang import depth, evaluate
from core.measure import measure_of
from core.records import cylinder_event, make_state, restrict
from core.soberdrunk import (
    build_beliefs,
    check_depth_agreement,
    check_induction_hypothesis,
    check_lemma8,
    check_lemma9,
    check_theorem2,
    lemma9_corpus,
    lemma9_expr,
    level_measures,
    padded_space,
    separation_demo,
    soberdrunk_space,
    unbounded_complexity_report,
)
from core.typespace import classify, validate

LEVELS = [1, 2, 3, pytest.param(4, marks=pytest.mark.slow)]


def test_construction_bounds():
    with pytest.raises(RecordError):
        build_beliefs(0)
    with pytest.raises(BudgetExceededError):
        build_beliefs(3, max_level=2)


def test_w1_is_a_valid_eight_state_space(w1):
    assert len(w1.states) == 8
    assert classify(w1) == '*'
    assert validate(w1).ok
    assert w1.name == 'W^1'


def test_first_level_nature_beliefs(w1):
    h = cylinder_event('nature', 1, 'h').members(w1.states)
    sure = make_state('h', {0}, (), 1)
    unsure = make_state('h', (), {0}, 1)
    assert measure_of(w1.T('a', sure), h) == 1
    assert measure_of(w1.T('a', unsure), h) == Fraction(1, 2)
    assert measure_of(w1.T('b', unsure), h) == 1


def test_opponent_bit_beliefs(w2):
    # a has bit 1 off, so a gives b's bit 0 exactly one half
    w = make_state('t', {0}, {0}, 2)
    event = cylinder_event('bit', 2, 1, player='b', index=0).members(w2.states)
    assert measure_of(w2.T('a', w), event) == Fraction(1, 2)
    sure = make_state('t', {0, 1}, {0}, 2)
    assert measure_of(w2.T('a', sure), event) == 1


@pytest.mark.parametrize('n', LEVELS)
def test_belief_properties(n):
    tower = build_beliefs(n)
    report = check_theorem2(tower)
    assert report.ok, report.to_dict()
    expected = {'constant_on_blocks', 'block_mass_one', 'nature_mass'}
    if n >= 2:
        expected |= {'opponent_bit_mass', 'cylinder_locality'}
    assert set(report.checks) == expected
    assert check_induction_hypothesis(tower).ok


@pytest.mark.parametrize('n', LEVELS)
def test_spaces_are_valid_and_read_their_bits(n):
    space = soberdrunk_space(n)
    assert len(space.states) == 2 ** (2 * n + 1)
    assert validate(space).ok
    assert check_lemma8(space, n).ok
    assert check_lemma9(space, n).ok
    agreement = check_depth_agreement(space, n)
    assert agreement.ok
    assert set(agreement.checks) == {'agreement', 'separation'}


def test_level_measures_restrict_consistently():
    measures = level_measures(2)
    assert set(measures) == {1, 2}
    w = make_state('h', {0}, {1}, 2)
    lower = measures[1]['a'][restrict(w, 1)]
    upper = measures[2]['a'][w]
    for atom, weight in lower.atom_weights():
        lifted = frozenset(x for x in upper.field.universe if restrict(x, 1) in atom)
        assert measure_of(upper, lifted) == weight


def test_padded_space_adds_certain_players():
    space = padded_space(1, ('a', 'b', 'c'))
    assert space.players == ('a', 'b', 'c')
    assert validate(space).ok
    w = space.states[3]
    assert measure_of(space.T('c', w), {w}) == 1
    with pytest.raises(RecordError):
        padded_space(1, ('a', 'c'))


# --- EXPRESSION FAMILY ---

def test_bit_expressions(w2):
    expr = lemma9_expr('a', 1, 1)
    assert depth(expr) == 2
    assert evaluate(w2, expr) == cylinder_event('bit', 2, 1, player='a', index=1).members(w2.states)
    assert evaluate(w2, lemma9_expr('b', 0, 0)) == cylinder_event('bit', 2, 0, player='b', index=0).members(w2.states)


def test_bit_expression_arguments():
    with pytest.raises(RecordError):
        lemma9_expr('a', 2, 1, n=2)
    with pytest.raises(RecordError):
        lemma9_expr('a', 0, 2)
    with pytest.raises(RecordError):
        lemma9_expr('c', 0, 1)


def test_corpus_size():
    corpus = lemma9_corpus(2)
    assert len(corpus) == 2 + 2 * 2 * 2
    assert max(depth(e) for e in corpus) == 2


# --- SEPARATION ---

@pytest.mark.parametrize('n', [2, 3, pytest.param(4, marks=pytest.mark.slow)])
def test_separation(n):
    report = separation_demo(n)
    assert report.ok, report.to_dict()
    assert report.alpha == n - 1
    assert report.psi_depth == n
    assert report.fingerprints_split


def test_separation_for_player_b_at_lower_depth(w2):
    report = separation_demo(2, alpha=0, player='b', space=w2)
    assert report.ok
    assert str(report.u) == '(h,{},{0})'
    assert report.to_dict()['psi'] == 'or(B[b,1](nat(h)), B[b,1](nat(t)))'


def test_separation_arguments(w2):
    with pytest.raises(RecordError):
        separation_demo(2, alpha=2, space=w2)
    with pytest.raises(RecordError):
        separation_demo(2, player='c', space=w2)


def test_unbounded_complexity():
    report = unbounded_complexity_report(3)
    assert report.ok
    rows = report.notes[-1]['levels']
    assert [row['states'] for row in rows] == [8, 32, 128]
    assert all(row['distinct_depth_n_fingerprints'] == row['states'] for row in rows)
