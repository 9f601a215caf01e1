import random
from fractions import Fraction

import pytest

from config.config import RANDOM_SEED
from core.errors import BudgetExceededError, ChainError, ExtensionRangeError, FieldError, MeasureError, RefinementError
from core.measure import (
    FAMeasure,
    SetField,
    field_extend_by_set,
    field_generate,
    field_members,
    field_refines,
    glue_chain,
    horn_tarski_extend,
    inner_measure,
    los_marczewski_extend,
    measure_of,
    outer_measure,
    point_mass,
    powerset_field,
    preimage_field,
    pullback,
    pushforward,
    restrict_measure,
    trivial_field,
    uniform_measure,
)

UNIVERSE = ('x1', 'x2', 'x3', 'x4')


@pytest.fixture
def halves():
    field = SetField(UNIVERSE, [['x1', 'x2'], ['x3', 'x4']])
    return FAMeasure.from_atom_map(field, {'x1': Fraction(1, 2), 'x3': Fraction(1, 2)})


# --- FIELDS ---

def test_atoms_are_sorted_by_first_element():
    field = SetField(UNIVERSE, [['x4', 'x2'], ['x3', 'x1']])
    assert field.atoms == (frozenset({'x1', 'x3'}), frozenset({'x2', 'x4'}))
    assert field.atom_index['x4'] == 1


def test_overlapping_atoms_are_rejected():
    with pytest.raises(FieldError):
        SetField(UNIVERSE, [['x1', 'x2'], ['x2', 'x3', 'x4']])


def test_atoms_must_cover_the_universe():
    with pytest.raises(FieldError):
        SetField(UNIVERSE, [['x1', 'x2']])


def test_empty_universe_is_rejected():
    with pytest.raises(FieldError):
        SetField((), [])


def test_membership_is_union_of_atoms(halves):
    field = halves.field
    assert field.contains({'x1', 'x2'})
    assert field.contains(set())
    assert not field.contains({'x1'})
    with pytest.raises(FieldError):
        field.member_atoms({'x1', 'x3'})
    with pytest.raises(FieldError):
        field.check_subset({'x9'})


def test_extend_by_set_splits_straddling_atoms(halves):
    extended = field_extend_by_set(halves.field, {'x2', 'x3'})
    assert extended.is_powerset
    assert field_refines(extended, halves.field)
    assert not field_refines(halves.field, extended)
    assert field_extend_by_set(halves.field, {'x1', 'x2'}) is halves.field


def test_generate_and_members():
    field = field_generate(UNIVERSE, [{'x1'}, {'x1', 'x2'}])
    assert len(field.atoms) == 3
    members = list(field_members(field))
    assert len(members) == 8
    assert frozenset() in members and frozenset(UNIVERSE) in members
    with pytest.raises(BudgetExceededError):
        list(field_members(powerset_field(UNIVERSE), budget=4))


def test_preimage_field_needs_an_onto_map():
    target = powerset_field(('h', 't'))
    field = preimage_field(target, lambda x: 'h' if x in ('x1', 'x2') else 't', UNIVERSE)
    assert len(field.atoms) == 2
    with pytest.raises(ChainError):
        preimage_field(target, lambda x: 'h', UNIVERSE)


# --- MEASURES ---

def test_weights_must_sum_to_one():
    field = trivial_field(UNIVERSE)
    with pytest.raises(MeasureError):
        FAMeasure(field, [Fraction(1, 2)])
    with pytest.raises(MeasureError):
        FAMeasure(powerset_field(('h', 't')), [2, -1])


def test_floats_are_refused():
    with pytest.raises(MeasureError):
        FAMeasure(powerset_field(('h', 't')), [0.5, 0.5])


def test_from_atom_map_rejects_non_atoms(halves):
    with pytest.raises(MeasureError):
        FAMeasure.from_atom_map(halves.field, {frozenset({'x1'}): 1})
    with pytest.raises(MeasureError):
        FAMeasure.from_atom_map(halves.field, {'x9': 1})


def test_measures_compare_by_field_and_weights(halves):
    again = FAMeasure.from_atom_map(halves.field, {frozenset({'x1', 'x2'}): Fraction(1, 2), 'x4': Fraction(1, 2)})
    assert again == halves
    assert hash(again) == hash(halves)
    assert uniform_measure(halves.field) == halves
    assert point_mass('x1', halves.field) != halves


def test_inner_and_outer(halves):
    assert inner_measure(halves, {'x2', 'x3'}) == 0
    assert outer_measure(halves, {'x2', 'x3'}) == 1
    assert inner_measure(halves, {'x1', 'x2', 'x3'}) == Fraction(1, 2)
    assert measure_of(halves, {'x3', 'x4'}) == Fraction(1, 2)
    with pytest.raises(FieldError):
        measure_of(halves, {'x1'})


# --- EXTENSIONS ---

def test_los_marczewski_four_point_values(halves):
    nu = los_marczewski_extend(halves, {'x2', 'x3'}, Fraction(1, 4))
    assert nu.weights == (Fraction(3, 8), Fraction(1, 8), Fraction(1, 8), Fraction(3, 8))
    assert measure_of(nu, {'x2', 'x3'}) == Fraction(1, 4)
    assert restrict_measure(nu, halves.field) == halves


def test_los_marczewski_on_trivial_field():
    coin = FAMeasure(trivial_field(('h', 't')), [1])
    nu = los_marczewski_extend(coin, {'h'}, Fraction(1, 2))
    assert nu.weights == (Fraction(1, 2), Fraction(1, 2))


def test_los_marczewski_out_of_range(halves):
    with pytest.raises(ExtensionRangeError) as info:
        los_marczewski_extend(halves, {'x1', 'x2'}, Fraction(1, 3))
    assert info.value.inner == info.value.outer == Fraction(1, 2)
    with pytest.raises(MeasureError):
        los_marczewski_extend(halves, {'x2'}, 2)


def _random_measure(rng):
    size = rng.randint(1, 8)
    universe = [f"u{k}" for k in range(size)]
    labels = [rng.randrange(size) for _ in universe]
    atoms = {}
    for x, label in zip(universe, labels):
        atoms.setdefault(label, []).append(x)
    field = SetField(universe, atoms.values())
    raw = [rng.randint(0, 4) for _ in field.atoms]
    raw[rng.randrange(len(raw))] += 1
    total = sum(raw)
    return FAMeasure(field, [Fraction(w, total) for w in raw])


def test_los_marczewski_laws_on_random_fields():
    rng = random.Random(RANDOM_SEED)
    grid = sorted({Fraction(a, d) for d in range(1, 9) for a in range(d + 1)})
    for _ in range(200):
        mu = _random_measure(rng)
        universe = mu.field.universe
        subset = frozenset(x for x in universe if rng.random() < 0.5)
        inner, outer = inner_measure(mu, subset), outer_measure(mu, subset)
        values = [p for p in grid if inner <= p <= outer] or [inner]
        for p in values:
            nu = los_marczewski_extend(mu, subset, p)
            assert measure_of(nu, subset) == p
            assert restrict_measure(nu, mu.field) == mu
            assert sum(nu.weights) == 1
        below = [p for p in grid if p < inner]
        if below:
            with pytest.raises(ExtensionRangeError):
                los_marczewski_extend(mu, subset, below[-1])


def test_los_marczewski_worked_example():
    field = SetField((1, 2, 3, 4), [[1, 2], [3, 4]])
    mu = FAMeasure(field, [Fraction(3, 5), Fraction(2, 5)])
    nu = los_marczewski_extend(mu, {1, 3}, Fraction(1, 2))
    assert [measure_of(nu, {x}) for x in (1, 2, 3, 4)] == [
        Fraction(3, 10), Fraction(3, 10), Fraction(1, 5), Fraction(1, 5)]
    assert measure_of(nu, {1, 3}) == Fraction(1, 2)


def test_los_marczewski_keeps_measurable_sets(halves):
    nu = los_marczewski_extend(halves, {'x1', 'x2'}, Fraction(1, 2))
    assert nu == halves


def test_horn_tarski_worked_examples():
    field = SetField((1, 2, 3), [[1, 2], [3]])
    mu = FAMeasure(field, [Fraction(1, 2), Fraction(1, 2)])
    nu = horn_tarski_extend(mu, powerset_field((1, 2, 3)))
    assert [measure_of(nu, {x}) for x in (1, 2, 3)] == [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)]
    assert horn_tarski_extend(mu, field) == mu

    coin = FAMeasure(trivial_field((1, 2, 3)), [1])
    spread = horn_tarski_extend(coin, powerset_field((1, 2, 3)))
    assert spread.weights == (Fraction(1, 3),) * 3


def _random_member(rng, field):
    return field.union_of([k for k in range(len(field.atoms)) if rng.random() < 0.5])


def _assert_additive(rng, nu, pairs=10):
    for _ in range(pairs):
        first = _random_member(rng, nu.field)
        second = _random_member(rng, nu.field) - first
        assert measure_of(nu, first | second) == measure_of(nu, first) + measure_of(nu, second)


def test_extensions_are_additive_on_random_fields():
    rng = random.Random(RANDOM_SEED + 1)
    for _ in range(200):
        mu = _random_measure(rng)
        universe = mu.field.universe
        subset = frozenset(x for x in universe if rng.random() < 0.5)
        inner, outer = inner_measure(mu, subset), outer_measure(mu, subset)
        p = inner + (outer - inner) * Fraction(rng.randint(0, 4), 4)
        _assert_additive(rng, los_marczewski_extend(mu, subset, p))

        finer = mu.field
        for _ in range(rng.randint(1, 3)):
            finer = field_extend_by_set(finer, frozenset(x for x in universe if rng.random() < 0.5))
        nu = horn_tarski_extend(mu, finer)
        assert restrict_measure(nu, mu.field) == mu
        _assert_additive(rng, nu)


def test_horn_tarski_splits_equally(halves):
    fine = powerset_field(UNIVERSE)
    nu = horn_tarski_extend(halves, fine)
    assert nu.weights == (Fraction(1, 4),) * 4
    assert restrict_measure(nu, halves.field) == halves
    with pytest.raises(RefinementError):
        horn_tarski_extend(nu, halves.field)
    with pytest.raises(RefinementError):
        horn_tarski_extend(halves, powerset_field(('h', 't')))


# --- MAPS ---

def test_pushforward_and_pullback(halves):
    side = {'x1': 'h', 'x2': 'h', 'x3': 't', 'x4': 't'}
    coin = pushforward(halves, side, powerset_field(('h', 't')))
    assert coin.weights == (Fraction(1, 2), Fraction(1, 2))
    back = pullback(coin, side, UNIVERSE)
    assert back == halves
    with pytest.raises(MeasureError):
        pushforward(halves, {'x1': 'h', 'x2': 't', 'x3': 't', 'x4': 't'}, powerset_field(('h', 't')))
    with pytest.raises(ChainError):
        pullback(coin, lambda x: 'h', UNIVERSE)


def _chain(level_one):
    nature = uniform_measure(powerset_field(('h', 't')))
    middle = FAMeasure.from_atom_map(powerset_field(('h0', 'h1', 't0', 't1')), level_one)
    top = ('h0a', 'h0b', 'h1a', 't0a', 't1a')
    projections = {(0, 1): lambda x: x[0], (1, 2): lambda x: x[:2]}
    return [nature, middle], top, projections


def test_glue_chain_pulls_the_last_level_up():
    measures, top, projections = _chain({'h0': Fraction(1, 4), 'h1': Fraction(1, 4), 't0': Fraction(1, 2)})
    glued = glue_chain(measures, top, projections)
    assert measure_of(glued, {'h0a', 'h0b'}) == Fraction(1, 4)
    assert measure_of(glued, {'t0a'}) == Fraction(1, 2)


def test_glue_chain_rejects_disagreeing_marginals():
    measures, top, projections = _chain({'h0': Fraction(1, 2), 'h1': Fraction(1, 2)})
    with pytest.raises(ChainError):
        glue_chain(measures, top, projections)
    with pytest.raises(ChainError):
        glue_chain([], top, projections)
