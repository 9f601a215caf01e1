"""
Finite set fields and finitely additive probability measures.

A field is stored as its atom partition, never as a list of members. A measure
is a tuple of exact rational weights, one per atom, in the field's canonical
atom order (atoms sorted by the universe position of their first element).
"""

import itertools
import logging
from collections.abc import Mapping
from fractions import Fraction

from core.errors import (
    BudgetExceededError,
    ChainError,
    ExtensionRangeError,
    FieldError,
    MeasureError,
    RefinementError,
)

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


def exact(value):
    """Coerce an int, str or Fraction to a Fraction; floats are refused"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise MeasureError(f"inexact value {value!r}; use a Fraction or 'num/den'")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise MeasureError(f"not a rational: {value!r}") from e


def as_function(f):
    """Accept a dict-like map or a callable and return a callable"""
    if isinstance(f, Mapping):
        return f.__getitem__
    if callable(f):
        return f
    raise TypeError(f"expected a mapping or callable, got {type(f).__name__}")


class SetField:
    """A field of subsets of a finite universe, given by its atoms"""

    __slots__ = ('universe', 'atoms', 'rank', 'atom_index', 'is_powerset', '_hash')

    def __init__(self, universe, atoms):
        universe = tuple(universe)
        if not universe:
            raise FieldError("universe must be nonempty")
        rank = {x: k for k, x in enumerate(universe)}
        if len(rank) != len(universe):
            raise FieldError("universe has repeated elements")

        blocks = [frozenset(a) for a in atoms]
        atom_index = {}
        for block in blocks:
            if not block:
                raise FieldError("atoms must be nonempty")
            for x in block:
                if x not in rank:
                    raise FieldError(f"atom element {x!r} not in universe")
                if x in atom_index:
                    raise FieldError(f"element {x!r} lies in two atoms")
                atom_index[x] = None
        if len(atom_index) != len(universe):
            missing = [x for x in universe if x not in atom_index]
            raise FieldError(f"atoms do not cover the universe (missing {missing[:3]})")

        blocks.sort(key=lambda b: min(rank[x] for x in b))
        for k, block in enumerate(blocks):
            for x in block:
                atom_index[x] = k

        self.universe = universe
        self.atoms = tuple(blocks)
        self.rank = rank
        self.atom_index = atom_index
        self.is_powerset = len(blocks) == len(universe)
        self._hash = hash((self.universe, self.atoms))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SetField):
            return NotImplemented
        return self._hash == other._hash and self.universe == other.universe and self.atoms == other.atoms

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"SetField({len(self.universe)} points, {len(self.atoms)} atoms)"

    # --- SUBSET HELPERS ---

    def check_subset(self, subset):
        """Return subset as a frozenset, raising FieldError if it leaves the universe"""
        subset = frozenset(subset)
        for x in subset:
            if x not in self.rank:
                raise FieldError(f"element {x!r} not in universe")
        return subset

    def ordered(self, subset):
        """Elements of subset in universe order"""
        return sorted(subset, key=self.rank.__getitem__)

    def atom_of(self, x):
        return self.atoms[self.atom_index[x]]

    def atoms_meeting(self, subset):
        """Indices of atoms that intersect subset"""
        subset = self.check_subset(subset)
        return sorted({self.atom_index[x] for x in subset})

    def atoms_inside(self, subset):
        """Indices of atoms contained in subset"""
        subset = self.check_subset(subset)
        return [k for k in self.atoms_meeting(subset) if self.atoms[k] <= subset]

    def member_atoms(self, subset):
        """Indices of the atoms whose union is subset; FieldError if subset is not a member"""
        subset = self.check_subset(subset)
        if self.is_powerset:
            return sorted(self.atom_index[x] for x in subset)
        meeting = self.atoms_meeting(subset)
        for k in meeting:
            if not self.atoms[k] <= subset:
                raise FieldError(f"set is not a union of atoms (cuts atom {self.ordered(self.atoms[k])[:3]})")
        return meeting

    def contains(self, subset):
        try:
            self.member_atoms(subset)
        except FieldError:
            return False
        return True

    def union_of(self, indices):
        return frozenset().union(*(self.atoms[k] for k in indices))


# --- FIELD CONSTRUCTIONS ---

def powerset_field(universe):
    return SetField(universe, [[x] for x in universe])


def trivial_field(universe):
    universe = tuple(universe)
    return SetField(universe, [universe])


def field_extend_by_set(field, subset):
    """The smallest field [F, E] containing F and E: every atom splits along E"""
    subset = field.check_subset(subset)
    pieces = []
    for atom in field.atoms:
        inside = atom & subset
        outside = atom - subset
        if inside:
            pieces.append(inside)
        if outside:
            pieces.append(outside)
    if len(pieces) == len(field.atoms):
        return field
    return SetField(field.universe, pieces)


def field_generate(universe, generators=()):
    """Coarsest field in which every generator is a member"""
    field = trivial_field(universe)
    for generator in generators:
        field = field_extend_by_set(field, generator)
    return field


def field_refines(finer, coarser):
    """True iff every atom of coarser is a union of atoms of finer"""
    if finer.universe != coarser.universe:
        return False
    for atom in finer.atoms:
        first = next(iter(atom))
        if not atom <= coarser.atom_of(first):
            return False
    return True


def preimage_field(field, f, universe):
    """The field {f^-1(E) : E in field} on universe; f must map universe onto field.universe"""
    fn = as_function(f)
    blocks = {}
    for x in universe:
        y = fn(x)
        if y not in field.atom_index:
            raise MeasureError(f"map sends {x!r} to {y!r}, outside the target universe")
        blocks.setdefault(field.atom_index[y], []).append(x)
    if len(blocks) != len(field.atoms):
        raise ChainError("map is not onto the atoms of the target field")
    return SetField(universe, blocks.values())


def field_members(field, budget=None):
    """Iterate over all members of the field (2 ** atoms of them)"""
    count = 1 << len(field.atoms)
    if budget is not None and count > budget:
        raise BudgetExceededError("field member enumeration", count, budget)
    indices = range(len(field.atoms))
    for size in range(len(field.atoms) + 1):
        for chosen in itertools.combinations(indices, size):
            yield field.union_of(chosen)


# --- MEASURES ---

class FAMeasure:
    """Finitely additive probability measure with exact weights on the atoms of a field"""

    __slots__ = ('field', 'weights', '_hash')

    def __init__(self, field, weights):
        weights = tuple(exact(w) for w in weights)
        if len(weights) != len(field.atoms):
            raise MeasureError(f"expected {len(field.atoms)} atom weights, got {len(weights)}")
        for w in weights:
            if w < 0:
                raise MeasureError(f"negative weight {w}")
        total = sum(weights, ZERO)
        if total != ONE:
            raise MeasureError(f"weights sum to {total}, not 1")
        self.field = field
        self.weights = weights
        self._hash = hash((field, weights))

    @classmethod
    def from_atom_map(cls, field, mapping):
        """Build from {atom (any iterable) or element: weight}; unnamed atoms get 0"""
        weights = [ZERO] * len(field.atoms)
        for key, value in mapping.items():
            if isinstance(key, (frozenset, set, tuple, list)):
                members = frozenset(key)
                if not members or next(iter(members)) not in field.atom_index:
                    raise MeasureError(f"unknown atom {sorted(map(str, members))}")
                k = field.atom_index[next(iter(members))]
                if field.atoms[k] != members:
                    raise MeasureError(f"{sorted(map(str, members))} is not an atom")
            else:
                if key not in field.atom_index:
                    raise MeasureError(f"element {key!r} not in universe")
                k = field.atom_index[key]
            weights[k] += exact(value)
        return cls(field, weights)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FAMeasure):
            return NotImplemented
        return self._hash == other._hash and self.weights == other.weights and self.field == other.field

    def __hash__(self):
        return self._hash

    def __repr__(self):
        shown = ", ".join(
            f"{self.field.ordered(atom)[0]}:{w}" for atom, w in zip(self.field.atoms, self.weights) if w
        )
        return f"FAMeasure({shown})"

    def atom_weights(self):
        """[(atom, weight)] in canonical atom order"""
        return list(zip(self.field.atoms, self.weights))

    def support(self):
        return frozenset().union(*(atom for atom, w in self.atom_weights() if w))


def measure_of(mu, subset):
    """Measure of a field member"""
    try:
        indices = mu.field.member_atoms(subset)
    except FieldError as e:
        raise FieldError(f"measure_of: {e}") from e
    return sum((mu.weights[k] for k in indices), ZERO)


def outer_measure(mu, subset):
    """Total weight of the atoms meeting subset"""
    return sum((mu.weights[k] for k in mu.field.atoms_meeting(subset)), ZERO)


def inner_measure(mu, subset):
    """Total weight of the atoms inside subset"""
    return sum((mu.weights[k] for k in mu.field.atoms_inside(subset)), ZERO)


def point_mass(m, field):
    if m not in field.atom_index:
        raise MeasureError(f"point {m!r} not in universe")
    weights = [ZERO] * len(field.atoms)
    weights[field.atom_index[m]] = ONE
    return FAMeasure(field, weights)


def uniform_measure(field):
    """Equal weight on every element, summed per atom"""
    n = len(field.universe)
    return FAMeasure(field, [Fraction(len(atom), n) for atom in field.atoms])


# --- EXTENSIONS ---

def los_marczewski_extend(mu, subset, p):
    """
    Extend mu to [F, E] with value p on E.

    Atoms inside E keep their mass on E, atoms outside keep none, and every
    straddling atom puts the fraction (p - inner) / (outer - inner) of its mass
    on its part inside E.
    """
    field = mu.field
    subset = field.check_subset(subset)
    p = exact(p)
    if not ZERO <= p <= ONE:
        raise MeasureError(f"value {p} is not in [0, 1]")

    inner = inner_measure(mu, subset)
    outer = outer_measure(mu, subset)
    if not inner <= p <= outer:
        raise ExtensionRangeError(p, inner, outer)
    share = ZERO if outer == inner else (p - inner) / (outer - inner)

    extended = field_extend_by_set(field, subset)
    weights = {}
    for atom, w in mu.atom_weights():
        inside = atom & subset
        outside = atom - subset
        if inside and outside:
            weights[inside] = w * share
            weights[outside] = w * (ONE - share)
        else:
            weights[atom] = w
    nu = FAMeasure(extended, [weights[atom] for atom in extended.atoms])
    logger.debug("Los-Marczewski: %d -> %d atoms, value %s on the new set", len(field.atoms), len(extended.atoms), p)
    return nu


def horn_tarski_extend(mu, finer):
    """Extend mu to a finer field, splitting each atom's mass equally among the atoms it contains"""
    coarse = mu.field
    if finer.universe != coarse.universe:
        raise RefinementError("target field lives on a different universe")
    if not field_refines(finer, coarse):
        raise RefinementError("target field does not refine the field of the measure")

    counts = [0] * len(coarse.atoms)
    parent = []
    for atom in finer.atoms:
        k = coarse.atom_index[next(iter(atom))]
        counts[k] += 1
        parent.append(k)
    return FAMeasure(finer, [mu.weights[k] / counts[k] for k in parent])


def restrict_measure(mu, coarser):
    """Marginal of mu on a coarser field over the same universe"""
    if not field_refines(mu.field, coarser):
        raise RefinementError("measure field does not refine the requested subfield")
    weights = [ZERO] * len(coarser.atoms)
    for atom, w in mu.atom_weights():
        weights[coarser.atom_index[next(iter(atom))]] += w
    return FAMeasure(coarser, weights)


# --- MAPS BETWEEN SPACES ---

def pushforward(mu, f, target_field):
    """The measure E -> mu(f^-1(E)) on target_field"""
    fn = as_function(f)
    preimages = [set() for _ in target_field.atoms]
    for x in mu.field.universe:
        y = fn(x)
        if y not in target_field.atom_index:
            raise MeasureError(f"map sends {x!r} to {y!r}, outside the target universe")
        preimages[target_field.atom_index[y]].add(x)

    weights = []
    for atom, pre in zip(target_field.atoms, preimages):
        try:
            weights.append(measure_of(mu, pre))
        except FieldError as e:
            shown = target_field.ordered(atom)[:3]
            raise MeasureError(f"preimage of atom {shown} is not measurable") from e
    return FAMeasure(target_field, weights)


def pullback(mu, f, universe):
    """
    Measure on f^-1(F) over universe with f^-1(E) -> mu(E).

    f must map universe onto the universe of mu.
    """
    fn = as_function(f)
    universe = tuple(universe)
    images = {fn(x) for x in universe}
    missing = [y for y in mu.field.universe if y not in images]
    if missing:
        raise ChainError(f"map is not onto (misses {missing[:3]})")
    field = preimage_field(mu.field, fn, universe)
    weights = [mu.weights[mu.field.atom_index[fn(next(iter(atom)))]] for atom in field.atoms]
    return FAMeasure(field, weights)


def glue_chain(measures, top_universe, projections):
    """
    Glue a consistent finite chain of measures into one measure on the top level.

    measures[k] lives on level k; top_universe is level len(measures).
    projections[(xi, zeta)] maps level zeta onto level xi; missing entries are
    composed from consecutive ones.
    """
    if not measures:
        raise ChainError("empty chain")
    top = len(measures)
    universes = [mu.field.universe for mu in measures] + [tuple(top_universe)]

    def projection(xi, zeta):
        if (xi, zeta) in projections:
            return as_function(projections[(xi, zeta)])
        if zeta == xi + 1:
            raise ChainError(f"missing projection from level {zeta} to level {xi}")
        inner, outer = projection(xi, zeta - 1), projection(zeta - 1, zeta)
        return lambda x: inner(outer(x))

    # 1. Every projection is onto
    for xi in range(top):
        for zeta in range(xi + 1, top + 1):
            fn = projection(xi, zeta)
            image = {fn(x) for x in universes[zeta]}
            if image != set(universes[xi]):
                raise ChainError(f"projection {zeta} -> {xi} is not onto")

    # 2. Projections commute
    for (xi, zeta) in projections:
        for beta in range(xi + 1, zeta):
            direct, first, second = projection(xi, zeta), projection(beta, zeta), projection(xi, beta)
            for x in universes[zeta]:
                if second(first(x)) != direct(x):
                    raise ChainError(f"projections {zeta} -> {beta} -> {xi} do not commute at {x!r}")

    # 3. Marginals agree
    for xi in range(top):
        for beta in range(xi + 1, top):
            fn = projection(xi, beta)
            for atom, w in measures[xi].atom_weights():
                pre = {x for x in universes[beta] if fn(x) in atom}
                try:
                    value = measure_of(measures[beta], pre)
                except FieldError as e:
                    raise ChainError(f"level {beta} field does not contain a level {xi} preimage") from e
                if value != w:
                    raise ChainError(f"level {beta} gives {value} where level {xi} gives {w}")

    return pullback(measures[-1], projection(top - 1, top), universes[top])
