"""
Finite type spaces, their validation, the belief operator and type morphisms.
"""

import itertools
import logging
from dataclasses import dataclass, field as dc_field

from core.errors import BudgetExceededError, MorphismError, TypeSpaceError
from core.measure import (
    ONE,
    FAMeasure,
    SetField,
    ZERO,
    exact,
    inner_measure,
    measure_of,
    outer_measure,
    point_mass,
    powerset_field,
    pushforward,
)

logger = logging.getLogger(__name__)


class NatureSpace:
    """States of nature S with named events; the field on S is always the powerset"""

    def __init__(self, points, events=None):
        self.points = tuple(points)
        if not self.points:
            raise TypeSpaceError("nature space needs at least one point")
        self.field = powerset_field(self.points)

        if events is None:
            events = {str(s): [s] for s in self.points}
        self.events = {}
        for name, members in events.items():
            try:
                self.events[name] = self.field.check_subset(members)
            except ValueError as e:
                raise TypeSpaceError(f"nature event '{name}': {e}") from e

    def __eq__(self, other):
        if not isinstance(other, NatureSpace):
            return NotImplemented
        return self.points == other.points and self.events == other.events

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"NatureSpace({', '.join(map(str, self.points))})"

    def event(self, name):
        if name not in self.events:
            raise KeyError(name)
        return self.events[name]


class TypeSpace:
    """
    A finite type space: states M, a field on M, a nature map theta and one
    type map per player sending each state to a measure on (M, field).
    """

    def __init__(self, nature, states, theta, types, field=None, name=''):
        self.nature = nature
        self.states = tuple(states)
        if not self.states:
            raise TypeSpaceError("type space needs at least one state")
        self.field = field if field is not None else powerset_field(self.states)
        if self.field.universe != self.states:
            raise TypeSpaceError("field universe differs from the state list")

        self.theta = dict(theta)
        for m in self.states:
            if m not in self.theta:
                raise TypeSpaceError(f"theta undefined at state {m}")
            if self.theta[m] not in nature.field.rank:
                raise TypeSpaceError(f"theta({m}) = {self.theta[m]!r} is not a nature point")

        if not types:
            raise TypeSpaceError("type space needs at least one player")
        self.players = tuple(types)
        self.types = {}
        for i, type_map in types.items():
            for m in self.states:
                if m not in type_map:
                    raise TypeSpaceError(f"type of player {i} undefined at state {m}")
            self.types[i] = {m: type_map[m] for m in self.states}
        self.name = name

    def __repr__(self):
        label = f" '{self.name}'" if self.name else ""
        return f"TypeSpace{label}({len(self.states)} states, players {','.join(self.players)})"

    def T(self, i, m):
        return self.types[i][m]

    def ordered(self, subset):
        return self.field.ordered(subset)

    def all_states(self):
        return frozenset(self.states)

    def nature_event(self, name):
        """theta^-1 of the named nature event"""
        event = self.nature.event(name)
        return frozenset(m for m in self.states if self.theta[m] in event)


# --- VALIDATION ---

@dataclass
class Violation:
    kind: str
    detail: str
    player: object = None
    state: object = None
    witness: dict = dc_field(default_factory=dict)

    def to_dict(self):
        entry = {'kind': self.kind, 'detail': self.detail}
        if self.player is not None:
            entry['player'] = str(self.player)
        if self.state is not None:
            entry['state'] = str(self.state)
        if self.witness:
            entry['witness'] = self.witness
        return entry


@dataclass
class ValidationReport:
    violations: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {
            'valid': self.ok,
            'violations': [v.to_dict() for v in self.violations],
            'notes': list(self.notes),
        }


def type_classes(space, i):
    """The partition {[T_i(m)]} in order of first state"""
    classes = {}
    for m in space.states:
        classes.setdefault(space.T(i, m), []).append(m)
    return [frozenset(members) for members in classes.values()]


def _names(space, subset):
    return [str(m) for m in space.ordered(subset)]


def validate(space):
    """Check measure fields, measurability of theta and T_i, and introspection"""
    report = ValidationReport()
    field = space.field

    # 1. Measures live on the space's field
    well_formed = {}
    for i in space.players:
        well_formed[i] = True
        for m in space.states:
            mu = space.T(i, m)
            if not isinstance(mu, FAMeasure) or mu.field != field:
                well_formed[i] = False
                report.violations.append(Violation(
                    'measure', "type is not a measure on the state field", player=i, state=m))
                break

    # 2. theta is constant on every atom
    for atom in field.atoms:
        members = field.ordered(atom)
        for m in members[1:]:
            if space.theta[m] != space.theta[members[0]]:
                point = space.theta[members[0]]
                report.violations.append(Violation(
                    'theta-measurability',
                    f"theta^-1({point}) cuts a field atom",
                    state=m,
                    witness={'atom': _names(space, atom), 'states': [str(members[0]), str(m)],
                             'event': [str(point)]},
                ))
                break

    # 3. T_i is constant on every atom
    for i in space.players:
        if not well_formed[i]:
            continue
        for atom in field.atoms:
            members = field.ordered(atom)
            first = space.T(i, members[0])
            clash = next((m for m in members[1:] if space.T(i, m) != first), None)
            if clash is None:
                continue
            other = space.T(i, clash)
            k = next(k for k, (x, y) in enumerate(zip(first.weights, other.weights)) if x != y)
            threshold = max(first.weights[k], other.weights[k])
            report.violations.append(Violation(
                'type-measurability',
                f"B_{i}^{threshold} of a field atom cuts another atom",
                player=i,
                state=clash,
                witness={'atom': _names(space, atom), 'states': [str(members[0]), str(clash)],
                         'event': _names(space, field.atoms[k]), 'threshold': str(threshold)},
            ))

    # 4. Introspection: every measurable superset of [T_i(m)] has mass 1
    for i in space.players:
        if not well_formed[i]:
            continue
        for cls in type_classes(space, i):
            m = space.ordered(cls)[0]
            mu = space.T(i, m)
            outer = outer_measure(mu, cls)
            if outer != ONE:
                report.violations.append(Violation(
                    'introspection',
                    f"a measurable superset of [T_{i}({m})] has mass {outer}",
                    player=i,
                    state=m,
                    witness={'class': _names(space, cls), 'outer_measure': str(outer)},
                ))
            elif not field.contains(cls) and inner_measure(mu, cls) != ONE:
                report.notes.append(
                    f"[T_{i}({m})] is not measurable; inner measure {inner_measure(mu, cls)}")

    if not report.ok:
        logger.warning("%r failed validation with %d violation(s)", space, len(report.violations))
    return report


def classify(space):
    """'*' when the field separates states, otherwise '∞'"""
    return '*' if space.field.is_powerset else '∞'


# --- BELIEF OPERATOR ---

def belief_operator(space, i, p, event, cache=None):
    """States where player i assigns event at least probability p"""
    p = exact(p)
    if not ZERO <= p <= ONE:
        raise TypeSpaceError(f"threshold {p} is not in [0, 1]")
    event = frozenset(event)
    if not space.field.contains(event):
        raise TypeSpaceError("belief_operator: event is not in the state field")
    values = {} if cache is None else cache
    result = set()
    for m in space.states:
        mu = space.T(i, m)
        key = (mu, event)
        if key not in values:
            values[key] = measure_of(mu, event)
        if values[key] >= p:
            result.add(m)
    return frozenset(result)


# --- MORPHISMS ---

@dataclass
class MorphismReport:
    ok: bool
    reason: str = ''
    witness: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {'morphism': self.ok, 'reason': self.reason, 'witness': self.witness}


def _check_compatible(source, target, f):
    if set(source.players) != set(target.players):
        raise MorphismError("spaces have different player sets")
    if source.nature != target.nature:
        raise MorphismError("spaces have different nature spaces")
    for m in source.states:
        if m not in f:
            raise MorphismError(f"map undefined at source state {m}")
        if f[m] not in target.field.rank:
            raise MorphismError(f"map sends {m} to {f[m]!r}, not a target state")


def is_type_morphism(source, target, f):
    """Check measurability, theta-commutation and the belief condition for f: source -> target"""
    _check_compatible(source, target, f)

    # 1. Measurable: preimages of target atoms are source members
    preimages = [set() for _ in target.field.atoms]
    for m in source.states:
        preimages[target.field.atom_index[f[m]]].add(m)
    preimages = [frozenset(pre) for pre in preimages]
    for atom, pre in zip(target.field.atoms, preimages):
        if not source.field.contains(pre):
            return MorphismReport(False, 'not measurable', {'target_atom': _names(target, atom)})

    # 2. Nature is preserved
    for m in source.states:
        if source.theta[m] != target.theta[f[m]]:
            return MorphismReport(False, 'theta not preserved', {
                'state': str(m), 'image': str(f[m]),
                'theta': str(source.theta[m]), 'target_theta': str(target.theta[f[m]])})

    # 3. Beliefs are pushed forward
    for i in target.players:
        pushed = {}
        for m in source.states:
            mu = source.T(i, m)
            if mu not in pushed:
                pushed[mu] = [measure_of(mu, pre) for pre in preimages]
            expected = target.T(i, f[m]).weights
            for k, (want, got) in enumerate(zip(expected, pushed[mu])):
                if want != got:
                    return MorphismReport(False, 'beliefs not preserved', {
                        'player': str(i), 'state': str(m), 'image': str(f[m]),
                        'event': _names(target, target.field.atoms[k]),
                        'target_value': str(want), 'source_value': str(got)})
    return MorphismReport(True)


def is_type_isomorphism(source, target, f):
    _check_compatible(source, target, f)
    if len(set(f[m] for m in source.states)) != len(source.states) or len(source.states) != len(target.states):
        return MorphismReport(False, 'not bijective')
    forward = is_type_morphism(source, target, f)
    if not forward:
        return forward
    inverse = {v: k for k, v in f.items() if k in source.field.rank}
    backward = is_type_morphism(target, source, inverse)
    if not backward:
        return MorphismReport(False, 'inverse is not a type morphism: ' + backward.reason, backward.witness)
    return MorphismReport(True)


def identity_map(space):
    return {m: m for m in space.states}


def compose(f, g):
    """g after f"""
    return {m: g[f[m]] for m in f}


def enumerate_morphisms(source, target, budget=None, candidates=None):
    """
    Every type morphism source -> target, by exhaustive search.

    Candidates for each source state default to the target states with the
    same nature; a caller may pass narrower candidate lists.
    """
    if candidates is None:
        candidates = {
            m: [x for x in target.states if target.theta[x] == source.theta[m]]
            for m in source.states
        }
    pools = [candidates[m] for m in source.states]
    total = 1
    for pool in pools:
        total *= len(pool)
    if budget is not None and total > budget:
        raise BudgetExceededError("morphism enumeration", total, budget)
    logger.debug("enumerating %d candidate maps %r -> %r", total, source, target)

    found = []
    for images in itertools.product(*pools):
        f = dict(zip(source.states, images))
        if is_type_morphism(source, target, f):
            found.append(f)
    return found


# --- CONSTRUCTIONS ---

def singleton_space(nature, s, players, state='m'):
    if s not in nature.field.rank:
        raise TypeSpaceError(f"{s!r} is not a nature point")
    field = powerset_field([state])
    delta = point_mass(state, field)
    return TypeSpace(nature, [state], {state: s}, {i: {state: delta} for i in players},
                     field=field, name=f'singleton-{s}')


def relabel(space, mapping, name=''):
    """Transport the whole structure along a bijection of state names"""
    if len(set(mapping[m] for m in space.states)) != len(space.states):
        raise TypeSpaceError("relabeling is not injective")
    states = [mapping[m] for m in space.states]
    field = SetField(states, [[mapping[m] for m in atom] for atom in space.field.atoms])
    types = {
        i: {mapping[m]: pushforward(space.T(i, m), mapping, field) for m in space.states}
        for i in space.players
    }
    theta = {mapping[m]: space.theta[m] for m in space.states}
    return TypeSpace(space.nature, states, theta, types, field=field, name=name or space.name)


def disjoint_union(left, right, tags=('L', 'R')):
    """
    Glue two spaces side by side; states become 'tag:name'.

    Each state keeps its own beliefs, moved onto its own copy, so the union is
    valid whenever both parts are.
    """
    if left.nature != right.nature or set(left.players) != set(right.players):
        raise TypeSpaceError("only spaces over the same nature and players can be glued")
    parts = [(tags[0], left), (tags[1], right)]
    states = [f"{tag}:{m}" for tag, part in parts for m in part.states]
    atoms = [[f"{tag}:{m}" for m in atom] for tag, part in parts for atom in part.field.atoms]
    field = SetField(states, atoms)
    theta = {f"{tag}:{m}": part.theta[m] for tag, part in parts for m in part.states}
    types = {i: {} for i in left.players}
    for tag, part in parts:
        embed = {m: f"{tag}:{m}" for m in part.states}
        for i in left.players:
            for m in part.states:
                types[i][embed[m]] = pushforward(part.T(i, m), embed, field)
    return TypeSpace(left.nature, states, theta, types, field=field,
                     name=f"{left.name or 'left'}+{right.name or 'right'}")

