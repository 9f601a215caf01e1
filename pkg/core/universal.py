"""
Description equivalence by partition refinement, depth fingerprints, the
description quotient, and the finite checks of the universal-space results.
"""

import hashlib
import logging
import weakref
from dataclasses import dataclass, field as dc_field

from core.errors import BudgetExceededError, ExpressionError, MorphismError, TypeSpaceError
from core.exprlang import Bel, Nat, Not, conj
from core.measure import ZERO, field_generate, field_members, measure_of, powerset_field, pushforward
from core.typespace import (
    TypeSpace,
    belief_operator,
    enumerate_morphisms,
    is_type_isomorphism,
    is_type_morphism,
    validate,
)
from core.utils import Utils

logger = logging.getLogger(__name__)

TOKEN_LENGTH = 24

_validated = weakref.WeakKeyDictionary()


def require_valid(space):
    if space not in _validated:
        report = validate(space)
        if not report.ok:
            first = report.violations[0]
            raise TypeSpaceError(f"invalid type space: {first.kind}: {first.detail}")
        _validated[space] = True


def _group(space, key):
    """Partition states by key(m), blocks ordered by first state"""
    blocks = {}
    for m in space.states:
        blocks.setdefault(key(m), []).append(m)
    return tuple(frozenset(b) for b in blocks.values())


def _block_masses(mu, index, count):
    """Mass of every block, for blocks that are unions of atoms of mu's field"""
    masses = [ZERO] * count
    for atom, w in mu.atom_weights():
        if w:
            masses[index[next(iter(atom))]] += w
    return tuple(masses)


# --- REFINEMENT ---

@dataclass
class RefinementTower:
    space: TypeSpace
    partitions: list
    stable_index: int

    def partition(self, d):
        return self.partitions[min(d, self.stable_index)]

    def block_index(self, d):
        return {m: k for k, block in enumerate(self.partition(d)) for m in block}

    def block_of(self, m, d):
        return next(block for block in self.partition(d) if m in block)

    def to_dict(self):
        return {
            'stable_index': self.stable_index,
            'block_counts': [len(p) for p in self.partitions],
            'blocks': [[str(m) for m in self.space.ordered(b)] for b in self.partitions[-1]],
        }


def refine(space):
    """Pi_0 is the kernel of theta; Pi_{d+1} splits Pi_d blocks by the mass each player puts on each Pi_d block"""
    require_valid(space)
    current = _group(space, lambda m: space.theta[m])
    partitions = [current]
    while True:
        index = {m: k for k, block in enumerate(current) for m in block}
        memo = {}

        def signature(m):
            parts = [index[m]]
            for i in space.players:
                mu = space.T(i, m)
                if mu not in memo:
                    memo[mu] = _block_masses(mu, index, len(current))
                parts.append(memo[mu])
            return tuple(parts)

        refined = _group(space, signature)
        if len(refined) == len(current):
            break
        partitions.append(refined)
        current = refined
        logger.debug("refinement round %d: %d blocks", len(partitions) - 1, len(refined))
    return RefinementTower(space, partitions, len(partitions) - 1)


# --- FINGERPRINTS ---

def _digest(payload):
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:TOKEN_LENGTH]


def _token_rounds(space, d):
    tokens = {m: _digest(f"nat|{space.theta[m]}") for m in space.states}
    for _ in range(d):
        memo = {}
        previous = tokens
        tokens = {}
        for m in space.states:
            parts = [previous[m]]
            for i in sorted(space.players):
                mu = space.T(i, m)
                if mu not in memo:
                    masses = {}
                    for atom, w in mu.atom_weights():
                        if w:
                            key = previous[next(iter(atom))]
                            masses[key] = masses.get(key, ZERO) + w
                    memo[mu] = ",".join(f"{t}={Utils.format_rational(v)}" for t, v in sorted(masses.items()))
                parts.append(f"{i}:{memo[mu]}")
            tokens[m] = _digest("|".join(parts))
    return tokens


def fingerprint_table(space, d):
    """Depth-d token of every state"""
    require_valid(space)
    if d < 0:
        raise ValueError("depth must be nonnegative")
    return _token_rounds(space, d)


def desc_fingerprint(space, m, d):
    if m not in space.field.rank:
        raise TypeSpaceError(f"unknown state {m!r}")
    return fingerprint_table(space, d)[m]


def descriptions_injective(space, d=None):
    """True iff states have pairwise distinct fingerprints at depth d (default: the stable index)"""
    if d is None:
        d = refine(space).stable_index
    tokens = fingerprint_table(space, d)
    return len(set(tokens.values())) == len(space.states)


# --- QUOTIENT ---

@dataclass
class QuotientSpace:
    space: TypeSpace
    projection: dict
    tower: RefinementTower

    def blocks(self):
        return self.tower.partition(self.tower.stable_index)


def quotient(space):
    """Collapse Pi_* blocks; each block is named by its first state"""
    tower = refine(space)
    blocks = tower.partition(tower.stable_index)
    labels = [space.ordered(block)[0] for block in blocks]
    projection = {m: label for label, block in zip(labels, blocks) for m in block}
    field = powerset_field(labels)

    types = {}
    for i in space.players:
        types[i] = {}
        for label, block in zip(labels, blocks):
            pushed = {pushforward(space.T(i, m), projection, field) for m in block}
            if len(pushed) != 1:
                raise TypeSpaceError(f"block of {label} pushes forward to {len(pushed)} different types")
            types[i][label] = pushed.pop()

    theta = {label: space.theta[label] for label in labels}
    reduced = TypeSpace(space.nature, labels, theta, types, field=field,
                        name=f"{space.name or 'space'}/descriptions")
    logger.debug("quotient of %r has %d states", space, len(labels))
    return QuotientSpace(reduced, projection, tower)


# --- MORPHISM CHECKS ---

@dataclass
class DescriptionCheck:
    ok: bool
    depth: int = None
    witness: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {'preserved': self.ok, 'depth': self.depth, 'witness': self.witness}


def check_morphism_preserves_descriptions(f, source, target, d):
    """Compare source and target fingerprints along f at every depth up to d"""
    report = is_type_morphism(source, target, f)
    if not report:
        raise MorphismError(f"map is not a type morphism: {report.reason}")
    for k in range(d + 1):
        ours = fingerprint_table(source, k)
        theirs = fingerprint_table(target, k)
        for m in source.states:
            if ours[m] != theirs[f[m]]:
                return DescriptionCheck(False, k, {'state': str(m), 'image': str(f[m])})
    return DescriptionCheck(True, d)


def fingerprint_candidates(source, target):
    """Candidate images allowed by full-depth fingerprints (morphisms preserve them)"""
    d = max(len(source.states), len(target.states))
    ours = fingerprint_table(source, d)
    theirs = fingerprint_table(target, d)
    return {m: [x for x in target.states if theirs[x] == ours[m]] for m in source.states}


def _morphisms(source, target, budget):
    try:
        return enumerate_morphisms(source, target, budget=budget), 'theta'
    except BudgetExceededError:
        logger.info("theta-pruned search over budget; pruning by fingerprints")
        candidates = fingerprint_candidates(source, target)
        return enumerate_morphisms(source, target, budget=budget, candidates=candidates), 'fingerprint'


@dataclass
class TerminalityReport:
    morphism_count: int
    unique_is_projection: bool
    strategy: str
    idempotent: bool
    quotient_injective: bool
    target_counts: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return (self.unique_is_projection and self.idempotent and self.quotient_injective
                and all(count <= 1 for _, count in self.target_counts))

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {
            'ok': self.ok,
            'morphisms_to_quotient': self.morphism_count,
            'unique_is_projection': self.unique_is_projection,
            'search': self.strategy,
            'quotient_idempotent': self.idempotent,
            'quotient_descriptions_injective': self.quotient_injective,
            'targets': [{'name': name, 'morphisms': count} for name, count in self.target_counts],
        }


def check_terminality(space, targets=(), budget=None):
    """
    Verify on one finite space that the description quotient behaves like the
    universal space: exactly one morphism into it, idempotence, and at most one
    morphism into any space with injective descriptions.
    """
    qs = quotient(space)
    reduced = qs.space

    # 1. Exactly one morphism into the quotient, and it is the projection
    maps, strategy = _morphisms(space, reduced, budget)
    unique = len(maps) == 1 and maps[0] == qs.projection

    # 2. Quotienting again changes nothing
    again = quotient(reduced)
    idempotent = (len(again.space.states) == len(reduced.states)
                  and bool(is_type_isomorphism(reduced, again.space, again.projection)))
    injective = descriptions_injective(reduced)

    # 3. Spaces with injective descriptions receive at most one morphism
    counts = []
    for target in targets:
        if not descriptions_injective(target):
            continue
        found, _ = _morphisms(space, target, budget)
        counts.append((target.name or repr(target), len(found)))

    return TerminalityReport(len(maps), unique, strategy, idempotent, injective, counts)


# --- EXPRESSIONS FOR BLOCKS ---

def _nature_name(space, point):
    for name, event in space.nature.events.items():
        if event == frozenset([point]):
            return name
    raise ExpressionError(f"no nature event names the point {point!r}")


def characteristic_expression(space, tower, block, d):
    """An expression of depth at most d whose event is exactly the given Pi_d block"""
    block = frozenset(block)
    if block not in tower.partition(d):
        raise TypeSpaceError("not a block of the requested partition")
    return _characteristic(space, tower, block, min(d, tower.stable_index), {})


def _characteristic(space, tower, block, d, memo):
    key = (block, d)
    if key in memo:
        return memo[key]
    rep = space.ordered(block)[0]
    if d == 0:
        memo[key] = Nat(_nature_name(space, space.theta[rep]))
        return memo[key]

    coarse = tower.partition(d - 1)
    parent = next(b for b in coarse if rep in b)
    if parent == block:
        memo[key] = _characteristic(space, tower, parent, d - 1, memo)
        return memo[key]

    conditions = [_characteristic(space, tower, parent, d - 1, memo)]
    for i in space.players:
        for cell in coarse:
            achieved = sorted({measure_of(space.T(i, m), cell) for m in space.states})
            inside = {measure_of(space.T(i, m), cell) for m in parent}
            if len(inside) == 1:
                continue
            value = measure_of(space.T(i, rep), cell)
            cell_expr = _characteristic(space, tower, cell, d - 1, memo)
            conditions.append(Bel(i, value, cell_expr))
            higher = [v for v in achieved if v > value]
            if higher:
                conditions.append(Not(Bel(i, higher[0], cell_expr)))
    memo[key] = conj(*conditions)
    return memo[key]


def separating_expression(space, m, other):
    """Smallest-depth expression true at m and false at other, or None if they share all descriptions"""
    tower = refine(space)
    for d in range(tower.stable_index + 1):
        block = tower.block_of(m, d)
        if other not in block:
            return characteristic_expression(space, tower, block, d)
    return None


def expression_event_partition(space, d, budget=None):
    """
    Atoms of the field generated by every expression event of depth <= d,
    built by brute force over all field members and all achieved thresholds.
    """
    require_valid(space)
    field = field_generate(space.states, [
        frozenset(m for m in space.states if space.theta[m] == s) for s in space.nature.points
    ])
    for _ in range(d):
        generators = []
        for event in field_members(field, budget):
            for i in space.players:
                thresholds = {measure_of(space.T(i, m), event) for m in space.states}
                generators.extend(belief_operator(space, i, p, event) for p in thresholds)
        field = field_generate(space.states, list(field.atoms) + generators)
    return tuple(field.atoms)
