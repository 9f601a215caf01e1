"""
Witness finders for the record combinatorics behind the belief construction.

Each finder builds the state the construction needs (an element of an
information block that matches a prescribed prefix, or a copy of a state
with one opponent bit moved) and re-checks the result against the block
predicates. The superset checks enumerate fields exhaustively at finite
levels. At transfinite levels every finder works on explicit states, so
they are swept over every state of a window of positions; only the partner
state of a pair is drawn, with a seeded generator.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field as dc_field

from config.config import (
    LEMMA_PARTNERS,
    MAX_SUPERSET_ENUMERATION_ATOMS,
    RANDOM_SEED,
    TRANSFINITE_FINITE_POSITIONS,
    TRANSFINITE_MAX_BASE,
)
from core.errors import RecordError
from core.measure import field_extend_by_set, powerset_field, preimage_field
from core.ordinals import OMEGA, Ord
from core.records import (
    PLAYERS,
    Record,
    WState,
    block_key,
    enumerate_W,
    in_partition_block,
    lambda_parity,
    o_lambda,
    other_player,
    partition_block,
    partition_blocks,
    restrict,
    sort_key,
    states_over_positions,
)

logger = logging.getLogger(__name__)

KINDS = (11, 12, 13, 16, 17)


@dataclass
class Witness:
    kind: int
    state: object = None
    checks: dict = dc_field(default_factory=dict)
    detail: dict = dc_field(default_factory=dict)

    @property
    def ok(self):
        return all(self.checks.values())

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {
            'kind': self.kind,
            'ok': self.ok,
            'state': None if self.state is None else str(self.state),
            'checks': dict(self.checks),
            'detail': {k: str(v) for k, v in self.detail.items()},
        }


@dataclass
class LemmaReport:
    """Outcome of a sweep of one finder over many inputs"""
    kind: int
    level: str
    checked: int = 0
    failures: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def __bool__(self):
        return self.ok

    def add(self, witness, **inputs):
        self.checked += 1
        if not witness.ok and len(self.failures) < 20:
            self.failures.append({'inputs': {k: str(v) for k, v in inputs.items()}, **witness.to_dict()})

    def to_dict(self):
        return {
            'kind': self.kind,
            'level': self.level,
            'ok': self.ok,
            'checked': self.checked,
            'failures': self.failures,
            'notes': self.notes,
        }


def _with_opponent_bit(state, j, position, bit):
    a, b = state.a, state.b
    if j == 'a':
        a = a.with_bit(position, bit)
    else:
        b = b.with_bit(position, bit)
    return WState(state.w0, a, b)


def _compose(w0, own, them, i):
    return WState(w0, own, them) if i == 'a' else WState(w0, them, own)


# --- PREFIX WITNESS ---

def lemma11_witness(i, v, w, gamma):
    """
    A member u of P_i(w) with u and v equal below gamma, given that v and w
    share an i-block at level gamma+1.

    u copies v's nature value and v's opponent bits below gamma, and w's
    records elsewhere; at every limit where w_i is 1 and the opponent parity
    came out wrong, one opponent bit is set just above every earlier
    constraint.
    """
    j = other_player(i)
    gamma = Ord.coerce(gamma)
    if v.level != w.level or not gamma < w.level:
        raise RecordError(f"need two states of one level above {gamma}")
    if not in_partition_block(i, restrict(v, gamma + 1), restrict(w, gamma + 1)):
        raise RecordError("v and w do not share an information block at level gamma+1")

    own = w.record(i)
    support = {x for x in v.record(j).support if x < gamma}
    support |= {x for x in w.record(j).support if not x < gamma}
    them = Record(w.level, support)

    for lam in sorted(x for x in own.support if x.is_limit() and x > gamma):
        target = lambda_parity(w.record(j), lam)
        if lambda_parity(them, lam) == target:
            continue
        # above gamma, above every opponent bit and every own anchor below lam
        bounds = [gamma]
        bounds += [x + 1 for x in them.support if x < lam]
        bounds += [x + 1 for x in own.support if x < lam]
        base = max(bounds)
        step = 0 if base.parity() != target else 1
        them = them.with_bit(base + step, 1)

    u = _compose(v.w0, own, them, i)
    return Witness(11, u, {
        'in_block': in_partition_block(i, u, w),
        'prefix_kept': restrict(u, gamma) == restrict(v, gamma),
    }, {'gamma': gamma})


# --- OPPONENT-BIT WITNESSES ---

def _region(i, x, w, anchor):
    """'a': in P_i(w); 'b': in the lower block but not P_i(w); 'c': outside the lower block"""
    if in_partition_block(i, x, w):
        return 'a'
    if in_partition_block(i, restrict(x, anchor), restrict(w, anchor)):
        return 'b'
    return 'c'


def lemma12_witness(i, v, w, beta):
    """At level lam+1 with w_i(lam) = 0: move v's opponent lam-parity without touching v below beta"""
    j = other_player(i)
    level = w.level
    beta = Ord.coerce(beta)
    if not level.is_successor() or not level.predecessor().is_limit():
        raise RecordError(f"level {level} is not one above a limit")
    lam = level.predecessor()
    if v.level != level or not beta < lam:
        raise RecordError(f"need a level-{level} state and a base below {lam}")
    if w.record(i)(lam) != 0:
        raise RecordError("w_i must be 0 at the limit")

    xi = max(beta, o_lambda(v.record(i), lam), o_lambda(v.record(j), lam))
    avoid = lambda_parity(v.record(j), lam)
    if (xi + 1).parity() == avoid:
        xi = xi + 1
    u = _with_opponent_bit(v, j, xi, 1)
    return Witness(12, u, {
        'parity_moved': lambda_parity(u.record(j), lam) != lambda_parity(v.record(j), lam),
        'prefix_kept': restrict(u, beta) == restrict(v, beta),
        'region_kept': _region(i, u, w, lam) == _region(i, v, w, lam),
    }, {'xi': xi, 'region': _region(i, v, w, lam)})


def lemma13_witness(i, v, w):
    """At level beta+2 with w_i(beta+1) = 0: flip v's opponent bit at beta"""
    j = other_player(i)
    level = w.level
    if not level.is_successor() or not level.predecessor().is_successor():
        raise RecordError(f"level {level} is not a double successor")
    beta = level.predecessor().predecessor()
    if v.level != level:
        raise RecordError(f"need a level-{level} state")
    if w.record(i)(beta + 1) != 0:
        raise RecordError("w_i must be 0 at beta+1")

    u = _with_opponent_bit(v, j, beta, 1 - v.record(j)(beta))
    anchor = beta + 1
    return Witness(13, u, {
        'bit_flipped': u.record(j)(beta) != v.record(j)(beta),
        'prefix_kept': restrict(u, beta) == restrict(v, beta),
        'region_kept': _region(i, u, w, anchor) == _region(i, v, w, anchor),
    }, {'beta': beta, 'region': _region(i, v, w, anchor)})


# --- SUPERSET CHECKS ---

def check_lemma16(i, w, max_atoms=MAX_SUPERSET_ENUMERATION_ATOMS):
    """
    At finite level gamma+1: every set of the field generated by the level
    gamma-1 cylinders and the lower block that covers P_i(w) also covers the
    lower block.
    """
    level = int(w.level)
    gamma = level - 1
    if gamma < 1:
        raise RecordError("needs level 2 or more")
    states = enumerate_W(level)
    block = partition_block(i, w, states)
    lower = partition_block(i, restrict(w, gamma), enumerate_W(gamma))
    lifted = frozenset(x for x in states if restrict(x, gamma) in lower)

    base = preimage_field(powerset_field(enumerate_W(gamma - 1)),
                          {x: restrict(x, gamma - 1) for x in states}, states)
    field = field_extend_by_set(base, lifted)

    chosen = set(field.atoms_meeting(block))
    free = [k for k in range(len(field.atoms)) if k not in chosen]
    cover = field.union_of(chosen)
    witness = Witness(16, None, {'minimal_cover': cover >= lifted}, {'atoms': len(field.atoms)})
    if len(free) > max_atoms:
        witness.detail['enumeration'] = 'minimal cover only'
        return witness

    checked = 0
    for size in range(len(free) + 1):
        for extra in itertools.combinations(free, size):
            checked += 1
            if not cover | field.union_of(extra) >= lifted:
                witness.checks['all_covers'] = False
                witness.detail['counterexample'] = sorted(map(str, cover | field.union_of(extra)))
                return witness
    witness.checks['all_covers'] = True
    witness.detail['covers_checked'] = checked
    return witness


def check_lemma17(i, w, beta, universe=None, groups=None):
    """
    The projection of P_i(w) to level beta contains v|beta for every v whose
    level beta+1 prefix shares w's block.

    At finite levels the image is computed outright. With an explicit window
    universe (or its precomputed prefix groups) each v is answered by a prefix
    witness; the witness depends on v only through v|beta, so one v per prefix
    is enough.
    """
    beta = Ord.coerce(beta)
    if not beta < w.level:
        raise RecordError(f"base {beta} must lie below level {w.level}")

    if universe is None and groups is None:
        states = enumerate_W(w.level)
        block = partition_block(i, w, states)
        image = {restrict(x, beta) for x in block}
        anchor = restrict(w, beta + 1)
        missing = [v for v in states
                   if in_partition_block(i, restrict(v, beta + 1), anchor) and restrict(v, beta) not in image]
        detail = {'counterexample': missing[0]} if missing else {}
        return Witness(17, None, {'image_covers': not missing}, detail)

    if groups is None:
        groups = _prefix_groups(i, universe, beta)
    witness = Witness(17, None, {'image_covers': True})
    for v in groups.get(block_key(i, restrict(w, beta + 1)), {}).values():
        found = lemma11_witness(i, v, w, beta)
        if not found.ok:
            witness.checks['image_covers'] = False
            witness.detail['counterexample'] = v
            break
    return witness


def lemma_witness(kind, **inputs):
    """Dispatch on the finder number: 11, 12, 13, 16 or 17"""
    finders = {
        11: lemma11_witness,
        12: lemma12_witness,
        13: lemma13_witness,
        16: check_lemma16,
        17: check_lemma17,
    }
    if kind not in finders:
        raise RecordError(f"unknown witness kind {kind}; expected one of {KINDS}")
    return finders[kind](**inputs)


# --- SWEEPS ---

def sweep_finite(level, players=PLAYERS):
    """Run every finder applicable at a finite level over all inputs"""
    level = int(level)
    if level < 1:
        raise RecordError("sweeps start at level 1")
    states = enumerate_W(level)
    reports = {kind: LemmaReport(kind, str(level)) for kind in (11, 13, 16, 17)}

    for i in players:
        for gamma in range(level):
            for w in states:
                anchor = restrict(w, gamma + 1)
                for v in states:
                    if in_partition_block(i, restrict(v, gamma + 1), anchor):
                        reports[11].add(lemma11_witness(i, v, w, gamma), i=i, v=v, w=w, gamma=gamma)

        if level >= 2:
            for w in states:
                if w.record(i)(level - 1) == 0:
                    for v in states:
                        reports[13].add(lemma13_witness(i, v, w), i=i, v=v, w=w)
            # the check depends on w only through its block
            for block in partition_blocks(i, states).values():
                w = min(block, key=sort_key)
                reports[16].add(check_lemma16(i, w), i=i, w=w)
        for w in states:
            for beta in range(level):
                reports[17].add(check_lemma17(i, w, beta), i=i, w=w, beta=beta)

    if level < 2:
        reports[13].notes.append("needs level 2 or more")
        reports[16].notes.append("needs level 2 or more")
    reports[12] = LemmaReport(12, str(level), notes=["no limit ordinal below a finite level"])
    for kind, report in sorted(reports.items()):
        logger.info("finder %d at level %d: %d inputs, %d failures", kind, level, report.checked, len(report.failures))
    return dict(sorted(reports.items()))


def _prefix_groups(i, universe, beta):
    """{block key of v|beta+1: {v|beta: v}} over a window universe"""
    groups = {}
    for v in universe:
        group = groups.setdefault(block_key(i, restrict(v, beta + 1)), {})
        group.setdefault(restrict(v, beta), v)
    return groups


def _block_groups(i, universe, gamma):
    """{block key of x|gamma+1: [x, ...]} in universe order"""
    groups = {}
    for x in universe:
        groups.setdefault(block_key(i, restrict(x, gamma + 1)), []).append(x)
    return groups


def _check_window(positions, max_base, partners):
    if positions < 1:
        raise RecordError(f"the window needs at least one finite position, got {positions}")
    if not 0 <= max_base < positions:
        raise RecordError(f"cylinder base {max_base} must lie inside the window 0..{positions - 1}")
    if partners < 1:
        raise RecordError(f"need at least one partner per state, got {partners}")


def sweep_transfinite(positions=TRANSFINITE_FINITE_POSITIONS, max_base=TRANSFINITE_MAX_BASE,
                      partners=LEMMA_PARTNERS, seed=RANDOM_SEED, players=PLAYERS):
    """
    Window checks around the first limit: prefix witnesses and parity
    witnesses at level w+1, bit flips at w+2, the projection check at w.

    Supports lie in the finite positions 0..positions-1 plus w and w+1 where
    the level allows. Every state of the window, every base up to max_base
    and every gamma up to positions (and w) is checked; only the second state
    of a pair is drawn, `partners` times, with a seeded generator.
    """
    positions, max_base, partners = int(positions), int(max_base), int(partners)
    _check_window(positions, max_base, partners)
    rng = random.Random(seed)
    finite = [Ord(k) for k in range(positions)]
    at_limit = states_over_positions(OMEGA, finite)
    above_limit = states_over_positions(OMEGA + 1, finite + [OMEGA])
    two_above = states_over_positions(OMEGA + 2, finite + [OMEGA, OMEGA + 1])
    gammas = [Ord(k) for k in range(positions + 1)] + [OMEGA]
    bases = [Ord(k) for k in range(max_base + 1)]

    reports = {kind: LemmaReport(kind, level) for kind, level in
               ((11, 'w+1'), (12, 'w+1'), (13, 'w+2'), (17, 'w'))}
    reports[16] = LemmaReport(16, 'w+1', notes=["superset enumeration runs at finite levels only"])

    for i in players:
        # 1. Prefix witnesses: partners share v's block at gamma+1
        for gamma in gammas:
            groups = _block_groups(i, above_limit, gamma)
            for v in above_limit:
                pool = groups[block_key(i, restrict(v, gamma + 1))]
                for w in (rng.choice(pool) for _ in range(partners)):
                    reports[11].add(lemma11_witness(i, v, w, gamma), i=i, v=v, w=w, gamma=gamma)

        # 2. Parity witnesses against anchors with w_i(w) = 0
        limit_zero = [w for w in above_limit if w.record(i)(OMEGA) == 0]
        for v in above_limit:
            for beta in bases:
                for w in (rng.choice(limit_zero) for _ in range(partners)):
                    reports[12].add(lemma12_witness(i, v, w, beta), i=i, v=v, w=w, beta=beta)

        # 3. Bit flips against anchors with w_i(w+1) = 0
        next_zero = [w for w in two_above if w.record(i)(OMEGA + 1) == 0]
        for v in two_above:
            for w in (rng.choice(next_zero) for _ in range(partners)):
                reports[13].add(lemma13_witness(i, v, w), i=i, v=v, w=w)

        # 4. Projection covers, every state and base
        for beta in bases:
            groups = _prefix_groups(i, at_limit, beta)
            for w in at_limit:
                reports[17].add(check_lemma17(i, w, beta, groups=groups), i=i, w=w, beta=beta)

    window = {'positions': positions, 'max_base': max_base, 'partners': partners,
              'states': {'w': len(at_limit), 'w+1': len(above_limit), 'w+2': len(two_above)}}
    for kind, report in reports.items():
        report.notes.append({'window': window})
        logger.info("finder %d at level %s: %d inputs, %d failures",
                    kind, report.level, report.checked, len(report.failures))
    return dict(sorted(reports.items()))
