"""
Records, the sober-drunk state spaces W^alpha, restriction maps, the
information blocks P_i and cylinder events.

A record is stored by its finite support (the positions holding 1), which is
sound at every length because a record is 0 on a tail below each limit.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import total_ordering

from config.config import MAX_W_STATES
from core.errors import BudgetExceededError, OrdinalError, RecordError
from core.ordinals import Ord, limit_below

logger = logging.getLogger(__name__)

NATURE = ('h', 't')
PLAYERS = ('a', 'b')


def other_player(i):
    if i not in PLAYERS:
        raise RecordError(f"sober-drunk players are 'a' and 'b', not {i!r}")
    return 'b' if i == 'a' else 'a'


class Record:
    """0/1 sequence of ordinal length with finite support"""

    __slots__ = ('length', 'support', '_hash')

    def __init__(self, length, support=()):
        self.length = Ord.coerce(length)
        self.support = frozenset(Ord.coerce(x) for x in support)
        for x in self.support:
            if not x < self.length:
                raise RecordError(f"support point {x} outside record of length {self.length}")
        self._hash = hash((self.length, self.support))

    def __eq__(self, other):
        if not isinstance(other, Record):
            return NotImplemented
        return self.length == other.length and self.support == other.support

    def __hash__(self):
        return self._hash

    def __call__(self, beta):
        beta = Ord.coerce(beta)
        if not beta < self.length:
            raise RecordError(f"position {beta} outside record of length {self.length}")
        return 1 if beta in self.support else 0

    def restrict(self, beta):
        beta = Ord.coerce(beta)
        return Record(beta, (x for x in self.support if x < beta))

    def with_bit(self, beta, bit):
        beta = Ord.coerce(beta)
        if not beta < self.length:
            raise RecordError(f"position {beta} outside record of length {self.length}")
        support = set(self.support)
        if bit:
            support.add(beta)
        else:
            support.discard(beta)
        return Record(self.length, support)

    def bits(self):
        """0/1 tuple at a finite length"""
        return tuple(1 if Ord(k) in self.support else 0 for k in range(int(self.length)))

    def text(self):
        return '{' + ','.join(str(x) for x in sorted(self.support)) + '}'

    def __repr__(self):
        return f"Record({self.length}, {self.text()})"


class WState:
    """A state (w0, record_a, record_b) of W^level; at level 0 only w0"""

    __slots__ = ('level', 'w0', 'a', 'b', '_hash')

    def __init__(self, w0, a=None, b=None, level=None):
        if w0 not in NATURE:
            raise RecordError(f"nature value must be h or t, not {w0!r}")
        if level is None:
            level = a.length if a is not None else Ord()
        self.level = Ord.coerce(level)
        if self.level.is_zero():
            a = b = None
        elif a is None or b is None or a.length != self.level or b.length != self.level:
            raise RecordError(f"both records must have length {self.level}")
        self.w0 = w0
        self.a = a
        self.b = b
        self._hash = hash((w0, a, b))

    def __eq__(self, other):
        if not isinstance(other, WState):
            return NotImplemented
        return self.w0 == other.w0 and self.a == other.a and self.b == other.b and self.level == other.level

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def record(self, i):
        if self.level.is_zero():
            raise RecordError("level-0 states carry no records")
        if i == 'a':
            return self.a
        if i == 'b':
            return self.b
        raise RecordError(f"unknown player {i!r}")

    def __str__(self):
        if self.level.is_zero():
            return self.w0
        return f"({self.w0},{self.a.text()},{self.b.text()})"

    __repr__ = __str__


def make_state(w0, support_a=(), support_b=(), level=1):
    """Shortcut: make_state('h', {0}, (), level=2)"""
    level = Ord.coerce(level)
    if level.is_zero():
        return WState(w0, level=0)
    return WState(w0, Record(level, support_a), Record(level, support_b))


def sort_key(w):
    """Order: h before t, then player a's bits, then player b's (0 before 1 at the first difference)"""
    if w.level.is_zero():
        return (NATURE.index(w.w0),)
    return (NATURE.index(w.w0), _record_key(w.a), _record_key(w.b))


@total_ordering
class _Descending:
    __slots__ = ('value',)

    def __init__(self, value):
        self.value = value

    def __eq__(self, other):
        return self.value == other.value

    def __lt__(self, other):
        return other.value < self.value


def _record_key(r):
    # an earlier 1 makes a record larger, a longer support with the same prefix too
    return tuple(_Descending(p) for p in sorted(r.support))


# --- ORDINAL RECORD FUNCTIONS ---

def _check_limit(r, lam):
    lam = Ord.coerce(lam)
    if not lam.is_limit():
        raise RecordError(f"{lam} is not a limit ordinal")
    if lam > r.length:
        raise RecordError(f"limit {lam} exceeds record length {r.length}")
    return lam


def o_lambda(r, lam):
    """Least ordinal below lam after which r is 0 up to lam"""
    lam = _check_limit(r, lam)
    below = [x for x in r.support if x < lam]
    return max(below) + 1 if below else Ord()


def lambda_parity(r, lam):
    return o_lambda(r, lam).parity()


def restrict(w, beta):
    beta = Ord.coerce(beta)
    if beta > w.level:
        raise RecordError(f"cannot restrict a level-{w.level} state to level {beta}")
    if beta == w.level:
        return w
    if beta.is_zero():
        return WState(w.w0, level=0)
    return WState(w.w0, w.a.restrict(beta), w.b.restrict(beta))


def enumerate_W(n, budget=MAX_W_STATES):
    """All states of W^n for finite n, in sort_key order"""
    n = int(Ord.coerce(n))
    size = 2 ** (2 * n + 1)
    if budget is not None and size > budget:
        raise BudgetExceededError(f"W^{n}", size, budget)
    if n == 0:
        return [WState(w0, level=0) for w0 in NATURE]
    return states_over_positions(n, [Ord(k) for k in range(n)])


def states_over_positions(level, positions):
    """All level states whose supports lie inside the given positions, in sort_key order"""
    level = Ord.coerce(level)
    positions = sorted(Ord.coerce(p) for p in positions)
    if any(not p < level for p in positions):
        raise RecordError("window position outside the level")

    records = []
    for bits in itertools.product((0, 1), repeat=len(positions)):
        records.append(Record(level, (p for p, bit in zip(positions, bits) if bit)))
    records.sort(key=_record_key)
    return [WState(w0, a, b) for w0 in NATURE for a in records for b in records]


# --- INFORMATION BLOCKS ---

def block_key(i, w):
    """Key with block_key(i, v) == block_key(i, w) exactly when v is in P_i(w)"""
    if w.level.is_zero():
        raise RecordError("information blocks need level > 0")
    j = other_player(i)
    own = w.record(i)
    them = w.record(j)
    anchors = []
    parities = []
    for x in sorted(own.support):
        if x.is_successor():
            anchors.append((x, them(x.predecessor())))
        elif x.is_limit():
            parities.append((x, lambda_parity(them, x)))
    nature = w.w0 if Ord() in own.support else None
    return (own, nature, tuple(anchors), tuple(parities))


def in_partition_block(i, v, w):
    """Membership v in P_i(w), clause by clause"""
    if w.level.is_zero():
        raise RecordError("information blocks need level > 0")
    if v.level != w.level:
        return False
    j = other_player(i)
    own = w.record(i)
    if v.record(i) != own:
        return False
    if own(0) == 1 and v.w0 != w.w0:
        return False
    for x in own.support:
        if x.is_successor():
            beta = x.predecessor()
            if v.record(j)(beta) != w.record(j)(beta):
                return False
        elif x.is_limit():
            if lambda_parity(v.record(j), x) != lambda_parity(w.record(j), x):
                return False
    return True


def partition_block(i, w, universe=None):
    """P_i(w) as a frozenset over universe (default: all of W^n at a finite level)"""
    if universe is None:
        if not w.level.is_finite():
            raise RecordError("pass an explicit universe at transfinite levels")
        universe = enumerate_W(w.level)
    key = block_key(i, w)
    return frozenset(v for v in universe if block_key(i, v) == key)


def partition_blocks(i, universe):
    """{key: block} over a list of states, blocks in order of first member"""
    blocks = {}
    for w in universe:
        blocks.setdefault(block_key(i, w), []).append(w)
    return {key: frozenset(members) for key, members in blocks.items()}


# --- CYLINDER EVENTS ---

@dataclass(frozen=True)
class Cylinder:
    """
    [X_0 = value], [X_i(beta) = value] or [lambda-par(X_i) = value] at a level.

    kind is 'nature', 'bit' or 'parity'.
    """
    kind: str
    level: Ord
    value: object
    player: str = None
    index: Ord = None

    def contains(self, w):
        if w.level != self.level:
            return False
        if self.kind == 'nature':
            return w.w0 == self.value
        if self.kind == 'bit':
            return w.record(self.player)(self.index) == self.value
        return lambda_parity(w.record(self.player), self.index) == self.value

    def members(self, universe=None):
        if universe is None:
            universe = enumerate_W(self.level)
        return frozenset(w for w in universe if self.contains(w))

    def lift(self, level):
        """The preimage of this event under restriction from a higher level"""
        level = Ord.coerce(level)
        if level < self.level:
            raise RecordError("can only lift to a higher level")
        return Cylinder(self.kind, level, self.value, self.player, self.index)

    def __str__(self):
        if self.kind == 'nature':
            return f"[X0={self.value}]"
        if self.kind == 'bit':
            return f"[X{self.player}({self.index})={self.value}]"
        return f"[{self.index}-par(X{self.player})={self.value}]"


def cylinder_event(kind, level, value, player=None, index=None):
    level = Ord.coerce(level)
    if kind == 'nature':
        if value not in NATURE:
            raise RecordError(f"nature value must be h or t, not {value!r}")
        return Cylinder(kind, level, value)

    other_player(player)
    index = Ord.coerce(index)
    if kind == 'bit':
        if not index < level:
            raise RecordError(f"bit position {index} not below level {level}")
        if value not in (0, 1):
            raise RecordError("bit value must be 0 or 1")
    elif kind == 'parity':
        if not index.is_limit() or index > level:
            raise RecordError(f"parity index {index} must be a limit at most {level}")
        if value not in ('even', 'odd'):
            raise RecordError("parity value must be 'even' or 'odd'")
    else:
        raise RecordError(f"unknown cylinder kind {kind!r}")
    return Cylinder(kind, level, value, player, index)


def preimage(event, level, universe=None):
    """restrict^-1 of a set of lower-level states, at a finite level"""
    if universe is None:
        universe = enumerate_W(level)
    event = frozenset(event)
    base = next(iter(event)).level if event else Ord()
    return frozenset(w for w in universe if restrict(w, base) in event)


def previous_limit(lam):
    try:
        return limit_below(lam)
    except OrdinalError as e:
        raise RecordError(str(e)) from e
