"""
The belief-expression language: syntax tree, parser, printer, depth and
semantics on a type space.

Canonical text:
    nat(h)    not nat(h)    and(nat(h), B[b,1](nat(t)))    or(...)    B[a,1/2](...)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from core.errors import ExpressionError, ExpressionSyntaxError
from core.measure import ONE, ZERO, measure_of
from core.typespace import belief_operator
from core.utils import Utils

logger = logging.getLogger(__name__)


# --- SYNTAX TREE ---

@dataclass(frozen=True)
class Nat:
    event: str


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    items: tuple

    def __post_init__(self):
        if not self.items:
            raise ExpressionError("conjunction needs at least one conjunct")


@dataclass(frozen=True)
class Or:
    """Sugar for not and(not ...)"""
    items: tuple

    def __post_init__(self):
        if not self.items:
            raise ExpressionError("disjunction needs at least one disjunct")

    def expand(self):
        return Not(And(tuple(Not(item) for item in self.items)))


@dataclass(frozen=True)
class Bel:
    player: str
    p: Fraction
    body: object

    def __post_init__(self):
        if not isinstance(self.p, Fraction):
            object.__setattr__(self, 'p', Fraction(self.p))
        if not ZERO <= self.p <= ONE:
            raise ExpressionError(f"belief threshold {self.p} is not in [0, 1]")


def conj(*items):
    return items[0] if len(items) == 1 else And(tuple(items))


def disj(*items):
    return items[0] if len(items) == 1 else Or(tuple(items))


# --- PARSER ---

GRAMMAR = r'''
?start: expr

?expr: nat
    | neg
    | conj
    | disj
    | bel

nat: "nat" "(" NAME ")"
neg: "not" expr
conj: "and" "(" expr ("," expr)* ")"
disj: "or" "(" expr ("," expr)* ")"
bel: "B" "[" NAME "," rational "]" "(" expr ")"
rational: SIGNED_INT ("/" INT)?

NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.SIGNED_INT
%import common.INT
%import common.WS
%ignore WS
'''


@v_args(inline=True)
class ExpressionBuilder(Transformer):
    """Turn the lark tree into Nat/Not/And/Or/Bel nodes"""

    def nat(self, name):
        return Nat(str(name))

    def neg(self, body):
        return Not(body)

    def conj(self, *items):
        return And(tuple(items))

    def disj(self, *items):
        return Or(tuple(items))

    def bel(self, player, p, body):
        return Bel(str(player), p, body)

    def rational(self, num, den=None):
        if den is None:
            return Fraction(int(num))
        if int(den) == 0:
            raise ExpressionError("zero denominator in threshold")
        return Fraction(int(num), int(den))


_parser = Lark(GRAMMAR, parser='lalr', maybe_placeholders=False)


def parse(text, nature=None, players=None):
    """Parse expression text; optionally check event names and players"""
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as e:
        raise ExpressionSyntaxError(f"cannot parse expression: {str(e).splitlines()[0]}",
                                    line=e.line, column=e.column) from e
    try:
        expr = ExpressionBuilder().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ExpressionError):
            raise e.orig_exc from None
        raise

    if nature is not None or players is not None:
        check_names(expr, nature, players)
    return expr


def check_names(expr, nature=None, players=None):
    for node in walk(expr):
        if isinstance(node, Nat) and nature is not None and node.event not in nature.events:
            raise ExpressionError(f"unknown nature event '{node.event}'")
        if isinstance(node, Bel) and players is not None and node.player not in players:
            raise ExpressionError(f"unknown player '{node.player}'")


def walk(expr):
    """Pre-order iteration over all nodes"""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (Not, Bel)):
            stack.append(node.body)
        elif isinstance(node, (And, Or)):
            stack.extend(reversed(node.items))


def to_text(expr):
    """Canonical printer; parse(to_text(e)) == e"""
    if isinstance(expr, Nat):
        return f"nat({expr.event})"
    if isinstance(expr, Not):
        return f"not {to_text(expr.body)}"
    if isinstance(expr, And):
        return "and(" + ", ".join(to_text(item) for item in expr.items) + ")"
    if isinstance(expr, Or):
        return "or(" + ", ".join(to_text(item) for item in expr.items) + ")"
    if isinstance(expr, Bel):
        return f"B[{expr.player},{Utils.format_rational(expr.p)}]({to_text(expr.body)})"
    raise ExpressionError(f"not an expression: {expr!r}")


def depth(expr):
    """Number of nested belief operators"""
    if isinstance(expr, Nat):
        return 0
    if isinstance(expr, Not):
        return depth(expr.body)
    if isinstance(expr, (And, Or)):
        return max(depth(item) for item in expr.items)
    if isinstance(expr, Bel):
        return depth(expr.body) + 1
    raise ExpressionError(f"not an expression: {expr!r}")


# --- SEMANTICS ---

class Evaluator:
    """Evaluates expressions on one space, memoising shared sub-expressions"""

    def __init__(self, space):
        self.space = space
        self.events = {}
        self.values = {}

    def __call__(self, expr):
        if expr in self.events:
            return self.events[expr]
        space = self.space

        if isinstance(expr, Nat):
            if expr.event not in space.nature.events:
                raise ExpressionError(f"unknown nature event '{expr.event}'")
            result = space.nature_event(expr.event)
        elif isinstance(expr, Not):
            result = space.all_states() - self(expr.body)
        elif isinstance(expr, And):
            result = space.all_states()
            for item in expr.items:
                result = result & self(item)
        elif isinstance(expr, Or):
            result = self(expr.expand())
        elif isinstance(expr, Bel):
            if expr.player not in space.types:
                raise ExpressionError(f"unknown player '{expr.player}'")
            result = belief_operator(space, expr.player, expr.p, self(expr.body), cache=self.values)
        else:
            raise ExpressionError(f"not an expression: {expr!r}")

        self.events[expr] = result
        return result


def evaluate(space, expr):
    """The event of expr in space"""
    return Evaluator(space)(expr)


def desc_contains(space, m, expr):
    return m in evaluate(space, expr)


def believed_value(space, i, m, expr):
    """T_i(m) of the event of expr"""
    return measure_of(space.T(i, m), evaluate(space, expr))


class Description:
    """Lazy description of a state: the expressions true there"""

    def __init__(self, space, state):
        if state not in space.field.rank:
            raise ExpressionError(f"unknown state {state!r}")
        self.space = space
        self.state = state
        self._evaluate = Evaluator(space)

    def __contains__(self, expr):
        return self.state in self._evaluate(expr)

    def __repr__(self):
        return f"Description({self.state})"

    def fingerprint(self, d):
        from core.universal import desc_fingerprint
        return desc_fingerprint(self.space, self.state, d)
