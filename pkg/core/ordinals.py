"""
Ordinals below omega^omega in Cantor normal form.

An ordinal is a tuple of (exponent, coefficient) terms with strictly
decreasing exponents and positive coefficients; the empty tuple is 0.
Text form: 'w^2*3+w+4', with 'ω' accepted for 'w'.
"""

import re
from functools import total_ordering
from numbers import Integral

from core.errors import OrdinalError

_TERM = re.compile(r'^(?:(?P<w>[wω])(?:\^(?P<exp>\d+))?(?:\*(?P<coef>\d+))?|(?P<fin>\d+))$')


@total_ordering
class Ord:
    __slots__ = ('terms', '_hash')

    def __init__(self, terms=()):
        if isinstance(terms, Integral):
            if terms < 0:
                raise OrdinalError("ordinals are nonnegative")
            terms = ((0, int(terms)),) if terms else ()
        cleaned = tuple((int(e), int(c)) for e, c in terms if c)
        for (e1, _), (e2, _) in zip(cleaned, cleaned[1:]):
            if e1 <= e2:
                raise OrdinalError(f"exponents must strictly decrease: {cleaned}")
        for e, c in cleaned:
            if e < 0 or c < 0:
                raise OrdinalError(f"bad term {(e, c)}")
        self.terms = cleaned
        self._hash = hash(cleaned[0][1]) if self.is_finite() and cleaned else hash(cleaned) if cleaned else hash(0)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Ord):
            return value
        if isinstance(value, Integral):
            return cls(value)
        if isinstance(value, str):
            return cls.parse(value)
        raise OrdinalError(f"not an ordinal: {value!r}")

    @classmethod
    def omega(cls, coefficient=1):
        return cls(((1, coefficient),))

    @classmethod
    def parse(cls, text):
        text = text.replace(' ', '')
        if not text:
            raise OrdinalError("empty ordinal text")
        result = cls()
        for part in text.split('+'):
            match = _TERM.match(part)
            if not match:
                raise OrdinalError(f"cannot read ordinal term '{part}'")
            if match.group('fin') is not None:
                term = cls(int(match.group('fin')))
            else:
                exponent = int(match.group('exp') or 1)
                coefficient = int(match.group('coef') or 1)
                term = cls(((exponent, coefficient),))
            result = result + term
        return result

    # --- COMPARISON ---

    def __eq__(self, other):
        if isinstance(other, Integral):
            other = Ord(other) if other >= 0 else None
        if not isinstance(other, Ord):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, Integral):
            if other < 0:
                return False
            other = Ord(other)
        if not isinstance(other, Ord):
            return NotImplemented
        return self.terms < other.terms

    def __hash__(self):
        return self._hash

    # --- ARITHMETIC ---

    def __add__(self, other):
        other = Ord.coerce(other)
        if not other.terms:
            return self
        lead_exp, lead_coef = other.terms[0]
        kept = [t for t in self.terms if t[0] > lead_exp]
        same = [c for e, c in self.terms if e == lead_exp]
        if same:
            kept.append((lead_exp, same[0] + lead_coef))
        else:
            kept.append((lead_exp, lead_coef))
        return Ord(tuple(kept) + other.terms[1:])

    def __radd__(self, other):
        return Ord.coerce(other) + self

    def successor(self):
        return self + 1

    def predecessor(self):
        if not self.is_successor():
            raise OrdinalError(f"{self} has no predecessor")
        return Ord(self.terms[:-1] + ((0, self.terms[-1][1] - 1),))

    # --- CLASSIFICATION ---

    def is_zero(self):
        return not self.terms

    def is_finite(self):
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def is_successor(self):
        return bool(self.terms) and self.terms[-1][0] == 0

    def is_limit(self):
        return bool(self.terms) and self.terms[-1][0] > 0

    def finite_part(self):
        return self.terms[-1][1] if self.is_successor() else 0

    def limit_part(self):
        """The limit-or-zero ordinal l with self = l + finite_part"""
        return Ord(self.terms[:-1]) if self.is_successor() else self

    def parity(self):
        return 'even' if self.finite_part() % 2 == 0 else 'odd'

    def __int__(self):
        if not self.is_finite():
            raise OrdinalError(f"{self} is infinite")
        return self.finite_part()

    def __index__(self):
        return int(self)

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return '0'
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
                continue
            base = 'w' if e == 1 else f'w^{e}'
            parts.append(base if c == 1 else f'{base}*{c}')
        return '+'.join(parts)

    def __repr__(self):
        return f"Ord({self})"


OMEGA = Ord.omega()


def ord_parity(gamma):
    """Parity of the finite part n in gamma = limit + n"""
    return Ord.coerce(gamma).parity()


def limit_below(gamma):
    """The largest limit ordinal strictly below gamma, or 0"""
    gamma = Ord.coerce(gamma)
    if gamma.is_successor():
        return gamma.limit_part()
    if gamma.is_zero():
        return Ord()
    # gamma is a limit: drop one from the lowest power of omega
    *head, (e, c) = gamma.terms
    if e == 1:
        return Ord(tuple(head) + (((1, c - 1),) if c > 1 else ()))
    raise OrdinalError(f"no largest limit below {gamma}")
