"""Exact base fields: the rationals and prime fields GF(p).

Field objects are lightweight descriptors; elements carry the arithmetic.
Rational elements are plain ``fractions.Fraction`` (always reduced, positive
denominator), prime-field elements are ``FpElem`` wrappers around a canonical
residue.  Simple extension fields live in ``extension.py`` because their
elements are polynomial residues.

All elements are immutable and hashable; all operations are pure.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class RationalField:
    """The field of rational numbers; elements are fractions.Fraction."""

    char = 0
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value.strip())
        if isinstance(value, FpElem):
            raise TypeError("cannot coerce a prime-field element into Q")
        raise TypeError(f"cannot coerce {value!r} into Q")

    def elem_str(self, x) -> str:
        return str(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    r = isqrt(n)
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


class FpElem:
    """Residue mod p.  Mixes freely with int on either side."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise TypeError(f"mixing GF({self.p}) and GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FpElem(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FpElem(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FpElem(v - self.value, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FpElem(self.value * v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        if v % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElem(self.value * pow(v, -1, self.p), self.p)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        if self.value == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElem(v * pow(self.value, -1, self.p), self.p)

    def __pow__(self, n: int):
        if n < 0:
            if self.value == 0:
                raise ZeroDivisionError(f"inverting zero in GF({self.p})")
            return FpElem(pow(self.value, n, self.p), self.p)
        return FpElem(pow(self.value, n, self.p), self.p)

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __eq__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return (self.value - v) % self.p == 0

    def __hash__(self):
        return hash(("Fp", self.p, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElem({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class PrimeField:
    """GF(p) for a prime p < 2^31."""

    is_field = True

    def __init__(self, p: int):
        if not isinstance(p, int) or p >= 2**31 or not _is_prime(p):
            raise ValueError(f"prime field modulus must be a prime < 2^31, got {p}")
        self.p = p
        self.char = p
        self.zero = FpElem(0, p)
        self.one = FpElem(1, p)

    def __call__(self, value):
        if isinstance(value, FpElem):
            if value.p != self.p:
                raise TypeError(f"mixing GF({self.p}) and GF({value.p})")
            return value
        if isinstance(value, int):
            return FpElem(value, self.p)
        if isinstance(value, str):
            return FpElem(int(value.strip()), self.p)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return FpElem(value.numerator * pow(value.denominator, -1, self.p), self.p)
        raise TypeError(f"cannot coerce {value!r} into GF({self.p})")

    def elem_str(self, x) -> str:
        return str(x.value)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


def GF(p: int) -> PrimeField:
    return PrimeField(p)
