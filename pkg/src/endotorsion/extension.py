"""Simple field extensions F[x]/(m) for a monic squarefree modulus m.

Elements are residues represented by polynomials of degree < deg m in a
named symbol (default ``theta``).  The modulus is verified monic and
squarefree at construction; inverses fail loudly on zero divisors when the
modulus happens to be reducible.
"""

from __future__ import annotations

from .poly import Poly, parse_poly, poly_gcd, poly_xgcd, format_poly


class ExtElem:
    __slots__ = ("field", "rep")

    def __init__(self, field: "ExtensionField", rep: Poly):
        self.field = field
        self.rep = rep % field.modulus if rep.degree >= field.modulus.degree else rep

    def _coerce(self, other):
        if isinstance(other, ExtElem):
            if other.field != self.field:
                raise TypeError("mixing elements of different extension fields")
            return other
        try:
            return self.field(other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExtElem(self.field, self.rep + o.rep)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExtElem(self.field, self.rep - o.rep)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExtElem(self.field, o.rep - self.rep)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExtElem(self.field, (self.rep * o.rep) % self.field.modulus)

    __rmul__ = __mul__

    def inverse(self):
        if self.rep.is_zero():
            raise ZeroDivisionError("inverting zero extension element")
        g, s, _ = poly_xgcd(self.rep, self.field.modulus)
        if g.degree != 0:
            raise ZeroDivisionError(
                f"{self} is a zero divisor modulo {self.field.modulus}"
            )
        return ExtElem(self.field, s % self.field.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self):
        return ExtElem(self.field, -self.rep)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.rep == o.rep

    def __hash__(self):
        return hash(("ext", self.field, self.rep.coeffs))

    def __bool__(self):
        return not self.rep.is_zero()

    def __str__(self):
        return format_poly(self.rep)

    def __repr__(self):
        return f"ExtElem({self}, mod {self.field.modulus})"


class ExtensionField:
    """F[x]/(m) with m monic and squarefree (verified at construction)."""

    is_field = True

    def __init__(self, base, modulus: Poly, symbol: str = "theta"):
        if modulus.field != base:
            raise TypeError("modulus must be a polynomial over the base field")
        if modulus.degree < 1 or not modulus.is_monic():
            raise ValueError("extension modulus must be monic of degree >= 1")
        g = poly_gcd(modulus, modulus.derivative())
        if g.degree != 0:
            raise ValueError(f"extension modulus {modulus} is not squarefree")
        self.base = base
        self.modulus = Poly(base, modulus.coeffs, symbol)
        self.symbol = symbol
        self.char = base.char
        self.zero = ExtElem(self, Poly.zero(base, symbol))
        self.one = ExtElem(self, Poly.one(base, symbol))

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def generator(self) -> ExtElem:
        """The class of the adjoined symbol."""
        return ExtElem(self, Poly.t(self.base, self.symbol))

    def __call__(self, value):
        if isinstance(value, ExtElem):
            if value.field != self:
                raise TypeError("element of a different extension field")
            return value
        if isinstance(value, Poly):
            if value.field != self.base:
                raise TypeError("representative over a different base field")
            return ExtElem(self, Poly(self.base, value.coeffs, self.symbol))
        if isinstance(value, str):
            return self.parse(value)
        return ExtElem(self, Poly(self.base, (self.base(value),), self.symbol))

    def from_coeffs(self, coeffs) -> ExtElem:
        return ExtElem(self, Poly(self.base, coeffs, self.symbol))

    def parse(self, text: str) -> ExtElem:
        rep = parse_poly(self.base, text, var=self.symbol)
        return ExtElem(self, rep)

    def elem_str(self, x: ExtElem) -> str:
        return format_poly(x.rep)

    def __repr__(self):
        return f"{self.base!r}[{self.symbol}]/({self.modulus})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.base == self.base
            and other.modulus.coeffs == self.modulus.coeffs
            and other.symbol == self.symbol
        )

    def __hash__(self):
        return hash(("ExtensionField", self.base, self.modulus.coeffs, self.symbol))


def parse_extension_elem(text: str, base) -> ExtElem:
    """Parse the ``expr (mod modulus)`` syntax, e.g.
    ``theta + 1 (mod theta^2 - theta + 1)``.

    The symbol name is inferred from the modulus text.
    """
    import re as _re

    m = _re.fullmatch(r"(?s)\s*(.*?)\s*\(\s*mod\s+(.*?)\s*\)\s*", text)
    if not m:
        raise ValueError(f"expected 'expr (mod modulus)', got {text!r}")
    expr_text, mod_text = m.group(1), m.group(2)
    sym_match = _re.search(r"[A-Za-z_][A-Za-z_0-9]*", mod_text)
    if not sym_match:
        raise ValueError(f"modulus {mod_text!r} names no symbol")
    symbol = sym_match.group(0)
    modulus = parse_poly(base, mod_text, var=symbol)
    field = ExtensionField(base, modulus, symbol)
    return field.parse(expr_text)


def format_extension_elem(x: ExtElem) -> str:
    return f"{x} (mod {x.field.modulus})"
