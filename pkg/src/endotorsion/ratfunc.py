"""Rational functions over an exact field, canonicalized so that equality of
units in F(t) is structural equality.

Invariant: gcd(num, den) = 1, den monic and nonzero; the unit content of the
denominator moves into the numerator.  The zero function is 0/1.
"""

from __future__ import annotations

from .errors import ParseError
from .poly import Poly, format_poly, parse_poly, poly_gcd
from .series import TruncSeries


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None):
        if den is None:
            den = Poly.one(num.field, num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.field != den.field:
            raise TypeError("numerator and denominator over different fields")
        if num.is_zero():
            den = Poly.one(num.field, num.var)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lead = den.lead()
            if lead != den.field.one:
                inv = den.field.one / lead
                num = num * inv
                den = den * inv
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p)

    @staticmethod
    def one(field, var="t") -> "RatFunc":
        return RatFunc(Poly.one(field, var))

    @staticmethod
    def zero(field, var="t") -> "RatFunc":
        return RatFunc(Poly.zero(field, var))

    @staticmethod
    def t_power(field, k: int, var="t") -> "RatFunc":
        """t^k for any integer k, negative exponents included."""
        if k >= 0:
            return RatFunc(Poly.monomial(field, k, var=var))
        return RatFunc(Poly.one(field, var), Poly.monomial(field, -k, var=var))

    @property
    def field(self):
        return self.num.field

    @property
    def var(self):
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        try:
            c = self.field(other)
        except TypeError:
            return NotImplemented
        return RatFunc(Poly.constant(self.field, c, self.var))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("dividing by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverting the zero rational function")
        return RatFunc(self.den, self.num)

    def __pow__(self, k: int):
        if k == 0:
            return RatFunc.one(self.field, self.var)
        base = self if k > 0 else self.inverse()
        k = abs(k)
        result = RatFunc.one(self.field, self.var)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    # -- substitution ------------------------------------------------------

    def subst_inverse(self) -> "RatFunc":
        """f(1/t) as a reduced rational function: reverse both coefficient
        lists and clear the leftover power of t."""
        if self.is_zero():
            return self
        n, d = self.num, self.den
        rn = Poly(n.field, tuple(reversed(n.coeffs)), n.var)
        rd = Poly(d.field, tuple(reversed(d.coeffs)), d.var)
        shift = d.degree - n.degree
        if shift >= 0:
            return RatFunc(rn.shift_var(shift), rd)
        return RatFunc(rn, rd.shift_var(-shift))

    # -- printing ------------------------------------------------------------

    def __str__(self):
        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({self})"


def ord_at(f: RatFunc, p: Poly) -> int:
    """The p-adic valuation of f at a monic irreducible p.

    Counts factors of p in the numerator minus those in the denominator;
    errors on f = 0 (valuation undefined) and on reducible p.
    """
    if f.is_zero():
        raise ValueError("valuation of zero")
    _require_irreducible(p)
    return _poly_ord(f.num, p) - _poly_ord(f.den, p)


def _poly_ord(q: Poly, p: Poly) -> int:
    count = 0
    while True:
        quo, rem = q.divmod(p)
        if not rem.is_zero():
            return count
        q = quo
        count += 1


def _require_irreducible(p: Poly):
    if p.is_zero() or p.degree < 1 or not p.is_monic():
        raise ValueError(f"{p} is not monic of positive degree")
    if p.degree == 1:
        return
    from .factor import is_irreducible

    if not is_irreducible(p):
        raise ValueError(f"{p} is reducible")


def ratfunc_to_series(f: RatFunc, order: int) -> TruncSeries:
    """Power-series expansion of f mod t^order.

    Requires den(0) != 0, i.e. f lies in the image of the T-localization
    inside the power-series ring.
    """
    if not f.den.constant_term():
        raise ValueError("pole at zero: not in A[t]_T")
    num = TruncSeries.from_poly(f.num, order)
    den = TruncSeries.from_poly(f.den, order)
    return num * den.inverse()


def format_ratfunc(f: RatFunc) -> str:
    num, den = f.num, f.den
    neg = ""
    lead = num.lead()
    if num.field.elem_str(lead).startswith("-"):
        neg = "-"
        num = -num
    ns = format_poly(num)
    if den.is_one():
        return neg + ns
    ds = format_poly(den)
    if " " in ns or "/" in ns:
        ns = f"({ns})"
    if " " in ds or "/" in ds:
        ds = f"({ds})"
    return f"{neg}{ns}/{ds}"


def parse_ratfunc(field, text: str, var: str = "t") -> RatFunc:
    """Parse ``num/den`` with optional parentheses and leading sign."""
    s = text.strip()
    neg = False
    while s.startswith("-") and _is_fully_parenthesized_tail(s[1:]):
        neg = not neg
        s = s[1:].strip()
    depth = 0
    split = None
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parenthesis in {text!r}")
        elif ch == "/" and depth == 0:
            # a '/' inside a rational coefficient like 3/4 is preceded and
            # followed by digits; the num/den slash is not
            if i > 0 and s[i - 1].isdigit() and i + 1 < len(s) and s[i + 1].isdigit():
                continue
            if split is not None:
                raise ParseError(f"multiple top-level '/' in {text!r}")
            split = i
    if split is None:
        num = parse_poly(field, _strip_parens(s), var)
        f = RatFunc(num)
    else:
        num = parse_poly(field, _strip_parens(s[:split]), var)
        den = parse_poly(field, _strip_parens(s[split + 1 :]), var)
        if den.is_zero():
            raise ParseError("zero denominator in rational function text")
        f = RatFunc(num, den)
    return -f if neg else f


def _strip_parens(s: str) -> str:
    s = s.strip()
    while s.startswith("(") and s.endswith(")"):
        depth = 0
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0 and i != len(s) - 1:
                    return s
        s = s[1:-1].strip()
    return s


def _is_fully_parenthesized_tail(s: str) -> bool:
    # accept "-(...)/(...)" and "-(...)" forms emitted by format_ratfunc
    s = s.strip()
    return s.startswith("(")
