"""Dense univariate polynomials over an exact field.

Coefficients are stored low degree first and trimmed, so the zero polynomial
has an empty coefficient tuple and ``deg 0 = -1`` by convention.  The
indeterminate name is display-only: arithmetic and equality ignore it.

Text syntax is sums of signed monomials, e.g. ``t^2 - t + 1`` or
``3/4*t^2 + (theta + 1)*t``; printing and parsing round-trip bit-exactly.
"""

from __future__ import annotations

import re

from .errors import ParseError


class Poly:
    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field, coeffs, var: str = "t"):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self.var = var

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(field, var="t"):
        return Poly(field, (), var)

    @staticmethod
    def one(field, var="t"):
        return Poly(field, (field.one,), var)

    @staticmethod
    def t(field, var="t"):
        return Poly(field, (field.zero, field.one), var)

    @staticmethod
    def constant(field, c, var="t"):
        return Poly(field, (c,), var)

    @staticmethod
    def monomial(field, k, c=None, var="t"):
        c = field.one if c is None else field(c)
        return Poly(field, (field.zero,) * k + (c,), var)

    # -- structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def lead(self):
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[-1]

    def constant_term(self):
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[0]

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.field.zero

    def _new(self, coeffs):
        return Poly(self.field, coeffs, self.var)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._new(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return self._new(())
            out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return self._new(out)
        try:
            c = self.field(other)
        except TypeError:
            return NotImplemented
        return self._new([a * c for a in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power; use RatFunc")
        result = Poly.one(self.field, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        try:
            c = self.field(other)
        except TypeError:
            return NotImplemented
        return Poly(self.field, (c,), self.var)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs and self.field == other.field
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            return NotImplemented
        return self.coeffs == coerced.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    # -- division -----------------------------------------------------

    def divmod(self, other: "Poly"):
        """Euclidean division a = q*b + r with deg r < deg b."""
        if not isinstance(other, Poly):
            other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("zero divisor")
        if self.is_zero():
            return self._new(()), self._new(())
        field = self.field
        rem = list(self.coeffs)
        db = other.degree
        blead = other.coeffs[-1]
        if len(rem) - 1 < db:
            return self._new(()), self._new(rem)
        quot = [field.zero] * (len(rem) - db)
        for i in range(len(rem) - db - 1, -1, -1):
            c = rem[i + db]
            if not c:
                continue
            q = c / blead
            quot[i] = q
            for j, b in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] - q * b
        return self._new(quot), self._new(rem)

    def __divmod__(self, other):
        return self.divmod(other)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError(f"inexact polynomial division: {self} by {other}")
        return q

    def divides(self, other: "Poly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return other.divmod(self)[1].is_zero()

    def monic(self) -> "Poly":
        if self.is_zero() or self.is_monic():
            return self
        lead = self.coeffs[-1]
        return self._new([c / lead for c in self.coeffs])

    def derivative(self) -> "Poly":
        return self._new(
            [self.field(i) * c for i, c in enumerate(self.coeffs) if i > 0]
        )

    # -- evaluation ---------------------------------------------------

    def __call__(self, x):
        """Horner evaluation; x may be a field element or anything with
        compatible +/* (e.g. a square Matrix via eval_at_matrix)."""
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift_var(self, k: int) -> "Poly":
        """Multiply by var^k (k >= 0)."""
        if self.is_zero():
            return self
        return self._new((self.field.zero,) * k + self.coeffs)

    # -- printing -----------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self})"


def poly_divmod(a: Poly, b: Poly):
    """Module-level alias for Euclidean division."""
    return a.divmod(b)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.field, a.var)
    g = poly_gcd(a, b)
    return (a * b).exact_div(g).monic()


def poly_xgcd(a: Poly, b: Poly):
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic."""
    field = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(field, a.var), Poly.zero(field, a.var)
    t0, t1 = Poly.zero(field, a.var), Poly.one(field, a.var)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lead = r0.lead()
    inv = field.one / lead
    return r0.monic(), s0 * inv, t0 * inv


def renormalize(p: Poly) -> Poly:
    """Coefficient reversal p(1/t)*t^deg(p).

    An involution on polynomials with nonzero constant term; sends t^n to 1.
    """
    if p.is_zero():
        raise ValueError("cannot renormalize the zero polynomial")
    return Poly(p.field, tuple(reversed(p.coeffs)), p.var)


class PolyRing:
    """The ring F[t], used as a matrix coefficient ring (Bareiss, SNF)."""

    is_field = False

    def __init__(self, field, var: str = "t"):
        self.field = field
        self.var = var
        self.char = field.char
        self.zero = Poly.zero(field, var)
        self.one = Poly.one(field, var)

    def __call__(self, value):
        if isinstance(value, Poly):
            if value.field != self.field:
                raise TypeError("polynomial over a different base field")
            return value
        if isinstance(value, str):
            return parse_poly(self.field, value, self.var)
        return Poly(self.field, (self.field(value),), self.var)

    # Euclidean structure for SNF / exact solving
    def euclid_size(self, x: Poly) -> int:
        return x.degree

    def is_unit(self, x: Poly) -> bool:
        return (not x.is_zero()) and x.degree == 0

    def unit_normalize(self, x: Poly):
        """Return (u, m) with x = u*m, m monic (or zero); u a unit Poly."""
        if x.is_zero():
            return self.one, x
        lead = x.lead()
        return Poly(self.field, (lead,), self.var), x.monic()

    def elem_str(self, x: Poly) -> str:
        return format_poly(x)

    def __repr__(self):
        return f"{self.field!r}[{self.var}]"

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.field == self.field
            and other.var == self.var
        )

    def __hash__(self):
        return hash(("PolyRing", self.field, self.var))


# ----------------------------------------------------------------------
# text format
# ----------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character at position {pos}: {text[pos:]!r}")
            break
        pos = m.end()
        if m.group("num"):
            out.append(("num", m.group("num")))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


def parse_poly(field, text: str, var: str = "t") -> Poly:
    """Parse a signed-monomial polynomial expression over ``field``.

    Coefficients may be integers, rationals ``a/b``, a coefficient symbol
    (for extension fields), or a parenthesized coefficient polynomial, e.g.
    ``(theta + 1)*t^2 - theta``.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    result = Poly.zero(field, var)
    i = 0
    n = len(tokens)
    while i < n:
        sign = 1
        while i < n and tokens[i] in (("op", "+"), ("op", "-")):
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise ParseError("dangling sign in polynomial text")
        coeff = field.one
        power = 0
        saw_atom = False
        while i < n:
            kind, val = tokens[i]
            if kind == "op" and val in "+-":
                break
            if kind == "op" and val == "*":
                i += 1
                continue
            if kind == "num":
                coeff = coeff * field(val)
                i += 1
            elif kind == "name":
                if val == var:
                    exp = 1
                    i += 1
                    if i < n and tokens[i] == ("op", "^"):
                        i += 1
                        if i >= n or tokens[i][0] != "num" or "/" in tokens[i][1]:
                            raise ParseError("expected integer exponent after '^'")
                        exp = int(tokens[i][1])
                        i += 1
                    power += exp
                else:
                    sym, i = _parse_symbol_power(field, tokens, i)
                    coeff = coeff * sym
            elif kind == "op" and val == "(":
                depth = 1
                j = i + 1
                while j < n and depth:
                    if tokens[j] == ("op", "("):
                        depth += 1
                    elif tokens[j] == ("op", ")"):
                        depth -= 1
                    j += 1
                if depth:
                    raise ParseError("unbalanced parenthesis")
                inner = tokens[i + 1 : j - 1]
                coeff = coeff * _parse_coefficient(field, inner)
                i = j
            else:
                raise ParseError(f"unexpected token {val!r} in polynomial text")
            saw_atom = True
        if not saw_atom:
            raise ParseError("empty term in polynomial text")
        term = Poly.monomial(field, power, coeff, var)
        result = result + (term if sign > 0 else -term)
    return result


def _parse_symbol_power(field, tokens, i):
    name = tokens[i][1]
    elem = _symbol_elem(field, name)
    i += 1
    if i < len(tokens) and tokens[i] == ("op", "^"):
        i += 1
        if i >= len(tokens) or tokens[i][0] != "num" or "/" in tokens[i][1]:
            raise ParseError("expected integer exponent after '^'")
        elem = elem ** int(tokens[i][1])
        i += 1
    return elem, i


def _symbol_elem(field, name):
    gen = getattr(field, "generator", None)
    if gen is not None and getattr(field, "symbol", None) == name:
        return field.generator()
    raise ParseError(f"unknown symbol {name!r} for field {field!r}")


def _parse_coefficient(field, tokens):
    text = _untokenize(tokens)
    sym = getattr(field, "symbol", None)
    if sym is None:
        # plain parenthesized scalar like (3/4)
        p = parse_poly(field, text, var="\x00")
        if p.degree > 0:
            raise ParseError(f"non-scalar coefficient {text!r}")
        return p.constant_term()
    return field.parse(text)


def _untokenize(tokens):
    parts = []
    for kind, val in tokens:
        parts.append(val)
    return " ".join(parts)


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if not c:
            continue
        neg, mag = _split_sign(p.field, c)
        piece = _format_monomial(p.field, mag, p.var, k)
        if not parts:
            parts.append(("-" if neg else "") + piece)
        else:
            parts.append(("- " if neg else "+ ") + piece)
    return " ".join(parts)


def _split_sign(field, c):
    """Split off a leading minus sign when the coefficient domain has one."""
    s = field.elem_str(c)
    if s.startswith("-"):
        return True, -c
    return False, c


def _format_monomial(field, c, var, k) -> str:
    cs = field.elem_str(c)
    if k == 0:
        return f"({cs})" if _needs_parens(cs) else cs
    v = var if k == 1 else f"{var}^{k}"
    if c == field.one:
        return v
    if _needs_parens(cs):
        return f"({cs})*{v}"
    return f"{cs}*{v}"


def _needs_parens(s: str) -> bool:
    return any(ch in s for ch in "+- ") and not s.lstrip("-").replace("/", "").isdigit()
