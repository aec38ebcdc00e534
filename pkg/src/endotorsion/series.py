"""Truncated power series: exact arithmetic mod t^N.

A series of order N stores exactly N coefficients c_0..c_{N-1}.  The
exponential is computed by the derivative recursion E' = s'E, which keeps
every coefficient an exact field element and only divides by 1..N-1, so it
requires characteristic zero.
"""

from __future__ import annotations

from .poly import Poly


class TruncSeries:
    __slots__ = ("field", "order", "coeffs", "var")

    def __init__(self, field, order: int, coeffs, var: str = "t"):
        if order < 0:
            raise ValueError("series order must be non-negative")
        cs = [field(c) for c in coeffs]
        if len(cs) > order:
            raise ValueError("more coefficients than the order allows")
        cs += [field.zero] * (order - len(cs))
        self.field = field
        self.order = order
        self.coeffs = tuple(cs)
        self.var = var

    @staticmethod
    def zero(field, order, var="t"):
        return TruncSeries(field, order, (), var)

    @staticmethod
    def one(field, order, var="t"):
        return TruncSeries(field, order, (field.one,), var)

    @staticmethod
    def from_poly(p: Poly, order: int) -> "TruncSeries":
        return TruncSeries(p.field, order, p.coeffs[:order], p.var)

    def _check(self, other):
        if self.order != other.order:
            raise ValueError("series orders differ")
        if self.field != other.field:
            raise TypeError("series over different fields")

    def __add__(self, other):
        self._check(other)
        return TruncSeries(
            self.field,
            self.order,
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
            self.var,
        )

    def __sub__(self, other):
        self._check(other)
        return TruncSeries(
            self.field,
            self.order,
            [a - b for a, b in zip(self.coeffs, other.coeffs)],
            self.var,
        )

    def __neg__(self):
        return TruncSeries(self.field, self.order, [-a for a in self.coeffs], self.var)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = self.field(other)
            return TruncSeries(
                self.field, self.order, [a * c for a in self.coeffs], self.var
            )
        self._check(other)
        n = self.order
        out = [self.field.zero] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(self.field, n, out, self.var)

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse; requires an invertible constant term."""
        if self.order == 0:
            return self
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        inv0 = self.field.one / c0
        out = [inv0] + [self.field.zero] * (self.order - 1)
        for k in range(1, self.order):
            acc = self.field.zero
            for j in range(1, k + 1):
                if self.coeffs[j]:
                    acc = acc + self.coeffs[j] * out[k - j]
            out[k] = -inv0 * acc
        return TruncSeries(self.field, self.order, out, self.var)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.order, self.coeffs))

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            s = self.field.elem_str(c)
            neg = s.startswith("-")
            mag = self.field.elem_str(-c) if neg else s
            if k == 0:
                piece = mag
            else:
                v = self.var if k == 1 else f"{self.var}^{k}"
                piece = v if mag == "1" else f"{mag}*{v}"
            if not parts:
                parts.append(("-" if neg else "") + piece)
            else:
                parts.append(("- " if neg else "+ ") + piece)
        body = " ".join(parts) if parts else "0"
        return f"{body} + O({self.var}^{self.order})"

    def __repr__(self):
        return f"TruncSeries({self})"


def series_exp(s: TruncSeries) -> TruncSeries:
    """exp of a series with zero constant term, characteristic 0 only.

    Uses n*E_n = sum_{k=1..n} k*s_k*E_{n-k}, obtained from E' = s'E.
    """
    if s.field.char != 0:
        raise ValueError("exp undefined in positive characteristic")
    if s.order == 0:
        return s
    if s.coeffs[0]:
        raise ValueError("series_exp requires zero constant term")
    field = s.field
    out = [field.one] + [field.zero] * (s.order - 1)
    for n in range(1, s.order):
        acc = field.zero
        for k in range(1, n + 1):
            if s.coeffs[k]:
                acc = acc + field(k) * s.coeffs[k] * out[n - k]
        out[n] = acc / field(n)
    return TruncSeries(field, s.order, out, s.var)


def series_log(s: TruncSeries) -> TruncSeries:
    """log of a series with constant term 1 (characteristic 0); test helper
    inverse to series_exp."""
    if s.field.char != 0:
        raise ValueError("log undefined in positive characteristic")
    if s.order == 0:
        return s
    field = s.field
    if s.coeffs[0] != field.one:
        raise ValueError("series_log requires constant term 1")
    out = [field.zero] * s.order
    for n in range(1, s.order):
        acc = field(n) * s.coeffs[n]
        for k in range(1, n):
            acc = acc - field(k) * out[k] * s.coeffs[n - k]
        out[n] = acc / field(n)
    return TruncSeries(field, s.order, out, s.var)
