"""Complete factorization of univariate polynomials over Q and GF(p).

Over Q: squarefree decomposition (gcd with the derivative) followed by
Kronecker interpolation, capped at a configurable degree (default 8) because
the divisor enumeration grows quickly.  Linear factors are stripped first by
the rational root theorem, which keeps the typical case fast.

Over GF(p): squarefree decomposition (with p-th root extraction when the
derivative vanishes), distinct-degree splitting by Frobenius gcds, then
Cantor-Zassenhaus equal-degree splitting driven by a deterministic sequence
of trial elements, so results are reproducible.

Every factorization is verified by re-multiplication before being returned,
and the factor list is sorted canonically (degree, then coefficients).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd, isqrt

from .errors import CapExceeded
from .fields import QQ, PrimeField
from .poly import Poly, poly_gcd

FACTOR_CAP_DEFAULT = 8


@dataclass(frozen=True)
class Factorization:
    """unit * prod(factor^multiplicity), factors monic irreducible, distinct."""

    unit: object
    factors: tuple  # of (Poly, int)

    def value(self, field, var="t") -> Poly:
        acc = Poly.constant(field, self.unit, var)
        for q, m in self.factors:
            acc = acc * q**m
        return acc

    def __iter__(self):
        return iter(self.factors)


def factor(p: Poly, cap: int = FACTOR_CAP_DEFAULT) -> Factorization:
    """Factor p into monic irreducibles times a unit.

    Raises CapExceeded over Q when deg p exceeds the cap; callers holding a
    claimed factorization can verify it with poly_divmod instead.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    field = p.field
    if field == QQ:
        if p.degree > cap:
            raise CapExceeded(
                f"factorization cap exceeded: deg {p.degree} > cap {cap}"
            )
        fac = _factor_rational(p)
    elif isinstance(field, PrimeField):
        fac = _factor_prime_field(p)
    else:
        raise ValueError(f"factorization is only supported over Q and GF(p), not {field!r}")
    assert fac.value(field, p.var) == p, "factorization failed re-multiplication"
    return fac


_IRREDUCIBLE_MEMO: dict = {}


def is_irreducible(p: Poly, cap: int = FACTOR_CAP_DEFAULT) -> bool:
    if p.is_zero() or p.degree < 1:
        return False
    if p.degree == 1:
        return True
    key = (p.field, p.coeffs)
    hit = _IRREDUCIBLE_MEMO.get(key)
    if hit is None:
        fac = factor(p, cap)
        hit = len(fac.factors) == 1 and fac.factors[0][1] == 1
        _IRREDUCIBLE_MEMO[key] = hit
    return hit


def _sort_key(q: Poly):
    from .poly import format_poly

    return (q.degree, format_poly(q))


def _canonical(unit, parts) -> Factorization:
    merged = {}
    for q, m in parts:
        key = q.coeffs
        if key in merged:
            merged[key] = (q, merged[key][1] + m)
        else:
            merged[key] = (q, m)
    ordered = sorted(merged.values(), key=lambda qm: _sort_key(qm[0]))
    return Factorization(unit, tuple(ordered))


# ----------------------------------------------------------------------
# squarefree decomposition
# ----------------------------------------------------------------------


def squarefree_decomposition(p: Poly):
    """Return (unit, [(squarefree monic factor, multiplicity)]).

    Characteristic 0 and characteristic p are both handled; in char p a
    vanishing derivative means p(t) = q(t^p) and a p-th root is extracted.
    """
    field = p.field
    unit = p.lead()
    p = p.monic()
    out = []
    mult_scale = 1
    while p.degree > 0:
        dp = p.derivative()
        if dp.is_zero():
            # char p: p(t) = q(t^p); Frobenius is the identity on GF(p)
            char = field.char
            q = Poly(field, p.coeffs[::char], p.var)
            p = q
            mult_scale *= char
            continue
        g = poly_gcd(p, dp)
        w = p.exact_div(g)  # product of squarefree parts, each multiplicity 1
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, g)
            part = w.exact_div(y)
            if part.degree > 0:
                out.append((part.monic(), i * mult_scale))
            w = y
            g = g.exact_div(y)
            i += 1
        p = g  # leftover carries the p-th power content (char p) or is 1
    return unit, out


# ----------------------------------------------------------------------
# rationals: rational roots + Kronecker
# ----------------------------------------------------------------------


def _integer_divisors(n: int):
    n = abs(n)
    small, large = [], []
    f = 1
    while f * f <= n:
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
        f += 1
    return small + large[::-1]


def _to_integer_poly(p: Poly):
    """Clear denominators: returns (list of ints, scale) with p = ints/scale."""
    denom = 1
    for c in p.coeffs:
        denom = denom * c.denominator // int_gcd(denom, c.denominator)
    ints = [int(c * denom) for c in p.coeffs]
    return ints, denom

def _int_eval(ints, x):
    acc = 0
    for c in reversed(ints):
        acc = acc * x + c
    return acc


def _factor_rational(p: Poly) -> Factorization:
    unit, squarefree = squarefree_decomposition(p)
    parts = []
    for sf, mult in squarefree:
        for q in _factor_squarefree_rational(sf):
            parts.append((q, mult))
    return _canonical(unit, parts)


def _factor_squarefree_rational(p: Poly):
    """Irreducible monic factors of a squarefree monic rational polynomial."""
    if p.degree <= 1:
        return [p] if p.degree == 1 else []
    factors = []
    # strip rational roots: for the primitive integer form a_n x^n + ... + a_0,
    # roots are r/s with r | a_0 and s | a_n
    ints, _ = _to_integer_poly(p)
    while True:
        root = _find_rational_root(ints)
        if root is None:
            break
        lin = Poly(QQ, (-root, QQ.one), p.var)
        factors.append(lin)
        p = p.exact_div(lin)
        ints, _ = _to_integer_poly(p)
        if p.degree <= 1:
            if p.degree == 1:
                factors.append(p.monic())
            return factors
    factors.extend(_kronecker(p))
    return factors


def _find_rational_root(ints):
    if not ints:
        return None
    a0, an = ints[0], ints[-1]
    if a0 == 0:
        return Fraction(0)
    for r in _integer_divisors(a0):
        for s in _integer_divisors(an):
            for sign in (1, -1):
                cand = Fraction(sign * r, s)
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    return cand
    return None


def _kronecker(p: Poly):
    """Factor a squarefree monic rational polynomial with no rational roots.

    Searches proper factors of degree 2..deg/2 by interpolating candidate
    integer factors through divisor tuples of the values at small integers;
    evaluation points are ordered by divisor count to keep the search small.
    """
    n = p.degree
    if n <= 1:
        return [p] if n == 1 else []
    ints, _ = _to_integer_poly(p)

    points = [0]
    k = 1
    while len(points) < n + 2:
        points.extend([k, -k])
        k += 1
    values = {x: _int_eval(ints, x) for x in points}
    # no roots by precondition, so all values are nonzero
    divisor_lists = {
        x: [d for a in _integer_divisors(v) for d in (a, -a)]
        for x, v in values.items()
    }
    ranked = sorted(points, key=lambda x: (len(divisor_lists[x]), abs(x), x < 0))

    for deg in range(2, n // 2 + 1):
        nodes = ranked[: deg + 1]
        filters = ranked[deg + 1 :]
        cand = _kronecker_search(p, ints, nodes, filters, divisor_lists, deg)
        if cand is not None:
            rest = p.exact_div(cand)
            return sorted(
                _kronecker(cand.monic()) + _kronecker(rest.monic()), key=_sort_key
            )
    return [p]


def _kronecker_search(p, ints, nodes, filters, divisor_lists, deg):
    from itertools import product

    field = QQ
    lagrange = _lagrange_basis(nodes)
    filter_vals = {x: _int_eval(ints, x) for x in filters}
    for combo in product(*[divisor_lists[x] for x in nodes]):
        if combo[0] < 0:
            continue  # factors come in +- pairs; fix the first value positive
        coeffs = [Fraction(0)] * (deg + 1)
        for val, basis in zip(combo, lagrange):
            for i, b in enumerate(basis):
                coeffs[i] += val * b
        if coeffs[deg] == 0:
            continue
        if any(c.denominator != 1 for c in coeffs):
            continue
        cand = Poly(field, coeffs, p.var)
        ok = True
        for x, v in filter_vals.items():
            cv = int(cand(Fraction(x)))
            if cv == 0 or v % cv != 0:
                ok = False
                break
        if not ok:
            continue
        monic_cand = cand.monic()
        if monic_cand.degree == deg and monic_cand.divides(p):
            return monic_cand
    return None


def _lagrange_basis(nodes):
    """Coefficient vectors of the Lagrange basis polynomials for the nodes."""
    out = []
    for i, xi in enumerate(nodes):
        num = Poly(QQ, (QQ.one,))
        denom = Fraction(1)
        for j, xj in enumerate(nodes):
            if i == j:
                continue
            num = num * Poly(QQ, (Fraction(-xj), QQ.one))
            denom *= Fraction(xi - xj)
        coeffs = [c / denom for c in num.coeffs]
        coeffs += [Fraction(0)] * (len(nodes) - len(coeffs))
        out.append(coeffs)
    return out


# ----------------------------------------------------------------------
# prime fields: distinct degree + Cantor-Zassenhaus
# ----------------------------------------------------------------------


def _powmod(base: Poly, exp: int, modulus: Poly) -> Poly:
    result = Poly.one(base.field, base.var)
    base = base % modulus
    while exp:
        if exp & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        exp >>= 1
    return result


def _factor_prime_field(p: Poly) -> Factorization:
    unit, squarefree = squarefree_decomposition(p)
    parts = []
    for sf, mult in squarefree:
        for q in _factor_squarefree_prime_field(sf):
            parts.append((q, mult))
    return _canonical(unit, parts)


def _factor_squarefree_prime_field(f: Poly):
    if f.degree <= 1:
        return [f] if f.degree == 1 else []
    field = f.field
    p = field.char
    t = Poly.t(field, f.var)
    out = []
    d = 1
    rest = f
    while rest.degree >= 2 * d:
        h = _powmod(t, p**d, rest)  # t^(p^d) mod rest; ~31*d squarings
        g = poly_gcd(rest, h - t)
        if g.degree > 0:
            out.extend(_equal_degree_split(g, d))
            rest = rest.exact_div(g)
        d += 1
    if rest.degree > 0:
        out.append(rest.monic())
    return sorted(out, key=_sort_key)


def _equal_degree_split(f: Poly, d: int):
    """Split a squarefree product of irreducibles all of degree d."""
    if f.degree == d:
        return [f.monic()]
    field = f.field
    p = field.char
    # deterministic trial elements: counter-driven polynomials of degree < 2d
    for trial in range(1, 4096):
        a = _trial_poly(field, trial, 2 * d, f.var)
        if a.degree < 1:
            continue
        g = poly_gcd(f, a)
        if 0 < g.degree < f.degree:
            return _equal_degree_split(g, d) + _equal_degree_split(f.exact_div(g), d)
        if p == 2:
            b = _trace_map(a, d, f)
        else:
            b = _powmod(a, (p**d - 1) // 2, f) - Poly.one(field, f.var)
        g = poly_gcd(f, b)
        if 0 < g.degree < f.degree:
            return _equal_degree_split(g, d) + _equal_degree_split(f.exact_div(g), d)
    raise RuntimeError(f"equal-degree splitting failed for {f}")


def _trial_poly(field, counter: int, max_deg: int, var: str) -> Poly:
    p = field.char
    coeffs = []
    c = counter
    while c:
        coeffs.append(c % p)
        c //= p
    coeffs = coeffs[: max_deg + 1]
    return Poly(field, coeffs, var)


def _trace_map(a: Poly, d: int, f: Poly) -> Poly:
    # sum of a^(2^i) for i < d, the char-2 splitter
    acc = a % f
    cur = a % f
    for _ in range(d - 1):
        cur = (cur * cur) % f
        acc = acc + cur
    return acc % f
