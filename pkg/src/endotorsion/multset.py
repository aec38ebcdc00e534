"""Finitely generated multiplicative sets of monic polynomials.

A MultSet holds monic generators of degree >= 1 and always contains t (it is
inserted if absent); the set it denotes is the multiplicative closure.  The
dual set inverts the coefficient-reversed generators; its elements have
constant term 1 rather than being monic, so it is carried by the lighter
LocalizingSet wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass

from .factor import factor
from .poly import Poly, renormalize
from .ratfunc import RatFunc


def _canonical_generators(gens):
    from .poly import format_poly

    seen = {}
    for g in gens:
        seen.setdefault(g.coeffs, g)
    ordered = sorted(seen.values(), key=lambda g: (g.degree, format_poly(g)))
    return tuple(ordered)


@dataclass(frozen=True)
class MultSet:
    generators: tuple

    def __init__(self, generators, field=None, var: str = "t"):
        gens = list(generators)
        if not gens and field is None:
            raise ValueError("need at least one generator or an explicit field")
        if gens:
            field = gens[0].field
            var = gens[0].var
        for g in gens:
            if g.is_zero() or g.degree < 1 or not g.is_monic():
                raise ValueError(f"generator {g} is not monic of degree >= 1")
            if g.field != field:
                raise ValueError("generators over different fields")
        t = Poly.t(field, var)
        if not any(g == t for g in gens):
            gens.append(t)
        object.__setattr__(self, "generators", _canonical_generators(gens))

    @property
    def field(self):
        return self.generators[0].field

    @property
    def var(self):
        return self.generators[0].var

    def __iter__(self):
        return iter(self.generators)

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


@dataclass(frozen=True)
class LocalizingSet:
    """A finitely generated multiplicative set with no monic requirement;
    what multset_dual returns."""

    generators: tuple

    def __str__(self):
        if not self.generators:
            return "<1>"
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def multset_dual(s: MultSet) -> LocalizingSet:
    """The dual set T = {p~ : p in S}; the image 1 of t^n is dropped."""
    gens = []
    for g in s.generators:
        r = renormalize(g)
        if not r.is_one():
            gens.append(r)
    return LocalizingSet(_canonical_generators(gens))


def generator_products(s, max_total_degree: int):
    """All products of generator powers with total degree <= the bound,
    in a deterministic order, excluding the empty product 1.

    Works for MultSet and LocalizingSet alike; used by brute-force torsion
    searches and torsion_conditions.
    """
    gens = list(s.generators)
    out = []

    def rec(idx: int, acc: Poly, deg: int):
        if idx == len(gens):
            if deg > 0:
                out.append(acc)
            return
        g = gens[idx]
        cur = acc
        d = deg
        while True:
            rec(idx + 1, cur, d)
            d += g.degree
            if d > max_total_degree:
                break
            cur = cur * g
        return

    if gens:
        one = Poly.one(gens[0].field, gens[0].var)
        rec(0, one, 0)
    from .poly import format_poly

    out.sort(key=lambda p: (p.degree, format_poly(p)))
    return out


def is_unit_in_localization(f: RatFunc, m, cap=None) -> bool:
    """Decide whether f is a unit of the localization inverting m's
    generators: every irreducible factor of num and den must divide some
    generator (multiplicities are irrelevant by multiplicative closure)."""
    if f.is_zero():
        raise ValueError("the zero function is not a unit anywhere")
    kwargs = {} if cap is None else {"cap": cap}
    gens = list(m.generators)
    for part in (f.num, f.den):
        if part.degree < 1:
            continue
        for q, _ in factor(part, **kwargs).factors:
            if not any(q.divides(g) for g in gens):
                return False
    return True
