"""Endomorphisms of finite free modules over an exact field: torsion,
zeta, Milnor's functional equation, S-torsion and primary decomposition.

At determinant level the torsion of (P, f) is det(tI - f) viewed as a unit
of F(t) and the zeta function is 1/det(I - tf); Milnor's identity
zeta(1/t) * tau(t) = t^n holds exactly and is rechecked on every call.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IdentityViolation
from .factor import factor
from .matrix import Matrix, charpoly, det, kernel_basis, mat_poly_eval, minpoly, solve
from .multset import MultSet, is_unit_in_localization, multset_dual
from .poly import Poly, PolyRing
from .ratfunc import RatFunc, ratfunc_to_series
from .series import TruncSeries, series_exp


@dataclass(frozen=True)
class Endo:
    """A pair (P, f): free module of rank n with an endomorphism matrix."""

    f: Matrix

    def __post_init__(self):
        if not self.f.is_square():
            raise ValueError("endomorphism matrix must be square")
        if not getattr(self.f.ring, "is_field", False):
            raise ValueError("endomorphisms live over a field")

    @property
    def n(self) -> int:
        return self.f.rows

    @property
    def field(self):
        return self.f.ring

    def __str__(self):
        return f"Endo(rank {self.n}, f = {self.f})"


@dataclass(frozen=True)
class MilnorReport:
    tau: RatFunc
    zeta: RatFunc
    zeta_at_inverse: RatFunc
    product: RatFunc
    expected: RatFunc
    holds: bool

    def __str__(self):
        verdict = "MILNOR OK" if self.holds else "MILNOR VIOLATION"
        return (
            f"tau = {self.tau}\n"
            f"zeta = {self.zeta}\n"
            f"zeta(1/t) = {self.zeta_at_inverse}\n"
            f"product = {self.product}\n"
            f"expected = {self.expected}\n"
            f"{verdict}"
        )


def torsion(e: Endo) -> RatFunc:
    """det(tI - f): monic of degree n, the characteristic polynomial as a
    unit of F(t)."""
    return RatFunc(charpoly(e.f))


def zeta_det(e: Endo) -> RatFunc:
    """1/det(I - t*f), reduced."""
    field = e.field
    ring = PolyRing(field)
    n = e.n
    t = Poly.t(field)
    entries = [
        [
            (ring.one if i == j else ring.zero)
            - t * Poly.constant(field, e.f.entries[i][j])
            for j in range(n)
        ]
        for i in range(n)
    ]
    d = det(Matrix(ring, entries, n, n)) if n else ring.one
    return RatFunc(Poly.one(field), d)


def zeta_series(e: Endo, order: int) -> TruncSeries:
    """exp(sum_k tr(f^k) t^k / k) mod t^order; characteristic 0 only."""
    field = e.field
    if field.char != 0:
        raise ValueError("exp undefined in positive characteristic")
    coeffs = [field.zero] * order
    power = Matrix.identity(field, e.n)
    for k in range(1, order):
        power = power * e.f
        coeffs[k] = power.trace() / field(k)
    return series_exp(TruncSeries(field, order, coeffs))


def milnor_identity(e: Endo) -> MilnorReport:
    """Check zeta(1/t) * tau(t) = t^n exactly.

    A false verdict is an implementation bug; it is surfaced in the report,
    never silently.
    """
    tau = torsion(e)
    zeta = zeta_det(e)
    zeta_inv = zeta.subst_inverse()
    product = zeta_inv * tau
    expected = RatFunc.t_power(e.field, e.n)
    return MilnorReport(
        tau=tau,
        zeta=zeta,
        zeta_at_inverse=zeta_inv,
        product=product,
        expected=expected,
        holds=(product == expected),
    )


def is_s_torsion(e: Endo, s: MultSet, cap=None) -> bool:
    """p(f) = 0 for some p in S, decided by factor containment of the
    minimal polynomial (multiplicities are free because S is closed under
    products, hence under powers of each generator)."""
    mp = minpoly(e.f)
    if mp.is_one():
        return True  # rank 0
    kwargs = {} if cap is None else {"cap": cap}
    gens = list(s.generators)
    for q, _ in factor(mp, **kwargs).factors:
        if not any(q.divides(g) for g in gens):
            return False
    return True


@dataclass(frozen=True)
class PrimaryComponent:
    prime: Poly
    basis: Matrix  # columns: a basis of ker(prime(f)^multiplicity)
    multiplicity: int  # m_p = dim / deg(prime)


def primary_decompose(e: Endo, cap=None):
    """Split (P, f) into generalized eigencomponents ker p(f)^m indexed by
    the irreducible factors p of the characteristic polynomial.

    Postconditions (checked): sum of m_p * deg p = n, and f restricted to
    each component has characteristic polynomial p^{m_p}.
    """
    kwargs = {} if cap is None else {"cap": cap}
    cp = charpoly(e.f)
    if e.n == 0:
        return []
    components = []
    total = 0
    for p, mult in factor(cp, **kwargs).factors:
        pf = mat_poly_eval(p, e.f) ** mult
        basis = kernel_basis(pf)
        m_p, rem = divmod(basis.cols, p.degree)
        if rem:
            raise IdentityViolation("component dimension not divisible by deg p")
        restricted = _restrict(e.f, basis)
        if charpoly(restricted) != p**m_p:
            raise IdentityViolation("restricted charpoly is not p^m")
        components.append(PrimaryComponent(p, basis, m_p))
        total += m_p * p.degree
    if total != e.n:
        raise IdentityViolation("primary components do not fill the space")
    return components


def _restrict(f: Matrix, basis: Matrix) -> Matrix:
    """Matrix of f on the invariant subspace spanned by basis columns."""
    image = f * basis
    coords = solve(basis, image)
    if coords is None:
        raise IdentityViolation("subspace not invariant under f")
    return coords


def zeta_unit_check(e: Endo, s: MultSet, cap=None) -> bool:
    """For S-torsion (P, f): det(I - tf) is a unit of the T-localization,
    T the dual set of S.  The theorem guarantees True."""
    if not is_s_torsion(e, s, cap=cap):
        raise ValueError("not S-torsion")
    d = zeta_det(e).inverse()  # det(I - tf) as a RatFunc (a polynomial)
    if d.is_one():
        return True  # nothing to invert: unit of any localization
    return is_unit_in_localization(d, multset_dual(s), cap=cap)


def zeta_series_matches_det(e: Endo, order: int) -> bool:
    """The trace-exponential/determinant identity at a given order."""
    return zeta_series(e, order) == ratfunc_to_series(zeta_det(e), order)
