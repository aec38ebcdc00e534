"""Cellular self-maps, algebraic mapping tori, infinite cyclic covers.

A CellularSelfMap stores the integral cellular chains of the fiber and the
monodromy theta.  Wedge models are stored reduced (basepoint cell removed),
which is what the torsion and zeta normalizations want; the mapping torus
re-adjoins the basepoint cell (theta = 1 in degree 0) so its homology is the
honest integral homology of the total space.

The cover is the characteristic complex of (C (x) Q, theta) over Q[t]: its
homology is H_*(fiber; Q) as a Q[t]-module with t acting through theta.
Reidemeister torsion is the graded torsion of that pair, the canonical
representative with no +-t^n indeterminacy; the zeta function of the deck
transformation is the graded zeta, and Milnor's identity relates them with
chi of the fiber model.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .chain import (
    ChainComplex,
    ChainEndo,
    ChainMap,
    MilnorReport,
    char_complex,
    cone,
    graded_milnor,
    graded_torsion,
    graded_zeta,
    homology,
    homology_endo,
    lefschetz_zeta_series,
)
from .errors import IdentityViolation
from .fields import QQ
from .matrix import Matrix, ZZ, det
from .ratfunc import RatFunc
from .series import TruncSeries


@dataclass(frozen=True)
class CellularSelfMap:
    """Integral cellular chains of the fiber with a chain self-map theta.

    reduced=True means the stored complex omits the basepoint 0-cell (wedge
    models); the mapping torus puts it back.
    """

    complex: ChainComplex
    theta: tuple  # one integer Matrix per stored degree
    label: str = ""
    reduced: bool = False

    def __post_init__(self):
        if self.complex.ring != ZZ:
            raise ValueError("cellular chains live over Z")
        # validates shapes and commuting with the differentials
        self.as_chain_map()

    def as_chain_map(self) -> ChainMap:
        return ChainMap(self.complex, self.complex, dict(zip(self.complex.degrees(), self.theta)))

    def theta_component(self, i) -> Matrix:
        if self.complex.lo <= i <= self.complex.hi:
            return self.theta[i - self.complex.lo]
        return Matrix.zeros(ZZ, self.complex.dim(i), self.complex.dim(i))

    def rational_endo(self) -> ChainEndo:
        base = self.complex.to_ring(QQ)
        comps = {
            i: self.theta_component(i).to_field(QQ) for i in self.complex.degrees()
        }
        return ChainEndo(base, comps)

    def is_homology_equivalence(self) -> bool:
        hom = homology_endo(self.rational_endo())
        for i in hom.base.degrees():
            if hom.base.dim(i) and det(hom.component(i)) == QQ.zero:
                return False
        return True

    def euler(self) -> int:
        return self.complex.euler()


@dataclass(frozen=True)
class CoverData:
    torus: ChainComplex  # over Z: the algebraic mapping torus
    cover: ChainComplex  # over Q[t]: chains of the infinite cyclic cover
    deck: ChainEndo  # the t-action: (C (x) Q, theta)


def _augmented(s: CellularSelfMap):
    """The stored complex with the basepoint cell restored when reduced."""
    c = s.complex
    thetas = {i: s.theta_component(i) for i in c.degrees()}
    if not s.reduced:
        return c, thetas
    if c.dim(0):
        raise ValueError("reduced model already has 0-cells")
    lo = min(c.lo, 0)
    hi = c.hi
    dims = [c.dim(i) + (1 if i == 0 else 0) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo + 1, hi + 1):
        if i == 1:
            # wedge 1-cells attach both endpoints to the basepoint, so the
            # boundary onto the restored cell vanishes
            diffs.append(Matrix.zeros(ZZ, 1, c.dim(1)))
        else:
            diffs.append(c.diff(i))
    aug = ChainComplex(ZZ, lo, dims, diffs)
    full = {i: thetas.get(i) for i in aug.degrees()}
    full[0] = Matrix.identity(ZZ, 1)
    for i in aug.degrees():
        if full[i] is None:
            full[i] = Matrix.zeros(ZZ, aug.dim(i), aug.dim(i))
    return aug, full


def mapping_torus(s: CellularSelfMap) -> ChainComplex:
    """Algebraic mapping torus: the cone of (1 - theta) on the (unreduced)
    cellular chains; degree i is C_i (+) C_{i-1} and the Euler characteristic
    is 0."""
    c, thetas = _augmented(s)
    one_minus = {
        i: Matrix.identity(ZZ, c.dim(i)) - thetas.get(i, Matrix.zeros(ZZ, c.dim(i), c.dim(i)))
        for i in c.degrees()
    }
    g = ChainMap(c, c, one_minus)
    torus = cone(g)
    if torus.euler() != 0:
        raise IdentityViolation("mapping torus must have Euler characteristic 0")
    return torus


def cover_complex(s: CellularSelfMap) -> CoverData:
    """Chains of the infinite cyclic cover over Q[t], with the deck action
    through theta; errors unless theta is a Q-homology equivalence (the deck
    transformation must be invertible on homology)."""
    if not s.is_homology_equivalence():
        raise ValueError("cover not Q(t)-acyclic: theta is not a Q-homology equivalence")
    deck = s.rational_endo()
    return CoverData(mapping_torus(s), char_complex(deck), deck)


def reidemeister_torsion(s: CellularSelfMap) -> RatFunc:
    """The torsion of the cyclic cover: alternating product of
    det(tI - theta_i) over the stored (reduced for wedges) complex; the
    canonical representative, no +-t^n ambiguity."""
    if not s.is_homology_equivalence():
        raise ValueError("cover not Q(t)-acyclic: theta is not a Q-homology equivalence")
    return graded_torsion(s.rational_endo())


def deck_zeta(s: CellularSelfMap, order: int = 16):
    """(closed form, truncated series) of the Lefschetz zeta function of the
    deck transformation; the two agree by construction and the agreement is
    asserted inside the series computation."""
    e = s.rational_endo()
    closed = graded_zeta(e)
    series = lefschetz_zeta_series(e, order)
    return closed, series


def milnor_check_cover(s: CellularSelfMap) -> MilnorReport:
    """zeta(1/t) * tau(t) = t^chi(fiber model), exactly."""
    if not s.is_homology_equivalence():
        raise ValueError("cover not Q(t)-acyclic: theta is not a Q-homology equivalence")
    report = graded_milnor(s.rational_endo())
    if not report.holds:
        raise IdentityViolation("Milnor identity failed on a cyclic cover")
    return report


# ----------------------------------------------------------------------
# the example gallery
# ----------------------------------------------------------------------

MONODROMY_Q = ((0, -1), (1, 1))
MONODROMY_R = ((0, -1), (1, 0))


def builtin_example(name: str, n: int = 2) -> CellularSelfMap:
    """The built-in fibers and monodromies:

    prototype: reduced wedge of two n-spheres, theta acting by Q in degree n;
    reflection: the same fiber with the 4-periodic matrix R;
    trefoil: punctured torus (one 0-cell, two 1-cells), monodromy Q on H_1,
    6-periodic on homology;
    closed: the product of two n-spheres (cells in degrees 0, n, n, 2n) with
    theta(x, y) = (r(y), x), so R in the middle and degree (-1)^(n+1) on top.
    """
    if name in ("prototype", "reflection"):
        if n < 1:
            raise ValueError("need n >= 1")
        mat = MONODROMY_Q if name == "prototype" else MONODROMY_R
        complex_ = ChainComplex.one_term(ZZ, n, 2)
        return CellularSelfMap(
            complex_, (Matrix(ZZ, mat),), label=f"{name}({n})", reduced=True
        )
    if name == "trefoil":
        complex_ = ChainComplex(ZZ, 0, (1, 2), (Matrix.zeros(ZZ, 1, 2),))
        thetas = (Matrix.identity(ZZ, 1), Matrix(ZZ, MONODROMY_Q))
        return CellularSelfMap(complex_, thetas, label="trefoil")
    if name == "closed":
        if n < 1:
            raise ValueError("need n >= 1")
        lo = 0
        dims = [0] * (2 * n + 1)
        dims[0] = 1
        dims[n] += 2
        dims[2 * n] += 1
        diffs = [Matrix.zeros(ZZ, dims[k], dims[k + 1]) for k in range(2 * n)]
        complex_ = ChainComplex(ZZ, lo, dims, diffs)
        top_degree = (-1) ** (n + 1)
        thetas = []
        for i in range(0, 2 * n + 1):
            if i == 0:
                thetas.append(Matrix.identity(ZZ, 1))
            elif i == n:
                thetas.append(Matrix(ZZ, MONODROMY_R))
            elif i == 2 * n:
                thetas.append(Matrix(ZZ, [[top_degree]]))
            else:
                thetas.append(Matrix.zeros(ZZ, 0, 0))
        return CellularSelfMap(complex_, tuple(thetas), label=f"closed({n})")
    if name == "point":
        complex_ = ChainComplex.one_term(ZZ, 0, 1)
        return CellularSelfMap(complex_, (Matrix.identity(ZZ, 1),), label="point")
    raise ValueError(f"unknown example {name!r}")


EXAMPLE_NAMES = ("prototype", "reflection", "trefoil", "closed", "point")


def wang_consistent(s: CellularSelfMap) -> bool:
    """Cross-check the torus homology against the Wang sequence
    0 -> coker(1 - theta_* | H_i) -> H_i(E) -> ker(1 - theta_* | H_{i-1}) -> 0
    at the level of ranks (free parts) over Q."""
    from .matrix import rref

    torus = mapping_torus(s)
    torus_hom = homology(torus)
    c, thetas = _augmented(s)
    rat = ChainEndo(
        c.to_ring(QQ), {i: thetas[i].to_field(QQ) for i in c.degrees()}
    )
    hom = homology_endo(rat)
    for i in range(torus_hom.lo, torus_hom.hi + 1):
        def defect(j):
            if hom.base.dim(j) == 0:
                return 0, 0
            m = Matrix.identity(QQ, hom.base.dim(j)) - hom.component(j)
            r = len(rref(m)[1])
            return hom.base.dim(j) - r, hom.base.dim(j) - r  # coker rank, ker rank
        cr, _ = defect(i)
        _, kr = defect(i - 1)
        if torus_hom.free_rank(i) != cr + kr:
            return False
    return True
