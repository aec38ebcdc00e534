"""Bounded chain complexes of finite free modules with endomorphisms.

Conventions, fixed once and verified by the golden examples:
  - differentials d_i: C_i -> C_{i-1}, d o d = 0 checked at construction;
  - cone(g: X -> Y)_i = Y_i (+) X_{i-1} with d = [[d_Y, g], [0, -d_X]];
  - graded torsion has exponent (-1)^i, graded zeta (-1)^(i+1), so a one-term
    degree-0 complex reproduces det(tI - f) and 1/det(I - tf) and the product
    zeta(1/t) * tau(t) comes out to t^chi.

Homology is rank-nullity over a field and Smith-normal-form based over Z and
F[t]; the field case also exposes deterministic cycle bases so relative
classes can be lifted exactly (the factorization lemmas attach free summands
along such lifts).
"""

from __future__ import annotations

from dataclasses import dataclass

from .endo import Endo, MilnorReport, torsion as endo_torsion, zeta_det as endo_zeta
from .errors import IdentityViolation
from .matrix import (
    Matrix,
    ZZ,
    column_space_extension,
    kernel_basis,
    kernel_basis_pid,
    mat_poly_eval,
    rref,
    smith_normal_form,
    solve,
    solve_pid,
)
from .poly import Poly, PolyRing
from .ratfunc import RatFunc, ratfunc_to_series
from .series import TruncSeries, series_exp


# ----------------------------------------------------------------------
# the complexes
# ----------------------------------------------------------------------


class ChainComplex:
    """ring, degree range [lo, hi], rank per degree, and differentials
    d[k]: C_{lo+k+1} -> C_{lo+k}."""

    __slots__ = ("ring", "lo", "dims", "diffs")

    def __init__(self, ring, lo, dims, diffs, check=True):
        dims = tuple(int(d) for d in dims)
        if any(d < 0 for d in dims):
            raise ValueError("negative rank")
        diffs = tuple(diffs)
        if len(diffs) != max(len(dims) - 1, 0):
            raise ValueError("need exactly one differential per adjacent pair")
        self.ring = ring
        self.lo = lo
        self.dims = dims
        self.diffs = diffs
        if check:
            self._validate()

    def _validate(self):
        for k, d in enumerate(self.diffs):
            if d.ring != self.ring:
                raise ValueError("differential over the wrong ring")
            if d.shape != (self.dims[k], self.dims[k + 1]):
                raise ValueError(
                    f"differential {k} has shape {d.shape}, expected "
                    f"{(self.dims[k], self.dims[k + 1])}"
                )
        for k in range(len(self.diffs) - 1):
            if not (self.diffs[k] * self.diffs[k + 1]).is_zero():
                raise ValueError(f"d_{self.lo+k+1} o d_{self.lo+k+2} != 0")

    @property
    def hi(self):
        return self.lo + len(self.dims) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def dim(self, i) -> int:
        if self.lo <= i <= self.hi:
            return self.dims[i - self.lo]
        return 0

    def diff(self, i) -> Matrix:
        """d_i: C_i -> C_{i-1}, zero-padded outside the stored range."""
        if self.lo < i <= self.hi:
            return self.diffs[i - self.lo - 1]
        return Matrix.zeros(self.ring, self.dim(i - 1), self.dim(i))

    def euler(self) -> int:
        return sum((-1) ** i * self.dim(i) for i in self.degrees())

    def total_rank(self) -> int:
        return sum(self.dims)

    def is_empty(self) -> bool:
        return self.total_rank() == 0

    def to_ring(self, ring) -> "ChainComplex":
        return ChainComplex(
            ring,
            self.lo,
            self.dims,
            tuple(d.map_entries(ring, ring) for d in self.diffs),
            check=False,
        )

    @staticmethod
    def empty(ring) -> "ChainComplex":
        return ChainComplex(ring, 0, (), ())

    @staticmethod
    def one_term(ring, degree, dim) -> "ChainComplex":
        return ChainComplex(ring, degree, (dim,), ())

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.lo == other.lo
            and self.dims == other.dims
            and self.diffs == other.diffs
        )

    def __hash__(self):
        return hash((self.ring, self.lo, self.dims, self.diffs))

    def __repr__(self):
        return f"ChainComplex({self.ring!r}, degrees {self.lo}..{self.hi}, dims {self.dims})"


class ChainMap:
    """Degreewise map commuting with the differentials."""

    __slots__ = ("src", "tgt", "comps")

    def __init__(self, src: ChainComplex, tgt: ChainComplex, comps, check=True):
        if src.ring != tgt.ring:
            raise ValueError("source and target over different rings")
        self.src = src
        self.tgt = tgt
        if isinstance(comps, dict):
            self.comps = {i: m for i, m in comps.items()}
        else:
            self.comps = {src.lo + k: m for k, m in enumerate(comps)}
        if check:
            self._validate()

    def _validate(self):
        lo = min(self.src.lo, self.tgt.lo)
        hi = max(self.src.hi, self.tgt.hi)
        for i in range(lo, hi + 1):
            g = self.component(i)
            if g.shape != (self.tgt.dim(i), self.src.dim(i)):
                raise ValueError(f"component {i} has shape {g.shape}")
        for i in range(lo, hi + 2):
            left = self.component(i - 1) * self.src.diff(i)
            right = self.tgt.diff(i) * self.component(i)
            if left != right:
                raise ValueError(f"chain map does not commute at degree {i}")

    def component(self, i) -> Matrix:
        m = self.comps.get(i)
        if m is not None:
            return m
        return Matrix.zeros(self.src.ring, self.tgt.dim(i), self.src.dim(i))

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other (other first)."""
        if other.tgt is not self.src and other.tgt != self.src:
            raise ValueError("composition mismatch")
        lo = min(other.src.lo, self.tgt.lo)
        hi = max(other.src.hi, self.tgt.hi)
        comps = {i: self.component(i) * other.component(i) for i in range(lo, hi + 1)}
        return ChainMap(other.src, self.tgt, comps, check=False)

    @staticmethod
    def identity(c: ChainComplex) -> "ChainMap":
        return ChainMap(
            c, c, {i: Matrix.identity(c.ring, c.dim(i)) for i in c.degrees()}, check=False
        )

    @staticmethod
    def zero(src: ChainComplex, tgt: ChainComplex) -> "ChainMap":
        return ChainMap(src, tgt, {}, check=False)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.src != other.src or self.tgt != other.tgt:
            return False
        lo = min(self.src.lo, self.tgt.lo)
        hi = max(self.src.hi, self.tgt.hi)
        return all(self.component(i) == other.component(i) for i in range(lo, hi + 1))

    def __repr__(self):
        return f"ChainMap({self.src!r} -> {self.tgt!r})"


class ChainEndo:
    """A chain self-map; the base complex lives over a field."""

    __slots__ = ("base", "comps")

    def __init__(self, base: ChainComplex, comps, check=True):
        self.base = base
        if isinstance(comps, dict):
            self.comps = dict(comps)
        else:
            self.comps = {base.lo + k: m for k, m in enumerate(comps)}
        if check:
            self.as_map()  # validates shapes and commuting

    def as_map(self) -> ChainMap:
        return ChainMap(self.base, self.base, self.comps)

    def component(self, i) -> Matrix:
        m = self.comps.get(i)
        if m is not None:
            return m
        return Matrix.zeros(self.base.ring, self.base.dim(i), self.base.dim(i))

    @property
    def ring(self):
        return self.base.ring

    def __repr__(self):
        return f"ChainEndo({self.base!r})"


# ----------------------------------------------------------------------
# homology
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeHomology:
    free_rank: int
    torsion: tuple  # non-unit invariant factors, divisibility chain

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion


@dataclass(frozen=True)
class HomologyReport:
    ring: object
    lo: int
    entries: tuple
    euler: int

    @property
    def hi(self):
        return self.lo + len(self.entries) - 1

    def entry(self, i) -> DegreeHomology:
        if self.lo <= i <= self.hi:
            return self.entries[i - self.lo]
        return DegreeHomology(0, ())

    def free_rank(self, i) -> int:
        return self.entry(i).free_rank

    def torsion(self, i):
        return self.entry(i).torsion

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def degree_str(self, i) -> str:
        e = self.entry(i)
        if e.is_zero():
            return "0"
        base = _ring_symbol(self.ring)
        parts = []
        if e.free_rank == 1:
            parts.append(base)
        elif e.free_rank > 1:
            parts.append(f"{base}^{e.free_rank}")
        for q in e.torsion:
            qs = self.ring.elem_str(q) if hasattr(self.ring, "elem_str") else str(q)
            if any(ch in qs for ch in "+- "):
                qs = f"({qs})"
            parts.append(f"{base}/{qs}")
        return " + ".join(parts)

    def __str__(self):
        lines = [f"H_{i} = {self.degree_str(i)}" for i in range(self.lo, self.hi + 1)]
        return "\n".join(lines)


def _ring_symbol(ring) -> str:
    if ring == ZZ:
        return "Z"
    if isinstance(ring, PolyRing):
        return f"{_field_symbol(ring.field)}[{ring.var}]"
    return _field_symbol(ring)


def _field_symbol(field) -> str:
    name = repr(field)
    return {"QQ": "Q"}.get(name, name)


def homology(c: ChainComplex) -> HomologyReport:
    """Per-degree homology; over a field free ranks only, over Z or F[t]
    free rank plus invariant-factor torsion.  The alternating sum of free
    ranks is cross-checked against the chain-level Euler characteristic."""
    ring = c.ring
    entries = []
    is_field = getattr(ring, "is_field", False)
    for i in c.degrees():
        if is_field:
            r_in = len(rref(c.diff(i))[1]) if c.dim(i) else 0
            r_out = len(rref(c.diff(i + 1))[1]) if c.dim(i + 1) else 0
            entries.append(DegreeHomology(c.dim(i) - r_in - r_out, ()))
        else:
            snf_in = smith_normal_form(c.diff(i))
            snf_out = smith_normal_form(c.diff(i + 1))
            tors = tuple(q for q in snf_out.d if not ring.is_unit(q))
            entries.append(
                DegreeHomology(c.dim(i) - snf_in.rank - snf_out.rank, tors)
            )
    euler = sum((-1) ** i * e.free_rank for i, e in zip(c.degrees(), entries))
    if euler != c.euler():
        raise IdentityViolation("homology Euler characteristic mismatch")
    return HomologyReport(ring, c.lo, tuple(entries), euler)


class _HomologyBasis:
    """Deterministic cycle data for one degree of a field complex:
    Z: kernel basis of d_i (columns are cycles);
    img: coordinates of im d_{i+1} in the Z basis;
    quot: indices of Z columns representing a basis of H_i;
    rep: the representing cycles themselves."""

    __slots__ = ("Z", "img", "quot", "rep")

    def __init__(self, Z, img, quot, rep):
        self.Z = Z
        self.img = img
        self.quot = quot
        self.rep = rep

    @property
    def dim(self):
        return len(self.quot)


def homology_basis(c: ChainComplex, i: int) -> _HomologyBasis:
    field = c.ring
    if not getattr(field, "is_field", False):
        raise ValueError("cycle bases need field coefficients")
    d_in = c.diff(i)
    if c.dim(i) == 0:
        empty = Matrix.zeros(field, 0, 0)
        return _HomologyBasis(empty, Matrix.zeros(field, 0, 0), [], empty)
    Z = kernel_basis(d_in)  # dim_i x z
    d_out = c.diff(i + 1)
    img = solve(Z, d_out)  # z x dim_{i+1}
    if img is None:
        raise IdentityViolation("boundaries are not cycles (d^2 != 0?)")
    ident = Matrix.identity(field, Z.cols)
    quot = column_space_extension(img, ident)
    rep = Matrix.from_columns(field, [Z.column(j) for j in quot], rows=c.dim(i))
    return _HomologyBasis(Z, img, quot, rep)


def homology_coords(c: ChainComplex, i: int, vectors: Matrix, basis=None) -> Matrix:
    """Coordinates of cycle columns in the deterministic homology basis."""
    data = basis if basis is not None else homology_basis(c, i)
    field = c.ring
    h = data.dim
    if vectors.cols == 0:
        return Matrix.zeros(field, h, 0)
    y = solve(data.Z, vectors)
    if y is None:
        raise ValueError("vector is not a cycle")
    if h == 0:
        return Matrix.zeros(field, 0, vectors.cols)
    ident_cols = Matrix.from_columns(
        field,
        [[field.one if r == j else field.zero for r in range(data.Z.cols)] for j in data.quot],
        rows=data.Z.cols,
    )
    combined = data.img.hstack(ident_cols)
    w = solve(combined, y)
    if w is None:
        raise IdentityViolation("homology coordinates do not exist")
    rows = range(data.img.cols, data.img.cols + h)
    return w.submatrix(rows, range(vectors.cols))


def induced_homology_matrix(g: ChainMap, i: int, src_basis=None, tgt_basis=None) -> Matrix:
    """The matrix of H_i(g) w.r.t. the deterministic homology bases."""
    sb = src_basis if src_basis is not None else homology_basis(g.src, i)
    tb = tgt_basis if tgt_basis is not None else homology_basis(g.tgt, i)
    images = g.component(i) * sb.rep
    return homology_coords(g.tgt, i, images, basis=tb)


def homology_endo(e: ChainEndo) -> ChainEndo:
    """The induced endomorphism on homology, as a ChainEndo with zero
    differentials; graded torsion and zeta are invariant under passing to
    it (quasi-isomorphism invariance over a field)."""
    base = e.base
    g = e.as_map()
    dims = []
    comps = {}
    for i in base.degrees():
        basis = homology_basis(base, i)
        dims.append(basis.dim)
        comps[i] = induced_homology_matrix(g, i, src_basis=basis, tgt_basis=basis)
    hom_complex = ChainComplex(
        base.ring,
        base.lo,
        dims,
        tuple(
            Matrix.zeros(base.ring, dims[k], dims[k + 1]) for k in range(len(dims) - 1)
        ),
        check=False,
    )
    return ChainEndo(hom_complex, comps, check=False)


def is_quasi_iso(g: ChainMap) -> bool:
    return homology(cone(g)).is_zero()


# ----------------------------------------------------------------------
# cones, cylinders, telescopes, characteristic complex
# ----------------------------------------------------------------------


def cone(g: ChainMap) -> ChainComplex:
    """Mapping cone: degree i is Y_i (+) X_{i-1}, d = [[d_Y, g], [0, -d_X]]."""
    x, y = g.src, g.tgt
    ring = x.ring
    lo = min(y.lo, x.lo + 1)
    hi = max(y.hi, x.hi + 1)
    dims = [y.dim(i) + x.dim(i - 1) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo + 1, hi + 1):
        top = y.diff(i).hstack(g.component(i - 1))
        bottom = Matrix.zeros(ring, x.dim(i - 2), y.dim(i)).hstack(-x.diff(i - 1))
        diffs.append(top.vstack(bottom))
    return ChainComplex(ring, lo, dims, diffs)


def cone_slices(g: ChainMap, i: int):
    """Index ranges of the Y_i block and the X_{i-1} block inside cone_i."""
    ny = g.tgt.dim(i)
    nx = g.src.dim(i - 1)
    return range(0, ny), range(ny, ny + nx)


def cylinder(g: ChainMap) -> ChainComplex:
    """Mapping cylinder: degree i is X_i (+) X_{i-1} (+) Y_i."""
    return _cylinder_data(g)[0]


def cylinder_retraction(g: ChainMap):
    """(cylinder, retraction onto the target); the retraction is a
    quasi-isomorphism."""
    cyl, retr, _ = _cylinder_data(g)
    return cyl, retr


def _cylinder_data(g: ChainMap):
    x, y = g.src, g.tgt
    ring = x.ring
    lo = min(x.lo, y.lo)
    hi = max(x.hi + 1, y.hi)
    dims = [x.dim(i) + x.dim(i - 1) + y.dim(i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo + 1, hi + 1):
        nxi, nxb, nyi = x.dim(i), x.dim(i - 1), y.dim(i)
        r1 = (
            x.diff(i)
            .hstack(-Matrix.identity(ring, x.dim(i - 1)))
            .hstack(Matrix.zeros(ring, x.dim(i - 1), nyi))
        )
        r2 = (
            Matrix.zeros(ring, x.dim(i - 2), nxi)
            .hstack(-x.diff(i - 1))
            .hstack(Matrix.zeros(ring, x.dim(i - 2), nyi))
        )
        r3 = (
            Matrix.zeros(ring, y.dim(i - 1), nxi)
            .hstack(g.component(i - 1))
            .hstack(y.diff(i))
        )
        diffs.append(r1.vstack(r2).vstack(r3))
    cyl = ChainComplex(ring, lo, dims, diffs)
    retr_comps = {}
    incl_comps = {}
    for i in range(lo, hi + 1):
        gx = g.component(i)
        retr_comps[i] = gx.hstack(
            Matrix.zeros(ring, y.dim(i), x.dim(i - 1))
        ).hstack(Matrix.identity(ring, y.dim(i)))
        incl_comps[i] = (
            Matrix.identity(ring, x.dim(i))
            .vstack(Matrix.zeros(ring, x.dim(i - 1), x.dim(i)))
            .vstack(Matrix.zeros(ring, y.dim(i), x.dim(i)))
        )
    retraction = ChainMap(cyl, y, retr_comps)
    inclusion = ChainMap(x, cyl, incl_comps)
    return cyl, retraction, inclusion


def telescope_trunc(e: ChainEndo, n_stages: int, direction: str = "reverse"):
    """The n-stage truncated mapping telescope of f with its collapse map.

    Both directions share one underlying complex (the finite telescope of n
    copies of f glued by cylinders); what differs is the verified contract:
    reverse -- the collapse onto the base is a quasi-isomorphism; forward --
    collapse o (inclusion of the base) equals f^n on the nose.
    """
    if n_stages < 1:
        raise ValueError("telescope needs at least one stage")
    if direction not in ("forward", "reverse"):
        raise ValueError("direction must be 'forward' or 'reverse'")
    x = e.base
    ring = x.ring
    N = n_stages
    lo = x.lo
    hi = x.hi + 1
    # slots per degree: copies x^0..x^N of X_i, then bars x^0..x^{N-1} of X_{i-1}
    dims = [(N + 1) * x.dim(i) + N * x.dim(i - 1) for i in range(lo, hi + 1)]

    def slot_copy(i, j):
        return j * x.dim(i)

    def slot_bar(i, j):
        return (N + 1) * x.dim(i) + j * x.dim(i - 1)

    diffs = []
    for i in range(lo + 1, hi + 1):
        rows = dims[i - 1 - lo]
        cols = dims[i - lo]
        grid = [[ring.zero] * cols for _ in range(rows)]

        def put(r0, c0, m):
            for a in range(m.rows):
                for b in range(m.cols):
                    grid[r0 + a][c0 + b] = m.entries[a][b]

        dx = x.diff(i)
        dxm = x.diff(i - 1)
        f_prev = e.component(i - 1)
        for j in range(N + 1):
            put(slot_copy(i - 1, j), slot_copy(i, j), dx)
        for j in range(N):
            nb = x.dim(i - 1)
            if nb:
                put(slot_copy(i - 1, j), slot_bar(i, j), -Matrix.identity(ring, nb))
                put(slot_copy(i - 1, j + 1), slot_bar(i, j), f_prev)
            put(slot_bar(i - 1, j), slot_bar(i, j), -dxm)
        diffs.append(Matrix(ring, grid, rows, cols))
    tel = ChainComplex(ring, lo, dims, diffs)

    collapse_comps = {}
    for i in range(lo, hi + 1):
        ni = x.dim(i)
        cols = dims[i - lo]
        grid = [[ring.zero] * cols for _ in range(ni)]
        fi = e.component(i)
        # copy j collapses through f^(N-j); compute powers descending
        mats = [Matrix.identity(ring, ni)]
        for _ in range(N):
            mats.append(fi * mats[-1])
        for j in range(N + 1):
            m = mats[N - j]
            base = slot_copy(i, j)
            for a in range(ni):
                for b in range(ni):
                    grid[a][base + b] = m.entries[a][b]
        collapse_comps[i] = Matrix(ring, grid, ni, cols)
    collapse = ChainMap(tel, x, collapse_comps)
    return tel, collapse


def telescope_base_inclusion(e: ChainEndo, tel: ChainComplex) -> ChainMap:
    """Inclusion of the base complex as copy 0 of the telescope."""
    x = e.base
    ring = x.ring
    comps = {}
    for i in x.degrees():
        ni = x.dim(i)
        rows = tel.dim(i)
        grid = [[ring.zero] * ni for _ in range(rows)]
        for a in range(ni):
            grid[a][a] = ring.one
        comps[i] = Matrix(ring, grid, rows, ni)
    return ChainMap(x, tel, comps)


def char_complex(e: ChainEndo) -> ChainComplex:
    """Total complex of the two-column bicomplex P[t] --(t - f)--> P[t]:
    the cone of (t*id - f) over F[t].  Its homology recovers H_*(base) as an
    F[t]-module with t acting through f."""
    field = e.ring
    ring = PolyRing(field)
    base_t = e.base.to_ring(ring)
    comps = {}
    t = Poly.t(field)
    for i in e.base.degrees():
        n = e.base.dim(i)
        f = e.component(i)
        entries = [
            [
                (t if a == b else ring.zero) - Poly.constant(field, f.entries[a][b])
                for b in range(n)
            ]
            for a in range(n)
        ]
        comps[i] = Matrix(ring, entries, n, n)
    tf = ChainMap(base_t, base_t, comps)
    return cone(tf)


# ----------------------------------------------------------------------
# graded torsion / zeta / Milnor
# ----------------------------------------------------------------------


def graded_torsion(e: ChainEndo) -> RatFunc:
    """prod_i det(tI - f_i)^((-1)^i), reduced."""
    field = e.ring
    out = RatFunc.one(field)
    for i in e.base.degrees():
        if e.base.dim(i) == 0:
            continue
        factor = endo_torsion(Endo(e.component(i)))
        out = out * (factor if i % 2 == 0 else factor.inverse())
    return out


def graded_zeta(e: ChainEndo) -> RatFunc:
    """prod_i det(I - t f_i)^((-1)^(i+1)), reduced."""
    field = e.ring
    out = RatFunc.one(field)
    for i in e.base.degrees():
        if e.base.dim(i) == 0:
            continue
        factor = endo_zeta(Endo(e.component(i)))  # 1/det(I - t f_i)
        out = out * (factor if i % 2 == 0 else factor.inverse())
    return out


def lefschetz(e: ChainEndo, k: int, hom: ChainEndo = None):
    """Alternating trace of the k-th iterate on homology."""
    if k < 0:
        raise ValueError("negative iterate")
    h = hom if hom is not None else homology_endo(e)
    field = e.ring
    acc = field.zero
    for i in h.base.degrees():
        if h.base.dim(i) == 0:
            continue
        tr = (h.component(i) ** k).trace()
        acc = acc + (tr if i % 2 == 0 else -tr)
    return acc


def lefschetz_zeta_series(e: ChainEndo, order: int) -> TruncSeries:
    """exp(sum_k L(f^k) t^k / k) mod t^order; asserted to agree with the
    expansion of the closed-form graded zeta."""
    field = e.ring
    if field.char != 0:
        raise ValueError("exp undefined in positive characteristic")
    hom = homology_endo(e)
    coeffs = [field.zero] * order
    powers = {i: Matrix.identity(field, hom.base.dim(i)) for i in hom.base.degrees()}
    for k in range(1, order):
        acc = field.zero
        for i in hom.base.degrees():
            if hom.base.dim(i) == 0:
                continue
            powers[i] = powers[i] * hom.component(i)
            tr = powers[i].trace()
            acc = acc + (tr if i % 2 == 0 else -tr)
        coeffs[k] = acc / field(k)
    series = series_exp(TruncSeries(field, order, coeffs))
    closed = ratfunc_to_series(graded_zeta(e), order)
    if series != closed:
        raise IdentityViolation("Lefschetz series disagrees with det closed form")
    return series


def graded_milnor(e: ChainEndo) -> MilnorReport:
    """zeta(1/t) * tau(t) = t^chi with chi the chain-level Euler
    characteristic; exact, no tolerance."""
    tau = graded_torsion(e)
    zeta = graded_zeta(e)
    zeta_inv = zeta.subst_inverse()
    product = zeta_inv * tau
    expected = RatFunc.t_power(e.ring, e.base.euler())
    return MilnorReport(
        tau=tau,
        zeta=zeta,
        zeta_at_inverse=zeta_inv,
        product=product,
        expected=expected,
        holds=(product == expected),
    )


# ----------------------------------------------------------------------
# S-torsion conditions on homology
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionConditions:
    annihilates_homology: object  # Poly or None
    locally_nilpotent: object  # Poly or None
    nilpotency_power: object  # int or None: (4) => (3) with p^N

    def holds(self) -> bool:
        return self.annihilates_homology is not None


def torsion_conditions(e: ChainEndo, s, max_degree: int = 16) -> TorsionConditions:
    """Search the products of S-generators (total degree <= max_degree) for
    a p with p(f) = 0 on homology and a p with p(f) nilpotent on homology;
    when the nilpotent witness exists, exhibit N with p^N annihilating
    (the (4) => (3) shadow)."""
    from .multset import generator_products

    hom = homology_endo(e)
    mats = [hom.component(i) for i in hom.base.degrees() if hom.base.dim(i)]
    annihilates = None
    nilpotent = None
    power = None
    for p in generator_products(s, max_degree):
        values = [mat_poly_eval(p, m) for m in mats]
        if annihilates is None and all(v.is_zero() for v in values):
            annihilates = p
        if nilpotent is None:
            n_max = max((m.rows for m in mats), default=0)
            if all((v ** max(n_max, 1)).is_zero() for v in values):
                nilpotent = p
                power = 1
                while not all((v**power).is_zero() for v in values):
                    power += 1
                confirm = [mat_poly_eval(p**power, m) for m in mats]
                if not all(v.is_zero() for v in confirm):
                    raise IdentityViolation("(4) => (3) power confirmation failed")
        if annihilates is not None and nilpotent is not None:
            break
    return TorsionConditions(annihilates, nilpotent, power)


# ----------------------------------------------------------------------
# Appendix-style factorization steps (field base)
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class KillOneResult:
    x_prime: ChainComplex
    inclusion: ChainMap  # X -> X'
    new_map: ChainMap  # X' -> Y


def relative_homology_basis(g: ChainMap, n: int) -> _HomologyBasis:
    """The deterministic homology basis of cone(g) at degree n; the matrix
    argument of kill_one is written in this basis."""
    return homology_basis(cone(g), n)


def kill_one(g: ChainMap, n: int, k: Matrix) -> KillOneResult:
    """Attach F^r to the source in degree n along a map k: F^r -> H_n(cone g)
    given in the basis of relative_homology_basis(g, n).

    Returns X -> X' -> Y with (checked): new_map o inclusion = g, the
    relative homology of (X', X) is F^r concentrated in degree n, and the
    induced map to H_n(Y, X) is k.
    """
    x, y = g.src, g.tgt
    field = x.ring
    if not getattr(field, "is_field", False):
        raise ValueError("kill_one needs a field base; see kill_one_depth_one")
    cg = cone(g)
    basis = homology_basis(cg, n)
    if k.rows != basis.dim:
        raise ValueError(
            f"k must have {basis.dim} rows (the rank of H_{n}(cone))"
        )
    r = k.cols
    lifts = basis.rep * k  # columns are cycles (y-part; x-part) in cone_n
    ny = y.dim(n)
    y_part = lifts.submatrix(range(ny), range(r))
    x_part = lifts.submatrix(range(ny, ny + x.dim(n - 1)), range(r))

    x_prime, inclusion = _attach_free(x, n, -x_part)
    comps = {i: g.component(i) for i in range(min(x.lo, y.lo), max(x.hi, y.hi) + 1)}
    comps[n] = g.component(n).hstack(y_part)
    new_map = ChainMap(x_prime, y, comps)

    # postcondition 1: the factorization composes to g
    if new_map.compose(inclusion) != g:
        raise IdentityViolation("kill_one: factorization does not compose to g")
    # postcondition 2: relative homology is F^r concentrated in degree n
    ci = cone(inclusion)
    rel = homology(ci)
    for i in range(rel.lo, rel.hi + 1):
        if rel.free_rank(i) != (r if i == n else 0) or rel.torsion(i):
            raise IdentityViolation(
                f"kill_one: relative homology not free of rank {r} in degree {n}"
            )
    # postcondition 3: the induced map to H_n(Y, X) equals k.  The attached
    # cell e_j pairs with the cycle partner x_j = x_part e_j; pushing through
    # cone(incl) -> cone(g) (blockwise new_map (+) id) must give back k.
    compare = ChainMap(
        ci,
        cg,
        {
            i: _cone_compare_component(g, new_map, i)
            for i in range(min(ci.lo, cg.lo), max(ci.hi, cg.hi) + 1)
        },
    )
    attached_cols = []
    for j in range(r):
        col = [field.zero] * (x.dim(n) + r) + list(x_part.column(j))
        for idx in range(x.dim(n), x.dim(n) + r):
            col[idx] = field.one if idx - x.dim(n) == j else field.zero
        attached_cols.append(col)
    if r:
        attached = Matrix.from_columns(field, attached_cols, rows=ci.dim(n))
        pushed = compare.component(n) * attached
        got = homology_coords(cg, n, pushed, basis=basis)
        if got != k:
            raise IdentityViolation(
                "kill_one: induced map on relative homology is not k"
            )
    return KillOneResult(x_prime, inclusion, new_map)


def _attach_free(x: ChainComplex, n: int, boundary: Matrix):
    """X' = X with boundary.cols new generators in degree n, boundary into
    X_{n-1}; returns (X', inclusion)."""
    ring = x.ring
    r = boundary.cols
    lo = min(x.lo, n)
    hi = max(x.hi, n)
    dims = [x.dim(i) + (r if i == n else 0) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo + 1, hi + 1):
        d = x.diff(i)
        if i == n:
            d = d.hstack(boundary)
        elif i == n + 1:
            d = d.vstack(Matrix.zeros(ring, r, x.dim(i)))
        diffs.append(d)
    x_prime = ChainComplex(ring, lo, dims, diffs)
    incl = {
        i: Matrix.identity(ring, x.dim(i))
        if i != n
        else Matrix.identity(ring, x.dim(n)).vstack(Matrix.zeros(ring, r, x.dim(n)))
        for i in range(lo, hi + 1)
    }
    return x_prime, ChainMap(x, x_prime, incl)


def _cone_compare_component(g, new_map, i):
    """cone(X -> X')_i -> cone(X -> Y)_i: block diag(new_map_i, id_{X_{i-1}})."""
    field = g.src.ring
    top = new_map.component(i).hstack(
        Matrix.zeros(field, g.tgt.dim(i), g.src.dim(i - 1))
    )
    bottom = Matrix.zeros(field, g.src.dim(i - 1), new_map.src.dim(i)).hstack(
        Matrix.identity(field, g.src.dim(i - 1))
    )
    return top.vstack(bottom)


@dataclass(frozen=True)
class FactorizationStage:
    degree: int
    complex: ChainComplex
    inclusion: ChainMap  # previous stage -> this stage
    map_to_target: ChainMap


@dataclass(frozen=True)
class ConnectiveFactorization:
    stages: tuple  # of FactorizationStage
    final_map: ChainMap  # last stage -> Y, a quasi-isomorphism
    total_inclusion: ChainMap  # X -> last stage

    def __iter__(self):
        return iter(self.stages)


def connective_factorization(g: ChainMap, m: int) -> ConnectiveFactorization:
    """Factor an m-connected map X -> Y through stages X -> X_{m+1} -> ... -> Y
    where each X_q/X_{q-1} has free homology concentrated in degree q and the
    final map is a quasi-isomorphism.

    Uses kill_one with k the identity on the computed basis of the lowest
    remaining relative homology; the identity is an isomorphism, so killing
    degree q never disturbs degree q+1 and one pass terminates.
    """
    field = g.src.ring
    if not getattr(field, "is_field", False):
        raise ValueError("connective_factorization needs a field base")
    cg = cone(g)
    hom = homology(cg)
    for q in range(hom.lo, min(m, hom.hi) + 1):
        if not hom.entry(q).is_zero():
            raise ValueError(
                f"map is not {m}-connected: H_{q}(cone) is nonzero"
            )
    stages = []
    current = g
    total_incl = ChainMap.identity(g.src)
    top = max(g.tgt.hi, g.src.hi + 1)
    for q in range(m + 1, top + 1):
        h = homology_basis(cone(current), q).dim
        if h == 0:
            continue
        k = Matrix.identity(field, h)
        step = kill_one(current, q, k)
        stages.append(
            FactorizationStage(q, step.x_prime, step.inclusion, step.new_map)
        )
        total_incl = step.inclusion.compose(total_incl)
        current = step.new_map
    if not is_quasi_iso(current):
        raise IdentityViolation("connective factorization did not end quasi-iso")
    if current.compose(total_incl) != g:
        raise IdentityViolation("connective factorization does not compose to g")
    return ConnectiveFactorization(tuple(stages), current, total_incl)


# ----------------------------------------------------------------------
# depth-one variant over F[t]
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class PidHomologyPresentation:
    """H_n of an F[t]-complex as generators and orders: columns of ``gens``
    are cycles whose classes generate, gen j has order ``orders[j]`` (a monic
    non-unit Poly) or is free when orders[j] is None."""

    complex: ChainComplex
    degree: int
    gens: Matrix
    orders: tuple

    @property
    def count(self):
        return self.gens.cols

    def is_finite_dimensional(self) -> bool:
        return all(o is not None for o in self.orders)

    def f_dimension(self) -> int:
        return sum(o.degree for o in self.orders)


def pid_homology_presentation(c: ChainComplex, n: int) -> PidHomologyPresentation:
    """Canonical generators/orders of H_n over F[t] (or Z), from the SNF of
    the boundary coordinates in a kernel basis."""
    ring = c.ring
    if c.dim(n) == 0:
        return PidHomologyPresentation(
            c, n, Matrix.zeros(ring, 0, 0), ()
        )
    Z = kernel_basis_pid(c.diff(n))
    W = solve_pid(Z, c.diff(n + 1))
    if W is None:
        raise IdentityViolation("boundaries are not cycles over the PID")
    snf = smith_normal_form(W)
    gens = []
    orders = []
    base = Z * snf.Uinv
    for j in range(Z.cols):
        if j < snf.rank:
            d = snf.d[j]
            if ring.is_unit(d):
                continue  # trivial summand
            orders.append(d)
        else:
            orders.append(None)
        gens.append(base.column(j))
    gmat = (
        Matrix.from_columns(ring, gens, rows=c.dim(n))
        if gens
        else Matrix.zeros(ring, c.dim(n), 0)
    )
    return PidHomologyPresentation(c, n, gmat, tuple(orders))


@dataclass(frozen=True)
class DepthOneResult:
    x_prime: ChainComplex
    inclusion: ChainMap
    new_map: ChainMap
    relative_free_rank: int
    relative_torsion: tuple  # monic non-unit invariant factors of coker(i)
    t_action: object  # Matrix alpha when built from an F-linear surjection


def kill_one_depth_one(
    g: ChainMap, n: int, resolution=None, surjection=None
) -> DepthOneResult:
    """Attach a length-one resolved module P over F[t]: P_1 in degree n+1 and
    P_0 in degree n, so the relative homology is coker(i) = P concentrated in
    degree n.

    resolution: (i_mat, k0) with i_mat: P_1 -> P_0 injective over F[t] and
    k0 the matrix of a surjection P_0 -> H_n(cone g) written in the generator
    coordinates of pid_homology_presentation(cone(g), n); exactness checks
    (i injective, k0 surjective, k0 o i = 0) run via SNF before anything is
    attached.

    surjection: an F-linear surjection onto H_n(cone g) in its canonical
    F-basis (t^a * gen_j, a < deg order_j, generators in order).  The t-action
    alpha with k o alpha = t o k is constructed by lifting basis vectors and
    the characteristic sequence of alpha becomes the resolution.
    """
    ring = g.src.ring
    if not isinstance(ring, PolyRing):
        raise ValueError("kill_one_depth_one works over F[t]")
    if (resolution is None) == (surjection is None):
        raise ValueError("give exactly one of resolution= or surjection=")
    cg = cone(g)
    pres = pid_homology_presentation(cg, n)
    alpha = None
    if surjection is not None:
        i_mat, k0, alpha = _resolution_from_surjection(pres, surjection)
    else:
        i_mat, k0 = resolution
        if i_mat.ring != ring or k0.ring != ring:
            raise ValueError("resolution matrices must live over F[t]")
    if k0.rows != pres.count:
        raise ValueError(
            f"k0 must have {pres.count} rows (generators of H_{n}(cone))"
        )
    _check_resolution(pres, i_mat, k0)

    x, y = g.src, g.tgt
    r0, r1 = i_mat.rows, i_mat.cols
    lifts = pres.gens * k0  # cycles in cone_n representing k0 columns
    ny = y.dim(n)
    y_part = lifts.submatrix(range(ny), range(r0))
    x_part = lifts.submatrix(range(ny, ny + x.dim(n - 1)), range(r0))

    # boundary-solve for the P_1 corrections: each column of lifts*i_mat is a
    # zero class, hence an exact boundary of the cone
    rel_cycles = lifts * i_mat
    sol = solve_pid(cg.diff(n + 1), rel_cycles)
    if sol is None:
        raise IdentityViolation("zero classes failed to bound in the cone")
    ny1 = y.dim(n + 1)
    b = sol.submatrix(range(ny1), range(r1))
    v = sol.submatrix(range(ny1, ny1 + x.dim(n)), range(r1))
    c_corr = -v

    x_prime, inclusion = _attach_depth_one(x, n, -x_part, i_mat, c_corr)
    comps = {i: g.component(i) for i in range(min(x.lo, y.lo), max(x.hi, y.hi) + 1)}
    comps[n] = g.component(n).hstack(y_part)
    comps[n + 1] = g.component(n + 1).hstack(b)
    new_map = ChainMap(x_prime, y, comps)

    if new_map.compose(inclusion) != g:
        raise IdentityViolation("depth-one step does not compose to g")
    # relative homology: coker(i) concentrated in degree n, SNF-verified
    snf_i = smith_normal_form(i_mat)
    expected_tors = tuple(q for q in snf_i.d if not ring.is_unit(q))
    expected_free = r0 - snf_i.rank
    rel = homology(cone(inclusion))
    for i in range(rel.lo, rel.hi + 1):
        want_free = expected_free if i == n else 0
        want_tors = expected_tors if i == n else ()
        if rel.free_rank(i) != want_free or tuple(rel.torsion(i)) != want_tors:
            raise IdentityViolation(
                "depth-one step: relative homology is not coker(i) in degree n"
            )
    return DepthOneResult(
        x_prime, inclusion, new_map, expected_free, expected_tors, alpha
    )


def _check_resolution(pres: PidHomologyPresentation, i_mat: Matrix, k0: Matrix):
    ring = i_mat.ring
    if smith_normal_form(i_mat).rank != i_mat.cols:
        raise ValueError("resolution is not exact: i has a kernel")
    rel = _relation_matrix(pres)
    # k0 o i must vanish in H_n: columns of k0*i land in the relations
    if solve_pid(rel, k0 * i_mat) is None:
        raise ValueError("resolution is not exact: k0 o i is nonzero in H_n")
    # k0 surjective onto H_n: [relations | k0] has full unit-invariant rank
    combined = rel.hstack(k0)
    snf = smith_normal_form(combined)
    if snf.rank != pres.count or any(not ring.is_unit(d) for d in snf.d):
        raise ValueError("k0 is not surjective onto H_n(cone)")


def _relation_matrix(pres: PidHomologyPresentation) -> Matrix:
    ring = pres.complex.ring
    cols = []
    for j, o in enumerate(pres.orders):
        if o is not None:
            col = [ring.zero] * pres.count
            col[j] = o
            cols.append(col)
    if not cols:
        return Matrix.zeros(ring, pres.count, 0)
    return Matrix.from_columns(ring, cols, rows=pres.count)


def _attach_depth_one(x: ChainComplex, n: int, h0: Matrix, i_mat: Matrix, c_corr: Matrix):
    """X'' = X with P_0 (rank r0) in degree n and P_1 (rank r1) in degree
    n+1; d(P_1) = (c_corr, i_mat), d(P_0) = h0."""
    ring = x.ring
    r0, r1 = i_mat.rows, i_mat.cols
    lo = min(x.lo, n)
    hi = max(x.hi, n + 1)
    dims = [
        x.dim(i) + (r0 if i == n else 0) + (r1 if i == n + 1 else 0)
        for i in range(lo, hi + 1)
    ]
    diffs = []
    for i in range(lo + 1, hi + 1):
        if i == n:
            d = x.diff(i).hstack(h0)
        elif i == n + 1:
            top = x.diff(i).hstack(c_corr)
            bottom = Matrix.zeros(ring, r0, x.dim(i)).hstack(i_mat)
            d = top.vstack(bottom)
        elif i == n + 2:
            d = x.diff(i).vstack(Matrix.zeros(ring, r1, x.dim(i)))
        else:
            d = x.diff(i)
        diffs.append(d)
    x_prime = ChainComplex(ring, lo, dims, diffs)
    incl = {}
    for i in range(lo, hi + 1):
        extra = (r0 if i == n else 0) + (r1 if i == n + 1 else 0)
        m = Matrix.identity(ring, x.dim(i))
        if extra:
            m = m.vstack(Matrix.zeros(ring, extra, x.dim(i)))
        incl[i] = m
    return x_prime, ChainMap(x, x_prime, incl)


def _resolution_from_surjection(pres: PidHomologyPresentation, k: Matrix):
    """Build the t-action alpha with k o alpha = t o k by lifting basis
    vectors, then return its characteristic sequence as the resolution.

    k is an F-linear matrix in the canonical F-basis of H_n: the classes
    t^a * gen_j, a < deg(order_j), generators in presentation order; H_n must
    be F-finite (every generator has an order)."""
    ring = pres.complex.ring
    field = ring.field
    if not pres.is_finite_dimensional():
        raise ValueError(
            "F-linear surjection path needs H_n finite-dimensional over F"
        )
    dim_f = pres.f_dimension()
    if k.rows != dim_f:
        raise ValueError(f"surjection must have {dim_f} rows (dim_F of H_n)")
    r = k.cols
    # t acts blockwise by the companion matrices of the orders
    blocks = []
    for o in pres.orders:
        d = o.degree
        comp = [
            [
                (field.one if a == b + 1 else field.zero)
                for b in range(d)
            ]
            for a in range(d)
        ]
        for a in range(d):
            comp[a][d - 1] = comp[a][d - 1] - o.coeff(a)
        blocks.append(Matrix(field, comp, d, d))
    t_h = Matrix.block_diag(field, blocks) if blocks else Matrix.zeros(field, 0, 0)
    kf = k.to_field(field)
    alpha = solve(kf, t_h * kf)
    if alpha is None:
        raise ValueError("supplied map is not surjective: t-action has no lift")
    # characteristic sequence of (F^r, alpha): i = tI - alpha over F[t]
    t = Poly.t(field, ring.var)
    i_entries = [
        [
            (t if a == b else ring.zero)
            - Poly.constant(field, alpha.entries[a][b], ring.var)
            for b in range(r)
        ]
        for a in range(r)
    ]
    i_mat = Matrix(ring, i_entries, r, r)
    # k0: F[t]^r -> H_n, e_j -> sum_a k[(j', a)][j] t^a gen_{j'}
    k0_entries = []
    row = 0
    for j_gen, o in enumerate(pres.orders):
        polys = []
        for col in range(r):
            coeffs = [k.entries[row + a][col] for a in range(o.degree)]
            polys.append(Poly(field, coeffs, ring.var))
        k0_entries.append(polys)
        row += o.degree
    k0 = Matrix(ring, k0_entries, pres.count, r)
    return i_mat, k0, alpha
