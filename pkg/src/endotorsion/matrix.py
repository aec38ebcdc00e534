"""Exact dense matrices over a field, over Z, or over F[t].

Determinants run by Gaussian elimination over fields and by fraction-free
Bareiss elimination over Z and polynomial rings.  Smith normal form works
over any of the supported Euclidean domains (Z, F[t]) with deterministic
pivoting (least Euclidean size, then lowest index) and records the unimodular
transforms and their inverses, so U*M*V = diag(d) is checkable exactly.

Matrices are immutable; every operation returns a new matrix.
"""

from __future__ import annotations

from .poly import Poly, PolyRing


class IntegerRing:
    """Z as a matrix coefficient ring."""

    is_field = False
    char = 0
    zero = 0
    one = 1

    def __call__(self, value):
        if isinstance(value, int):
            return value
        if isinstance(value, str):
            return int(value.strip())
        from fractions import Fraction

        if isinstance(value, Fraction) and value.denominator == 1:
            return value.numerator
        raise TypeError(f"cannot coerce {value!r} into Z")

    def euclid_size(self, x: int) -> int:
        return abs(x)

    def is_unit(self, x: int) -> bool:
        return x in (1, -1)

    def unit_normalize(self, x: int):
        """(u, m) with x = u*m and m >= 0."""
        if x < 0:
            return -1, -x
        return 1, x

    def elem_str(self, x) -> str:
        return str(x)

    def __repr__(self):
        return "ZZ"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")


ZZ = IntegerRing()


class Matrix:
    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, entries, rows=None, cols=None):
        if rows is not None:
            # explicit shape: entries may be an empty nested list
            data = tuple(tuple(ring(x) for x in row) for row in entries)
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError("entry grid does not match the declared shape")
        else:
            data = tuple(tuple(ring(x) for x in row) for row in entries)
            rows = len(data)
            cols = len(data[0]) if data else 0
            if any(len(r) != cols for r in data):
                raise ValueError("ragged rows")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = data

    # -- constructors --------------------------------------------------

    @staticmethod
    def zeros(ring, rows, cols):
        return Matrix(ring, tuple((ring.zero,) * cols for _ in range(rows)), rows, cols)

    @staticmethod
    def identity(ring, n):
        return Matrix(
            ring,
            tuple(
                tuple(ring.one if i == j else ring.zero for j in range(n))
                for i in range(n)
            ),
            n,
            n,
        )

    @staticmethod
    def from_columns(ring, columns, rows=None):
        cols = len(columns)
        if rows is None:
            if not columns:
                raise ValueError("cannot infer row count from zero columns")
            rows = len(columns[0])
        return Matrix(
            ring,
            tuple(tuple(columns[j][i] for j in range(cols)) for i in range(rows)),
            rows,
            cols,
        )

    # -- structure -----------------------------------------------------

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        z = self.ring.zero
        return all(x == z for row in self.entries for x in row)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.ring,
            tuple(
                tuple(self.entries[i][j] for i in range(self.rows))
                for j in range(self.cols)
            ),
            self.cols,
            self.rows,
        )

    def map_entries(self, ring, fn) -> "Matrix":
        return Matrix(
            ring,
            tuple(tuple(fn(x) for x in row) for row in self.entries),
            self.rows,
            self.cols,
        )

    def to_field(self, field) -> "Matrix":
        return self.map_entries(field, field)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return Matrix(
            self.ring,
            tuple(self.entries[i] + other.entries[i] for i in range(self.rows)),
            self.rows,
            self.cols + other.cols,
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return Matrix(
            self.ring, self.entries + other.entries, self.rows + other.rows, self.cols
        )

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix(
            self.ring,
            tuple(tuple(self.entries[i][j] for j in col_idx) for i in row_idx),
            len(row_idx),
            len(col_idx),
        )

    @staticmethod
    def block_diag(ring, blocks):
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[ring.zero] * cols for _ in range(rows)]
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r + i][c + j] = b.entries[i][j]
            r += b.rows
            c += b.cols
        return Matrix(ring, out, rows, cols)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        self._compat(other)
        return Matrix(
            self.ring,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
            self.rows,
            self.cols,
        )

    def __sub__(self, other):
        self._compat(other)
        return Matrix(
            self.ring,
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
            self.rows,
            self.cols,
        )

    def __neg__(self):
        return Matrix(
            self.ring,
            tuple(tuple(-a for a in row) for row in self.entries),
            self.rows,
            self.cols,
        )

    def _compat(self, other):
        if not isinstance(other, Matrix) or other.shape != self.shape:
            raise ValueError("matrix shapes differ")
        if other.ring != self.ring:
            raise ValueError("matrix rings differ")

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(
                    f"cannot multiply {self.shape} by {other.shape}"
                )
            if other.ring != self.ring:
                raise ValueError("matrix rings differ")
            zero = self.ring.zero
            bt = other.transpose().entries
            out = []
            for arow in self.entries:
                orow = []
                for bcol in bt:
                    acc = zero
                    for a, b in zip(arow, bcol):
                        if a != zero and b != zero:
                            acc = acc + a * b
                    orow.append(acc)
                out.append(tuple(orow))
            return Matrix(self.ring, tuple(out), self.rows, other.cols)
        c = self.ring(other)
        return Matrix(
            self.ring,
            tuple(tuple(a * c for a in row) for row in self.entries),
            self.rows,
            self.cols,
        )

    def __rmul__(self, other):
        c = self.ring(other)
        return Matrix(
            self.ring,
            tuple(tuple(c * a for a in row) for row in self.entries),
            self.rows,
            self.cols,
        )

    def __pow__(self, k: int):
        if not self.is_square():
            raise ValueError("powers need a square matrix")
        if k < 0:
            raise ValueError("negative matrix power")
        result = Matrix.identity(self.ring, self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def trace(self):
        if not self.is_square():
            raise ValueError("trace needs a square matrix")
        acc = self.ring.zero
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __str__(self):
        rows = [
            "[" + ", ".join(self.ring.elem_str(x) for x in row) + "]"
            for row in self.entries
        ]
        return "[" + "; ".join(rows) + "]"

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.ring!r})"


def mat_poly_eval(p: Poly, m: Matrix) -> Matrix:
    """p(m) by Horner; the matrix ring must match p's coefficient field."""
    if not m.is_square():
        raise ValueError("polynomial evaluation needs a square matrix")
    n = m.rows
    acc = Matrix.zeros(m.ring, n, n)
    for c in reversed(p.coeffs):
        acc = acc * m + Matrix.identity(m.ring, n) * c
    return acc


# ----------------------------------------------------------------------
# determinants and characteristic/minimal polynomials
# ----------------------------------------------------------------------


def det(m: Matrix):
    """Exact determinant: Gauss over fields, Bareiss over Z and F[t]."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    if m.rows == 0:
        return m.ring.one
    if getattr(m.ring, "is_field", False):
        return _det_gauss(m)
    return _det_bareiss(m)


def _det_gauss(m: Matrix):
    field = m.ring
    n = m.rows
    a = [list(row) for row in m.entries]
    detval = field.one
    for k in range(n):
        pivot = None
        for i in range(k, n):
            if a[i][k] != field.zero:
                pivot = i
                break
        if pivot is None:
            return field.zero
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            detval = -detval
        detval = detval * a[k][k]
        inv = field.one / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] == field.zero:
                continue
            f = a[i][k] * inv
            for j in range(k, n):
                a[i][j] = a[i][j] - f * a[k][j]
    return detval


def _det_bareiss(m: Matrix):
    ring = m.ring
    n = m.rows
    a = [list(row) for row in m.entries]
    zero = ring.zero
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if a[k][k] == zero:
            swap = None
            for i in range(k + 1, n):
                if a[i][k] != zero:
                    swap = i
                    break
            if swap is None:
                return zero
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = _exact_div(ring, num, prev)
            a[i][k] = zero
        prev = a[k][k]
    result = a[n - 1][n - 1]
    return -result if sign < 0 else result


def _exact_div(ring, a, b):
    if isinstance(ring, PolyRing):
        return a.exact_div(b)
    if ring == ZZ:
        q, r = divmod(a, b)
        if r:
            raise ValueError("inexact integer division in Bareiss")
        return q
    return a / b


def charpoly(m: Matrix, var: str = "t") -> Poly:
    """det(tI - m) over the field of m, computed by Bareiss over F[t]."""
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    field = m.ring
    if not getattr(field, "is_field", False):
        raise ValueError("charpoly needs field coefficients")
    ring = PolyRing(field, var)
    n = m.rows
    t = Poly.t(field, var)
    entries = [
        [
            (t if i == j else ring.zero) - Poly.constant(field, m.entries[i][j], var)
            for j in range(n)
        ]
        for i in range(n)
    ]
    p = _det_bareiss(Matrix(ring, entries, n, n)) if n else ring.one
    assert p.is_monic() and p.degree == n
    return p


def minpoly(m: Matrix, var: str = "t") -> Poly:
    """Monic generator of the annihilator ideal, by Krylov iteration with
    lcm over start vectors; divides charpoly."""
    if not m.is_square():
        raise ValueError("minimal polynomial of a non-square matrix")
    field = m.ring
    n = m.rows
    if n == 0:
        return Poly.one(field, var)
    from .poly import poly_lcm

    result = Poly.one(field, var)
    for i in range(n):
        if result.degree == n:
            break
        v = [field.one if k == i else field.zero for k in range(n)]
        krylov = [tuple(v)]
        while True:
            v = _apply(m, krylov[-1])
            coeffs = _in_span(field, krylov, v)
            if coeffs is not None:
                local = Poly(field, [-c for c in coeffs] + [field.one], var)
                result = poly_lcm(result, local)
                break
            krylov.append(tuple(v))
    return result


def _apply(m: Matrix, v):
    zero = m.ring.zero
    out = []
    for row in m.entries:
        acc = zero
        for a, x in zip(row, v):
            if a != zero and x != zero:
                acc = acc + a * x
        out.append(acc)
    return out


def _in_span(field, vectors, v):
    """If v is in the span, return coordinates; else None.  Solves the small
    system with Gaussian elimination each time (desk-scale dimensions)."""
    cols = [list(w) for w in vectors]
    mat = Matrix(field, [ [cols[j][i] for j in range(len(cols))] for i in range(len(v))])
    sol = solve(mat, Matrix(field, [[x] for x in v]))
    if sol is None:
        return None
    return [sol.entries[j][0] for j in range(len(cols))]


# ----------------------------------------------------------------------
# field linear algebra: rref, rank, kernel, solve
# ----------------------------------------------------------------------


def rref(m: Matrix):
    """Reduced row echelon form; returns (R, pivot column list)."""
    field = m.ring
    a = [list(row) for row in m.entries]
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if a[i][c] != field.zero:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = field.one / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != field.zero:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return Matrix(field, a, nrows, ncols), pivots


def rank(m: Matrix) -> int:
    if getattr(m.ring, "is_field", False):
        return len(rref(m)[1])
    # over an integral domain, rank equals rank over the fraction field;
    # Bareiss-style elimination would do, but SNF is already exact here
    return len(smith_normal_form(m).d)


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning ker(m) over a field, deterministic (free variables
    in increasing column order, each set to 1)."""
    field = m.ring
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    cols = []
    for fc in free:
        v = [field.zero] * m.cols
        v[fc] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = -r.entries[i][fc]
        cols.append(v)
    return Matrix.from_columns(field, cols, rows=m.cols)


def solve(m: Matrix, b: Matrix):
    """Some exact solution of m*x = b over a field, or None if inconsistent.

    Deterministic: reduced row echelon with free variables set to zero.
    Solves all columns of b at once.
    """
    field = m.ring
    if b.rows != m.rows:
        raise ValueError("shape mismatch in solve")
    aug = m.hstack(b)
    r, pivots = rref(aug)
    # any pivot in the b-block means inconsistency
    for c in pivots:
        if c >= m.cols:
            return None
    x = [[field.zero] * b.cols for _ in range(m.cols)]
    for i, pc in enumerate(pivots):
        for j in range(b.cols):
            x[pc][j] = r.entries[i][m.cols + j]
    return Matrix(field, x, m.cols, b.cols)


def column_space_extension(base: Matrix, extra: Matrix):
    """Indices of columns of ``extra`` that greedily extend col(base) to a
    larger independent set; deterministic left-to-right scan."""
    field = base.ring
    chosen = []
    current = base
    r = len(rref(current)[1]) if current.cols else 0
    for j in range(extra.cols):
        cand = current.hstack(extra.submatrix(range(extra.rows), [j]))
        r2 = len(rref(cand)[1])
        if r2 > r:
            chosen.append(j)
            current = cand
            r = r2
    return chosen


# ----------------------------------------------------------------------
# Smith normal form over Z and F[t]
# ----------------------------------------------------------------------


class SmithForm:
    """U*M*V = diag(d) with unimodular U, V; d holds the nonzero invariant
    factors (normalized positive over Z, monic over F[t]), divisibility
    chain d[i] | d[i+1]."""

    __slots__ = ("d", "U", "V", "Uinv", "Vinv", "shape", "ring")

    def __init__(self, d, U, V, Uinv, Vinv, shape, ring):
        self.d = tuple(d)
        self.U = U
        self.V = V
        self.Uinv = Uinv
        self.Vinv = Vinv
        self.shape = shape
        self.ring = ring

    def diagonal_matrix(self) -> Matrix:
        rows, cols = self.shape
        out = [[self.ring.zero] * cols for _ in range(rows)]
        for i, x in enumerate(self.d):
            out[i][i] = x
        return Matrix(self.ring, out, rows, cols)

    @property
    def rank(self) -> int:
        return len(self.d)


def _is_euclidean(ring) -> bool:
    return ring == ZZ or isinstance(ring, PolyRing)


def smith_normal_form(m: Matrix) -> SmithForm:
    """Deterministic SNF over Z or F[t] (least Euclidean size pivot, lowest
    index first)."""
    ring = m.ring
    if not _is_euclidean(ring):
        raise ValueError(f"Smith normal form unsupported over {ring!r}")
    zero = ring.zero
    nrows, ncols = m.rows, m.cols
    a = [list(row) for row in m.entries]
    U = [list(row) for row in Matrix.identity(ring, nrows).entries]
    Uinv = [list(row) for row in Matrix.identity(ring, nrows).entries]
    V = [list(row) for row in Matrix.identity(ring, ncols).entries]
    Vinv = [list(row) for row in Matrix.identity(ring, ncols).entries]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in range(nrows):  # Uinv gets the inverse op on columns
            Uinv[r][i], Uinv[r][j] = Uinv[r][j], Uinv[r][i]

    def swap_cols(i, j):
        for r in range(nrows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(ncols):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]
        for r in range(nrows):
            Uinv[r][src] = Uinv[r][src] - c * Uinv[r][dst]

    def add_col(src, dst, c):
        for r in range(nrows):
            a[r][dst] = a[r][dst] + c * a[r][src]
        for r in range(ncols):
            V[r][dst] = V[r][dst] + c * V[r][src]
        Vinv[src] = [x - c * y for x, y in zip(Vinv[src], Vinv[dst])]

    def scale_row(i, u, uinv):
        a[i] = [u * x for x in a[i]]
        U[i] = [u * x for x in U[i]]
        for r in range(nrows):
            Uinv[r][i] = Uinv[r][i] * uinv

    def find_pivot(s):
        best = None
        best_size = None
        for i in range(s, nrows):
            for j in range(s, ncols):
                if a[i][j] != zero:
                    size = ring.euclid_size(a[i][j])
                    if best is None or size < best_size:
                        best, best_size = (i, j), size
        return best

    s = 0
    limit = min(nrows, ncols)
    while s < limit:
        pos = find_pivot(s)
        if pos is None:
            break
        i, j = pos
        if i != s:
            swap_rows(s, i)
        if j != s:
            swap_cols(s, j)
        # clear the cross at (s, s); pivot may move, loop until clean
        while True:
            dirty = False
            for i in range(s + 1, nrows):
                if a[i][s] != zero:
                    q = _euclid_quot(ring, a[i][s], a[s][s])
                    add_row(s, i, -q)
                    if a[i][s] != zero:
                        swap_rows(s, i)
                        dirty = True
            for j in range(s + 1, ncols):
                if a[s][j] != zero:
                    q = _euclid_quot(ring, a[s][j], a[s][s])
                    add_col(s, j, -q)
                    if a[s][j] != zero:
                        swap_cols(s, j)
                        dirty = True
            if not dirty:
                break
        # divisibility sweep: pivot must divide every remaining entry
        offender = None
        for i in range(s + 1, nrows):
            for j in range(s + 1, ncols):
                if a[i][j] != zero and not _divides(ring, a[s][s], a[i][j]):
                    offender = (i, j)
                    break
            if offender:
                break
        if offender:
            add_row(offender[0], s, ring.one)
            continue  # redo this pivot position
        s += 1

    # normalize units (sign over Z, leading coefficient over F[t])
    d = []
    for k in range(limit):
        x = a[k][k]
        if x == zero:
            break
        u, normalized = ring.unit_normalize(x)
        if normalized != x:
            uinv = _unit_inverse(ring, u)
            scale_row(k, uinv, u)
        d.append(a[k][k])
    result = SmithForm(
        d,
        Matrix(ring, U, nrows, nrows),
        Matrix(ring, V, ncols, ncols),
        Matrix(ring, Uinv, nrows, nrows),
        Matrix(ring, Vinv, ncols, ncols),
        (nrows, ncols),
        ring,
    )
    return result


def _euclid_quot(ring, numer, denom):
    if ring == ZZ:
        q, r = divmod(numer, denom)
        # prefer the representative with |r| <= |denom|/2 to shrink faster
        if abs(r - abs(denom)) < abs(r):
            q += 1 if denom > 0 else -1
        return q
    return numer.divmod(denom)[0]


def _divides(ring, a, b) -> bool:
    if ring == ZZ:
        return b % a == 0
    return a.divides(b)


def _unit_inverse(ring, u):
    if ring == ZZ:
        return u  # units are +-1
    # PolyRing unit: nonzero constant polynomial
    c = u.constant_term()
    return Poly.constant(ring.field, ring.field.one / c, ring.var)


def kernel_basis_pid(m: Matrix) -> Matrix:
    """Basis of ker(m) as a free module over Z or F[t]: the columns of V
    past the rank."""
    snf = smith_normal_form(m)
    r = snf.rank
    cols = [snf.V.column(j) for j in range(r, m.cols)]
    return Matrix.from_columns(m.ring, cols, rows=m.cols)


def solve_pid(m: Matrix, b: Matrix):
    """Solve m*x = b over Z or F[t]; None when no exact solution exists.

    Via SNF: with U m V = D, solve D y = U b componentwise (divisibility
    required), then x = V y.
    """
    if b.rows != m.rows:
        raise ValueError("shape mismatch in solve_pid")
    ring = m.ring
    snf = smith_normal_form(m)
    ub = snf.U * b
    y = [[ring.zero] * b.cols for _ in range(m.cols)]
    for j in range(b.cols):
        for i in range(m.rows):
            rhs = ub.entries[i][j]
            if i < snf.rank:
                dcoef = snf.d[i]
                if not _divides(ring, dcoef, rhs):
                    return None
                y[i][j] = _exact_div(ring, rhs, dcoef)
            elif rhs != ring.zero:
                return None
    return snf.V * Matrix(ring, y, m.cols, b.cols)
