"""Dense exact matrices: rank, kernel, solving, minimal polynomials.

Matrices are immutable (tuple-of-tuples storage) and all arithmetic defers
to the field object, so the same elimination code runs over Q, GF(p) and
GF(p^d).  Pivoting is deterministic (first nonzero entry in column order),
which keeps every derived basis reproducible across runs.

The :class:`RowSpan` helper maintains a subspace of K^w in reduced echelon
form under incremental insertion; it is the workhorse behind algebra
closures and all the subspace bookkeeping done in vectorized coordinates.
"""

from __future__ import annotations

from commutant.errors import FieldMismatchError
from commutant.fields import Field, check_same_field
from commutant.polys import Poly

__all__ = [
    "Matrix",
    "RowSpan",
    "identity",
    "zeros",
    "elementary",
    "jordan_nilpotent",
    "rref",
    "rank",
    "kernel_basis",
    "solve_right",
    "inverse",
    "is_invertible",
    "vectorize",
    "devectorize",
    "minimal_polynomial",
    "poly_at_matrix",
    "random_matrix",
    "random_invertible",
]


class Matrix:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data, _checked=False):
        if _checked:
            self.field = field
            self.data = data
            self.rows = len(data)
            self.cols = len(data[0]) if data else 0
            return
        grid = [[field.coerce(v) for v in row] for row in data]
        if not grid or not grid[0]:
            raise ValueError("matrices must have at least one row and column")
        w = len(grid[0])
        if any(len(r) != w for r in grid):
            raise ValueError("ragged rows")
        self.field = field
        self.rows = len(grid)
        self.cols = w
        self.data = tuple(tuple(r) for r in grid)

    @classmethod
    def from_rows(cls, field, data):
        return cls(field, data)

    @classmethod
    def _wrap(cls, field, grid):
        """Adopt already-canonical row lists without re-validation."""
        return cls(field, tuple(tuple(r) for r in grid), _checked=True)

    # shape / access ---------------------------------------------------------
    @property
    def is_square(self):
        return self.rows == self.cols

    def entry(self, i, j):
        return self.data[i][j]

    def row_list(self, i):
        return list(self.data[i])

    def column(self, j):
        return [r[j] for r in self.data]

    # arithmetic -------------------------------------------------------------
    def _compat(self, other, same_shape=True):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        check_same_field(self.field, other.field)
        if same_shape and (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def __add__(self, other):
        self._compat(other)
        f = self.field
        return Matrix._wrap(
            f,
            [
                [f.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
        )

    def __sub__(self, other):
        self._compat(other)
        f = self.field
        return Matrix._wrap(
            f,
            [
                [f.sub(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
        )

    def __neg__(self):
        f = self.field
        return Matrix._wrap(f, [[f.neg(a) for a in r] for r in self.data])

    def __mul__(self, other):
        self._compat(other, same_shape=False)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        dot = f.vec_dot
        cols = list(zip(*other.data))
        return Matrix._wrap(
            f, [[dot(r, c) for c in cols] for r in self.data]
        )

    def scale(self, c):
        f = self.field
        c = f.coerce(c) if isinstance(c, int) else c
        return Matrix._wrap(f, [[f.mul(c, a) for a in r] for r in self.data])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def transpose(self):
        return Matrix._wrap(self.field, list(zip(*self.data)))

    def trace(self):
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        f = self.field
        acc = f.zero()
        for i in range(self.rows):
            acc = f.add(acc, self.data[i][i])
        return acc

    # predicates ---------------------------------------------------------
    def is_zero(self):
        f = self.field
        return all(f.is_zero(v) for r in self.data for v in r)

    def is_identity(self):
        if not self.is_square:
            return False
        f = self.field
        one, zero = f.one(), f.zero()
        return all(
            v == (one if i == j else zero)
            for i, r in enumerate(self.data)
            for j, v in enumerate(r)
        )

    def is_scalar(self):
        """True when the matrix is c * identity for some field value c."""
        if not self.is_square:
            return False
        c = self.data[0][0]
        f = self.field
        zero = f.zero()
        return all(
            v == (c if i == j else zero)
            for i, r in enumerate(self.data)
            for j, v in enumerate(r)
        )

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.data == self.data
        )

    def __hash__(self):
        return hash((self.field, self.data))

    def __repr__(self):
        fmt = self.field.format_value
        body = "; ".join(" ".join(fmt(v) for v in r) for r in self.data)
        return f"Matrix({self.field.label()}, {self.rows}x{self.cols}: {body})"


# constructors ----------------------------------------------------------------

def identity(field, n):
    one, zero = field.one(), field.zero()
    return Matrix._wrap(
        field, [[one if i == j else zero for j in range(n)] for i in range(n)]
    )


def zeros(field, r, c):
    zero = field.zero()
    return Matrix._wrap(field, [[zero] * c for _ in range(r)])


def elementary(field, n, i, j):
    """E_{i,j}: single 1 at row i, column j (0-based)."""
    grid = [[field.zero()] * n for _ in range(n)]
    grid[i][j] = field.one()
    return Matrix._wrap(field, grid)


def jordan_nilpotent(field, n):
    """The nilpotent Jordan block of order n: ones on the superdiagonal."""
    grid = [[field.zero()] * n for _ in range(n)]
    one = field.one()
    for i in range(n - 1):
        grid[i][i + 1] = one
    return Matrix._wrap(field, grid)


def random_matrix(field, r, c, rng):
    rv = field.random_value
    return Matrix._wrap(field, [[rv(rng) for _ in range(c)] for _ in range(r)])


def random_invertible(field, n, rng, max_tries=1000):
    for _ in range(max_tries):
        m = random_matrix(field, n, n, rng)
        if is_invertible(m):
            return m
    raise RuntimeError("failed to draw an invertible matrix")


# elimination -----------------------------------------------------------------

def _rref_rows(rows, field, transform=False):
    """Reduce row lists in place to RREF.

    Returns (pivot column list, transform row lists or None).  The transform
    tracks the same row operations applied to an identity, so T * input is
    the reduced matrix.
    """
    m = len(rows)
    w = len(rows[0]) if m else 0
    trans = None
    if transform:
        one, zero = field.one(), field.zero()
        trans = [[one if i == j else zero for j in range(m)] for i in range(m)]
    is_zero = field.is_zero
    pivots = []
    r = 0
    for c in range(w):
        pr = None
        for i in range(r, m):
            if not is_zero(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
            if transform:
                trans[r], trans[pr] = trans[pr], trans[r]
        pv = rows[r][c]
        if pv != field.one():
            inv = field.inv(pv)
            field.row_scale(rows[r], inv, c)
            if transform:
                field.row_scale(trans[r], inv)
        for i in range(m):
            if i == r:
                continue
            factor = rows[i][c]
            if not is_zero(factor):
                field.row_submul(rows[i], rows[r], factor, c)
                if transform:
                    field.row_submul(trans[i], trans[r], factor)
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots, trans


def rref(m: Matrix, transform: bool = True):
    """Reduced row-echelon form.

    Returns (reduced, pivots, T) with T * m == reduced exactly; T is None
    when transform is False.  The RREF is the canonical one, so equal row
    spaces give equal outputs.
    """
    rows = [list(r) for r in m.data]
    pivots, trans = _rref_rows(rows, m.field, transform)
    reduced = Matrix._wrap(m.field, rows)
    t = Matrix._wrap(m.field, trans) if trans is not None else None
    return reduced, pivots, t


def rank(m: Matrix) -> int:
    rows = [list(r) for r in m.data]
    pivots, _ = _rref_rows(rows, m.field, transform=False)
    return len(pivots)


def _kernel_rows(rows, field, width):
    """Kernel basis (as row lists) of the linear map given by row lists."""
    pivots, _ = _rref_rows(rows, field, transform=False)
    pivot_set = set(pivots)
    free = [j for j in range(width) if j not in pivot_set]
    basis = []
    zero, one = field.zero(), field.one()
    for fc in free:
        v = [zero] * width
        v[fc] = one
        for r, pc in enumerate(pivots):
            coeff = rows[r][fc]
            if not field.is_zero(coeff):
                v[pc] = field.neg(coeff)
        basis.append(v)
    return basis


def kernel_basis(m: Matrix):
    """Exact basis of the right null space, as column vectors.

    One vector per free column, listed in column order; entries at pivot
    positions come straight off the RREF, so the basis is canonical.
    """
    rows = [list(r) for r in m.data]
    vecs = _kernel_rows(rows, m.field, m.cols)
    return [Matrix._wrap(m.field, [[x] for x in v]) for v in vecs]


def solve_right(a: Matrix, b: Matrix):
    """Some x with a*x = b, or None; free variables are set to zero."""
    check_same_field(a.field, b.field)
    if a.rows != b.rows:
        raise ValueError("row count mismatch")
    f = a.field
    aug = [list(ra) + list(rb) for ra, rb in zip(a.data, b.data)]
    pivots, _ = _rref_rows(aug, f, transform=False)
    if any(p >= a.cols for p in pivots):
        return None  # inconsistent: pivot in the right block
    zero = f.zero()
    out = [[zero] * b.cols for _ in range(a.cols)]
    for r, pc in enumerate(pivots):
        for j in range(b.cols):
            out[pc][j] = aug[r][a.cols + j]
    return Matrix._wrap(f, out)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise ValueError("inverse of a non-square matrix")
    reduced, pivots, t = rref(m, transform=True)
    if len(pivots) != m.rows:
        raise ValueError("matrix is singular")
    return t


def is_invertible(m: Matrix) -> bool:
    return m.is_square and rank(m) == m.rows


# vectorization ---------------------------------------------------------------

def vectorize(m: Matrix) -> Matrix:
    """Row-major flattening into a (rows*cols) x 1 column vector."""
    return Matrix._wrap(m.field, [[v] for r in m.data for v in r])


def devectorize(v: Matrix, rows: int, cols: int) -> Matrix:
    if v.cols != 1 or v.rows != rows * cols:
        raise ValueError(f"cannot reshape {v.shape} into {rows}x{cols}")
    flat = [r[0] for r in v.data]
    return Matrix._wrap(
        v.field, [flat[i * cols : (i + 1) * cols] for i in range(rows)]
    )


def _flatten(m: Matrix):
    return [v for r in m.data for v in r]


# minimal polynomial ----------------------------------------------------------

def minimal_polynomial(m: Matrix) -> Poly:
    """Monic least-degree annihilator, found by echelonizing I, m, m^2, ...

    The first power that becomes linearly dependent on the earlier ones
    yields the coefficients directly from the tracked combination row.
    """
    if not m.is_square:
        raise ValueError("minimal polynomial of a non-square matrix")
    f = m.field
    n = m.rows
    span = RowSpan(f, n * n, track=True)
    power = identity(f, n)
    k = 0
    while True:
        combo = span.insert_tracked(_flatten(power))
        if combo is not None:
            # combo holds c_0..c_{k-1} with m^k = sum c_j m^j
            coeffs = [f.neg(c) for c in combo] + [f.one()]
            return Poly(f, coeffs)
        k += 1
        if k > n:
            raise AssertionError("no dependence found below degree n+1")
        power = power * m


def poly_at_matrix(p: Poly, m: Matrix) -> Matrix:
    """Horner evaluation of a polynomial at a square matrix."""
    if not m.is_square:
        raise ValueError("polynomial of a non-square matrix")
    check_same_field(p.field, m.field)
    f = m.field
    acc = zeros(f, m.rows, m.rows)
    for c in reversed(p.coeffs):
        acc = acc * m
        if not f.is_zero(c):
            acc = acc + identity(f, m.rows).scale(c)
    return acc


# incremental echelon spans -----------------------------------------------------

class RowSpan:
    """A subspace of K^width kept in reduced row-echelon form.

    Insertion reduces the new vector against the basis, normalizes its pivot
    and back-eliminates, so the basis rows are canonical at every point.
    With ``track=True`` each basis row remembers its expression in terms of
    the inserted vectors, which is how minimal polynomials read off their
    coefficients.
    """

    __slots__ = ("field", "width", "pivots", "rows", "combos", "track", "inserted")

    def __init__(self, field, width, track=False):
        self.field = field
        self.width = width
        self.pivots = []  # ascending pivot columns
        self.rows = []  # basis rows, aligned with pivots
        self.combos = [] if track else None
        self.track = track
        self.inserted = 0

    @property
    def dim(self):
        return len(self.rows)

    def _reduce(self, vec, combo=None):
        f = self.field
        is_zero = f.is_zero
        for p, row, idx in zip(self.pivots, self.rows, range(len(self.rows))):
            c = vec[p]
            if not is_zero(c):
                f.row_submul(vec, row, c, p)
                if combo is not None:
                    f.row_submul(combo, self.combos[idx], c)
        return vec

    def residue(self, vec):
        """Reduction of vec against the span; the input list is not modified."""
        return self._reduce(list(vec))

    def contains(self, vec):
        f = self.field
        return all(f.is_zero(v) for v in self.residue(vec))

    def insert(self, vec) -> bool:
        """Add a vector; returns True when the dimension grew."""
        if self.track:
            raise ValueError("use insert_tracked on a tracking span")
        return self._insert(list(vec), None) is None

    def insert_tracked(self, vec):
        """Insert with combination tracking.

        Returns None when the vector was independent (and is now in the
        basis); otherwise returns the coefficients expressing it over the
        previously inserted vectors.
        """
        if not self.track:
            raise ValueError("span was built without tracking")
        f = self.field
        combo = [f.zero()] * self.inserted + [f.one()]
        for c in self.combos:
            c.append(f.zero())
        out = self._insert(list(vec), combo)
        self.inserted += 1
        if out is None:
            return None
        # dependent: vec = -sum(combo_j * inserted_j) for j < inserted
        return [f.neg(c) for c in out[:-1]]

    def _insert(self, vec, combo):
        f = self.field
        self._reduce(vec, combo)
        pivot = None
        for j, v in enumerate(vec):
            if not f.is_zero(v):
                pivot = j
                break
        if pivot is None:
            # dependent: appended tracking zeros stay, keeping combo widths
            # aligned with the running insertion count
            return combo if combo is not None else vec
        inv = f.inv(vec[pivot])
        f.row_scale(vec, inv, pivot)
        if combo is not None:
            f.row_scale(combo, inv)
        # back-eliminate the new pivot from existing rows
        for idx, row in enumerate(self.rows):
            c = row[pivot]
            if not f.is_zero(c):
                f.row_submul(row, vec, c, pivot)
                if combo is not None:
                    f.row_submul(self.combos[idx], combo, c)
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < pivot:
            pos += 1
        self.pivots.insert(pos, pivot)
        self.rows.insert(pos, vec)
        if combo is not None:
            self.combos.insert(pos, combo)
        return None

    def basis_rows(self):
        """Canonical RREF basis as fresh lists, pivot-ascending."""
        return [list(r) for r in self.rows]
