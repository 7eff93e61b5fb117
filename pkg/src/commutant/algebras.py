"""Unital subalgebras of M_n(K) as explicit subspaces.

An algebra is represented by the reduced-echelon basis of its underlying
subspace of K^(n^2) (row-major vectorization), which is a normal form: two
algebras are equal exactly when their bases are equal.  Closure is a
worklist fixpoint over pairwise products, the centralizer of a set of
matrices is the kernel of the stacked maps X -> XM - MX, and an idempotent
inside the algebra splits it into the four block subspaces cut out by the
induced block structure.
"""

from __future__ import annotations

from dataclasses import dataclass

from commutant.errors import FieldMismatchError
from commutant.fields import check_same_field
from commutant.matrices import (
    Matrix,
    RowSpan,
    identity,
    inverse,
    kernel_basis,
    rank,
    rref,
    _kernel_rows,
    _rref_rows,
)

__all__ = [
    "MatrixAlgebra",
    "PeirceDecomposition",
    "centralizer",
    "centralizer_dimension",
    "is_trivial_centralizer",
    "conjugate_algebra",
    "transpose_algebra",
    "peirce_split",
]


def _flatten(m: Matrix):
    return [v for r in m.data for v in r]


def _validate_family(mats, context):
    if not mats:
        raise ValueError(f"{context}: need at least one matrix")
    first = mats[0]
    if not first.is_square:
        raise ValueError(f"{context}: matrices must be square")
    for m in mats[1:]:
        check_same_field(first.field, m.field)
        if m.shape != first.shape:
            raise ValueError(f"{context}: mixed matrix sizes")
    return first.field, first.rows


class MatrixAlgebra:
    """A unital subalgebra of M_n(K) with a canonical echelonized basis."""

    __slots__ = ("field", "n", "basis", "_span_cache")

    def __init__(self, field, n, basis, _checked=False):
        if not _checked:
            raise ValueError(
                "construct algebras via closure(), from_basis() or trivial()"
            )
        self.field = field
        self.n = n
        self.basis = tuple(basis)
        self._span_cache = None

    @property
    def dim(self):
        return len(self.basis)

    # construction ------------------------------------------------------------
    @classmethod
    def trivial(cls, field, n):
        """The scalar algebra Vect(I_n)."""
        return cls.closure([], field=field, n=n)

    @classmethod
    def closure(cls, generators, field=None, n=None, dim_cap=None):
        """Smallest unital subalgebra containing the generators.

        Starts from the identity, then repeatedly reduces pairwise products
        against the echelon basis until stable; the dimension bound n^2
        guarantees termination.  With ``dim_cap`` set, returns None as soon
        as the dimension would exceed the cap (used by rejection samplers).
        """
        generators = list(generators)
        if generators:
            field, n = _validate_family(generators, "closure")
        elif field is None or n is None:
            raise ValueError("closure of no generators needs an explicit field and size")

        span = RowSpan(field, n * n)
        mats = []

        def absorb(m):
            if span.insert(_flatten(m)):
                mats.append(m)
                return True
            return False

        absorb(identity(field, n))
        queue = []
        for g in generators:
            if absorb(g):
                queue.append(g)
            if dim_cap is not None and span.dim > dim_cap:
                return None
        while queue:
            m = queue.pop()
            # products against every current member, both orders; new members
            # join the worklist so only fresh pairs are ever formed
            for other in list(mats):
                for prod in (m * other, other * m):
                    if absorb(prod):
                        queue.append(prod)
                        if dim_cap is not None and span.dim > dim_cap:
                            return None
        basis = [
            Matrix._wrap(field, [row[i * n : (i + 1) * n] for i in range(n)])
            for row in span.basis_rows()
        ]
        return cls(field, n, basis, _checked=True)

    @classmethod
    def from_basis(cls, mats, verify=True):
        """Wrap a family that is already a spanning set of a unital algebra.

        The family is echelonized into the canonical basis; with ``verify``
        the identity membership and multiplicative closure are checked.
        """
        field, n = _validate_family(mats, "from_basis")
        span = RowSpan(field, n * n)
        for m in mats:
            span.insert(_flatten(m))
        alg = cls(
            field,
            n,
            [
                Matrix._wrap(field, [row[i * n : (i + 1) * n] for i in range(n)])
                for row in span.basis_rows()
            ],
            _checked=True,
        )
        if verify:
            span = alg._span()
            if not span.contains(_flatten(identity(field, n))):
                raise ValueError("span does not contain the identity")
            for a in alg.basis:
                for b in alg.basis:
                    if not span.contains(_flatten(a * b)):
                        raise ValueError("span is not closed under multiplication")
        return alg

    # predicates ----------------------------------------------------------------
    def contains(self, m: Matrix) -> bool:
        if m.shape != (self.n, self.n) or m.field != self.field:
            return False
        return self._span().contains(_flatten(m))

    def _span(self):
        if self._span_cache is None:
            span = RowSpan(self.field, self.n * self.n)
            for b in self.basis:
                span.insert(_flatten(b))
            self._span_cache = span
        return self._span_cache

    def __eq__(self, other):
        return (
            isinstance(other, MatrixAlgebra)
            and other.field == self.field
            and other.n == self.n
            and other.basis == self.basis
        )

    def __hash__(self):
        return hash((self.field, self.n, self.basis))

    def __repr__(self):
        return f"MatrixAlgebra(dim {self.dim} in M_{self.n}({self.field.label()}))"


# centralizers ------------------------------------------------------------------

def _sylvester_rows(mats, field, n):
    """Rows of the stacked maps X -> XM - MX over vectorized X.

    Row (m, i, j) encodes (XM - MX)_{i,j}: +M[l][j] at X-coordinate (i, l)
    and -M[i][l] at X-coordinate (l, j).
    """
    zero = field.zero()
    sub, add = field.sub, field.add
    rows = []
    for m in mats:
        if m.is_scalar():
            continue  # scalars impose no condition
        d = m.data
        for i in range(n):
            for j in range(n):
                row = [zero] * (n * n)
                base = i * n
                for l in range(n):
                    row[base + l] = d[l][j]
                for l in range(n):
                    k = l * n + j
                    row[k] = sub(row[k], d[i][l])
                rows.append(row)
    return rows


def centralizer(mats) -> MatrixAlgebra:
    """Joint commutant of a family of n x n matrices, as an algebra.

    Computed exactly as the kernel of the stacked Sylvester maps on K^(n^2);
    the result always contains the identity and is closed under products, so
    it is wrapped as an algebra without re-verification.
    """
    field, n = _validate_family(list(mats), "centralizer")
    rows = _sylvester_rows(mats, field, n)
    if not rows:
        return MatrixAlgebra.from_basis(
            [identity(field, n)] + _full_matrix_basis(field, n), verify=False
        )
    vecs = _kernel_rows(rows, field, n * n)
    basis = [
        Matrix._wrap(field, [v[i * n : (i + 1) * n] for i in range(n)]) for v in vecs
    ]
    return MatrixAlgebra.from_basis(basis, verify=False)


def _full_matrix_basis(field, n):
    from commutant.matrices import elementary

    return [elementary(field, n, i, j) for i in range(n) for j in range(n)]


def centralizer_dimension(mats) -> int:
    """dim of the joint commutant, without materializing a basis."""
    field, n = _validate_family(list(mats), "centralizer")
    rows = _sylvester_rows(mats, field, n)
    if not rows:
        return n * n
    pivots, _ = _rref_rows(rows, field, transform=False)
    return n * n - len(pivots)


def is_trivial_centralizer(a: MatrixAlgebra) -> bool:
    """True when only the scalar multiples of I commute with the algebra.

    Over the rationals a modular certificate is tried first: the commutant
    kernel always contains the identity, and for an integer-cleared system
    the kernel mod p can only be larger than the kernel over Q, so finding
    dimension one mod p settles the answer exactly.  The exact rational
    elimination only runs when the modular answer is inconclusive.
    """
    from commutant.fields import PrimeField, RationalField

    field = a.field
    if isinstance(field, RationalField):
        rows = _sylvester_rows(a.basis, field, a.n)
        if not rows:
            return a.n == 1
        probe = PrimeField(1048583)
        int_rows = []
        for row in rows:
            denom = 1
            for v in row:
                denom = denom * v.denominator // _gcd(denom, v.denominator)
            int_rows.append([int(v * denom) % probe.p for v in row])
        pivots, _ = _rref_rows(int_rows, probe, transform=False)
        if a.n * a.n - len(pivots) == 1:
            return True
    return centralizer_dimension(a.basis) == 1


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# conjugation / transposition -----------------------------------------------------

def conjugate_algebra(a: MatrixAlgebra, p: Matrix) -> MatrixAlgebra:
    """The algebra {p b p^-1}; p must be invertible of matching size."""
    check_same_field(a.field, p.field)
    if p.shape != (a.n, a.n):
        raise ValueError("conjugator size mismatch")
    p_inv = inverse(p)  # raises on singular input
    return MatrixAlgebra.from_basis(
        [p * b * p_inv for b in a.basis], verify=False
    )


def transpose_algebra(a: MatrixAlgebra) -> MatrixAlgebra:
    return MatrixAlgebra.from_basis([b.transpose() for b in a.basis], verify=False)


# Peirce decomposition -------------------------------------------------------------

@dataclass(frozen=True)
class PeirceDecomposition:
    """Block data induced by an idempotent e inside the algebra.

    ``conjugator`` S satisfies S^-1 e S = diag(I_p, 0); its columns are a
    basis of the image of e followed by a basis of its kernel.  ``blocks``
    holds bases of the four subspaces (top-left p x p, top-right p x q,
    bottom-left q x p, bottom-right q x q) of the conjugated algebra, and
    ``nu`` their dimensions.  The block dimensions always sum to the algebra
    dimension, and the diagonal blocks both contain their identity.
    """

    p: int
    q: int
    conjugator: Matrix
    blocks: tuple
    nu: tuple


def peirce_split(a: MatrixAlgebra, e: Matrix) -> PeirceDecomposition:
    """Split the algebra along an idempotent e in a, e not in {0, I}."""
    field, n = a.field, a.n
    check_same_field(field, e.field)
    if e.shape != (n, n):
        raise ValueError("idempotent size mismatch")
    if not (e * e) == e:
        raise ValueError("matrix is not idempotent")
    if e.is_zero() or e.is_identity():
        raise ValueError("idempotent must be proper")
    if not a.contains(e):
        raise ValueError("idempotent does not belong to the algebra")

    # image basis: pivot columns of the RREF applied to the column space
    reduced, pivots, _ = rref(e.transpose(), transform=False)
    image_cols = [list(reduced.data[k]) for k in range(len(pivots))]
    kernel_cols = [[r[0] for r in v.data] for v in kernel_basis(e)]
    p = len(image_cols)
    q = n - p
    cols = image_cols + kernel_cols
    s = Matrix._wrap(field, list(zip(*cols)))
    s_inv = inverse(s)

    conj_basis = [s_inv * b * s for b in a.basis]
    block_ranges = _block_coords(n, p)
    blocks = []
    nu = []
    vec_rows = [_flatten(b) for b in conj_basis]
    for rows_rng, cols_rng in block_ranges:
        members = _block_intersection(vec_rows, field, n, rows_rng, cols_rng)
        blocks.append(tuple(members))
        nu.append(len(members))
    nu = tuple(nu)
    if sum(nu) != a.dim:
        raise AssertionError("block dimensions do not sum to the algebra dimension")
    dec = PeirceDecomposition(
        p=p, q=q, conjugator=s, blocks=tuple(blocks), nu=nu
    )
    _check_peirce_invariants(a, e, dec)
    return dec


def _block_coords(n, p):
    top, bottom = range(p), range(p, n)
    return [(top, top), (top, bottom), (bottom, top), (bottom, bottom)]


def _block_intersection(vec_rows, field, n, rows_rng, cols_rng):
    """Elements of the span supported inside one block, cut to block shape."""
    inside = {(i, j) for i in rows_rng for j in cols_rng}
    outside = [k for k in range(n * n) if (k // n, k % n) not in inside]
    dim = len(vec_rows)
    # kernel of the outside-coordinate evaluation of basis combinations
    sys_rows = [[vec_rows[b][k] for b in range(dim)] for k in outside]
    if sys_rows:
        combos = _kernel_rows(sys_rows, field, dim)
    else:
        one, zero = field.one(), field.zero()
        combos = [[one if i == j else zero for j in range(dim)] for i in range(dim)]
    members = []
    nrows, ncols = len(rows_rng), len(cols_rng)
    r0 = rows_rng[0] if nrows else 0
    c0 = cols_rng[0] if ncols else 0
    for combo in combos:
        full = [field.zero()] * (n * n)
        for b, c in enumerate(combo):
            if not field.is_zero(c):
                row = vec_rows[b]
                for k in range(n * n):
                    if not field.is_zero(row[k]):
                        full[k] = field.add(full[k], field.mul(c, row[k]))
        grid = [
            [full[(r0 + i) * n + (c0 + j)] for j in range(ncols)]
            for i in range(nrows)
        ]
        members.append(Matrix._wrap(field, grid))
    # canonical form for the block subspace
    span = RowSpan(field, nrows * ncols)
    for m in members:
        span.insert(_flatten(m))
    return [
        Matrix._wrap(field, [row[i * ncols : (i + 1) * ncols] for i in range(nrows)])
        for row in span.basis_rows()
    ]


def _check_peirce_invariants(a, e, dec):
    field = a.field
    ip = identity(field, dec.p)
    iq = identity(field, dec.q)
    a11, a12, a21, a22 = dec.blocks
    if not _in_span(a11, ip):
        raise AssertionError("top-left block misses its identity")
    if not _in_span(a22, iq):
        raise AssertionError("bottom-right block misses its identity")
    # when both off-diagonal blocks vanish the idempotent commutes with
    # everything in the algebra
    if dec.nu[1] == 0 and dec.nu[2] == 0:
        for b in a.basis:
            if e * b != b * e:
                raise AssertionError("diagonal split yet idempotent fails to commute")


def _in_span(mats, target):
    if not mats:
        return False
    field = mats[0].field
    span = RowSpan(field, target.rows * target.cols)
    for m in mats:
        span.insert(_flatten(m))
    return span.contains(_flatten(target))
