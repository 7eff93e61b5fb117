"""Canonical trivial-centralizer families and the odd-dimension classifier.

Three families witness the minimal dimensions:

* ``triangular_algebra(field, n)``: all upper triangular matrices,
  dimension n(n+1)/2;
* ``even_minimal_algebra(field, p)``: in ambient size 2p (p >= 2), scalar
  diagonal blocks plus the corner space spanned by I_p, the nilpotent
  Jordan block and its transpose; dimension 5;
* ``odd_minimal_algebra(field, p)``: in ambient size 2p+1, scalar diagonal
  blocks plus the corner space spanned by [I 0] and [0 I]; dimension 4.

Every 4-dimensional trivial-centralizer subalgebra in odd ambient size is
conjugate to the odd family or to its transpose, and ``classify_dim4``
decides which and produces the conjugator: a half-rank idempotent read off
a split-quadratic basis element induces the block splitting, the two corner
matrices form a full-rank pencil, and the pencil reduction assembles the
conjugator blockwise.  The result is verified by exact algebra equality
before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from commutant.algebras import (
    MatrixAlgebra,
    conjugate_algebra,
    is_trivial_centralizer,
    peirce_split,
    transpose_algebra,
)
from commutant.errors import NotConformingError
from commutant.fields import Field
from commutant.matrices import (
    Matrix,
    elementary,
    identity,
    inverse,
    jordan_nilpotent,
    minimal_polynomial,
    rank,
    zeros,
)
from commutant.pencils import (
    Pencil,
    is_fullrank_pencil,
    kronecker_reduce,
    left_identity_block,
    right_identity_block,
)
from commutant.polys import Poly
from commutant.structure import SpectralSplit, spectrum_info

__all__ = [
    "ORIENT_PLAIN",
    "ORIENT_TRANSPOSE",
    "ClassificationResult",
    "triangular_algebra",
    "even_minimal_algebra",
    "odd_minimal_algebra",
    "corner_block_algebra",
    "find_half_rank_idempotent",
    "classify_dim4",
]

ORIENT_PLAIN = "H"
ORIENT_TRANSPOSE = "H-transpose"


def _embed(field, n, block, row0, col0):
    grid = [[field.zero()] * n for _ in range(n)]
    for i, row in enumerate(block.data):
        for j, v in enumerate(row):
            grid[row0 + i][col0 + j] = v
    return Matrix._wrap(field, grid)


def corner_block_algebra(field: Field, p: int, q: int, corner_mats) -> MatrixAlgebra:
    """Scalars on two diagonal blocks plus a corner space: always closed.

    The generators are diag(I_p, 0), diag(0, I_q) and [[0, K], [0, 0]] for
    K running over the given p x q matrices; the span is a subalgebra of
    dimension dim(corner span) + 2.
    """
    n = p + q
    gens = [
        _embed(field, n, identity(field, p), 0, 0),
        _embed(field, n, identity(field, q), p, p),
    ]
    for k in corner_mats:
        if k.shape != (p, q):
            raise ValueError("corner matrices must be p x q")
        gens.append(_embed(field, n, k, 0, p))
    return MatrixAlgebra.from_basis(gens, verify=False)


def triangular_algebra(field: Field, n: int) -> MatrixAlgebra:
    """All upper triangular matrices; dimension n(n+1)/2."""
    if n < 1:
        raise ValueError("size must be positive")
    basis = [elementary(field, n, i, j) for i in range(n) for j in range(i, n)]
    return MatrixAlgebra.from_basis(basis, verify=False)


def even_minimal_algebra(field: Field, p: int) -> MatrixAlgebra:
    """The 5-dimensional trivial-centralizer algebra in M_{2p}, p >= 2."""
    if p < 2:
        raise ValueError("the even family needs p >= 2")
    j = jordan_nilpotent(field, p)
    return corner_block_algebra(
        field, p, p, [identity(field, p), j, j.transpose()]
    )


def odd_minimal_algebra(field: Field, p: int) -> MatrixAlgebra:
    """The 4-dimensional trivial-centralizer algebra in M_{2p+1}, p >= 1."""
    if p < 1:
        raise ValueError("the odd family needs p >= 1")
    return corner_block_algebra(
        field,
        p,
        p + 1,
        [left_identity_block(field, p), right_identity_block(field, p)],
    )


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationResult:
    """Orientation plus an explicit conjugator onto the canonical family.

    orientation "H": conjugator R satisfies R * odd_family * R^-1 == input;
    orientation "H-transpose": same with the transposed family.
    """

    orientation: str
    conjugator: Matrix
    p: int


def find_half_rank_idempotent(a: MatrixAlgebra) -> SpectralSplit:
    """The rank-p idempotent inside a conforming algebra of odd size 2p+1.

    Scans the basis for an element whose minimal polynomial is a split
    quadratic with distinct roots; which root carries multiplicity p is
    read off ranks, never off traces, so bad characteristics cannot hurt.
    """
    n = a.n
    if n % 2 == 0 or n < 3:
        raise NotConformingError("ambient size must be odd and at least 3")
    p = (n - 1) // 2
    if a.dim != 4:
        raise NotConformingError("classification needs a 4-dimensional algebra")
    if not is_trivial_centralizer(a):
        raise NotConformingError("algebra has a non-trivial centralizer")
    field = a.field
    for m in a.basis:
        info = spectrum_info(m)
        if info.eigenvalue is not None:
            continue
        mu = info.minpoly
        if mu.degree != 2 or info.split is None:
            raise NotConformingError(
                "non-unispectral element without a split quadratic minimal polynomial"
            )
        f, g = info.split
        if f.degree != 1 or g.degree != 1:
            raise NotConformingError("quadratic splits into non-linear parts")
        lam = field.neg(f.coeffs[0])
        mu_ev = field.neg(g.coeffs[0])
        for big, small in ((lam, mu_ev), (mu_ev, lam)):
            shifted = m - identity(field, n).scale(small)
            # rank of m - small*I is the multiplicity of the other root
            if rank(shifted) == p:
                denom = field.sub(big, small)
                e = shifted.scale(field.inv(denom))
                if not (e * e == e) or rank(e) != p:
                    raise NotConformingError("candidate idempotent failed its checks")
                witness = Poly(
                    field,
                    (field.mul(field.neg(small), field.inv(denom)), field.inv(denom)),
                )
                return SpectralSplit(
                    source=m,
                    idempotent=e,
                    rank=p,
                    witness_poly=witness,
                    eigen_data=(big, small),
                )
        raise NotConformingError("eigenvalue multiplicities are not (p, p+1)")
    raise NotConformingError("no basis element with two distinct eigenvalues")


def classify_dim4(a: MatrixAlgebra) -> ClassificationResult:
    """Decide the conjugacy class of a 4-dimensional trivial-centralizer
    algebra in odd ambient size and return an exact conjugator."""
    split = find_half_rank_idempotent(a)
    dec = peirce_split(a, split.idempotent)
    p, q = dec.p, dec.q
    if dec.nu == (1, 0, 2, 1):
        mirror = classify_dim4(transpose_algebra(a))
        if mirror.orientation != ORIENT_PLAIN:
            raise NotConformingError("transposed algebra failed to classify as plain")
        r = inverse(mirror.conjugator.transpose())
        result = ClassificationResult(
            orientation=ORIENT_TRANSPOSE, conjugator=r, p=mirror.p
        )
        _verify_classification(a, result)
        return result
    if dec.nu != (1, 2, 0, 1):
        raise NotConformingError(f"unexpected block signature {dec.nu}")
    u0, v0 = dec.blocks[1]
    pencil = Pencil(u0, v0)
    if not is_fullrank_pencil(pencil):
        raise NotConformingError("corner pencil is not full-rank")
    red = kronecker_reduce(pencil)
    r = dec.conjugator * _block_diag(red.p_left, red.q_right)
    result = ClassificationResult(orientation=ORIENT_PLAIN, conjugator=r, p=p)
    _verify_classification(a, result)
    return result


def _block_diag(x: Matrix, y: Matrix) -> Matrix:
    field = x.field
    p, q = x.rows, y.rows
    grid = [[field.zero()] * (p + q) for _ in range(p + q)]
    for i in range(p):
        for j in range(p):
            grid[i][j] = x.data[i][j]
    for i in range(q):
        for j in range(q):
            grid[p + i][p + j] = y.data[i][j]
    return Matrix._wrap(field, grid)


def _verify_classification(a: MatrixAlgebra, result: ClassificationResult):
    model = odd_minimal_algebra(a.field, result.p)
    if result.orientation == ORIENT_TRANSPOSE:
        model = transpose_algebra(model)
    if conjugate_algebra(model, result.conjugator) != a:
        raise NotConformingError("conjugator does not reproduce the input algebra")
