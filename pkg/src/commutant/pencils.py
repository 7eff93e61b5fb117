"""Full-rank n x (n+1) matrix pencils and their canonical reduction.

A pencil (A, B) is read as the one-parameter family A + xB.  The pencils of
interest are those whose every nontrivial combination keeps rank n over all
extensions; algebraically that is: the gcd of the n x n minors of A + xB is
a nonzero constant AND B alone has rank n (the combination at infinity).
Such a pencil is equivalent to the canonical pair C_n = [I 0], D_n = [0 I],
and the equivalence is computed from the minimal-degree polynomial vector
in the kernel of A + xB: its coefficient chain assembles the right factor
column by column with alternating signs, and the left factor follows from
either reconstruction identity.  Both identities are verified exactly
before anything is returned.

Nothing more general is attempted: pencils that fail the rank test are only
diagnosed (finite eigenvalue, rank drop at infinity, short minimal index),
not reduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from commutant.errors import PencilRankError
from commutant.fields import check_same_field
from commutant.matrices import (
    Matrix,
    identity,
    inverse,
    is_invertible,
    rank,
    zeros,
    _kernel_rows,
)
from commutant.polys import Poly, factor_finite_field, poly_gcd, rational_roots

__all__ = [
    "Pencil",
    "PencilReduction",
    "PencilDiagnostic",
    "canonical_pencil",
    "left_identity_block",
    "right_identity_block",
    "pencil_minors_gcd",
    "is_fullrank_pencil",
    "minimal_kernel_vector",
    "kronecker_reduce",
    "forbidden_block_detect",
    "poly_matrix_det",
]


@dataclass(frozen=True)
class Pencil:
    """A pair of n x (n+1) matrices over one field, read as A + xB."""

    a: Matrix
    b: Matrix

    def __post_init__(self):
        check_same_field(self.a.field, self.b.field)
        if self.a.shape != self.b.shape:
            raise ValueError("pencil members must share their shape")
        rows, cols = self.a.shape
        if cols != rows + 1:
            raise ValueError(f"pencil shape must be n x (n+1), got {rows}x{cols}")

    @property
    def n(self):
        return self.a.rows

    @property
    def field(self):
        return self.a.field


def left_identity_block(field, n) -> Matrix:
    """[I_n 0] in M_{n, n+1}."""
    grid = [[field.zero()] * (n + 1) for _ in range(n)]
    for i in range(n):
        grid[i][i] = field.one()
    return Matrix._wrap(field, grid)


def right_identity_block(field, n) -> Matrix:
    """[0 I_n] in M_{n, n+1}."""
    grid = [[field.zero()] * (n + 1) for _ in range(n)]
    for i in range(n):
        grid[i][i + 1] = field.one()
    return Matrix._wrap(field, grid)


def canonical_pencil(field, n) -> Pencil:
    return Pencil(left_identity_block(field, n), right_identity_block(field, n))


# ---------------------------------------------------------------------------
# determinants of polynomial matrices (Bareiss, exact division)
# ---------------------------------------------------------------------------

def poly_matrix_det(rows) -> Poly:
    """Determinant of a square grid of Poly entries, fraction-free."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square grid")
    field = rows[0][0].field
    m = [list(r) for r in rows]
    sign = 1
    prev = Poly.one(field)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = None
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    swap = i
                    break
            if swap is None:
                return Poly.zero(field)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q, r = divmod(num, prev)
                if not r.is_zero():
                    raise AssertionError("Bareiss division left a remainder")
                m[i][j] = q
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def _pencil_poly_grid(pc: Pencil):
    field = pc.field
    return [
        [
            Poly(field, (pc.a.data[i][j], pc.b.data[i][j]))
            for j in range(pc.n + 1)
        ]
        for i in range(pc.n)
    ]


def pencil_minors_gcd(pc: Pencil) -> Poly:
    """Monic gcd of the n maximal minors of A + xB (zero if all vanish)."""
    grid = _pencil_poly_grid(pc)
    field = pc.field
    g = Poly.zero(field)
    for drop in range(pc.n + 1):
        sub = [[row[j] for j in range(pc.n + 1) if j != drop] for row in grid]
        d = poly_matrix_det(sub)
        g = poly_gcd(g, d)
        if g.degree == 0:
            return g  # already a constant: no common root anywhere
    return g


def is_fullrank_pencil(pc: Pencil) -> bool:
    """Whether every nontrivial combination of A and B has rank n over every
    extension: constant minor gcd rules out finite rank drops, full rank of
    B rules out the point at infinity."""
    if rank(pc.b) < pc.n:
        return False
    g = pencil_minors_gcd(pc)
    return g.degree == 0


# ---------------------------------------------------------------------------
# minimal polynomial kernel vectors
# ---------------------------------------------------------------------------

def minimal_kernel_vector(pc: Pencil):
    """(degree d, [v_0..v_d]) for the least-degree v(x) with (A+xB) v(x) = 0.

    Solves the banded coefficient system degree by degree; an n x (n+1)
    pencil always admits a polynomial kernel vector of degree at most n.
    The returned vector is the first kernel basis vector of the stacked
    system, so it is canonical.
    """
    field, n = pc.field, pc.n
    w = n + 1
    a_rows = [list(r) for r in pc.a.data]
    b_rows = [list(r) for r in pc.b.data]
    zero_row = [field.zero()] * w
    for d in range(n + 1):
        cols = w * (d + 1)
        rows = []
        for blk in range(d + 2):
            # block row blk: A acts on v_blk, B on v_{blk-1}
            for i in range(n):
                row = []
                for k in range(d + 1):
                    if k == blk:
                        row.extend(a_rows[i])
                    elif k == blk - 1:
                        row.extend(b_rows[i])
                    else:
                        row.extend(zero_row)
                rows.append(row)
        vecs = _kernel_rows(rows, field, cols)
        if vecs:
            v = vecs[0]
            coeff_vectors = [
                Matrix._wrap(field, [[v[k * w + i]] for i in range(w)])
                for k in range(d + 1)
            ]
            return d, coeff_vectors
    raise AssertionError("no polynomial kernel vector up to degree n")


@dataclass(frozen=True)
class PencilReduction:
    """Invertible (P, Q) with A = P C_n Q^-1 and B = P D_n Q^-1, exactly."""

    p_left: Matrix
    q_right: Matrix


def kronecker_reduce(pc: Pencil) -> PencilReduction:
    """Equivalence bringing a full-rank pencil to the canonical pair.

    The kernel vector v(x) of degree n yields Q column by column via
    Q[:, j] = (-1)^(n-j) v_{n-j}; this sign convention makes the columns of
    A Q and B Q line up into [P | 0] and [0 | P] for one and the same P.
    The construction is validated by the reconstruction identities rather
    than trusted.
    """
    if not is_fullrank_pencil(pc):
        raise PencilRankError("not a full-rank pencil")
    field, n = pc.field, pc.n
    d, coeffs = minimal_kernel_vector(pc)
    if d != n:
        raise PencilRankError("not a full-rank pencil (short minimal index)")
    cols = []
    for j in range(n + 1):
        v = coeffs[n - j]
        if (n - j) % 2 == 1:
            v = -v
        cols.append([r[0] for r in v.data])
    # joint rescaling is free; pin the leading entry of the first column to 1
    lead = next(v for v in cols[0] if not field.is_zero(v))
    scale = field.inv(lead)
    cols = [[field.mul(scale, v) for v in col] for col in cols]
    q = Matrix._wrap(field, list(zip(*cols)))
    aq = pc.a * q
    bq = pc.b * q
    p_grid = [row[:n] for row in aq.data]
    p = Matrix._wrap(field, p_grid)
    # verification: A Q = [P | 0], B Q = [0 | P], both factors invertible
    ok = all(field.is_zero(aq.data[i][n]) for i in range(n))
    ok = ok and all(field.is_zero(bq.data[i][0]) for i in range(n))
    ok = ok and all(
        bq.data[i][j + 1] == p.data[i][j] for i in range(n) for j in range(n)
    )
    ok = ok and is_invertible(p) and is_invertible(q)
    if not ok:
        raise PencilRankError("not a full-rank pencil (reconstruction failed)")
    return PencilReduction(p_left=p, q_right=q)


# ---------------------------------------------------------------------------
# diagnostics for rejected pencils
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PencilDiagnostic:
    """Why a pencil fails the full-rank test.

    ``witnesses`` lists every applicable failure, in the fixed order
    finite-eigenvalue, infinity, short-minimal-index; ``kind`` is the first.
    A finite eigenvalue comes with a root in the field when one exists, or
    an irreducible factor of the minor gcd otherwise.  A minimal index
    d < n corresponds to a regular part of size n - d next to a smaller
    kernel block.
    """

    kind: str
    witnesses: tuple
    minors_gcd: Poly
    finite_root: object = None
    finite_factor: Optional[Poly] = None
    b_rank: int = 0
    minimal_index: int = 0
    regular_part_size: int = 0


def forbidden_block_detect(pc: Pencil) -> PencilDiagnostic:
    """Diagnose a pencil that fails the full-rank property."""
    if is_fullrank_pencil(pc):
        raise ValueError("pencil is full-rank; nothing to diagnose")
    field, n = pc.field, pc.n
    g = pencil_minors_gcd(pc)
    b_rank = rank(pc.b)
    d, _ = minimal_kernel_vector(pc)

    witnesses = []
    root = None
    factor = None
    if g.is_zero():
        witnesses.append("identically-singular")
    elif g.degree >= 1:
        witnesses.append("finite-eigenvalue")
        root, factor = _some_root_or_factor(g)
    if b_rank < n:
        witnesses.append("infinity")
    if d < n:
        witnesses.append("short-minimal-index")
    if not witnesses:
        raise AssertionError("pencil rejected but no witness found")
    return PencilDiagnostic(
        kind=witnesses[0],
        witnesses=tuple(witnesses),
        minors_gcd=g,
        finite_root=root,
        finite_factor=factor,
        b_rank=b_rank,
        minimal_index=d,
        regular_part_size=n - d,
    )


def _some_root_or_factor(g: Poly):
    field = g.field
    if field.is_finite:
        for pi, _ in factor_finite_field(g):
            if pi.degree == 1:
                return field.neg(pi.coeffs[0]), None
        return None, factor_finite_field(g)[0][0]
    roots = rational_roots(g)
    if roots:
        return roots[0], None
    return None, g.monic()
