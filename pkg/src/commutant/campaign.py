"""Randomized verification campaigns and the rank-bound checks.

``sample_algebra`` draws closure-generated algebras of a prescribed
dimension by rejection: uniformly random generator matrices, retried with
deterministically derived sub-seeds until the closure dimension matches.
Single-generator retries carry a cheap Krylov prefilter (the cyclic span of
one probe vector already exceeding the target rejects the draw before any
closure work), and closures abort as soon as they pass the cap.  Some
(size, dimension) pairs are essentially unreachable this way; those exhaust
the retry budget and raise, which callers treat as data.

``run_tn_campaign`` ties the sampler to the exact centralizer oracle and
the constructive certifier: every sampled algebra gets its commutant
dimension computed outright, the certifier must then either produce a
verified witness (oracle >= 2) or prove triviality (oracle == 1), and any
disagreement is recorded with its reproducing sub-seed.  Trivial
4-dimensional finds in odd ambient size are classified on the spot.

``check_rank_bounds`` validates the dimension inequalities behind the
small-dimension arguments: for nonzero C the kernel of (X, Y) -> XC - CY
has dimension at least (p-q)^2 + pq; for an independent pair the joint
kernel has dimension at least (q-p)^2 + m where m counts rank-deficient
members; and (X, Y) -> XW - WY is never onto once rank W < p <= q.  Over
GF(2) the checks run exhaustively on bit-packed matrices, independent of
the main elimination code; elsewhere they sample.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field as dc_field
from typing import Optional

from commutant.algebras import MatrixAlgebra, centralizer_dimension
from commutant.classify import (
    classify_dim4,
    even_minimal_algebra,
    odd_minimal_algebra,
)
from commutant.algebras import conjugate_algebra, transpose_algebra
from commutant.errors import (
    CertificationError,
    DimensionUnreachableError,
    ExtensionRequiredError,
    NotConformingError,
    TrivialCentralizer,
)
from commutant.fields import Field, parse_field_label
from commutant.matrices import Matrix, RowSpan, random_matrix, random_invertible, rank
from commutant.structure import certificate_is_valid, certify_nonscalar_commutant
from commutant.textio import format_matrix

__all__ = [
    "CampaignConfig",
    "CampaignReport",
    "RankBoundReport",
    "derive_subseed",
    "sample_algebra",
    "run_tn_campaign",
    "check_rank_bounds",
    "format_campaign_report",
    "parse_campaign_config",
    "format_campaign_config",
    "MODE_RANDOM",
    "MODE_CONJUGATES",
]

MODE_RANDOM = "random-generators"
MODE_CONJUGATES = "random-conjugates-of-canonical"

_M64 = (1 << 64) - 1


def derive_subseed(seed: int, index: int) -> int:
    """Deterministic per-index sub-seed (splitmix64 finalizer)."""
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _cyclic_span_exceeds(rows, field, n, cap) -> bool:
    """Krylov dimension of one probe vector under the matrix exceeds cap.

    The cyclic span bounds the full closure dimension from below, so a
    positive answer is a certain rejection, at matrix-vector cost.
    """
    span = RowSpan(field, n)
    v = [field.one()] + [field.zero()] * (n - 1)
    dot = field.vec_dot
    while span.insert(v):
        if span.dim > cap:
            return True
        v = [dot(r, v) for r in rows]
    return False


def sample_algebra(
    n: int,
    field: Field,
    target_dim: int,
    seed: int,
    max_retries: int = 3000,
    generators: Optional[int] = None,
) -> MatrixAlgebra:
    """Closure of uniformly random generators, rejected to an exact dimension.

    Generator count: explicit when given; otherwise one generator when the
    target fits inside a cyclic algebra (dimension at most n), with every
    fourth retry drawing two to let noncommutative shapes appear, and two
    generators beyond that.  Deterministic for a given seed.
    """
    if target_dim < 1 or target_dim > n * n:
        raise ValueError("target dimension out of range")
    if target_dim == 1:
        return MatrixAlgebra.trivial(field, n)
    for retry in range(max_retries):
        rng = random.Random(derive_subseed(seed, retry))
        if generators is not None:
            count = generators
        elif target_dim <= n:
            count = 2 if retry % 4 == 3 else 1
        else:
            count = 2
        mats = [random_matrix(field, n, n, rng) for _ in range(count)]
        if count == 1 and _cyclic_span_exceeds(
            [list(r) for r in mats[0].data], field, n, target_dim
        ):
            continue
        closed = MatrixAlgebra.closure(mats, dim_cap=target_dim)
        if closed is not None and closed.dim == target_dim:
            return closed
    raise DimensionUnreachableError(
        f"no closure of dimension {target_dim} in M_{n}({field.label()}) "
        f"within {max_retries} retries (seed {seed})"
    )


# ---------------------------------------------------------------------------
# campaign runner
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CampaignConfig:
    n: int
    field: Field
    target_dim: int
    samples: int
    seed: int
    mode: str = MODE_RANDOM
    max_retries: int = 3000
    generators: Optional[int] = None

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.target_dim > self.n * self.n:
            raise ValueError("target dimension exceeds the ambient dimension")
        if self.mode not in (MODE_RANDOM, MODE_CONJUGATES):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class CampaignReport:
    config: CampaignConfig
    counts: dict
    route_histogram: dict
    orientation_histogram: dict
    disagreements: list
    sample_errors: list
    witness_examples: dict
    elapsed: float = 0.0


def _draw_sample(cfg: CampaignConfig, index: int) -> MatrixAlgebra:
    sub = derive_subseed(cfg.seed, index)
    if cfg.mode == MODE_RANDOM:
        return sample_algebra(
            cfg.n,
            cfg.field,
            cfg.target_dim,
            sub,
            max_retries=cfg.max_retries,
            generators=cfg.generators,
        )
    rng = random.Random(sub)
    if cfg.n % 2 == 1:
        model = odd_minimal_algebra(cfg.field, (cfg.n - 1) // 2)
        if rng.randrange(2):
            model = transpose_algebra(model)
    else:
        model = even_minimal_algebra(cfg.field, cfg.n // 2)
    return conjugate_algebra(model, random_invertible(cfg.field, cfg.n, rng))


def run_tn_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Oracle-vs-certifier sweep; per-sample failures are data, not raises."""
    t0 = time.monotonic()
    counts = {
        "samples": cfg.samples,
        "trivial": 0,
        "nontrivial": 0,
        "agreements": 0,
        "disagreements": 0,
        "sample_errors": 0,
        "classified": 0,
    }
    routes = {}
    orientations = {}
    disagreements = []
    sample_errors = []
    witness_examples = {}

    for i in range(cfg.samples):
        try:
            a = _draw_sample(cfg, i)
        except DimensionUnreachableError as exc:
            counts["sample_errors"] += 1
            sample_errors.append((i, str(exc)))
            continue
        oracle_dim = centralizer_dimension(a.basis)
        try:
            if a.dim > 4:
                # outside the certifier contract: oracle only
                if oracle_dim == 1:
                    counts["trivial"] += 1
                else:
                    counts["nontrivial"] += 1
                continue
            cert = certify_nonscalar_commutant(a)
            witness_ok = certificate_is_valid(a, cert.witness)
            if oracle_dim >= 2 and witness_ok:
                counts["nontrivial"] += 1
                counts["agreements"] += 1
                routes[cert.route] = routes.get(cert.route, 0) + 1
                witness_examples.setdefault(cert.route, (i, a, cert.witness))
            else:
                counts["nontrivial" if oracle_dim >= 2 else "trivial"] += 1
                counts["disagreements"] += 1
                disagreements.append((i, derive_subseed(cfg.seed, i), "witness-vs-oracle"))
        except TrivialCentralizer:
            counts["trivial"] += 1
            if oracle_dim == 1:
                counts["agreements"] += 1
                witness_examples.setdefault("trivial", (i, a, None))
                if cfg.n % 2 == 1 and a.dim == 4:
                    try:
                        res = classify_dim4(a)
                        counts["classified"] += 1
                        orientations[res.orientation] = (
                            orientations.get(res.orientation, 0) + 1
                        )
                    except NotConformingError as exc:
                        disagreements.append((i, derive_subseed(cfg.seed, i), str(exc)))
                        counts["disagreements"] += 1
            else:
                counts["disagreements"] += 1
                disagreements.append((i, derive_subseed(cfg.seed, i), "trivial-vs-oracle"))
        except (ExtensionRequiredError, CertificationError) as exc:
            counts["sample_errors"] += 1
            sample_errors.append((i, str(exc)))

    report = CampaignReport(
        config=cfg,
        counts=counts,
        route_histogram=dict(sorted(routes.items())),
        orientation_histogram=dict(sorted(orientations.items())),
        disagreements=disagreements,
        sample_errors=sample_errors,
        witness_examples=witness_examples,
        elapsed=time.monotonic() - t0,
    )
    return report


# ---------------------------------------------------------------------------
# config / report text formats
# ---------------------------------------------------------------------------

def format_campaign_config(cfg: CampaignConfig) -> str:
    lines = [
        f"n={cfg.n}",
        f"field={cfg.field.label()}",
        f"dim={cfg.target_dim}",
        f"samples={cfg.samples}",
        f"seed={cfg.seed}",
        f"mode={cfg.mode}",
    ]
    return "\n".join(lines) + "\n"


def parse_campaign_config(text: str) -> CampaignConfig:
    values = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {line_no}: expected key=value, got {raw!r}")
        k, v = line.split("=", 1)
        values[k.strip()] = v.strip()
    try:
        return CampaignConfig(
            n=int(values["n"]),
            field=parse_field_label(values["field"]),
            target_dim=int(values["dim"]),
            samples=int(values["samples"]),
            seed=int(values["seed"]),
            mode=values.get("mode", MODE_RANDOM),
            max_retries=int(values.get("max_retries", 3000)),
            generators=int(values["generators"]) if "generators" in values else None,
        )
    except KeyError as exc:
        raise ValueError(f"campaign config misses the {exc.args[0]!r} key") from None


def format_campaign_report(report: CampaignReport) -> str:
    """Deterministic report body; wall-clock time stays out of it so that
    identical runs serialize identically."""
    cfg = report.config
    out = ["# campaign report", format_campaign_config(cfg).rstrip()]
    out.append("[counts]")
    for k in sorted(report.counts):
        out.append(f"{k}={report.counts[k]}")
    if report.route_histogram:
        out.append("[routes]")
        for k, v in report.route_histogram.items():
            out.append(f"{k}={v}")
    if report.orientation_histogram:
        out.append("[orientations]")
        for k, v in report.orientation_histogram.items():
            out.append(f"{k}={v}")
    if report.disagreements:
        out.append("[disagreements]")
        for idx, sub, what in report.disagreements:
            out.append(f"sample={idx} subseed={sub} kind={what}")
    if report.sample_errors:
        out.append("[sample-errors]")
        for idx, what in report.sample_errors:
            out.append(f"sample={idx}: {what}")
    for route, (idx, a, witness) in sorted(report.witness_examples.items()):
        out.append(f"[example {route} sample={idx}]")
        for b in a.basis:
            out.append(format_matrix(b).rstrip())
        if witness is not None:
            out.append("# witness")
            out.append(format_matrix(witness).rstrip())
    return "\n".join(out) + "\n"


def save_campaign_report(report: CampaignReport, directory) -> str:
    """Write one self-contained report file; never overwrites (append-only)."""
    import os

    cfg = report.config
    os.makedirs(directory, exist_ok=True)
    stem = (
        f"campaign-n{cfg.n}-{cfg.field.label().replace('(', '').replace(')', '')}"
        f"-d{cfg.target_dim}-s{cfg.seed}"
    )
    path = os.path.join(directory, stem + ".txt")
    counter = 1
    while os.path.exists(path):
        path = os.path.join(directory, f"{stem}-{counter}.txt")
        counter += 1
    with open(path, "w") as fh:
        fh.write(format_campaign_report(report))
    return path


# ---------------------------------------------------------------------------
# rank-bound checks
# ---------------------------------------------------------------------------

@dataclass
class RankBoundReport:
    p: int
    q: int
    exhaustive: bool
    pairs_checked: int
    singles_checked: int
    low_rank_checked: int
    min_single_kernel: Optional[int]
    min_pair_kernel: dict = dc_field(default_factory=dict)  # m -> observed minimum
    violations: list = dc_field(default_factory=list)


def check_rank_bounds(
    p: int,
    q: int,
    field: Field,
    samples: int = 200,
    seed: int = 7,
    exhaustive: Optional[bool] = None,
) -> RankBoundReport:
    if not (1 <= p <= q <= 5):
        raise ValueError("bounds are checked for 1 <= p <= q <= 5")
    if exhaustive is None:
        exhaustive = field.is_finite and field.order == 2 and q <= 3
    if exhaustive:
        if not (field.is_finite and field.order == 2):
            raise ValueError("exhaustive mode is implemented for GF(2)")
        return _check_rank_bounds_gf2(p, q)
    return _check_rank_bounds_sampled(p, q, field, samples, seed)


# --- bit-packed exhaustive GF(2) route (independent of the main elimination) --

def _f2_rank(vectors) -> int:
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def _f2_rank_rows(vectors) -> int:
    # same elimination, kept separate for clarity at call sites
    return _f2_rank(vectors)


def _f2_matrix_rank(code: int, rows: int, cols: int) -> int:
    packed_rows = [(code >> (r * cols)) & ((1 << cols) - 1) for r in range(rows)]
    return _f2_rank(packed_rows)


def _f2_map_columns(u_code: int, p: int, q: int):
    """Columns of (X, Y) -> XU - UY over GF(2), packed as p*q-bit ints.

    Input coordinates: the p^2 X-units then the q^2 Y-units; output bits are
    row-major positions of a p x q matrix.
    """
    u_rows = [(u_code >> (r * q)) & ((1 << q) - 1) for r in range(p)]
    cols = []
    for a in range(p):
        for b in range(p):
            # E_ab U: row a of the output is row b of U
            cols.append(u_rows[b] << (a * q))
    for c in range(q):
        for d in range(q):
            # U E_cd: column d of the output is column c of U
            out = 0
            for i in range(p):
                if (u_rows[i] >> c) & 1:
                    out |= 1 << (i * q + d)
            cols.append(out)
    return cols


def _check_rank_bounds_gf2(p: int, q: int) -> RankBoundReport:
    report = RankBoundReport(
        p=p, q=q, exhaustive=True, pairs_checked=0, singles_checked=0,
        low_rank_checked=0, min_single_kernel=None,
    )
    dim_in = p * p + q * q
    total = 1 << (p * q)
    col_cache = [_f2_map_columns(u, p, q) for u in range(total)]
    rank_cache = [_f2_matrix_rank(u, p, q) for u in range(total)]
    single_bound = (p - q) ** 2 + p * q
    for u in range(1, total):
        ker = dim_in - _f2_rank(col_cache[u])
        report.singles_checked += 1
        if report.min_single_kernel is None or ker < report.min_single_kernel:
            report.min_single_kernel = ker
        if ker < single_bound:
            report.violations.append(("single", u, ker))
        # non-surjectivity once the rank drops below p
        if rank_cache[u] < p:
            report.low_rank_checked += 1
            if _f2_rank(col_cache[u]) >= p * q:
                report.violations.append(("onto", u, rank_cache[u]))
    for u in range(1, total):
        cols_u = col_cache[u]
        rank_u = rank_cache[u]
        for v in range(u + 1, total):
            m = (1 if rank_u < p else 0) + (1 if rank_cache[v] < p else 0)
            cols_v = col_cache[v]
            stacked = [cu | (cv << (p * q)) for cu, cv in zip(cols_u, cols_v)]
            ker = dim_in - _f2_rank(stacked)
            report.pairs_checked += 1
            bound = (q - p) ** 2 + m
            cur = report.min_pair_kernel.get(m)
            if cur is None or ker < cur:
                report.min_pair_kernel[m] = ker
            if ker < bound:
                report.violations.append(("pair", (u, v), ker))
    return report


# --- sampled route over arbitrary finite fields --------------------------------

def _pair_map_rows(corner_mats, field, p, q):
    rows = []
    zero = field.zero()
    for k_mat in corner_mats:
        kd = k_mat.data
        for i in range(p):
            for j in range(q):
                row = [zero] * (p * p + q * q)
                for l in range(p):
                    row[i * p + l] = kd[l][j]
                for l in range(q):
                    idx = p * p + l * q + j
                    row[idx] = field.sub(row[idx], kd[i][l])
                rows.append(row)
    return rows


def _kernel_dim(rows, field, width):
    from commutant.matrices import _rref_rows

    pivots, _ = _rref_rows(rows, field, transform=False)
    return width - len(pivots)


def _check_rank_bounds_sampled(p, q, field, samples, seed) -> RankBoundReport:
    report = RankBoundReport(
        p=p, q=q, exhaustive=False, pairs_checked=0, singles_checked=0,
        low_rank_checked=0, min_single_kernel=None,
    )
    rng = random.Random(seed)
    dim_in = p * p + q * q
    single_bound = (p - q) ** 2 + p * q
    for _ in range(samples):
        c = random_matrix(field, p, q, rng)
        if c.is_zero():
            continue
        ker = _kernel_dim(_pair_map_rows([c], field, p, q), field, dim_in)
        report.singles_checked += 1
        if report.min_single_kernel is None or ker < report.min_single_kernel:
            report.min_single_kernel = ker
        if ker < single_bound:
            report.violations.append(("single", c, ker))
    for _ in range(samples):
        u = random_matrix(field, p, q, rng)
        v = random_matrix(field, p, q, rng)
        span = RowSpan(field, p * q)
        span.insert([x for r in u.data for x in r])
        if not span.insert([x for r in v.data for x in r]):
            continue  # dependent pair
        m = (1 if rank(u) < p else 0) + (1 if rank(v) < p else 0)
        ker = _kernel_dim(_pair_map_rows([u, v], field, p, q), field, dim_in)
        report.pairs_checked += 1
        bound = (q - p) ** 2 + m
        cur = report.min_pair_kernel.get(m)
        if cur is None or ker < cur:
            report.min_pair_kernel[m] = ker
        if ker < bound:
            report.violations.append(("pair", (u, v), ker))
    for _ in range(samples):
        r = rng.randrange(0, p)  # target rank strictly below p
        if r == 0:
            continue
        left = random_matrix(field, p, r, rng)
        right = random_matrix(field, r, q, rng)
        w = left * right
        if rank(w) >= p:
            continue
        report.low_rank_checked += 1
        image_rank = dim_in - _kernel_dim(_pair_map_rows([w], field, p, q), field, dim_in)
        if image_rank >= p * q:
            report.violations.append(("onto", w, image_rank))
    return report
