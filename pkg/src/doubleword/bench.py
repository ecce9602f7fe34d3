"""Operation accounting and cache-resident matrix benchmarks.

Two jobs, deliberately separated:

* :func:`count_ops` / :func:`count_ops_dot2` run one multiply-add (or one
  compensated dot-product step) on a counting backend and report exactly how
  many scalar comparisons, additions, and multiplications it issues.  The
  counts are structural -- independent of data -- and cover the full variant
  matrix: accurate vs cheap addition, magnitude-select vs plain 2Sum, and
  either normalization omitted.  An fma counts as one addition plus one
  multiplication; a magnitude-select 2Sum costs two comparisons (the
  max-by-magnitude and min-by-magnitude selections) plus a Fast2Sum.
* :func:`gemm_dw` times a small double-word GEMM whose inner kernel is the
  configured multiply-add, structure-of-arrays layout, best-of-N over a
  monotonic clock after warm-ups so the matrices are cache-resident.  The
  numerical output is bitwise identical to a naive scalar triple loop with
  the same configuration -- the benchmark never trades correctness for speed.

Reported throughput is multiply-add evaluations per second; the
equivalent-double figure weights that by (#add + #cmp), the convention under
which plain double GEMM (one fma per element step) scores its nominal FLOPS
and comparison-selects count as additions since they share ports and
throughput with them on current cores.

Absolute numbers are hardware artifacts; only operation counts and the
relative ordering of variants are asserted anywhere.  Repetition counts can
be pinned with the DOUBLEWORD_BENCH_REPS environment variable for smoke runs.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass

import numpy as np

from .backends import NATIVE, Backend, CountingBackend
from .core import DoubleWord, VariantConfig, maa
from .eft import two_prod, two_sum, two_sum_magsel
from .softfloat import UsageError
from .vector import VEC_NATIVE, philox_chunk

# benchmark matrices must stay cache-resident; 2^21 double-word entries of
# working set is already past L2 on common parts, refuse anything bigger
_MAX_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class OpCount:
    """Scalar operations issued by one multiply-add (or one dot step)."""

    comparisons: int
    additions: int
    multiplications: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.comparisons, self.additions, self.multiplications)


@dataclass(frozen=True)
class BenchResult:
    variant: str
    m: int
    n: int
    k: int
    reps: int
    warmups: int
    best_s: float
    maa_per_s: float
    eq_double_per_s: float
    counts: OpCount

    def line(self) -> str:
        return (
            f"{self.variant}: {self.m}x{self.n}x{self.k}, best {self.best_s * 1e3:.3f} ms, "
            f"{self.maa_per_s / 1e6:.2f} M maa/s, eq-double {self.eq_double_per_s / 1e9:.3f} G/s"
        )


# ---------------------------------------------------------------------------
# operation counting


def count_ops(cfg: VariantConfig) -> OpCount:
    """Run one multiply-add on a counting backend and tally its scalar ops.

    The tally is data-independent: every variant executes a fixed straight-
    line sequence (selections are branch-free), so any nondegenerate inputs
    give the same counts.
    """
    bk = CountingBackend(NATIVE)
    a = DoubleWord(1.0, 2.0**-55)
    b = DoubleWord(1.5, -(2.0**-54))
    c = DoubleWord(0.75, 2.0**-56)
    maa(a, b, c, bk, cfg)
    return OpCount(bk.n_cmp, bk.n_add, bk.n_mul)


def count_ops_dot2(magsel: bool = False) -> OpCount:
    """Per-element cost of the compensated dot product (one 2Prod, one 2Sum
    into the running sum, two error-accumulation additions)."""
    bk = CountingBackend(NATIVE)
    dot2_compensated([1.25], [0.75], bk, magsel=magsel)
    return OpCount(bk.n_cmp, bk.n_add, bk.n_mul)


# the published variant matrix: plain rows, then magnitude-select rows, then
# the rows with the addition's own normalization omitted as well
_TABLE_ROWS: list[tuple[bool, bool, bool, bool]] = [
    # (omit_add_norm, omit_mul_norm, sloppy, magsel)
    (False, False, False, False),
    (False, False, True, False),
    (False, True, False, False),
    (False, True, True, False),
    (False, False, False, True),
    (False, False, True, True),
    (False, True, False, True),
    (False, True, True, True),
    (True, True, False, False),
    (True, True, True, False),
    (True, True, False, True),
    (True, True, True, True),
]


def table_configs() -> list[VariantConfig]:
    return [
        VariantConfig(
            add_algo="sloppy" if sloppy else "accurate",
            normalize_add=not omit_add,
            normalize_mul=not omit_mul,
            magsel=magsel,
        )
        for omit_add, omit_mul, sloppy, magsel in _TABLE_ROWS
    ]


def op_count_table() -> list[dict]:
    """All fourteen variant rows -- twelve multiply-add configurations plus
    the two compensated-dot rows -- with their operation counts."""
    rows = []
    for (omit_add, omit_mul, sloppy, magsel), cfg in zip(_TABLE_ROWS, table_configs()):
        oc = count_ops(cfg)
        rows.append(
            {
                "kind": "maa",
                "omit_add_norm": omit_add,
                "omit_mul_norm": omit_mul,
                "sloppy": sloppy,
                "magsel": magsel,
                "cmp": oc.comparisons,
                "add": oc.additions,
                "mul": oc.multiplications,
            }
        )
    for magsel in (False, True):
        oc = count_ops_dot2(magsel)
        rows.append(
            {
                "kind": "dot2",
                "omit_add_norm": None,
                "omit_mul_norm": None,
                "sloppy": None,
                "magsel": magsel,
                "cmp": oc.comparisons,
                "add": oc.additions,
                "mul": oc.multiplications,
            }
        )
    return rows


def op_count_table_text() -> str:
    lines = ["omit-add-norm  omit-mul-norm  sloppy  magsel  #cmp  #add  #mul"]
    yn = {True: "yes", False: "no", None: "-"}
    for r in op_count_table():
        name = "dot2" if r["kind"] == "dot2" else yn[r["omit_add_norm"]]
        lines.append(
            f"{name:>13}  {yn[r['omit_mul_norm']]:>13}  {yn[r['sloppy']]:>6}  "
            f"{yn[r['magsel']]:>6}  {r['cmp']:>4}  {r['add']:>4}  {r['mul']:>4}"
        )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# compensated dot product


def dot2_compensated(a, b, bk: Backend = NATIVE, *, magsel: bool = False):
    """Compensated dot product: returns (sum, error term) whose unevaluated
    sum carries the dot product to roughly twice working precision.

    Per element: an exact product split (2Prod), an exact addition of the
    product into the running sum (2Sum, or two magnitude-selects plus
    Fast2Sum), and two additions folding both low words into the error
    accumulator -- 9 additions + 2 multiplications, or 2 comparisons +
    6 additions + 2 multiplications with magnitude-select.
    """
    if len(a) != len(b):
        raise UsageError(f"length mismatch: {len(a)} vs {len(b)}")
    ts = two_sum_magsel if magsel else two_sum
    s = bk.from_int(0)
    e = bk.from_int(0)
    for x, y in zip(a, b):
        p, pe = two_prod(x, y, bk)
        s, se = ts(s, p, bk)
        e = bk.add(e, bk.add(pe, se))
    return s, e


# ---------------------------------------------------------------------------
# cache-resident GEMM microbenchmark


def _reps_default(requested: int | None) -> int:
    if requested is not None:
        return requested
    return int(os.environ.get("DOUBLEWORD_BENCH_REPS", "100"))


def _gemm_kernel(cfg: VariantConfig, bk, a_hi, a_lo, b_hi, b_lo, c_hi, c_lo):
    """C + A@B on structure-of-arrays double-word matrices.  Row-at-a-time:
    each inner step is one vectorized multiply-add over a row of B, so the
    scalar op order per (i, j, l) matches the naive triple loop exactly."""
    m, k = a_hi.shape
    out_hi = c_hi.copy()
    out_lo = c_lo.copy()
    for i in range(m):
        acc = DoubleWord(out_hi[i], out_lo[i])
        for l in range(k):
            x = DoubleWord(a_hi[i, l], a_lo[i, l])
            y = DoubleWord(b_hi[l], b_lo[l])
            acc = maa(x, y, acc, bk, cfg)
        out_hi[i] = acc.hi
        out_lo[i] = acc.lo
    return out_hi, out_lo


def random_dw_matrix(g: np.random.Generator, shape) -> tuple[np.ndarray, np.ndarray]:
    """Uniform values in [-1/2, 1/2] split at 53 bits (low = residual)."""
    hi = g.uniform(-0.5, 0.5, shape)
    lo = g.uniform(-0.5, 0.5, shape) * np.spacing(np.abs(hi))
    return hi, lo


def gemm_reference(cfg: VariantConfig, a_hi, a_lo, b_hi, b_lo, c_hi, c_lo):
    """Naive scalar triple loop, the bit-exactness reference for the kernel."""
    m, k = a_hi.shape
    n = b_hi.shape[1]
    out_hi = c_hi.copy()
    out_lo = c_lo.copy()
    for i in range(m):
        for j in range(n):
            acc = DoubleWord(out_hi[i, j], out_lo[i, j])
            for l in range(k):
                x = DoubleWord(a_hi[i, l], a_lo[i, l])
                y = DoubleWord(b_hi[l, j], b_lo[l, j])
                acc = maa(x, y, acc, NATIVE, cfg)
            out_hi[i, j] = acc.hi
            out_lo[i, j] = acc.lo
    return out_hi, out_lo


def gemm_dw(
    cfg: VariantConfig,
    m: int,
    n: int,
    k: int,
    reps: int | None = None,
    *,
    warmups: int | None = None,
    seed: int = 0,
) -> BenchResult:
    """Time C + A@B with the configured multiply-add as the inner kernel.

    Best-of-``reps`` on a monotonic clock after ``warmups`` untimed passes
    (defaults 100 and 10; the environment variable DOUBLEWORD_BENCH_REPS
    overrides the former for smoke runs).  Matrices live in structure-of-
    arrays layout and must fit in cache -- oversize dimensions are refused
    rather than silently measuring memory bandwidth.
    """
    if min(m, n, k) < 1:
        raise UsageError(f"dimensions must be positive: {m}x{n}x{k}")
    if m * n + m * k + k * n > _MAX_ELEMENTS:
        raise UsageError(f"{m}x{n}x{k} exceeds the cache-residency guard")
    reps = _reps_default(reps)
    if warmups is None:
        warmups = 10
    if reps < 1:
        raise UsageError("reps must be >= 1")

    g = philox_chunk(seed, 0)
    a_hi, a_lo = random_dw_matrix(g, (m, k))
    b_hi, b_lo = random_dw_matrix(g, (k, n))
    c_hi, c_lo = random_dw_matrix(g, (m, n))

    for _ in range(warmups):
        _gemm_kernel(cfg, VEC_NATIVE, a_hi, a_lo, b_hi, b_lo, c_hi, c_lo)
    best = np.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        _gemm_kernel(cfg, VEC_NATIVE, a_hi, a_lo, b_hi, b_lo, c_hi, c_lo)
        best = min(best, time.perf_counter() - t0)

    oc = count_ops(cfg)
    maa_per_s = (m * n * k) / best
    return BenchResult(
        variant=cfg.label(),
        m=m,
        n=n,
        k=k,
        reps=reps,
        warmups=warmups,
        best_s=best,
        maa_per_s=maa_per_s,
        eq_double_per_s=maa_per_s * (oc.additions + oc.comparisons),
        counts=oc,
    )


def bench_matrix(
    m: int = 32,
    n: int = 32,
    k: int = 32,
    reps: int | None = None,
    seed: int = 0,
) -> list[BenchResult]:
    """The twelve multiply-add variants timed on one dimension triple."""
    return [gemm_dw(cfg, m, n, k, reps, seed=seed) for cfg in table_configs()]


def results_json(results: list[BenchResult]) -> str:
    return json.dumps([asdict(r) for r in results], indent=2, sort_keys=True)
