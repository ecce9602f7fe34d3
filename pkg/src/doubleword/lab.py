"""Mechanical verification of the double-word error claims.

Every claim the library makes about its algorithms is restated here as an
executable check over concrete floating-point inputs:

* :func:`check_fast2sum_uls_exactness` -- Fast2Sum with the *smaller-ufp*
  argument first is error-free under any faithful rounding, provided the
  first argument's unit in the last significant place is at least the
  second's ulp; the condition is sharp to one bit.
* :func:`check_sloppy_fast2sum_validity`, :func:`check_accurate_fast2sum_validity`
  -- the final renormalizing Fast2Sum inside the additions stays valid --
  error-free, or off by O(u^2) relative at worst -- for word overlaps up to
  1/(8u) - 2, under every rounding tested.
* :func:`check_cancellation_bound` -- the cheap addition's relative error is
  at most 3u^2 + O(u^3) whenever the high words cancel by no more than half,
  and the exceedances beyond that regime are exactly the catastrophic ones.
* :func:`check_overlap_bound` -- quantitative error bounds, parametric in
  the word overlap o: (2o+3)u^2 * (|x_h|+|y_h|) absolute for the cheap
  addition under faithful rounding, (3o+15)u^2 relative for the accurate
  addition (round-to-nearest, and directed with sign-aligned low words).
* :func:`check_direction_consistency` -- under uniform downward rounding
  every result is <= the exact value (>= upward), for the additions, the
  product, the fused multiply-add pipeline, and the interval operations'
  enclosures.
* :func:`check_unnormalized_mul_overlap` -- the product's unnormalized low
  word stays within (3 + 16u) * u * |high word|.

Checks run on the vectorized software engine so exhaustive low-precision
sweeps finish in seconds to minutes.  Error measurement never trusts the
arithmetic under test: residuals are distilled error-free in float64, which
is exact for every grid swept here (the input lattices are chosen so all
quantities fit well inside 53 bits), and the binary64 stages compare through
exact sign distillation rather than rounded ratios.

Sweeps are reproducible by construction: grids are enumerated exhaustively
and the stratified random stages derive from counter-based streams, so any
chunk can be regenerated in isolation from (seed, chunk) alone.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from .backends import NATIVE
from .core import (
    DoubleWord,
    VariantConfig,
    accurate_add,
    accurate_add_directed,
    dw_mul,
    dw_value,
    maa,
    sloppy_add,
)
from .dyadic import Dyadic
from .interval import DWInterval, iv_add, iv_maa, iv_mul, vector_soft_factory
from .softfloat import RoundingMode, RoundingSpec, UsageError
from .vector import (
    VEC_NATIVE,
    Directed64Backend,
    VectorSoftBackend,
    accurate_sum,
    philox_chunk,
    product_expansion_f64,
    round_to_p,
)

RN = RoundingMode.NEAREST_EVEN
RA = RoundingMode.NEAREST_AWAY
RD = RoundingMode.DOWN
RU = RoundingMode.UP


# ---------------------------------------------------------------------------
# reports


@dataclass
class SweepReport:
    """Outcome of one mechanical check: what was swept, what was found."""

    name: str
    passed: bool
    lanes: int
    violations: int
    worst: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    elapsed_s: float = 0.0
    notes: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        head = f"{verdict} {self.name}: {self.lanes} lanes, {self.violations} violations"
        if self.worst:
            keyvals = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                                for k, v in self.worst.items())
            head += f" [{keyvals}]"
        return head + f" ({self.elapsed_s:.1f}s)"


# ---------------------------------------------------------------------------
# grid builders: boundary-complete mantissa enumerations + stratified randoms


def binade_values(p: int, b: int) -> np.ndarray:
    """All positive precision-p floats in [2^b, 2^(b+1)), ascending."""
    m = np.arange(1 << (p - 1), 1 << p, dtype=np.float64)
    return m * 2.0 ** (b - p + 1)


def signed_with_zero(vals: np.ndarray) -> np.ndarray:
    return np.concatenate([np.zeros(1), vals, -vals])


def low_word_grid(p: int, hi_binade: int, depth: int = 2) -> np.ndarray:
    """Candidate low words for a high word in value binade ``hi_binade``:
    zero plus both signs of every float in the ``depth`` binades just below
    half an ulp of the high word."""
    parts = [binade_values(p, hi_binade - p - 1 - k) for k in range(depth)]
    return signed_with_zero(np.concatenate(parts))


def cartesian(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.repeat(a, b.size), np.tile(b, a.size)


def chunk_slices(n: int, chunk: int) -> Iterator[slice]:
    for start in range(0, n, chunk):
        yield slice(start, min(start + chunk, n))


def random_p_floats(p: int, e_lo: int, e_hi: int, n: int, seed: int, stream: int) -> np.ndarray:
    """n random signed precision-p floats with value binade in [e_lo, e_hi]."""
    g = philox_chunk(seed, stream)
    m = g.integers(1 << (p - 1), 1 << p, size=n).astype(np.float64)
    e = g.integers(e_lo, e_hi + 1, size=n)
    s = np.where(g.integers(0, 2, size=n) == 0, 1.0, -1.0)
    return s * m * np.exp2((e - p + 1).astype(np.float64))


def _exact_residual(plus: Iterable[np.ndarray], minus: Iterable[np.ndarray]) -> np.ndarray:
    terms = [np.asarray(t, np.float64) for t in plus]
    terms += [np.negative(np.asarray(t, np.float64)) for t in minus]
    return accurate_sum(terms, passes=4)


def _grid_successor(v: np.ndarray, p: int) -> np.ndarray:
    """Successor of |v| on the positive precision-p grid (exact: adding one
    ulp at the top of a binade lands exactly on the next power of two)."""
    av = np.abs(v)
    _, e = np.frexp(av)
    return av + np.exp2((e - p).astype(np.float64))


# ---------------------------------------------------------------------------
# Fast2Sum exactness with the smaller-ufp argument first


def _direction_triples() -> list[tuple[RoundingMode, ...]]:
    out = []
    for a in (RD, RU):
        for b in (RD, RU):
            for c in (RD, RU):
                out.append((a, b, c))
    return out


def sharpness_pair(p: int) -> tuple[float, float]:
    """One bit beyond the exactness condition: uls(a) = ulp(b)/2."""
    return 0.5 + 2.0**-p, 1.0 + 2.0 ** (1 - p)


def check_fast2sum_uls_exactness(ps: tuple[int, ...] = (5, 6, 7, 8)) -> SweepReport:
    """Fast2Sum(a, b) with ufp(a) <= ufp(b) and uls(a) >= ulp(b) returns
    s + t = a + b exactly, under round-to-nearest and under every one of the
    eight per-operation direction assignments.  The companion sharpness pair
    (one bit past the uls condition) must err by Theta(u) in every mode.
    """
    t0 = time.perf_counter()
    lanes = violations = 0
    worst_residual = 0.0
    sharp_min_rel = math.inf
    sharp_max_rel = 0.0
    specs = [RoundingSpec(RN)] + [RoundingSpec(RD, directions=t) for t in _direction_triples()]

    for p in ps:
        # b spans one binade (scale invariance); a spans every lower binade
        # that can satisfy the conditions, all mantissas, both signs.
        bs = binade_values(p, 0)
        a_parts = []
        for b_bin in range(-(p + 3), 1):
            vals = binade_values(p, b_bin)
            m = np.arange(1 << (p - 1), 1 << p)
            tz = np.zeros(m.size, dtype=np.int64)
            mm = m.copy()
            while np.any(mm % 2 == 0):
                even = mm % 2 == 0
                tz[even] += 1
                mm[even] //= 2
            # uls(a) = 2^(b_bin - p + 1 + tz) >= ulp(b) = 2^(1-p)
            keep = (b_bin - p + 1 + tz) >= (1 - p)
            if np.any(keep):
                a_parts.append(vals[keep])
                a_parts.append(-vals[keep])
        a_all = np.concatenate(a_parts)
        A, B = cartesian(a_all, bs)
        for spec in specs:
            bk = VectorSoftBackend(p, spec)
            s = bk.add(A, B)
            z = bk.sub(s, A)
            t = bk.sub(B, z)
            resid = _exact_residual([s, t], [A, B])
            bad = resid != 0.0
            lanes += A.size
            violations += int(bad.sum())
            if np.any(bad):
                worst_residual = max(worst_residual, float(np.abs(resid[bad]).max()))

        a_s, b_s = sharpness_pair(p)
        for spec in specs:
            bk = VectorSoftBackend(p, spec)
            A1 = np.array([a_s]); B1 = np.array([b_s])
            s = bk.add(A1, B1)
            z = bk.sub(s, A1)
            t = bk.sub(B1, z)
            rel = abs(float(_exact_residual([s, t], [A1, B1])[0])) / (a_s + b_s)
            sharp_min_rel = min(sharp_min_rel, rel * 2.0**p)
            sharp_max_rel = max(sharp_max_rel, rel * 2.0**p)

    sharp_ok = 0.125 <= sharp_min_rel and sharp_max_rel <= 4.0
    elapsed = time.perf_counter() - t0
    return SweepReport(
        name="fast2sum-uls-exactness",
        passed=(violations == 0) and sharp_ok,
        lanes=lanes,
        violations=violations,
        worst={
            "residual": worst_residual,
            "sharpness_rel_err_over_u_min": sharp_min_rel,
            "sharpness_rel_err_over_u_max": sharp_max_rel,
        },
        params={"ps": ps, "specs": "RN + all 8 direction triples"},
        elapsed_s=elapsed,
        notes="smaller-ufp argument first; sharpness pair must err by Theta(u) in all modes",
    )


# ---------------------------------------------------------------------------
# validity of the final renormalizing Fast2Sum (overlap up to 1/(8u) - 2)


def _overlap_inputs(p: int, u: float, seed: int, per_cell: int = 160) -> tuple[np.ndarray, ...]:
    """Input pairs with controlled word overlap: for a ladder of o values up
    to the admissible maximum 1/(8u) - 2, low words sit at and just below
    o * u * |hi|.  High words cover a binade on each side plus neighboring
    binades, both signs on y, so cancellation and exponent steps both occur.

    u is the unit roundoff of the rounding the inputs will be used under --
    the admissible overlap ceiling is a function of it, so directed-mode
    sweeps get a lower ladder than nearest-mode sweeps.
    """
    o_max = 1.0 / (8.0 * u) - 2.0
    o_grid = sorted({1.0, 2.0, o_max / 4.0, o_max / 2.0, o_max - 1.0, o_max})
    o_grid = [o for o in o_grid if o >= 1.0]
    xs_h, xs_l, ys_h, ys_l, os_ = [], [], [], [], []
    g = philox_chunk(seed, 0)
    for o in o_grid:
        xh = np.tile(binade_values(p, 0), per_cell // (1 << (p - 1)) + 1)[:per_cell]
        # y mantissas drawn over three binades, both signs, so near-total
        # cancellation and exponent steps both show up
        m = g.integers(1 << (p - 1), 1 << p, per_cell).astype(np.float64)
        e = g.integers(-1, 2, per_cell)
        sgn = np.where(g.integers(0, 2, per_cell) == 0, 1.0, -1.0)
        yh = sgn * m * np.exp2((e - p + 1).astype(np.float64))
        for frac in (1.0, 0.61, 0.13):
            cap_x = round_to_p(np.abs(xh) * (u * o * frac), p, RD)
            cap_y = round_to_p(np.abs(yh) * (u * o * frac), p, RD)
            sx = np.where(g.integers(0, 2, per_cell) == 0, 1.0, -1.0)
            sy = np.where(g.integers(0, 2, per_cell) == 0, 1.0, -1.0)
            xs_h.append(xh); xs_l.append(sx * cap_x)
            ys_h.append(yh); ys_l.append(sy * cap_y)
            os_.append(np.full(per_cell, o))
    return (np.concatenate(xs_h), np.concatenate(xs_l),
            np.concatenate(ys_h), np.concatenate(ys_l), np.concatenate(os_))


def _random_direction_specs(n: int, length: int, seed: int) -> list[RoundingSpec]:
    g = philox_chunk(seed, 99)
    out = []
    for _ in range(n):
        dirs = tuple(RD if b == 0 else RU for b in g.integers(0, 2, length))
        out.append(RoundingSpec(RD, directions=dirs))
    return out


# A valid renormalizing Fast2Sum is error-free or contributes O(u^2)
# relative error.  8u^2 covers the mechanism -- the only loss is the final
# t = round(b - z) with |b - z| <= ulp(s) <= 2u|s| and |s| <= 2|a + b|, so
# |error| <= 2u * |b - z| <= 8u^2 |a + b| -- and 64u^3 absorbs the
# second-order slop in that chain.  Observed fills stay below 0.5.
FAST2SUM_VALIDITY_REL = lambda u: 8.0 * u * u + 64.0 * u**3


def _check_final_fast2sum(
    name: str,
    add_fn: Callable,
    ps: tuple[int, ...],
    n_dir_seqs: int,
    seed: int,
    notes: str,
) -> SweepReport:
    t0 = time.perf_counter()
    lanes = violations = n_exact = 0
    worst_fill = 0.0
    for p in ps:
        specs = [RoundingSpec(RN), RoundingSpec(RA), RoundingSpec(RD), RoundingSpec(RU)]
        specs += _random_direction_specs(n_dir_seqs, 24, seed + p)
        for spec in specs:
            u = float(spec.unit_roundoff(p))
            xh, xl, yh, yl, _ = _overlap_inputs(p, u, seed + p)
            x = DoubleWord(xh, xl)
            y = DoubleWord(yh, yl)
            pre = add_fn(x, y, VectorSoftBackend(p, spec), normalize=False)
            post = add_fn(x, y, VectorSoftBackend(p, spec), normalize=True)
            resid = _exact_residual([post.hi, post.lo], [pre.hi, pre.lo])
            denom = accurate_sum([pre.hi, pre.lo], passes=4)
            cap = FAST2SUM_VALIDITY_REL(u) * np.abs(denom) * (1.0 + 2.0**-40)
            exact = resid == 0.0
            bad = ~exact & (np.abs(resid) > cap)
            lanes += xh.size
            n_exact += int(exact.sum())
            violations += int(bad.sum())
            nz = denom != 0.0
            fill = np.abs(resid[nz]) / (u * u * np.abs(denom[nz]))
            if fill.size:
                worst_fill = max(worst_fill, float(fill.max()))
    return SweepReport(
        name=name,
        passed=violations == 0,
        lanes=lanes,
        violations=violations,
        worst={"fill_of_u2": worst_fill, "errorfree_frac": n_exact / max(lanes, 1)},
        params={"ps": ps, "n_dir_seqs": n_dir_seqs, "seed": seed},
        elapsed_s=time.perf_counter() - t0,
        notes=notes,
    )


def check_sloppy_fast2sum_validity(
    ps: tuple[int, ...] = (6, 7, 8), n_dir_seqs: int = 16, seed: int = 1093
) -> SweepReport:
    """The cheap addition's final Fast2Sum stays valid -- error-free or
    within 8u^2 relative error -- for overlaps up to 1/(8u) - 2 under every
    rounding mode and sampled direction sequence.  Under round-to-nearest it
    is error-free outright; directed roundings can lose an O(u^2) sliver in
    the final low-word rounding, never more."""
    return _check_final_fast2sum(
        "sloppy-final-fast2sum-validity",
        sloppy_add,
        ps,
        n_dir_seqs,
        seed,
        "normalize=False vs True: equal, or within 8u^2 relative",
    )


def check_accurate_fast2sum_validity(
    ps: tuple[int, ...] = (6, 7, 8), n_dir_seqs: int = 16, seed: int = 2197
) -> SweepReport:
    """Same statement for the accurate addition; its internal low-word 2Sum
    keeps the extra operand nonoverlapping, so no separate condition on the
    third overlap parameter is needed."""
    return _check_final_fast2sum(
        "accurate-final-fast2sum-validity",
        accurate_add,
        ps,
        n_dir_seqs,
        seed,
        "normalize=False vs True: equal, or within 8u^2 relative",
    )


# ---------------------------------------------------------------------------
# cancellation dichotomy for the cheap addition (round-to-nearest)


def check_cancellation_bound(
    p: int = 6,
    y_binades: tuple[int, ...] = (-4, -3, -2, -1, 0, 1),
    low_depth: int = 2,
    random_lanes: int = 2_000_000,
    seed: int = 3301,
    chunk: int = 4_000_000,
) -> SweepReport:
    """Cheap addition under round-to-nearest, x and y with opposite-sign
    high words:

    * cancellation ratio r <= 1/2  ->  relative error <= 3u^2 + 5u^3;
    * every lane beyond that bound has r > 1/2;
    * relative error > u happens only when |x_h| and |y_h| are adjacent on
      the precision-p grid (same-binade neighbors or across a power of two);
    * relative error < 2 everywhere.

    Exhaustive over: one x binade (scale invariance), every mantissa, low
    words spanning ``low_depth`` binades below half an ulp plus zero, with
    the nonoverlap filter round(h + l) == h applied exactly; y mirrored over
    ``y_binades``.  A stratified random stage with deeper low words backs up
    the structured grid.
    """
    t0 = time.perf_counter()
    u = 2.0**-p
    bound = 3.0 * u * u + 5.0 * u**3
    bk_maker = lambda: VectorSoftBackend(p, RoundingSpec(RN))

    xh0 = binade_values(p, 0)
    xl0 = low_word_grid(p, 0, low_depth)
    XH, XL = cartesian(xh0, xl0)
    keep = round_to_p(XH + XL, p, RN) == XH
    XH, XL = XH[keep], XL[keep]

    lanes = 0
    violations = 0
    max_rel_sterbenz = 0.0          # r <= 1/2 regime, in units of u^2
    max_rel_overall = 0.0
    n_exceed = 0                    # beyond 3u^2+5u^3
    n_exceed_r_ok = 0               # ... with r <= 1/2 (must stay 0)
    n_above_u = 0
    n_above_u_nonadjacent = 0       # must stay 0
    n_adjacent_same_binade = 0
    n_adjacent_boundary = 0

    def run_block(xh, xl, yh, yl):
        nonlocal lanes, violations, max_rel_sterbenz, max_rel_overall
        nonlocal n_exceed, n_exceed_r_ok, n_above_u, n_above_u_nonadjacent
        nonlocal n_adjacent_same_binade, n_adjacent_boundary
        z = sloppy_add(DoubleWord(xh, xl), DoubleWord(yh, yl), bk_maker())
        resid = _exact_residual([z.hi, z.lo], [xh, xl, yh, yl])
        denom = accurate_sum([xh, xl, yh, yl], passes=4)
        zero_den = denom == 0.0
        # exact-zero sums must come out exactly zero
        violations_here = int(np.sum(zero_den & (resid != 0.0)))
        rel = np.where(zero_den, 0.0, np.abs(resid) / np.abs(np.where(zero_den, 1.0, denom)))
        # r <= 1/2 decided exactly: 2*min(|xh|,|yh|) <= max(|xh|,|yh|)
        axh, ayh = np.abs(xh), np.abs(yh)
        opp = xh * yh < 0.0
        small = np.minimum(axh, ayh)
        big = np.maximum(axh, ayh)
        r_le_half = ~opp | (2.0 * small <= big)
        in_regime = r_le_half
        max_rel_sterbenz = max(max_rel_sterbenz, float(np.max(np.where(in_regime, rel, 0.0), initial=0.0)) / (u * u))
        max_rel_overall = max(max_rel_overall, float(rel.max(initial=0.0)))
        exceed = rel > bound
        n_exceed += int(exceed.sum())
        n_exceed_r_ok += int(np.sum(exceed & in_regime))
        above_u = rel > u
        n_above_u += int(above_u.sum())
        succ_small = _grid_successor(small, p)
        adjacent = big == succ_small
        _, e_small = np.frexp(small)
        _, e_big = np.frexp(big)
        same_binade = e_small == e_big
        n_adjacent_same_binade += int(np.sum(above_u & adjacent & same_binade))
        n_adjacent_boundary += int(np.sum(above_u & adjacent & ~same_binade))
        n_above_u_nonadjacent += int(np.sum(above_u & ~adjacent))
        violations += violations_here
        lanes += xh.size

    for by in y_binades:
        yh0 = -binade_values(p, by)
        yl0 = low_word_grid(p, by, low_depth)
        YH, YL = cartesian(yh0, yl0)
        keep_y = round_to_p(YH + YL, p, RN) == YH
        YH, YL = YH[keep_y], YL[keep_y]
        n_pairs = XH.size * YH.size
        for sl in chunk_slices(n_pairs, chunk):
            idx = np.arange(sl.start, sl.stop)
            ix, iy = idx // YH.size, idx % YH.size
            run_block(XH[ix], XL[ix], YH[iy], YL[iy])

    # stratified random stage: deeper low words, random binades
    done = 0
    stream = 1
    while done < random_lanes:
        n = min(chunk, random_lanes - done)
        g = philox_chunk(seed, stream)
        xh = random_p_floats(p, 0, 0, n, seed, stream * 7 + 1)
        xh = np.abs(xh)
        xl = random_p_floats(p, -p - 11, -p - 1, n, seed, stream * 7 + 2)
        yh = -np.abs(random_p_floats(p, min(y_binades), max(y_binades), n, seed, stream * 7 + 3))
        _, ey = np.frexp(yh)
        yl = random_p_floats(p, -p - 11, -p - 1, n, seed, stream * 7 + 4) * np.exp2(ey.astype(np.float64))
        ok = (round_to_p(xh + xl, p, RN) == xh) & (round_to_p(yh + yl, p, RN) == yh)
        run_block(xh[ok], xl[ok], yh[ok], yl[ok])
        done += n
        stream += 1

    passed = (
        violations == 0
        and n_exceed_r_ok == 0
        and n_above_u_nonadjacent == 0
        and max_rel_sterbenz <= 3.0 + 5.0 * u
        and max_rel_overall < 2.0
    )
    return SweepReport(
        name="sloppy-cancellation-bound",
        passed=passed,
        lanes=lanes,
        violations=violations + n_exceed_r_ok + n_above_u_nonadjacent,
        worst={
            "max_rel_over_u2_at_r_le_half": max_rel_sterbenz,
            "max_rel_overall": max_rel_overall,
            "exceedances_all_r_gt_half": n_exceed,
            "above_u_adjacent_same_binade": n_adjacent_same_binade,
            "above_u_adjacent_across_binade": n_adjacent_boundary,
            "above_u_nonadjacent": n_above_u_nonadjacent,
        },
        params={
            "p": p,
            "y_binades": y_binades,
            "low_depth": low_depth,
            "random_lanes": random_lanes,
            "seed": seed,
        },
        elapsed_s=time.perf_counter() - t0,
        notes="round-to-nearest; r <= 1/2 decided exactly; adjacency = grid successor",
    )


# ---------------------------------------------------------------------------
# overlap-parametric error bounds


def check_overlap_bound(
    ps: tuple[int, ...] = (6, 7, 8),
    n_dir_seqs: int = 8,
    seed: int = 4409,
) -> SweepReport:
    """Quantitative bounds, overlap-parametric, with o = max(o_x, o_y):

    * cheap addition, any faithful rounding (the four modes plus sampled
      per-op direction sequences): |error| <= (2o+3)u^2 (|x_h|+|y_h|),
      with 64u^3 (|x_h|+|y_h|) headroom for the higher-order terms;
    * accurate addition, round-to-nearest: relative error
      <= (3o+15)u^2 + 64u^3;
    * accurate addition, directed variant under RD/RU with low-word signs
      aligned to the direction: same (3o+15)u^2 + 64u^3 bound.

    u is 2^-p for round-to-nearest runs and 2^(1-p) for directed/faithful.
    """
    t0 = time.perf_counter()
    lanes = violations = 0
    worst_sloppy = 0.0   # measured/bound max
    worst_acc = 0.0
    worst_dir = 0.0

    for p in ps:
        # per-lane overlap from the actual words, with a hair of slack for
        # the float64 division (quantities sit far from the thresholds);
        # clamped to >= 1: any nonoverlapping low word satisfies the o = 1
        # hypothesis, and the admissible range starts there
        def o_of(h, l, u):
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.abs(l) / (u * np.abs(h))
            return np.where(np.abs(l) == 0.0, 0.0, r)

        # inputs are generated against the unit roundoff they will be
        # exercised under, so the overlap ladder never leaves the
        # admissible range [1, 1/(8u) - 2] for that rounding
        u_near = 2.0**-p
        u_dir = 2.0 ** (1 - p)
        inputs = {
            u_near: _overlap_inputs(p, u_near, seed + p),
            u_dir: _overlap_inputs(p, u_dir, seed + p),
        }

        # -- cheap addition under faithful roundings, absolute bound
        specs = [RoundingSpec(RN), RoundingSpec(RA), RoundingSpec(RD), RoundingSpec(RU)]
        specs += _random_direction_specs(n_dir_seqs, 24, seed + 31 * p)
        for spec in specs:
            u = float(spec.unit_roundoff(p))
            xh, xl, yh, yl, _ = inputs[u]
            o = np.maximum(np.maximum(o_of(xh, xl, u), o_of(yh, yl, u)), 1.0)
            z = sloppy_add(DoubleWord(xh, xl), DoubleWord(yh, yl), VectorSoftBackend(p, spec))
            resid = np.abs(_exact_residual([z.hi, z.lo], [xh, xl, yh, yl]))
            scale = np.abs(xh) + np.abs(yh)
            allowed = ((2.0 * o + 3.0) * u * u + 64.0 * u**3) * scale * (1.0 + 2.0**-40)
            bad = resid > allowed
            lanes += xh.size
            violations += int(bad.sum())
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(allowed > 0, resid / allowed, 0.0)
            worst_sloppy = max(worst_sloppy, float(ratio.max(initial=0.0)))

        # -- accurate addition, round-to-nearest, relative bound
        u = u_near
        xh, xl, yh, yl, _ = inputs[u_near]
        o = np.maximum(np.maximum(o_of(xh, xl, u), o_of(yh, yl, u)), 1.0)
        z = accurate_add(DoubleWord(xh, xl), DoubleWord(yh, yl), VectorSoftBackend(p, RoundingSpec(RN)))
        resid = np.abs(_exact_residual([z.hi, z.lo], [xh, xl, yh, yl]))
        denom = np.abs(accurate_sum([xh, xl, yh, yl], passes=4))
        nz = denom != 0.0
        allowed = ((3.0 * o + 15.0) * u * u + 64.0 * u**3) * np.where(nz, denom, 1.0) * (1.0 + 2.0**-40)
        bad = nz & (resid > allowed)
        bad |= (~nz) & (resid != 0.0)
        lanes += xh.size
        violations += int(bad.sum())
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(allowed > 0, resid / allowed, 0.0)
        worst_acc = max(worst_acc, float(ratio[nz].max(initial=0.0)))

        # -- directed accurate addition with sign-aligned low words
        u = u_dir
        xh, xl, yh, yl, _ = inputs[u_dir]
        for mode, sgn in ((RD, 1.0), (RU, -1.0)):
            xl_s = sgn * np.abs(xl)
            yl_s = sgn * np.abs(yl)
            o = np.maximum(np.maximum(o_of(xh, xl_s, u), o_of(yh, yl_s, u)), 1.0)
            z = accurate_add_directed(
                DoubleWord(xh, xl_s), DoubleWord(yh, yl_s), VectorSoftBackend(p, RoundingSpec(mode))
            )
            resid = np.abs(_exact_residual([z.hi, z.lo], [xh, xl_s, yh, yl_s]))
            denom = np.abs(accurate_sum([xh, xl_s, yh, yl_s], passes=4))
            nz = denom != 0.0
            allowed = ((3.0 * o + 15.0) * u * u + 64.0 * u**3) * np.where(nz, denom, 1.0) * (1.0 + 2.0**-40)
            bad = nz & (resid > allowed)
            bad |= (~nz) & (resid != 0.0)
            lanes += xh.size
            violations += int(bad.sum())
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(allowed > 0, resid / allowed, 0.0)
            worst_dir = max(worst_dir, float(ratio[nz].max(initial=0.0)))

    return SweepReport(
        name="overlap-parametric-bounds",
        passed=violations == 0,
        lanes=lanes,
        violations=violations,
        worst={
            "sloppy_faithful_abs_fill": worst_sloppy,
            "accurate_rn_rel_fill": worst_acc,
            "accurate_directed_rel_fill": worst_dir,
        },
        params={"ps": ps, "n_dir_seqs": n_dir_seqs, "seed": seed},
        elapsed_s=time.perf_counter() - t0,
        notes="fill = measured/bound, must stay <= 1",
    )


# ---------------------------------------------------------------------------
# direction consistency (uniform RD/RU) for point ops and intervals


def check_direction_consistency(
    p: int = 6,
    y_binades: tuple[int, ...] = (0, 1),
    random_lanes: int = 1_000_000,
    seed: int = 5513,
    chunk: int = 3_000_000,
) -> SweepReport:
    """Under uniform downward rounding every computed result must be <= the
    exact value; under upward, >=.  Checked for the cheap addition, the
    directed accurate addition, the product (low*low term kept, with and
    without normalization), the multiply-add pipeline, and -- lanewise -- the
    enclosure of the interval operations.  y high words take both signs here
    (this is not a cancellation-specific property).
    """
    t0 = time.perf_counter()
    lanes = violations = 0
    per_op: dict[str, int] = {}

    xh0 = binade_values(p, 0)
    xl0 = signed_with_zero(binade_values(p, -p - 1))
    XH, XL = cartesian(xh0, xl0)
    keep = round_to_p(XH + XL, p, RN) == XH
    XH, XL = XH[keep], XL[keep]

    def tally(op: str, n: int):
        nonlocal violations
        per_op[op] = per_op.get(op, 0) + n
        violations += n

    def point_checks(xh, xl, yh, yl):
        nonlocal lanes
        x = DoubleWord(xh, xl)
        y = DoubleWord(yh, yl)
        lanes += xh.size
        for mode, cmp_bad in ((RD, lambda r: r > 0.0), (RU, lambda r: r < 0.0)):
            bk = lambda: VectorSoftBackend(p, RoundingSpec(mode))
            z = sloppy_add(x, y, bk())
            tally(f"sloppy_add[{mode.value}]", int(cmp_bad(_exact_residual([z.hi, z.lo], [xh, xl, yh, yl])).sum()))
            z = accurate_add_directed(x, y, bk())
            tally(f"accurate_add_directed[{mode.value}]", int(cmp_bad(_exact_residual([z.hi, z.lo], [xh, xl, yh, yl])).sum()))
            prod_terms = [xh * yh, xh * yl, xl * yh, xl * yl]  # each exact in float64
            for norm in (True, False):
                z = dw_mul(x, y, bk(), normalize=norm, include_ll=True)
                resid = _exact_residual([z.hi, z.lo], prod_terms)
                tally(f"dw_mul[norm={norm},{mode.value}]", int(cmp_bad(resid).sum()))
            for cfg in (
                VariantConfig(add_algo="sloppy", normalize_add=False, normalize_mul=False, include_ll=True),
                VariantConfig(add_algo="accurate-directed", include_ll=True),
            ):
                z = maa(x, y, DoubleWord(yh, xl), bk(), cfg)
                resid = _exact_residual([z.hi, z.lo], prod_terms + [yh, xl])
                tally(f"maa[{cfg.label()},{mode.value}]", int(cmp_bad(resid).sum()))

    def interval_checks(xh, xl, yh, yl):
        # order two dw's into an interval per lane (exact compare on these
        # lattices is a plain float64 compare of the exact sums)
        av = xh + xl
        bv = yh + yl
        swap = av > bv
        lo = DoubleWord(np.where(swap, yh, xh), np.where(swap, yl, xl))
        hi = DoubleWord(np.where(swap, xh, yh), np.where(swap, xl, yl))
        X = DWInterval(lo, hi)
        # second interval: shifted variant of the first
        lo2 = DoubleWord(np.abs(yh), np.negative(np.abs(yl)))
        hi2 = DoubleWord(np.abs(yh) * 2.0, np.abs(xl))
        Y = DWInterval(lo2, hi2)
        fac = vector_soft_factory(p)
        xlv, xhv = lo.hi + lo.lo, hi.hi + hi.lo
        ylv, yhv = lo2.hi + lo2.lo, hi2.hi + hi2.lo

        S = iv_add(X, Y, fac)
        bad = (_exact_residual([S.lo.hi, S.lo.lo], [xlv, ylv]) > 0.0) | (
            _exact_residual([S.hi.hi, S.hi.lo], [xhv, yhv]) < 0.0
        )
        tally("iv_add", int(bad.sum()))

        P = iv_mul(X, Y, fac)
        prods = [xlv * ylv, xlv * yhv, xhv * ylv, xhv * yhv]
        tmin = np.minimum.reduce(prods)
        tmax = np.maximum.reduce(prods)
        bad = (_exact_residual([P.lo.hi, P.lo.lo], [tmin]) > 0.0) | (
            _exact_residual([P.hi.hi, P.hi.lo], [tmax]) < 0.0
        )
        tally("iv_mul", int(bad.sum()))

        M = iv_maa(X, Y, S, fac)
        slv = S.lo.hi + S.lo.lo
        shv = S.hi.hi + S.hi.lo
        bad = (_exact_residual([M.lo.hi, M.lo.lo], [tmin + slv]) > 0.0) | (
            _exact_residual([M.hi.hi, M.hi.lo], [tmax + shv]) < 0.0
        )
        tally("iv_maa", int(bad.sum()))

    for by in y_binades:
        for ysign in (1.0, -1.0):
            yh0 = ysign * binade_values(p, by)
            yl0 = signed_with_zero(binade_values(p, by - p - 1))
            YH, YL = cartesian(yh0, yl0)
            keep_y = round_to_p(YH + YL, p, RN) == YH
            YH, YL = YH[keep_y], YL[keep_y]
            n_pairs = XH.size * YH.size
            for sl in chunk_slices(n_pairs, chunk):
                idx = np.arange(sl.start, sl.stop)
                ix, iy = idx // YH.size, idx % YH.size
                point_checks(XH[ix], XL[ix], YH[iy], YL[iy])
                interval_checks(XH[ix], XL[ix], YH[iy], YL[iy])

    # random stage with deeper lows
    done, stream = 0, 1
    while done < random_lanes:
        n = min(chunk, random_lanes - done)
        xh = np.abs(random_p_floats(p, 0, 0, n, seed, stream * 5 + 1))
        xl = random_p_floats(p, -p - 9, -p - 1, n, seed, stream * 5 + 2)
        yh = random_p_floats(p, min(y_binades), max(y_binades), n, seed, stream * 5 + 3)
        _, ey = np.frexp(yh)
        yl = random_p_floats(p, -p - 9, -p - 1, n, seed, stream * 5 + 4) * np.exp2(ey.astype(np.float64))
        ok = (round_to_p(xh + xl, p, RN) == xh) & (round_to_p(yh + yl, p, RN) == yh)
        point_checks(xh[ok], xl[ok], yh[ok], yl[ok])
        interval_checks(xh[ok], xl[ok], yh[ok], yl[ok])
        done += n
        stream += 1

    return SweepReport(
        name="direction-consistency",
        passed=violations == 0,
        lanes=lanes,
        violations=violations,
        worst={k: v for k, v in sorted(per_op.items()) if v},
        params={"p": p, "y_binades": y_binades, "random_lanes": random_lanes, "seed": seed},
        elapsed_s=time.perf_counter() - t0,
        notes="per-op violation counts in `worst` (empty = all consistent)",
    )


# ---------------------------------------------------------------------------
# unnormalized product overlap


def check_unnormalized_mul_overlap(
    p: int = 6,
    random_lanes: int = 10_000_000,
    seed: int = 6007,
    chunk: int = 4_000_000,
) -> SweepReport:
    """The product's pre-normalization low word t satisfies
    |t| <= (3 + 16u) u |c_h| for nonoverlapping inputs (|lo| <= u |hi|):
    exhaustively at p = 6 (both with and without the low*low term, both
    nearest modes), and over random binary64 products on the native engine.
    """
    t0 = time.perf_counter()
    lanes = violations = 0
    worst_fill = 0.0

    # exhaustive p = 6 stage
    u6 = 2.0**-p
    xh0 = binade_values(p, 0)
    xl0 = low_word_grid(p, 0, 2)
    XH, XL = cartesian(xh0, xl0)
    keep = np.abs(XL) <= u6 * np.abs(XH)
    XH, XL = XH[keep], XL[keep]
    for ysign in (1.0, -1.0):
        n_pairs = XH.size * XH.size
        for sl in chunk_slices(n_pairs, chunk):
            idx = np.arange(sl.start, sl.stop)
            ix, iy = idx // XH.size, idx % XH.size
            xh, xl = XH[ix], XL[ix]
            yh, yl = ysign * XH[iy], ysign * XL[iy]
            for include_ll in (False, True):
                for mode in (RN, RA):
                    z = dw_mul(
                        DoubleWord(xh, xl), DoubleWord(yh, yl),
                        VectorSoftBackend(p, RoundingSpec(mode)),
                        normalize=False, include_ll=include_ll,
                    )
                    # |t| <= 3u|ch| + 16u^2|ch|, exactly evaluable here
                    ach = np.abs(z.hi)
                    slack = 3.0 * u6 * ach + 16.0 * u6 * u6 * ach - np.abs(z.lo)
                    bad = slack < 0.0
                    lanes += xh.size
                    violations += int(bad.sum())
                    with np.errstate(divide="ignore", invalid="ignore"):
                        fill = np.where(ach > 0, np.abs(z.lo) / ((3.0 + 16.0 * u6) * u6 * np.where(ach > 0, ach, 1.0)), 0.0)
                    worst_fill = max(worst_fill, float(fill.max(initial=0.0)))

    # random binary64 stage
    u = 2.0**-53
    done, stream = 0, 1
    while done < random_lanes:
        n = min(chunk, random_lanes - done)
        g = philox_chunk(seed, stream)
        xh = g.uniform(-1.0, 1.0, n) * np.exp2(g.integers(-30, 31, n).astype(np.float64))
        yh = g.uniform(-1.0, 1.0, n) * np.exp2(g.integers(-30, 31, n).astype(np.float64))
        lim_x = u * np.abs(xh)
        lim_y = u * np.abs(yh)
        xl = np.clip(xh * u * g.uniform(-1.0, 1.0, n), -lim_x, lim_x)
        yl = np.clip(yh * u * g.uniform(-1.0, 1.0, n), -lim_y, lim_y)
        z = dw_mul(DoubleWord(xh, xl), DoubleWord(yh, yl), VEC_NATIVE, normalize=False)
        # sign-exact comparison: 3u|ch| + 16u^2|ch| - |t| via distillation
        ach = np.abs(z.hi)
        terms = [u * ach, u * ach, u * ach, 16.0 * u * u * ach, -np.abs(z.lo)]
        slack = accurate_sum(terms, passes=4)
        bad = slack < 0.0
        lanes += n
        violations += int(bad.sum())
        with np.errstate(divide="ignore", invalid="ignore"):
            fill = np.where(ach > 0, np.abs(z.lo) / ((3.0 + 16.0 * u) * u * np.where(ach > 0, ach, 1.0)), 0.0)
        worst_fill = max(worst_fill, float(fill.max(initial=0.0)))
        done += n
        stream += 1

    return SweepReport(
        name="unnormalized-mul-overlap",
        passed=violations == 0,
        lanes=lanes,
        violations=violations,
        worst={"fill": worst_fill},
        params={"p": p, "random_lanes": random_lanes, "seed": seed},
        elapsed_s=time.perf_counter() - t0,
        notes="fill = |t| / ((3+16u) u |c_h|), must stay <= 1",
    )


# ---------------------------------------------------------------------------
# counterexample registry (frozen adversarial inputs)


@dataclass(frozen=True)
class CounterExample:
    """A frozen input pair with the claim it stresses."""

    name: str
    description: str
    x: tuple[int, int, int, int]   # (m_hi, e_hi, m_lo, e_lo), value m * 2^e
    y: tuple[int, int, int, int]

    def words(self) -> tuple[DoubleWord, DoubleWord]:
        mxh, exh, mxl, exl = self.x
        myh, eyh, myl, eyl = self.y
        x = DoubleWord(math.ldexp(mxh, exh), math.ldexp(mxl, exl))
        y = DoubleWord(math.ldexp(myh, eyh), math.ldexp(myl, eyl))
        return x, y

    def sloppy_rel_error_over_u2(self) -> float:
        """Exact relative error of the cheap addition on this input, in
        units of u^2 (binary64 round-to-nearest)."""
        x, y = self.words()
        z = sloppy_add(x, y, NATIVE)
        exact = dw_value(x) + dw_value(y)
        err = abs(dw_value(z) - exact)
        rel = err.as_fraction() / abs(exact).as_fraction()
        return float(rel / (Dyadic(1, -106).as_fraction()))


COUNTEREXAMPLES = {
    "worst-cancellation-a": CounterExample(
        name="worst-cancellation-a",
        description="drives the cheap addition's relative error to 3u^2 - O(u^3) at r = 1/2",
        x=(844424930131969, -49, 1, -53),
        y=(-4503599627370499, -53, 4714705859903487, -152),
    ),
    "worst-cancellation-b": CounterExample(
        name="worst-cancellation-b",
        description="second maximizer family for the 3u^2 cancellation bound",
        x=(6755399441055745, -52, 140737488355327, -100),
        y=(-4503599627370489, -53, 4714705859903487, -152),
    ),
}


def directed_repair_example() -> dict:
    """The adversarial downward-rounding input where plain accurate addition
    loses half its digits and the comparison-based variant is exact.

    Returns the measured relative errors of both algorithms under RD, in
    absolute terms and in units of u^2 (u = 2^-52 for directed rounding).
    """
    x = DoubleWord(math.ldexp(1, 52), 1.0 - 2.0**-53)
    y = DoubleWord(-math.ldexp(1, 52) - 1.0, 2.0**-107)
    exact = dw_value(x) + dw_value(y)
    out = {}
    for label, fn in (("accurate_add", accurate_add), ("accurate_add_directed", accurate_add_directed)):
        bk = Directed64Backend(RD)
        z = fn(x, y, bk)
        err = abs(dw_value(DoubleWord(float(z.hi), float(z.lo))) - exact)
        rel = err.as_fraction() / abs(exact).as_fraction()
        out[label + "_rel"] = float(rel)
        out[label + "_rel_over_u2"] = float(rel / (Dyadic(1, -104).as_fraction()))
    return out


def check_counterexamples() -> SweepReport:
    """The frozen adversarial inputs reproduce their claimed errors exactly:

    * both worst-cancellation pairs drive the cheap addition's relative
      error into [2.9999999999999, 3] * u^2 (the bound is 3u^2 + O(u^3),
      attained to 13 digits);
    * on the downward-rounding repair input, plain accurate addition's
      relative error is >= 2^-55 (catastrophic for a double-word) while the
      comparison-based directed variant stays within 18u^2.
    """
    t0 = time.perf_counter()
    worst: dict[str, float] = {}
    violations = 0
    for name, ce in COUNTEREXAMPLES.items():
        ratio = ce.sloppy_rel_error_over_u2()
        worst[name + "_over_u2"] = ratio
        if not (2.9999999999999 <= ratio <= 3.0):
            violations += 1
    rep = directed_repair_example()
    worst["plain_rel"] = rep["accurate_add_rel"]
    worst["directed_rel_over_u2"] = rep["accurate_add_directed_rel_over_u2"]
    if rep["accurate_add_rel"] < 2.0**-55:
        violations += 1
    if rep["accurate_add_directed_rel_over_u2"] > 18.0:
        violations += 1
    return SweepReport(
        name="counterexample-registry",
        passed=violations == 0,
        lanes=len(COUNTEREXAMPLES) + 1,
        violations=violations,
        worst=worst,
        params={},
        elapsed_s=time.perf_counter() - t0,
        notes="frozen adversarial inputs, exact dyadic error measurement",
    )


# ---------------------------------------------------------------------------
# multiply-add error statistics (the variant/accuracy trade-off table)


def modified_rel_error(d: DoubleWord, exact: Dyadic, scale: Dyadic) -> float:
    """|value(d) - exact| / scale, computed exactly and rounded once at the
    end.  ``scale`` is the outlier-robust denominator (for the multiply-add:
    |ab| + |c|), which keeps cancellation from dominating the statistics.
    A zero scale with a nonzero numerator reports as infinity."""
    if scale.sign < 0:
        raise UsageError("scale must be nonnegative")
    err = abs(dw_value(d) - exact)
    if scale.sign == 0:
        return 0.0 if err.sign == 0 else math.inf
    return float(err.as_fraction() / scale.as_fraction())


@dataclass
class ErrorStatsRow:
    """Aggregates of the modified relative error |d - (ab+c)| / (|ab| + |c|)
    over ``trials`` independent batches of n random double-word triples:
    mean and max within each batch, then mean/std/max across batches."""

    label: str
    omit_mul_norm: bool
    sloppy: bool
    avg_avg: float
    avg_std: float
    avg_max: float
    max_avg: float
    max_std: float
    max_max: float

    def line(self) -> str:
        return (
            f"{self.label:>9}  avg: {self.avg_avg:.3e} +- {self.avg_std:.2e} (max {self.avg_max:.3e})"
            f"  max: {self.max_avg:.3e} +- {self.max_std:.2e} (max {self.max_max:.3e})"
        )


# batch means of the modified relative error, measured on this generator and
# frozen for the acceptance gate (+-10%); the batch maxima fluctuate more and
# get a wide corridor instead
EXPECTED_MAA_AVG_AVG = {
    (False, False): 2.20e-33,
    (False, True): 2.53e-33,
    (True, False): 2.22e-33,
    (True, True): 2.60e-33,
}
MAA_MAX_CORRIDOR = (1.0e-32, 1.5e-31)


def _dw_batch(g: np.random.Generator, n: int, generator: str) -> DoubleWord:
    hi = g.uniform(-0.5, 0.5, n)
    if generator == "zero-lo":
        return DoubleWord(hi, np.zeros_like(hi))
    if generator == "split-lo":
        # the pair behaves like a uniform real split at 53 bits: lo is the
        # rounding residual, uniform within half an ulp of hi either way
        lo = g.uniform(-0.5, 0.5, n) * np.spacing(np.abs(hi))
        return DoubleWord(hi, lo)
    if generator != "scaled-lo":
        raise ValueError(f"unknown generator {generator!r}")
    lo = hi * (2.0**-53) * g.uniform(-1.0, 1.0, n)
    return DoubleWord(hi, lo)


def maa_error_stats(
    n: int = 1_000_000,
    trials: int = 10,
    seed: int = 20260818,
    generator: str = "split-lo",
) -> list[ErrorStatsRow]:
    """Modified relative error of the multiply-add pipeline on binary64, for
    the four structural variants (renormalized vs raw product) x (accurate
    vs cheap addition), over ``trials`` batches of n random triples.

    The default generator draws each operand as a uniform value in
    [-1/2, 1/2] split at 53 bits (low word = rounding residual).  "scaled-lo"
    widens the low words to a full ulp of slack, roughly 1.2x the average
    error; "zero-lo" (plain doubles) makes every variant exact and is only
    useful as a null check.
    """
    rows = []
    for omit_mul_norm in (False, True):
        for sloppy in (False, True):
            cfg = VariantConfig(
                add_algo="sloppy" if sloppy else "accurate",
                normalize_mul=not omit_mul_norm,
            )
            avgs, maxs = [], []
            for t in range(trials):
                g = philox_chunk(seed, t)
                a = _dw_batch(g, n, generator)
                b = _dw_batch(g, n, generator)
                c = _dw_batch(g, n, generator)
                d = maa(a, b, c, VEC_NATIVE, cfg)
                prod_terms = product_expansion_f64((a.hi, a.lo), (b.hi, b.lo))
                resid = accurate_sum(
                    [d.hi, d.lo] + [np.negative(t_) for t_ in prod_terms] + [np.negative(c.hi), np.negative(c.lo)],
                    passes=4,
                )
                denom = np.abs((a.hi + a.lo) * (b.hi + b.lo)) + np.abs(c.hi + c.lo)
                err = np.abs(resid) / denom
                avgs.append(float(err.mean()))
                maxs.append(float(err.max()))
            avgs_a = np.array(avgs)
            maxs_a = np.array(maxs)
            # a single batch has no spread estimate; report 0 rather than NaN
            # (NaN would also make the JSON output unparseable)
            def spread(v: np.ndarray) -> float:
                return float(v.std(ddof=1)) if v.size > 1 else 0.0

            label = f"{'yes' if omit_mul_norm else 'no'}/{'yes' if sloppy else 'no'}"
            rows.append(
                ErrorStatsRow(
                    label=label,
                    omit_mul_norm=omit_mul_norm,
                    sloppy=sloppy,
                    avg_avg=float(avgs_a.mean()),
                    avg_std=spread(avgs_a),
                    avg_max=float(avgs_a.max()),
                    max_avg=float(maxs_a.mean()),
                    max_std=spread(maxs_a),
                    max_max=float(maxs_a.max()),
                )
            )
    return rows


@dataclass
class ErrorProbabilityRow:
    """P(relative error of the cheap addition <= threshold) under random
    cancellation: analytic approximation next to a measured frequency."""

    regime: str  # "same-binade" or "adjacent-binade" high words
    k: int
    threshold: float
    analytic: float
    empirical: float  # NaN when sampling was skipped (n=0)

    def line(self) -> str:
        emp = "   --  " if math.isnan(self.empirical) else f"{self.empirical:7.5f}"
        return (
            f"{self.regime:>15}  k={self.k:>2}  eps <= {self.threshold:.3e}"
            f"  analytic {self.analytic:.5f}  empirical {emp}"
        )


def cancellation_error_probabilities(
    p: int = 12,
    k_list: Iterable[int] = (1, 2, 4, 6, 8),
    n: int = 40_000,
    seed: int = 0,
) -> list[ErrorProbabilityRow]:
    """How often heavy cancellation actually hurts the cheap addition.

    The worst-case bound is a tail event: the error exceeds 2^-p-k (same
    binade) or 3*2^-p-k (adjacent binades) only when the leading words
    cancel down to fewer than about k bits.  Treating both significands as
    uniform gives

        same binade:      P(eps <= 2^-p-k)   ~ (1 - 2^(k-(p-1)))^2
        adjacent binades: P(eps <= 3*2^-p-k) ~  1 - 2^(2(k-p))

    and the table reports those approximations next to measured frequencies
    from n sampled operand pairs per regime (ties-to-even, opposite-sign
    high words, low words anywhere within half an ulp).  Informational
    only: the sampler never asserts.  n=0 skips sampling (NaN column).
    """
    ks = [int(k) for k in k_list]
    if not ks:
        return []
    if not 3 <= int(p) <= 53:
        raise UsageError(f"p={p} outside the supported range [3, 53]")
    spec = RoundingSpec(RN)
    eps: dict[str, np.ndarray] = {}
    for idx, (regime, exp_gap) in enumerate((("same-binade", 0), ("adjacent-binade", 1))):
        if n == 0:
            eps[regime] = np.array([])
            continue
        g = philox_chunk(seed, idx)
        m_x = g.integers(2 ** (p - 1), 2**p, size=n)
        m_y = g.integers(2 ** (p - 1), 2**p, size=n)
        if exp_gap == 0:
            m_x, m_y = np.maximum(m_x, m_y), np.minimum(m_x, m_y)
        scale = 2.0 ** (1 - p)
        xh = m_x.astype(np.float64) * scale * (2.0**exp_gap)
        yh = -(m_y.astype(np.float64) * scale)
        half_ulp_x = 2.0 ** (exp_gap - p)
        xl = round_to_p(g.uniform(-1.0, 1.0, n) * half_ulp_x, p, RN)
        yl = round_to_p(g.uniform(-1.0, 1.0, n) * 2.0**-p, p, RN)
        res = sloppy_add(
            DoubleWord(xh, xl), DoubleWord(yh, yl), VectorSoftBackend(p, spec)
        )
        resid = _exact_residual([res.hi, res.lo], [xh, xl, yh, yl])
        den = np.abs(accurate_sum([xh, xl, yh, yl], passes=4))
        safe = np.where(den == 0.0, 1.0, den)
        eps[regime] = np.where(
            den == 0.0, np.where(resid == 0.0, 0.0, np.inf), np.abs(resid) / safe
        )
    rows = []
    for k in ks:
        for regime, thr, ana in (
            ("same-binade", 2.0 ** (-p - k), max(0.0, 1.0 - 2.0 ** (k - (p - 1))) ** 2),
            ("adjacent-binade", 3.0 * 2.0 ** (-p - k), max(0.0, 1.0 - 2.0 ** (2 * (k - p)))),
        ):
            emp = math.nan if n == 0 else float(np.mean(eps[regime] <= thr))
            rows.append(
                ErrorProbabilityRow(
                    regime=regime, k=k, threshold=thr, analytic=ana, empirical=emp
                )
            )
    return rows


# ---------------------------------------------------------------------------
# registry


ALL_CHECKS: dict[str, Callable[[], SweepReport]] = {
    "fast2sum-uls-exactness": check_fast2sum_uls_exactness,
    "sloppy-final-fast2sum-validity": check_sloppy_fast2sum_validity,
    "accurate-final-fast2sum-validity": check_accurate_fast2sum_validity,
    "sloppy-cancellation-bound": check_cancellation_bound,
    "overlap-parametric-bounds": check_overlap_bound,
    "direction-consistency": check_direction_consistency,
    "unnormalized-mul-overlap": check_unnormalized_mul_overlap,
    "counterexample-registry": check_counterexamples,
}
