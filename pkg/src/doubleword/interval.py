"""Interval arithmetic with double-word endpoints.

An interval is a pair of double-word numbers [lo, hi] with
value(lo) <= value(hi).  Each endpoint of a result is computed under a
single directed rounding mode -- DOWN for the lower endpoint, UP for the
upper -- so that the directed variants of the double-word algorithms make
the endpoint itself a valid bound: no post-hoc widening of correctly
rounded results, just direction-consistent arithmetic all the way down.

Backends are supplied through a factory ``factory(mode) -> Backend`` so the
same functions run on emulated directed binary64 (the default), on the
precision-p software engine, or vectorized over numpy arrays.  Results are
pure functions of the inputs: every operation of an endpoint's chain runs
on a backend fixed in that endpoint's direction, and the factory is checked
up front so a mode switch mid-chain is impossible.

Addition fast path: the tight directed variant of accurate addition wants
low words to be >= 0 under DOWN (<= 0 under UP).  Endpoints that were
themselves produced by a normalized directed chain satisfy this for free --
the residue b - (s - a) captured by a final Fast2Sum is nonnegative when
every rounding is downward, and nonpositive when upward -- so chained
interval arithmetic stays on the fast path.  Foreign endpoints (user data,
unnormalized products) that violate the sign condition fall back,
elementwise, to sloppy addition pushed outward by one second-word ulp
(2^(1-p) * ulp(hi), a single extra directed operation).  Enclosure never
depends on the fallback -- direction consistency alone gives it -- the
fallback only restores a clean width story where the tight bound's
precondition fails.

Multiplication is the nine-case sign decomposition, done branch-free:
all four endpoint products are formed in each direction and the relevant
ones selected with masks, so the same source runs on scalars and on array
lanes with per-lane sign cases.  The mixed*mixed min/max compares candidate
endpoints by exact double-word value (never by rounded approximations).

Out of scope, deliberately: division, transcendentals, and
round-to-nearest enclosures with half-ulp certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable

import numpy as np

from . import hexfloat
from .backends import Backend, SoftBackend
from .core import (
    DoubleWord,
    accurate_add_directed,
    directed_low_signs_ok,
    dw_mul,
    dw_value,
    sloppy_add,
)
from .dyadic import Dyadic
from .softfloat import MiniFloat, RoundingMode, RoundingSpec, UsageError
from .vector import Directed64Backend, VectorSoftBackend, accurate_sum

BackendFactory = Callable[[RoundingMode], Backend]


def directed64_factory(mode: RoundingMode) -> Backend:
    """Default endpoint backend: emulated directed binary64."""
    return Directed64Backend(mode)


def soft_factory(p: int) -> BackendFactory:
    """Endpoint backends on the scalar software engine at precision p."""
    return lambda mode: SoftBackend(p, RoundingSpec(mode))


def vector_soft_factory(p: int) -> BackendFactory:
    """Endpoint backends on the vectorized software engine at precision p."""
    return lambda mode: VectorSoftBackend(p, RoundingSpec(mode))


def _directed(factory: BackendFactory, mode: RoundingMode) -> Backend:
    bk = factory(mode)
    spec = getattr(bk, "spec", None)
    actual = spec.mode if spec is not None else getattr(bk, "mode", None)
    if actual is not mode:
        raise UsageError(f"interval factory built a {actual} backend where {mode} was required")
    if spec is not None and spec.directions is not None:
        raise UsageError("interval endpoints need a fixed rounding direction, not a per-op sequence")
    return bk


@dataclass(frozen=True)
class DWInterval:
    """[lo, hi] with double-word endpoints; invariant value(lo) <= value(hi).

    Both endpoints keep their words' overlap within 3 + 16u of a clean
    double-word: normalized results are far inside that, unnormalized
    products reach ~3, and the fallback widening adds O(u).  The bound is
    tracked (``max_overlap``, ``assert_valid``), not silently enforced.
    """

    lo: DoubleWord
    hi: DoubleWord

    def __str__(self) -> str:
        return format_interval(self)


def _zero_like(w: Any) -> Any:
    if isinstance(w, MiniFloat):
        return MiniFloat.zero(w.p)
    if isinstance(w, np.ndarray):
        return np.zeros_like(w)
    return 0.0


def iv_point(x: DoubleWord) -> DWInterval:
    """Degenerate interval [x, x]."""
    return DWInterval(x, x)


def iv_from_floats(lo: float, hi: float) -> DWInterval:
    a = DoubleWord(lo, _zero_like(lo))
    b = DoubleWord(hi, _zero_like(hi))
    return DWInterval(a, b)


def iv_neg(x: DWInterval) -> DWInterval:
    """-[a, b] = [-b, -a]; negation is exact, no rounding ops."""
    return DWInterval(
        DoubleWord(-x.hi.hi, -x.hi.lo),
        DoubleWord(-x.lo.hi, -x.lo.lo),
    )


# ---------------------------------------------------------------------------
# exact endpoint comparisons


def _is_vector(w: Any) -> bool:
    # 0-d arrays (numpy scalar results) count as scalars
    return isinstance(w, np.ndarray) and w.ndim > 0


def _le_mask(a: DoubleWord, b: DoubleWord):
    """Mask for value(a) <= value(b), decided on exact values.

    Scalar words go through dyadic rationals; array words distill
    a.hi + a.lo - b.hi - b.lo error-free, whose sign is then exact.
    """
    if _is_vector(a.hi) or _is_vector(b.hi):
        terms = [
            np.asarray(a.hi, np.float64),
            np.asarray(a.lo, np.float64),
            np.negative(np.asarray(b.hi, np.float64)),
            np.negative(np.asarray(b.lo, np.float64)),
        ]
        return accurate_sum(terms, passes=4) <= 0.0
    return dw_value(a) <= dw_value(b)


def _dw_select(bk: Backend, cases: Iterable[tuple], default: DoubleWord) -> DoubleWord:
    """First-match-wins selection over (mask, DoubleWord) pairs."""
    hi, lo = default.hi, default.lo
    for mask, dw in reversed(list(cases)):
        hi = bk.where(mask, dw.hi, hi)
        lo = bk.where(mask, dw.lo, lo)
    return DoubleWord(hi, lo)


def _dw_min(a: DoubleWord, b: DoubleWord, bk: Backend) -> DoubleWord:
    m = _le_mask(a, b)
    return DoubleWord(bk.where(m, a.hi, b.hi), bk.where(m, a.lo, b.lo))


def _dw_max(a: DoubleWord, b: DoubleWord, bk: Backend) -> DoubleWord:
    m = _le_mask(a, b)
    return DoubleWord(bk.where(m, b.hi, a.hi), bk.where(m, b.lo, a.lo))


# ---------------------------------------------------------------------------
# addition


def _delta_word(zh: Any, bk: Backend) -> Any:
    """One ulp of the second word: 2^(1-p) * ulp(zh), as a backend scalar.

    Always a power of two, hence exactly representable.  Zero high words
    get a zero delta (the sum was exact).  In binary64 the delta of a deeply
    subnormal high word underflows to zero; enclosure is untouched (it never
    relied on the widening), only the width bookkeeping goes quiet there.
    """
    p = bk.precision
    if isinstance(zh, MiniFloat):
        if zh.sign == 0:
            return MiniFloat.zero(p)
        return MiniFloat(p, 1, 1 << (p - 1), zh.exp + 2 - 2 * p)
    if _is_vector(zh):
        _, e = np.frexp(zh)
        d = np.ldexp(1.0, (e + 1 - 2 * p).astype(np.int32))
        return np.where(zh == 0.0, 0.0, d)
    z = float(zh)
    if z == 0.0:
        return 0.0
    _, e = math.frexp(abs(z))
    return math.ldexp(1.0, e + 1 - 2 * p)


def _endpoint_add(a: DoubleWord, b: DoubleWord, bk: Backend, upward: bool) -> DoubleWord:
    """One directed endpoint sum: tight path where the sign precondition
    holds, widened sloppy path where it does not.  Both paths are computed
    so the selection is branch-free across array lanes."""
    ok = directed_low_signs_ok(a, b, upward, bk)
    tight = accurate_add_directed(a, b, bk)
    rough = sloppy_add(a, b, bk)
    delta = _delta_word(rough.hi, bk)
    if upward:
        widened_lo = bk.add(rough.lo, delta)
    else:
        widened_lo = bk.sub(rough.lo, delta)
    widened = DoubleWord(rough.hi, widened_lo)
    return _dw_select(bk, [(ok, tight)], widened)


def iv_add(x: DWInterval, y: DWInterval, factory: BackendFactory = directed64_factory) -> DWInterval:
    """Interval sum: lower endpoint all-DOWN, upper endpoint all-UP."""
    bkd = _directed(factory, RoundingMode.DOWN)
    bku = _directed(factory, RoundingMode.UP)
    lo = _endpoint_add(x.lo, y.lo, bkd, upward=False)
    hi = _endpoint_add(x.hi, y.hi, bku, upward=True)
    return DWInterval(lo, hi)


# ---------------------------------------------------------------------------
# multiplication


def _dw_sign(x: DoubleWord, bk: Backend):
    """Sign of the exact value hi + lo.  The words' overlap is far below
    1/u, so hi dominates whenever it is nonzero; lo breaks the tie."""
    sh, sl = bk.sign(x.hi), bk.sign(x.lo)
    return bk.where(sh != 0, sh, sl)


def iv_mul(
    x: DWInterval,
    y: DWInterval,
    factory: BackendFactory = directed64_factory,
    *,
    normalize: bool = True,
) -> DWInterval:
    """Interval product by sign cases, selected branch-free.

    All four endpoint products are formed under each direction (eight
    double-word multiplications) and masks pick the nine-case winners, so
    scalar and per-lane array calls share this one source.  The mixed*mixed
    row takes a min/max decided on exact endpoint values.  ``normalize``
    passes through to the underlying product.

    The low*low term is always kept here, unlike the point product's
    default.  Dropping it discards a signed quantity outright, and when its
    sign points inward it undoes what directed rounding guaranteed: with
    x = (14.5, 2^-4) and y = (-18.5, 2^-4) at p = 6, every rounding done
    upward still lands 2^-8 below the exact product.  One extra fma per
    endpoint product buys enclosure that holds with no caveats.
    """
    bkd = _directed(factory, RoundingMode.DOWN)
    bku = _directed(factory, RoundingMode.UP)

    # np.asarray makes the masks safe under ~ and & for scalars and lanes alike
    # (a bare Python bool would turn ~True into -2)
    xn = np.asarray(_dw_sign(x.lo, bkd) >= 0)   # x entirely >= 0
    xp = np.asarray(_dw_sign(x.hi, bkd) <= 0)   # x entirely <= 0
    yn = np.asarray(_dw_sign(y.lo, bkd) >= 0)
    yp = np.asarray(_dw_sign(y.hi, bkd) <= 0)
    xm = ~(xn | xp)                             # x straddles zero
    ym = ~(yn | yp)

    def products(bk):
        ll = dw_mul(x.lo, y.lo, bk, normalize=normalize, include_ll=True)
        lh = dw_mul(x.lo, y.hi, bk, normalize=normalize, include_ll=True)
        hl = dw_mul(x.hi, y.lo, bk, normalize=normalize, include_ll=True)
        hh = dw_mul(x.hi, y.hi, bk, normalize=normalize, include_ll=True)
        return ll, lh, hl, hh

    d_ll, d_lh, d_hl, d_hh = products(bkd)
    u_ll, u_lh, u_hl, u_hh = products(bku)

    lower = _dw_select(
        bkd,
        [
            (xm & ym, _dw_min(d_lh, d_hl, bkd)),
            (xn & yn, d_ll),
            (xp & yp, d_hh),
            ((xn & (yp | ym)) | (xm & yp), d_hl),
        ],
        d_lh,  # x <= 0 with y >= 0 or mixed; mixed x with y >= 0
    )
    upper = _dw_select(
        bku,
        [
            (xm & ym, _dw_max(u_ll, u_hh, bku)),
            ((xn & (yn | ym)) | (xm & yn), u_hh),
            ((xp & (yp | ym)) | (xm & yp), u_ll),
            (xn & yp, u_lh),
        ],
        u_hl,  # x <= 0, y >= 0
    )
    return DWInterval(lower, upper)


def iv_maa(
    a: DWInterval,
    b: DWInterval,
    c: DWInterval,
    factory: BackendFactory = directed64_factory,
) -> DWInterval:
    """Enclosure of a*b + c: unnormalized product, then interval sum.

    Skipping the product's renormalization mirrors the cheap multiply-add
    pipeline; each endpoint chain still runs under its single direction,
    and the sum's fallback handles the product's unconstrained low signs.
    """
    return iv_add(iv_mul(a, b, factory, normalize=False), c, factory)


# ---------------------------------------------------------------------------
# diagnostics, validity, text form


def contains(iv: DWInterval, v) -> bool:
    """Exact membership test for scalar intervals; v is int, float, or
    Dyadic.  Decided on exact endpoint values."""
    if isinstance(v, Dyadic):
        dv = v
    elif isinstance(v, int):
        dv = Dyadic.from_int(v)
    else:
        dv = Dyadic.from_float(float(v))
    return dw_value(iv.lo) <= dv and dv <= dw_value(iv.hi)


def contains_mask(iv: DWInterval, v: np.ndarray):
    """Elementwise membership for array intervals: value(lo) <= v <= value(hi)."""
    v = np.asarray(v, np.float64)
    lo_ok = _le_mask(iv.lo, DoubleWord(v, np.zeros_like(v)))
    hi_ok = _le_mask(DoubleWord(v, np.zeros_like(v)), iv.hi)
    return lo_ok & hi_ok


def width(iv: DWInterval) -> Dyadic:
    """Exact width value(hi) - value(lo) of a scalar interval."""
    return dw_value(iv.hi) - dw_value(iv.lo)


def _overlap_lanes(dw: DoubleWord, u: float) -> np.ndarray:
    hi = np.abs(np.asarray(dw.hi, np.float64))
    lo = np.abs(np.asarray(dw.lo, np.float64))
    out = np.where(lo == 0.0, 0.0, lo / (u * np.where(hi == 0.0, np.nan, hi)))
    return np.where((lo != 0.0) & (hi == 0.0), np.inf, out)


def max_overlap(iv: DWInterval, bk_or_u) -> float:
    """Largest |lo| / (u*|hi|) over both endpoints (and all lanes).

    Pass the endpoint backend or the unit roundoff itself.  Measured in
    binary64, which is exact for every precision the engines support."""
    u = bk_or_u if isinstance(bk_or_u, float) else bk_or_u.unit_roundoff()
    if isinstance(iv.lo.hi, MiniFloat):
        lanes = [
            _overlap_lanes(DoubleWord(float(dw.hi), float(dw.lo)), u)
            for dw in (iv.lo, iv.hi)
        ]
    else:
        lanes = [_overlap_lanes(dw, u) for dw in (iv.lo, iv.hi)]
    return float(np.max([np.max(x) for x in lanes]))


def assert_valid(iv: DWInterval, bk_or_u=None, overlap_limit: float | None = None) -> None:
    """Check value(lo) <= value(hi) everywhere (exactly), and optionally the
    endpoints' word-overlap budget.  Raises ValueError on violation."""
    ok = _le_mask(iv.lo, iv.hi)
    if not bool(np.all(ok)):
        raise ValueError("interval invariant violated: value(lo) > value(hi)")
    if overlap_limit is not None:
        o = max_overlap(iv, bk_or_u)
        if o > overlap_limit:
            raise ValueError(f"endpoint overlap {o} exceeds limit {overlap_limit}")


def _format_word(w: Any) -> str:
    if isinstance(w, MiniFloat):
        return hexfloat.from_minifloat(w)
    return hexfloat.from_float(float(w))


def format_interval(iv: DWInterval) -> str:
    """Text form "[lo_hi lo_lo, hi_hi hi_lo]" in exact hex-float notation."""
    if _is_vector(iv.lo.hi):
        raise UsageError("text form is for scalar intervals; index a lane first")
    return "[{} {}, {} {}]".format(
        _format_word(iv.lo.hi),
        _format_word(iv.lo.lo),
        _format_word(iv.hi.hi),
        _format_word(iv.hi.lo),
    )


def parse_interval(s: str, p: int | None = None) -> DWInterval:
    """Inverse of :func:`format_interval`.  With p, words become software
    floats at that precision; without, binary64."""
    body = s.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"malformed interval text: {s!r}")
    halves = body[1:-1].split(",")
    if len(halves) != 2:
        raise ValueError(f"malformed interval text: {s!r}")
    words = []
    for half in halves:
        toks = half.split()
        if len(toks) != 6:
            raise ValueError(f"malformed interval endpoint: {half!r}")
        for i in (0, 3):
            text = " ".join(toks[i : i + 3])
            if p is None:
                words.append(hexfloat.to_float(text))
            else:
                words.append(hexfloat.to_minifloat(text, p))
    return DWInterval(DoubleWord(words[0], words[1]), DoubleWord(words[2], words[3]))
