"""Double-word arithmetic: a value is an unevaluated sum hi + lo of two
floating-point numbers, usually (but not necessarily) with |lo| <= u*|hi|.

The algorithms are written against the backend protocol, so the same code
runs on binary64, on the precision-p software engine in any rounding mode,
or under an operation-counting wrapper.  Structural choices that the
error analysis cares about are explicit keyword arguments:

* ``normalize``    -- whether to run the final renormalizing Fast2Sum.
* ``two_sum_fn``   -- plain 2Sum, or magnitude-select (compare + Fast2Sum).

``maa`` (multiply-accumulate-add: multiply then add, two roundings) wires
these choices together from a :class:`VariantConfig`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Literal, NamedTuple

from .backends import NATIVE, Backend
from .dyadic import Dyadic
from .eft import fast2sum, two_prod, two_sum, two_sum_magsel


class DoubleWord(NamedTuple):
    hi: Any
    lo: Any


TwoSumFn = Callable[..., tuple]


# ---------------------------------------------------------------------------
# addition


def sloppy_add(
    x: DoubleWord,
    y: DoubleWord,
    bk: Backend = NATIVE,
    *,
    normalize: bool = True,
    two_sum_fn: TwoSumFn = two_sum,
) -> DoubleWord:
    """Cheap double-word addition: the error of the low-part sum is dropped.

    11 additions (8 without the final normalization).  Relative error can
    reach O(1) under severe cancellation of the high words; with
    cancellation ratio at most 1/2 it stays within 3u^2 + O(u^3).
    """
    s_h, s_l = two_sum_fn(x.hi, y.hi, bk)
    v = bk.add(x.lo, y.lo)
    w = bk.add(s_l, v)
    if not normalize:
        return DoubleWord(s_h, w)
    return DoubleWord(*fast2sum(s_h, w, bk))


def accurate_add(
    x: DoubleWord,
    y: DoubleWord,
    bk: Backend = NATIVE,
    *,
    normalize: bool = True,
    two_sum_fn: TwoSumFn = two_sum,
    low_two_sum_fn: TwoSumFn | None = None,
) -> DoubleWord:
    """Double-word addition keeping both error terms; 20 additions.

    Relative error stays bounded by (3o+15)u^2 + O(u^3) even when the
    inputs overlap up to |lo| <= o*u*|hi| with o <= 1/(8u) - 2, regardless
    of cancellation.
    """
    if low_two_sum_fn is None:
        low_two_sum_fn = two_sum_fn
    s_h, s_l = two_sum_fn(x.hi, y.hi, bk)
    t_h, t_l = low_two_sum_fn(x.lo, y.lo, bk)
    c = bk.add(s_l, t_h)
    v_h, v_l = fast2sum(s_h, c, bk)
    w = bk.add(t_l, v_l)
    if not normalize:
        return DoubleWord(v_h, w)
    return DoubleWord(*fast2sum(v_h, w, bk))


def accurate_add_directed(
    x: DoubleWord,
    y: DoubleWord,
    bk: Backend = NATIVE,
    *,
    normalize: bool = True,
    two_sum_fn: TwoSumFn = two_sum,
) -> DoubleWord:
    """Accurate addition adapted to directed rounding: the low-part 2Sum is
    replaced by a magnitude comparison + Fast2Sum, which restores the
    (3o+15)u^2 relative error bound under RD/RU.

    The bound additionally needs the low words' signs to agree with the
    rounding direction (x.lo, y.lo >= 0 under RD; <= 0 under RU).  That is
    the caller's lookout -- see :func:`directed_low_signs_ok` -- and it is
    deliberately not enforced here: the algorithm itself is well defined
    either way.
    """
    return accurate_add(
        x,
        y,
        bk,
        normalize=normalize,
        two_sum_fn=two_sum_fn,
        low_two_sum_fn=two_sum_magsel,
    )


def directed_low_signs_ok(x: DoubleWord, y: DoubleWord, upward: bool, bk: Backend = NATIVE):
    """Diagnostic for accurate_add_directed's sign precondition: low words
    must be >= 0 when rounding down, <= 0 when rounding up.  Returns a bool
    for scalar words and an elementwise mask for array words."""
    sx, sy = bk.sign(x.lo), bk.sign(y.lo)
    if upward:
        return (sx <= 0) & (sy <= 0)
    return (sx >= 0) & (sy >= 0)


# ---------------------------------------------------------------------------
# multiplication and multiply-add


def dw_mul(
    x: DoubleWord,
    y: DoubleWord,
    bk: Backend = NATIVE,
    *,
    normalize: bool = True,
    include_ll: bool = False,
) -> DoubleWord:
    """Double-word product: 2Prod of the high words, cross terms folded in
    with fma.  4 multiplications + 6 additions (3 without normalization).

    With normalization skipped the result words can overlap by a factor up
    to 3 + O(u) -- i.e. |lo| <= (3 + O(u)) * u * |hi| -- which the robust
    addition algorithms tolerate, so a multiply feeding an add may skip it.
    ``include_ll`` also folds in the lo*lo term (one extra multiplication).
    """
    c_h, c_l = two_prod(x.hi, y.hi, bk)
    if include_ll:
        t0 = bk.mul(x.lo, y.lo)
        t1 = bk.fma(x.hi, y.lo, t0)
    else:
        t1 = bk.mul(x.hi, y.lo)
    t2 = bk.fma(x.lo, y.hi, t1)
    t = bk.add(c_l, t2)
    if not normalize:
        return DoubleWord(c_h, t)
    return DoubleWord(*fast2sum(c_h, t, bk))


AddAlgo = Literal["sloppy", "accurate", "accurate-directed"]

_ADD_FNS = {
    "sloppy": sloppy_add,
    "accurate": accurate_add,
    "accurate-directed": accurate_add_directed,
}


@dataclass(frozen=True)
class VariantConfig:
    """Which structural variant of the multiply-add to run.

    ``magsel`` swaps every 2Sum for a magnitude comparison + Fast2Sum
    (2 comparisons + 3 additions instead of 6 additions).
    """

    add_algo: AddAlgo = "accurate"
    normalize_add: bool = True
    normalize_mul: bool = True
    magsel: bool = False
    include_ll: bool = False

    def __post_init__(self) -> None:
        if self.add_algo not in _ADD_FNS:
            raise ValueError(f"unknown add_algo {self.add_algo!r}")

    @property
    def two_sum_fn(self) -> TwoSumFn:
        return two_sum_magsel if self.magsel else two_sum

    def label(self) -> str:
        parts = [
            f"add={self.add_algo}",
            f"norm_add={'no' if not self.normalize_add else 'yes'}",
            f"norm_mul={'no' if not self.normalize_mul else 'yes'}",
        ]
        if self.magsel:
            parts.append("magsel")
        if self.include_ll:
            parts.append("ll")
        return ",".join(parts)


def dw_add(x: DoubleWord, y: DoubleWord, bk: Backend = NATIVE, cfg: VariantConfig = VariantConfig()) -> DoubleWord:
    add_fn = _ADD_FNS[cfg.add_algo]
    return add_fn(x, y, bk, normalize=cfg.normalize_add, two_sum_fn=cfg.two_sum_fn)


def maa(
    x: DoubleWord,
    y: DoubleWord,
    c: DoubleWord,
    bk: Backend = NATIVE,
    cfg: VariantConfig = VariantConfig(),
) -> DoubleWord:
    """Multiply-then-add x*y + c with separate roundings per stage."""
    prod = dw_mul(x, y, bk, normalize=cfg.normalize_mul, include_ll=cfg.include_ll)
    return dw_add(prod, c, bk, cfg)


# ---------------------------------------------------------------------------
# diagnostics


def dw_value(x: DoubleWord) -> Dyadic:
    """Exact value hi + lo as a dyadic rational.  Works for float words and
    for software-float words (anything exposing .value() -> Dyadic)."""
    parts = []
    for w in (x.hi, x.lo):
        if hasattr(w, "value"):
            parts.append(w.value())
        else:
            parts.append(Dyadic.from_float(float(w)))
    return parts[0] + parts[1]


def cancellation_ratio(a, b, bk: Backend = NATIVE) -> float:
    """r(a, b) = min(|a|,|b|) / max(|a|,|b|) when a and b have opposite
    signs, else 0.  Values in [1/2, 1] are the Sterbenz regime: a + b is
    exact.  Computed in binary64; a diagnostic, not a proof quantity."""
    fa, fb = bk.to_float(a), bk.to_float(b)
    if fa * fb >= 0.0:
        return 0.0
    fa, fb = abs(fa), abs(fb)
    return min(fa, fb) / max(fa, fb)


def overlap_factor(x: DoubleWord, bk: Backend = NATIVE) -> float:
    """o such that |lo| = o * u * |hi|: zero for lo == 0, inf for hi == 0.
    Binary64 diagnostic; the exact-arithmetic checkers compute their own."""
    hi, lo = abs(bk.to_float(x.hi)), abs(bk.to_float(x.lo))
    if lo == 0.0:
        return 0.0
    if hi == 0.0:
        return float("inf")
    return lo / (bk.unit_roundoff() * hi)


def gamma_bound(n: int, eps: float) -> float:
    """gamma_n = n*eps / (1 - n*eps), the standard accumulation factor for
    n successive operations with per-operation bound eps."""
    ne = n * eps
    if ne >= 1.0:
        raise ValueError(f"gamma undefined: n*eps = {ne} >= 1")
    return ne / (1.0 - ne)
