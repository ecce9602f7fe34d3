"""Radix-2, precision-p floating point with unbounded exponent range.

The point system here is deliberately simpler than IEEE 754: no subnormals, no
overflow, no NaN/infinity.  A value is zero or ``sign * M * 2**e`` with
``2**(p-1) <= M < 2**p``.  That makes every statement about rounding errors a
statement about the significand arithmetic alone, which is exactly what the
double-word error bounds quantify over.

Rounding is defined *from the exact value*: every operation computes its result
as a :class:`~doubleword.dyadic.Dyadic` and rounds once.  Four modes are
supported; directed modes can also be supplied per-operation as a sequence (a
"faithful rounding" schedule), consumed left to right.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .dyadic import Dyadic


class UsageError(ValueError):
    """Caller misconfiguration (precision mismatch, bad mode, exhausted
    direction sequence...).  The CLI maps this to exit status 2."""


class RoundingMode(enum.Enum):
    NEAREST_EVEN = "nearest-even"
    NEAREST_AWAY = "nearest-away"
    DOWN = "down"
    UP = "up"

    @property
    def is_nearest(self) -> bool:
        return self in (RoundingMode.NEAREST_EVEN, RoundingMode.NEAREST_AWAY)

    @property
    def is_directed(self) -> bool:
        return not self.is_nearest


DIRECTED_MODES = (RoundingMode.DOWN, RoundingMode.UP)


@dataclass(frozen=True)
class RoundingSpec:
    """Either a fixed rounding mode, or an explicit per-operation direction
    sequence (entries restricted to DOWN/UP).

    With a sequence, callers must go through :meth:`state` so consumption is
    explicit; the unit roundoff is then the directed one.
    """

    mode: RoundingMode = RoundingMode.NEAREST_EVEN
    directions: tuple[RoundingMode, ...] | None = None

    def __post_init__(self) -> None:
        if self.directions is not None:
            bad = [d for d in self.directions if d not in DIRECTED_MODES]
            if bad:
                raise UsageError(f"direction sequence may only contain DOWN/UP, got {bad}")

    def unit_roundoff(self, p: int) -> Dyadic:
        """u = 2**-p for round-to-nearest, 2**(1-p) for directed/faithful."""
        if self.directions is None and self.mode.is_nearest:
            return Dyadic(1, -p)
        return Dyadic(1, 1 - p)

    def state(self) -> "RoundingState":
        return RoundingState(self)


class RoundingState:
    """Consumes a RoundingSpec one operation at a time and keeps a ledger of
    the direction every operation actually used."""

    def __init__(self, spec: RoundingSpec):
        self.spec = spec
        self._i = 0
        self.ledger: list[RoundingMode] = []

    def take(self) -> RoundingMode:
        if self.spec.directions is None:
            mode = self.spec.mode
        else:
            if self._i >= len(self.spec.directions):
                raise UsageError(
                    f"direction sequence exhausted after {self._i} operations"
                )
            mode = self.spec.directions[self._i]
            self._i += 1
        self.ledger.append(mode)
        return mode

    @property
    def ops_performed(self) -> int:
        return len(self.ledger)


Rounding = Union[RoundingSpec, RoundingState]


def _as_state(rounding: Rounding) -> RoundingState:
    if isinstance(rounding, RoundingState):
        return rounding
    if rounding.directions is not None:
        raise UsageError(
            "a direction sequence is stateful; call RoundingSpec.state() once "
            "and pass the state through all operations"
        )
    return rounding.state()


# ---------------------------------------------------------------------------
# values


@dataclass(frozen=True, slots=True)
class MiniFloat:
    """A precision-``p`` float: zero, or sign * mant * 2**exp with a
    normalized significand ``2**(p-1) <= mant < 2**p``."""

    p: int
    sign: int
    mant: int
    exp: int

    def __post_init__(self) -> None:
        if self.p < 2:
            raise UsageError(f"precision must be >= 2, got {self.p}")
        if self.sign == 0:
            if self.mant != 0 or self.exp != 0:
                raise ValueError("zero must be encoded as (sign=0, mant=0, exp=0)")
        elif self.sign in (-1, 1):
            if not (1 << (self.p - 1)) <= self.mant < (1 << self.p):
                raise ValueError(
                    f"significand {self.mant} not normalized for p={self.p}"
                )
        else:
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")

    @staticmethod
    def zero(p: int) -> "MiniFloat":
        return MiniFloat(p, 0, 0, 0)

    @staticmethod
    def from_dyadic_exact(x: Dyadic, p: int) -> "MiniFloat":
        """Exact conversion; raises ValueError if x needs more than p bits."""
        if x.is_zero:
            return MiniFloat.zero(p)
        width = abs(x.m).bit_length()
        if width > p:
            raise ValueError(f"{x} has {width} significand bits, does not fit p={p}")
        shift = p - width
        return MiniFloat(p, x.sign, abs(x.m) << shift, x.e - shift)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def value(self) -> Dyadic:
        return Dyadic.normalize(self.sign * self.mant, self.exp)

    def __float__(self) -> float:
        return float(self.value())

    def __neg__(self) -> "MiniFloat":
        if self.is_zero:
            return self
        return MiniFloat(self.p, -self.sign, self.mant, self.exp)

    def __abs__(self) -> "MiniFloat":
        if self.sign < 0:
            return -self
        return self

    def next_up(self) -> "MiniFloat":
        """Smallest representable value greater than self (zero has none:
        the exponent range is unbounded below)."""
        if self.is_zero:
            raise UsageError("next_up(0) is undefined with unbounded exponents")
        if self.sign > 0:
            m, e = self.mant + 1, self.exp
            if m == 1 << self.p:
                m, e = 1 << (self.p - 1), e + 1
            return MiniFloat(self.p, 1, m, e)
        m, e = self.mant - 1, self.exp
        if m < 1 << (self.p - 1):
            m, e = (1 << self.p) - 1, e - 1
        return MiniFloat(self.p, -1, m, e)

    def next_down(self) -> "MiniFloat":
        return -((-self).next_up())


# ---------------------------------------------------------------------------
# rounding


def round_dyadic(x: Dyadic, p: int, mode: RoundingMode) -> MiniFloat:
    """Round the exact value x to precision p in the given mode."""
    if x.is_zero:
        return MiniFloat.zero(p)
    neg = x.m < 0
    am = abs(x.m)
    shift = am.bit_length() - p
    if shift <= 0:
        return MiniFloat(p, x.sign, am << -shift, x.e + shift)
    q, r = am >> shift, am & ((1 << shift) - 1)
    if r:
        if mode is RoundingMode.NEAREST_EVEN:
            half = 1 << (shift - 1)
            if r > half or (r == half and q & 1):
                q += 1
        elif mode is RoundingMode.NEAREST_AWAY:
            if r >= 1 << (shift - 1):
                q += 1
        elif mode is RoundingMode.DOWN:
            if neg:
                q += 1
        elif mode is RoundingMode.UP:
            if not neg:
                q += 1
        else:  # pragma: no cover
            raise UsageError(f"unknown rounding mode {mode!r}")
    e = x.e + shift
    if q == 1 << p:
        q >>= 1
        e += 1
    return MiniFloat(p, -1 if neg else 1, q, e)


def _round_op(x: Dyadic, p: int, rounding: Rounding) -> MiniFloat:
    return round_dyadic(x, p, _as_state(rounding).take())


def _check_precisions(*xs: MiniFloat) -> int:
    p = xs[0].p
    for x in xs[1:]:
        if x.p != p:
            raise UsageError(f"mixed precisions: {[v.p for v in xs]}")
    return p


# ---------------------------------------------------------------------------
# operations (exact value, then one rounding each)


def mf_add(a: MiniFloat, b: MiniFloat, rounding: Rounding) -> MiniFloat:
    p = _check_precisions(a, b)
    return _round_op(a.value() + b.value(), p, rounding)


def mf_sub(a: MiniFloat, b: MiniFloat, rounding: Rounding) -> MiniFloat:
    p = _check_precisions(a, b)
    return _round_op(a.value() - b.value(), p, rounding)


def mf_mul(a: MiniFloat, b: MiniFloat, rounding: Rounding) -> MiniFloat:
    p = _check_precisions(a, b)
    return _round_op(a.value() * b.value(), p, rounding)


def mf_fma(a: MiniFloat, b: MiniFloat, c: MiniFloat, rounding: Rounding) -> MiniFloat:
    p = _check_precisions(a, b, c)
    return _round_op(a.value() * b.value() + c.value(), p, rounding)


# ---------------------------------------------------------------------------
# structure functions


def ufp(x: MiniFloat) -> Dyadic:
    """Unit in the first place: 2**floor(log2 |x|).  Zero is out of domain."""
    if x.is_zero:
        raise ValueError("ufp(0) is undefined")
    return Dyadic(1, x.exp + x.p - 1)


def ulp(x: MiniFloat) -> Dyadic:
    """Unit in the last place: ufp(x) * 2**(1-p), i.e. 2**exp."""
    if x.is_zero:
        raise ValueError("ulp(0) is undefined")
    return Dyadic(1, x.exp)


def uls(x: MiniFloat) -> Dyadic:
    """Unit in the last *set* place: ulp(x) * 2**(trailing zeros of mant)."""
    if x.is_zero:
        raise ValueError("uls(0) is undefined")
    tz = (x.mant & -x.mant).bit_length() - 1
    return Dyadic(1, x.exp + tz)


def exponent_bits(x: MiniFloat) -> int:
    """The exponent of ulp(x): e such that x = M * 2**e with integral M."""
    if x.is_zero:
        raise ValueError("exponent of 0 is undefined")
    return x.exp


# ---------------------------------------------------------------------------
# enumeration


def enumerate_floats(p: int, e_lo: int, e_hi: int) -> Iterator[MiniFloat]:
    """Yield zero plus every precision-p value with exponent in [e_lo, e_hi]
    (exponent of the ulp, matching MiniFloat.exp).  Deterministic order:
    zero, then ascending exponent / significand, positive before negative."""
    if e_lo > e_hi:
        raise UsageError(f"empty exponent range [{e_lo}, {e_hi}]")
    yield MiniFloat.zero(p)
    for e in range(e_lo, e_hi + 1):
        for m in range(1 << (p - 1), 1 << p):
            yield MiniFloat(p, 1, m, e)
            yield MiniFloat(p, -1, m, e)


def count_floats(p: int, e_lo: int, e_hi: int) -> int:
    return 1 + 2 * (e_hi - e_lo + 1) * (1 << (p - 1))
