"""Scalar arithmetic backends.

Every double-word algorithm in this package is written once, against the
small protocol below, and then run on interchangeable backends:

* :class:`NativeBackend` -- binary64 with the hardware's round-to-nearest.
* :class:`SoftBackend`   -- the precision-p software engine, any rounding
  mode or an explicit per-operation direction sequence.
* :class:`CountingBackend` -- wraps another backend and tallies the
  floating-point additions, multiplications and comparisons performed, using
  the usual cost model (fma = one add + one mul, subtraction counts as an
  add, a magnitude test costs two comparisons, negation is free).

A vectorized numpy backend with the same interface lives in the vector
module.
"""

from __future__ import annotations

from typing import Any, Protocol

from . import fma as _fma
from .dyadic import Dyadic
from .softfloat import (
    MiniFloat,
    Rounding,
    RoundingSpec,
    RoundingState,
    mf_add,
    mf_fma,
    mf_mul,
    mf_sub,
)


class Backend(Protocol):
    """The operations the double-word algorithms need from a scalar type."""

    def add(self, a: Any, b: Any) -> Any: ...
    def sub(self, a: Any, b: Any) -> Any: ...
    def mul(self, a: Any, b: Any) -> Any: ...
    def fma(self, a: Any, b: Any, c: Any) -> Any: ...
    def neg(self, a: Any) -> Any: ...                    # exact, free
    def mag_ge(self, a: Any, b: Any) -> Any: ...         # |a| >= |b|, 2 comparisons
    def where(self, mask: Any, a: Any, b: Any) -> Any: ...  # select, free
    def sign(self, a: Any) -> int: ...                   # diagnostic only
    def to_float(self, a: Any) -> float: ...             # diagnostic only
    def from_int(self, n: int) -> Any: ...               # must be exact
    def unit_roundoff(self) -> float: ...
    @property
    def precision(self) -> int: ...


class NativeBackend:
    """Hardware binary64, round to nearest, ties to even."""

    precision = 53

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def fma(self, a, b, c):
        return _fma.fma(a, b, c)

    def neg(self, a):
        return -a

    def mag_ge(self, a, b):
        return abs(a) >= abs(b)

    def where(self, mask, a, b):
        return a if mask else b

    def sign(self, a):
        return (a > 0.0) - (a < 0.0)

    def to_float(self, a):
        return a

    def from_int(self, n):
        x = float(n)
        if int(x) != n:
            raise ValueError(f"{n} is not exactly representable in binary64")
        return x

    def unit_roundoff(self):
        return 2.0**-53


NATIVE = NativeBackend()


class SoftBackend:
    """MiniFloat arithmetic at precision p under a rounding spec or an
    already-started rounding state (for direction sequences)."""

    def __init__(self, p: int, rounding: Rounding = RoundingSpec()):
        self.p = p
        self.state = rounding if isinstance(rounding, RoundingState) else rounding.state()

    @property
    def precision(self) -> int:
        return self.p

    @property
    def spec(self) -> RoundingSpec:
        return self.state.spec

    def add(self, a, b):
        return mf_add(a, b, self.state)

    def sub(self, a, b):
        return mf_sub(a, b, self.state)

    def mul(self, a, b):
        return mf_mul(a, b, self.state)

    def fma(self, a, b, c):
        return mf_fma(a, b, c, self.state)

    def neg(self, a):
        return -a

    def mag_ge(self, a, b):
        av, bv = abs(a.value()), abs(b.value())
        return av >= bv

    def where(self, mask, a, b):
        return a if mask else b

    def sign(self, a):
        return a.sign

    def to_float(self, a):
        return float(a)

    def from_int(self, n):
        return MiniFloat.from_dyadic_exact(Dyadic.from_int(n), self.p)

    def unit_roundoff(self):
        return float(self.spec.unit_roundoff(self.p))


class CountingBackend:
    """Delegates to another backend while counting operations."""

    def __init__(self, inner: Backend = NATIVE):
        self.inner = inner
        self.n_add = 0
        self.n_mul = 0
        self.n_cmp = 0

    @property
    def precision(self):
        return self.inner.precision

    def reset(self):
        self.n_add = self.n_mul = self.n_cmp = 0

    def add(self, a, b):
        self.n_add += 1
        return self.inner.add(a, b)

    def sub(self, a, b):
        self.n_add += 1
        return self.inner.sub(a, b)

    def mul(self, a, b):
        self.n_mul += 1
        return self.inner.mul(a, b)

    def fma(self, a, b, c):
        self.n_add += 1
        self.n_mul += 1
        return self.inner.fma(a, b, c)

    def neg(self, a):
        return self.inner.neg(a)

    def mag_ge(self, a, b):
        self.n_cmp += 2
        return self.inner.mag_ge(a, b)

    def where(self, mask, a, b):
        return self.inner.where(mask, a, b)

    def sign(self, a):
        return self.inner.sign(a)

    def to_float(self, a):
        return self.inner.to_float(a)

    def from_int(self, n):
        return self.inner.from_int(n)

    def unit_roundoff(self):
        return self.inner.unit_roundoff()
