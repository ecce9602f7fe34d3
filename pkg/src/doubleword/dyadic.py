"""Exact dyadic rationals m * 2**e on Python integers.

This is the truth backend for everything else in the package: every rounding
function, error bound and sweep verdict is ultimately checked against values of
this type.  Dyadics are closed under +, -, * (not /), and all three are exact,
so no care about operation order is ever needed.

Canonical form: ``m`` odd, or ``m == 0 and e == 0``.  Two dyadics are equal iff
their canonical fields are equal, which makes the dataclass equality the value
equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True, slots=True)
class Dyadic:
    m: int
    e: int

    # --- construction -----------------------------------------------------

    @staticmethod
    def normalize(m: int, e: int) -> "Dyadic":
        if m == 0:
            return _ZERO
        shift = (m & -m).bit_length() - 1  # count of trailing zero bits
        return Dyadic(m >> shift, e + shift)

    @staticmethod
    def from_int(n: int) -> "Dyadic":
        return Dyadic.normalize(n, 0)

    @staticmethod
    def from_float(x: float) -> "Dyadic":
        if x != x or x in (math.inf, -math.inf):
            raise ValueError(f"not a finite float: {x!r}")
        num, den = x.as_integer_ratio()  # den is a power of two
        return Dyadic.normalize(num, 1 - den.bit_length())

    # --- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.m == 0

    @property
    def sign(self) -> int:
        return (self.m > 0) - (self.m < 0)

    def floor_log2(self) -> int:
        """e such that 2**e <= |self| < 2**(e+1).  Errors on zero."""
        if self.m == 0:
            raise ValueError("floor_log2 of zero")
        return abs(self.m).bit_length() - 1 + self.e

    # --- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Dyadic") -> "Dyadic":
        if self.m == 0:
            return other
        if other.m == 0:
            return self
        e = min(self.e, other.e)
        return Dyadic.normalize(
            (self.m << (self.e - e)) + (other.m << (other.e - e)), e
        )

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.m, self.e) if self.m else _ZERO

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.m), self.e) if self.m else _ZERO

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        if self.m == 0 or other.m == 0:
            return _ZERO
        return Dyadic(self.m * other.m, self.e + other.e)  # odd*odd stays odd

    # --- comparisons ---------------------------------------------------------

    def _cmp(self, other: "Dyadic") -> int:
        return (self - other).sign

    def __lt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "Dyadic") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "Dyadic") -> bool:
        return self._cmp(other) >= 0

    # --- conversion ------------------------------------------------------------

    def as_fraction(self) -> Fraction:
        if self.e >= 0:
            return Fraction(self.m << self.e)
        return Fraction(self.m, 1 << -self.e)

    def __float__(self) -> float:
        """Nearest binary64 (correctly rounded by int/int division)."""
        if self.m == 0:
            return 0.0
        if self.e >= 0:
            # may overflow for huge e; fine for diagnostics
            return float(self.m * (1 << self.e))
        return self.m / (1 << -self.e)

    def __repr__(self) -> str:
        return f"Dyadic({self.m}, {self.e})"

    def __str__(self) -> str:
        return f"{self.m}*2^{self.e}" if self.m else "0"


_ZERO = Dyadic(0, 0)

ZERO = _ZERO
ONE = Dyadic(1, 0)


def dyadic_sum(terms) -> Dyadic:
    acc = _ZERO
    for t in terms:
        acc = acc + t
    return acc
