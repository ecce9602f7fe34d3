"""Lossless text form for binary floating-point values: ``±0xM p e``.

``M`` is the integral significand in hex, ``e`` the power of two it is scaled
by, so the value is ``±M * 2**e``.  Examples::

    +0x32 p -5        50 * 2**-5  = 1.5625
    -0x1 p 0          -1
    +0x0 p 0          0

The canonical form (what :func:`format_hex` emits for a Dyadic or a binary64
value) has an odd significand, so equal values print identically.  A
MiniFloat prints its stored normalized significand instead, which keeps its
precision visible.  The parser accepts any significand.
"""

from __future__ import annotations

import re

from .dyadic import Dyadic
from .softfloat import MiniFloat

_HEX_RE = re.compile(r"^\s*([+-])0x([0-9a-fA-F]+)\s*p\s*([+-]?\d+)\s*$")


def format_parts(sign: int, mant: int, exp: int) -> str:
    if mant == 0:
        return "+0x0 p 0"
    return f"{'-' if sign < 0 else '+'}0x{mant:x} p {exp}"


def from_dyadic(x: Dyadic) -> str:
    return format_parts(x.sign, abs(x.m), x.e)


def from_float(x: float) -> str:
    return from_dyadic(Dyadic.from_float(x))


def from_minifloat(x: MiniFloat) -> str:
    return format_parts(x.sign, x.mant, x.exp)


def parse_parts(s: str) -> tuple[int, int, int]:
    m = _HEX_RE.match(s)
    if not m:
        raise ValueError(f"not a hex-float literal: {s!r}")
    sign = -1 if m.group(1) == "-" else 1
    mant = int(m.group(2), 16)
    exp = int(m.group(3))
    if mant == 0:
        return 0, 0, 0
    return sign, mant, exp


def to_dyadic(s: str) -> Dyadic:
    sign, mant, exp = parse_parts(s)
    return Dyadic.normalize(sign * mant, exp)


def to_float(s: str) -> float:
    return float(to_dyadic(s))


def to_minifloat(s: str, p: int) -> MiniFloat:
    return MiniFloat.from_dyadic_exact(to_dyadic(s), p)
