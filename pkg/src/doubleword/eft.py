"""Error-free transforms: each returns (result, error) with result + error
equal to the exact sum/product, under the conditions noted per function.

All functions take the arithmetic backend last so the same code runs on
binary64, the software engine, or a counting wrapper.
"""

from __future__ import annotations

import math

from .backends import NATIVE, Backend


def fast2sum(a, b, bk: Backend = NATIVE):
    """(s, t) with s = o(a+b), s + t = a + b.

    Requires the exponent condition e_a >= e_b (in particular |a| >= |b| is
    enough).  3 additions.
    """
    s = bk.add(a, b)
    z = bk.sub(s, a)
    t = bk.sub(b, z)
    return s, t


def two_sum(a, b, bk: Backend = NATIVE):
    """(s, t) with s = o(a+b), s + t = a + b, for any ordering of a, b.
    6 additions."""
    s = bk.add(a, b)
    a1 = bk.sub(s, b)
    b1 = bk.sub(s, a1)
    da = bk.sub(a, a1)
    db = bk.sub(b, b1)
    t = bk.add(da, db)
    return s, t


def two_sum_magsel(a, b, bk: Backend = NATIVE):
    """2Sum by magnitude selection: order the pair by magnitude, then
    Fast2Sum.  2 comparisons + 3 additions; ties keep the first argument
    first.  Written with select rather than a branch so it vectorizes
    (mirroring max/min-by-magnitude instructions)."""
    m = bk.mag_ge(a, b)
    big = bk.where(m, a, b)
    small = bk.where(m, b, a)
    return fast2sum(big, small, bk)


def two_prod(a, b, bk: Backend = NATIVE):
    """(s, t) with s = o(a*b), s + t = a * b exactly.  1 multiplication +
    1 fma."""
    s = bk.mul(a, b)
    t = bk.fma(a, b, bk.neg(s))
    return s, t


def split(a, bk: Backend = NATIVE):
    """Veltkamp splitting: a = a_h + a_l where each part fits in about half
    the significand, so pairwise products of parts are exact."""
    p = bk.precision
    c = bk.from_int((1 << math.ceil(p / 2)) + 1)
    gamma = bk.mul(c, a)
    delta = bk.sub(a, gamma)
    a_h = bk.add(gamma, delta)
    a_l = bk.sub(a, a_h)
    return a_h, a_l


def two_prod_split(a, b, bk: Backend = NATIVE):
    """2Prod without fma (Dekker): Veltkamp-split both factors and
    accumulate the four partial products.  Exact in radix 2 barring
    overflow in the splits."""
    s = bk.mul(a, b)
    a_h, a_l = split(a, bk)
    b_h, b_l = split(b, bk)
    e1 = bk.sub(bk.mul(a_h, b_h), s)
    e2 = bk.add(e1, bk.mul(a_h, b_l))
    e3 = bk.add(e2, bk.mul(a_l, b_h))
    t = bk.add(e3, bk.mul(a_l, b_l))
    return s, t
