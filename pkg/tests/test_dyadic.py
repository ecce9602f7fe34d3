"""The exact-arithmetic truth backend and its text form.

Everything else in the package is judged against Dyadic, so these tests pin
it against an independent oracle (Fraction) rather than against itself.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from doubleword import Dyadic, MiniFloat
from doubleword import hexfloat
from doubleword.dyadic import ONE, ZERO, dyadic_sum

dyadics = st.builds(
    Dyadic.normalize,
    st.integers(min_value=-(10**12), max_value=10**12),
    st.integers(min_value=-200, max_value=200),
)


# --- canonical form ---------------------------------------------------------


def test_normalize_strips_trailing_zeros():
    assert Dyadic.normalize(12, 0) == Dyadic(3, 2)
    assert Dyadic.normalize(-96, -5) == Dyadic(-3, 0)
    assert Dyadic.normalize(0, 17) == Dyadic(0, 0)


def test_equality_is_value_equality():
    assert Dyadic.normalize(4, -2) == ONE
    assert Dyadic.from_int(0) == ZERO
    assert Dyadic(3, 0) != Dyadic(3, 1)


def test_from_float_examples():
    assert Dyadic.from_float(1.0) == Dyadic(1, 0)
    assert Dyadic.from_float(-0.375) == Dyadic(-3, -3)
    assert Dyadic.from_float(2.0**-1074) == Dyadic(1, -1074)
    with pytest.raises(ValueError):
        Dyadic.from_float(math.inf)
    with pytest.raises(ValueError):
        Dyadic.from_float(math.nan)


def test_floor_log2():
    assert Dyadic(1, 0).floor_log2() == 0
    assert Dyadic(3, -2).floor_log2() == -1
    assert Dyadic(-5, 3).floor_log2() == 5
    with pytest.raises(ValueError):
        ZERO.floor_log2()


# --- arithmetic against Fraction --------------------------------------------


@given(dyadics, dyadics)
def test_add_sub_mul_match_fraction(a, b):
    fa, fb = a.as_fraction(), b.as_fraction()
    assert (a + b).as_fraction() == fa + fb
    assert (a - b).as_fraction() == fa - fb
    assert (a * b).as_fraction() == fa * fb


@given(dyadics, dyadics)
def test_comparisons_match_fraction(a, b):
    fa, fb = a.as_fraction(), b.as_fraction()
    assert (a < b) == (fa < fb)
    assert (a <= b) == (fa <= fb)
    assert (a > b) == (fa > fb)
    assert (a >= b) == (fa >= fb)
    assert (a == b) == (fa == fb)


@given(dyadics)
def test_neg_abs_sign(a):
    assert (-a).as_fraction() == -a.as_fraction()
    assert abs(a).as_fraction() == abs(a.as_fraction())
    assert a.sign == (a.as_fraction() > 0) - (a.as_fraction() < 0)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip_exact(x):
    assert float(Dyadic.from_float(x)) == x or (x == 0.0)


def test_dyadic_sum():
    terms = [Dyadic(1, 0), Dyadic(1, -60), Dyadic(-1, 0)]
    assert dyadic_sum(terms) == Dyadic(1, -60)
    assert dyadic_sum([]) == ZERO


# --- hex-float text form -----------------------------------------------------


def test_format_examples():
    assert hexfloat.from_float(1.0) == "+0x1 p 0"
    assert hexfloat.from_float(0.0) == "+0x0 p 0"
    assert hexfloat.from_dyadic(Dyadic(-3, -4)) == "-0x3 p -4"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_text_round_trip(x):
    s = hexfloat.from_float(x)
    assert hexfloat.to_float(s) == x or (x == 0.0 and hexfloat.to_float(s) == 0.0)


@given(dyadics)
def test_dyadic_text_round_trip(a):
    assert hexfloat.to_dyadic(hexfloat.from_dyadic(a)) == a


def test_minifloat_text_round_trip():
    mf = MiniFloat.from_dyadic_exact(Dyadic.normalize(33, -6), 6)
    s = hexfloat.from_minifloat(mf)
    assert s == "+0x21 p -6"
    assert hexfloat.to_minifloat(s, 6) == mf


def test_parse_rejects_garbage():
    for bad in ("", "1.5", "+0y3 p 0", "+0x3", "+0x3 q 0"):
        with pytest.raises(ValueError):
            hexfloat.parse_parts(bad)
