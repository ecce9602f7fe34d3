"""Interval arithmetic with double-word endpoints: enclosure and plumbing."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from doubleword import (
    DoubleWord,
    Dyadic,
    DWInterval,
    MiniFloat,
    RoundingMode,
    RoundingSpec,
    SoftBackend,
    UsageError,
    assert_valid,
    contains,
    contains_mask,
    dw_value,
    format_interval,
    iv_add,
    iv_from_floats,
    iv_maa,
    iv_mul,
    iv_neg,
    iv_point,
    max_overlap,
    parse_interval,
    soft_factory,
    width,
)
from doubleword.vector import Directed64Backend, accurate_sum, philox_chunk

RD = RoundingMode.DOWN
RU = RoundingMode.UP


def dw(hi, lo=0.0):
    return DoubleWord(hi, lo)


def rand_intervals(g, n, scale=1.0):
    """Random binary64 interval lanes with proper double-word endpoints."""
    a = g.uniform(-scale, scale, n)
    b = g.uniform(-scale, scale, n)
    lo_hi, hi_hi = np.minimum(a, b), np.maximum(a, b)
    lo_lo = g.uniform(-0.5, 0.5, n) * np.spacing(np.abs(lo_hi))
    hi_lo = np.abs(g.uniform(-0.5, 0.5, n)) * np.spacing(np.abs(hi_hi))
    return DWInterval(DoubleWord(lo_hi, lo_lo), DoubleWord(hi_hi, hi_lo))


def le_exact(a: DoubleWord, b: DoubleWord):
    """Lanewise value(a) <= value(b), decided error-free."""
    terms = [a.hi, a.lo, np.negative(b.hi), np.negative(b.lo)]
    return accurate_sum([np.asarray(t, np.float64) for t in terms], passes=4) <= 0.0


# --- frozen cases ---------------------------------------------------------------


def test_add_of_exact_opposites_is_exact_zero():
    z = iv_add(iv_from_floats(1.0, 1.0), iv_from_floats(-1.0, -1.0))
    assert z.lo == (0.0, 0.0) and z.hi == (0.0, 0.0)


def test_mul_by_zero_interval_is_exact_zero():
    y = DWInterval(dw(-0.3, 1e-18), dw(0.7, -2e-17))
    z = iv_mul(iv_from_floats(0.0, 0.0), y)
    assert z.lo == (0.0, 0.0) and z.hi == (0.0, 0.0)


def test_mul_mixed_by_mixed_picks_corner_products():
    z = iv_mul(iv_from_floats(1.0, 2.0), iv_from_floats(-1.0, 1.0))
    assert dw_value(z.lo) == Dyadic.from_int(-2)
    assert dw_value(z.hi) == Dyadic.from_int(2)


def test_maa_with_zero_product_returns_addend_exactly():
    c = iv_from_floats(-0.75, 0.25)
    z = iv_maa(iv_from_floats(0.0, 0.0), iv_from_floats(-3.0, 5.0), c)
    assert z.lo == c.lo and z.hi == c.hi


def test_neg_swaps_and_negates_words_exactly():
    x = DWInterval(dw(-1.5, 2.0**-55), dw(3.0, -(2.0**-54)))
    z = iv_neg(x)
    assert z.lo == (-3.0, 2.0**-54)
    assert z.hi == (1.5, -(2.0**-55))
    back = iv_neg(z)
    assert back.lo == x.lo and back.hi == x.hi


def test_point_and_width():
    x = iv_point(dw(1.25, 2.0**-54))
    assert width(x).is_zero
    assert width(iv_from_floats(1.0, 2.0)) == Dyadic.from_int(1)


# --- enclosure ------------------------------------------------------------------


def test_add_encloses_endpoint_sums_random_lanes():
    g = philox_chunk(31415, 0)
    n = 100_000
    x, y = rand_intervals(g, n), rand_intervals(g, n, scale=0.01)
    z = iv_add(x, y)
    # compare z.lo against the exact value(x.lo) + value(y.lo) (6 terms)
    lo_resid = accurate_sum(
        [z.lo.hi, z.lo.lo, -x.lo.hi, -x.lo.lo, -y.lo.hi, -y.lo.lo], passes=4
    )
    hi_resid = accurate_sum(
        [z.hi.hi, z.hi.lo, -x.hi.hi, -x.hi.lo, -y.hi.hi, -y.hi.lo], passes=4
    )
    assert np.all(lo_resid <= 0.0)
    assert np.all(hi_resid >= 0.0)
    assert np.all(le_exact(z.lo, z.hi))


def test_mul_encloses_all_corner_products_random_lanes():
    g = philox_chunk(27182, 0)
    n = 50_000
    x, y = rand_intervals(g, n), rand_intervals(g, n)
    z = iv_mul(x, y)
    corners = [(x.lo, y.lo), (x.lo, y.hi), (x.hi, y.lo), (x.hi, y.hi)]
    from doubleword.vector import product_expansion_f64

    for a, b in corners:
        prod = list(product_expansion_f64((a.hi, a.lo), (b.hi, b.lo)))
        lo_resid = accurate_sum([z.lo.hi, z.lo.lo] + [np.negative(t) for t in prod], passes=4)
        hi_resid = accurate_sum([z.hi.hi, z.hi.lo] + [np.negative(t) for t in prod], passes=4)
        assert np.all(lo_resid <= 0.0)
        assert np.all(hi_resid >= 0.0)


def test_maa_point_width_stays_within_24u2_of_scale():
    # degenerate inputs: enclosure of a*b + c must collapse to a sliver whose
    # width is at most 24 u^2 (|ab| + |c|) on the cheap unnormalized pipeline
    g = philox_chunk(16180, 0)
    n = 50_000
    u2 = 2.0**-106

    def points(m):
        hi = g.uniform(-1.0, 1.0, m)
        lo = g.uniform(-0.5, 0.5, m) * np.spacing(np.abs(hi))
        return DWInterval(DoubleWord(hi, lo), DoubleWord(hi, lo))

    a, b, c = points(n), points(n), points(n)
    z = iv_maa(a, b, c)
    w = accurate_sum([z.hi.hi, z.hi.lo, -z.lo.hi, -z.lo.lo], passes=4)
    scale = np.abs((a.lo.hi + a.lo.lo) * (b.lo.hi + b.lo.lo)) + np.abs(c.lo.hi + c.lo.lo)
    assert np.all(w >= 0.0)
    assert float(np.max(w / scale)) <= 24 * u2


@given(
    st.integers(min_value=-2**20, max_value=2**20),
    st.integers(min_value=-2**20, max_value=2**20),
    st.integers(min_value=-2**20, max_value=2**20),
    st.integers(min_value=-2**20, max_value=2**20),
)
def test_scalar_mul_encloses_exact_corner_products(a, b, c, d):
    lo_x, hi_x = (a, b) if a <= b else (b, a)
    lo_y, hi_y = (c, d) if c <= d else (d, c)
    x = iv_from_floats(lo_x / 1024.0, hi_x / 1024.0)
    y = iv_from_floats(lo_y / 1024.0, hi_y / 1024.0)
    z = iv_mul(x, y)
    assert_valid(z)
    for ex in (lo_x, hi_x):
        for ey in (lo_y, hi_y):
            exact = Dyadic.from_float(ex / 1024.0) * Dyadic.from_float(ey / 1024.0)
            assert dw_value(z.lo) <= exact <= dw_value(z.hi)


def test_soft_engine_enclosure_spot_checks():
    # a handful of p = 6 lanes with known awkward cancellation
    p = 6
    f = soft_factory(p)

    def mf(num, den):
        return MiniFloat.from_dyadic_exact(Dyadic.normalize(num, -den), p)

    x = DWInterval(
        DoubleWord(mf(33, 5), mf(1, 11)),
        DoubleWord(mf(35, 5), mf(1, 11)),
    )
    y = DWInterval(
        DoubleWord(mf(-34, 5), MiniFloat.zero(p)),
        DoubleWord(mf(-33, 5), MiniFloat.zero(p)),
    )
    z = iv_add(x, y, f)
    assert_valid(z)
    for xe in (x.lo, x.hi):
        for ye in (y.lo, y.hi):
            v = dw_value(xe) + dw_value(ye)
            assert dw_value(z.lo) <= v <= dw_value(z.hi)
    zm = iv_mul(x, y, f)
    assert_valid(zm)
    for xe in (x.lo, x.hi):
        for ye in (y.lo, y.hi):
            v = dw_value(xe) * dw_value(ye)
            assert dw_value(zm.lo) <= v <= dw_value(zm.hi)


# --- plumbing: factories, validity, diagnostics ------------------------------------


def test_factory_returning_wrong_mode_is_rejected():
    with pytest.raises(UsageError):
        iv_add(iv_from_floats(1.0, 2.0), iv_from_floats(3.0, 4.0), lambda mode: Directed64Backend(RD))


def test_factory_returning_direction_sequence_is_rejected():
    def seq_factory(mode):
        return SoftBackend(6, RoundingSpec(mode, directions=(mode,) * 64))

    with pytest.raises(UsageError):
        iv_add(iv_from_floats(1.0, 2.0), iv_from_floats(3.0, 4.0), seq_factory)


def test_each_endpoint_runs_on_its_own_direction():
    seen = []

    def spy(mode):
        seen.append(mode)
        return Directed64Backend(mode)

    iv_add(iv_from_floats(1.0, 2.0), iv_from_floats(3.0, 4.0), spy)
    assert seen == [RD, RU]
    seen.clear()
    iv_maa(iv_from_floats(1.0, 2.0), iv_from_floats(3.0, 4.0), iv_from_floats(0.0, 1.0), spy)
    assert seen == [RD, RU, RD, RU]


def test_contains_and_mask():
    iv = iv_from_floats(-1.0, 2.0)
    assert contains(iv, 0)
    assert contains(iv, 2.0)
    assert contains(iv, Dyadic.normalize(-1, 0))
    assert not contains(iv, 2.0000000000000004)
    m = contains_mask(iv, np.array([-1.5, -1.0, 0.0, 2.0, 2.5]))
    assert m.tolist() == [False, True, True, True, False]


def test_assert_valid_rejects_swapped_endpoints():
    bad = DWInterval(dw(2.0), dw(1.0))
    with pytest.raises(ValueError):
        assert_valid(bad)
    # an exactly-equal pair of endpoints is still a valid (degenerate) interval
    assert_valid(iv_point(dw(1.0, 2.0**-54)))


def test_assert_valid_overlap_budget():
    messy = DWInterval(dw(1.0, 0.25), dw(2.0))  # second word overlaps the first
    assert_valid(messy)  # ordering alone is fine
    with pytest.raises(ValueError):
        assert_valid(messy, 2.0**-53, overlap_limit=3.5)
    assert max_overlap(messy, 2.0**-53) == 0.25 / (2.0**-53 * 1.0)


def test_max_overlap_examples():
    assert max_overlap(iv_from_floats(1.0, 2.0), 2.0**-53) == 0.0
    tight = DWInterval(dw(1.0, 2.0**-53), dw(2.0, 2.0**-53))
    assert max_overlap(tight, 2.0**-53) == 1.0


def test_format_parse_round_trip_binary64():
    iv = DWInterval(dw(-1.5, 2.0**-55), dw(3.0, -(2.0**-54)))
    s = format_interval(iv)
    assert s == "[-0x3 p -1 +0x1 p -55, +0x3 p 0 -0x1 p -54]"
    back = parse_interval(s)
    assert back.lo == iv.lo and back.hi == iv.hi
    assert str(iv) == s


def test_format_parse_round_trip_software_words():
    p = 6
    f = soft_factory(p)
    x = iv_from_floats(
        MiniFloat.from_dyadic_exact(Dyadic.from_int(1), p),
        MiniFloat.from_dyadic_exact(Dyadic.normalize(3, -1), p),
    )
    z = iv_mul(x, x, f)
    s = format_interval(z)
    back = parse_interval(s, p=p)
    assert back.lo == z.lo and back.hi == z.hi


def test_format_rejects_vector_lanes():
    iv = DWInterval(
        DoubleWord(np.array([1.0, 2.0]), np.zeros(2)),
        DoubleWord(np.array([3.0, 4.0]), np.zeros(2)),
    )
    with pytest.raises(UsageError):
        format_interval(iv)


def test_parse_rejects_malformed_text():
    for s in ("", "[+0x1 p 0]", "[a, b]", "(+0x1 p 0 +0x0 p 0, +0x1 p 0 +0x0 p 0)"):
        with pytest.raises(ValueError):
            parse_interval(s)


def test_chained_adds_stay_on_tight_path():
    # endpoints produced by a normalized directed chain keep the low-word
    # sign condition, so repeated sums never need the widening fallback;
    # the net width growth over 50 chained adds stays tiny
    iv = iv_from_floats(0.1, 0.1)
    inc = iv_from_floats(0.01, 0.01)
    for _ in range(50):
        iv = iv_add(iv, inc)
        assert_valid(iv)
    assert contains(iv, Dyadic.from_float(0.1) + Dyadic.from_int(50) * Dyadic.from_float(0.01))
    assert float(width(iv).as_fraction()) <= 60 * (2.0**-105)
