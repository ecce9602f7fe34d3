"""Verification lab: fast sweeps, error statistics, probability tables."""

import math

import numpy as np
import pytest

from doubleword import (
    DoubleWord,
    Dyadic,
    SweepReport,
    UsageError,
    cancellation_error_probabilities,
    check_counterexamples,
    maa_error_stats,
    modified_rel_error,
)
from doubleword.lab import (
    ALL_CHECKS,
    COUNTEREXAMPLES,
    EXPECTED_MAA_AVG_AVG,
    check_accurate_fast2sum_validity,
    check_fast2sum_uls_exactness,
    check_overlap_bound,
    check_sloppy_fast2sum_validity,
    directed_repair_example,
    sharpness_pair,
)

U2 = 2.0**-106


# --- fast mechanical checks (the heavy ones run in the acceptance suite) -----------


def test_fast2sum_uls_exactness_small_precisions():
    rep = check_fast2sum_uls_exactness(ps=(5, 6))
    assert rep.passed and rep.violations == 0
    assert rep.lanes > 10_000
    assert rep.line().startswith("PASS fast2sum-uls-exactness")


def test_final_fast2sum_validity_small_scope():
    for check in (check_sloppy_fast2sum_validity, check_accurate_fast2sum_validity):
        rep = check(ps=(6,), n_dir_seqs=4)
        assert rep.passed and rep.violations == 0
        # worst observed residual stays within the 8u^2 validity cap, and a
        # solid share of lanes is error-free outright
        assert 0.0 <= rep.worst["fill_of_u2"] <= 8.0 * (1.0 + 2.0**-40)
        assert 0.5 <= rep.worst["errorfree_frac"] <= 1.0


def test_overlap_bound_small_scope():
    rep = check_overlap_bound(ps=(6,), n_dir_seqs=2)
    assert rep.passed and rep.violations == 0


def test_counterexample_registry_reproduces_frozen_ratios():
    rep = check_counterexamples()
    assert rep.passed and rep.violations == 0
    assert rep.worst["worst-cancellation-a_over_u2"] == 2.9999999999999813
    assert rep.worst["worst-cancellation-b_over_u2"] == 2.9999999999999827
    assert rep.worst["plain_rel"] >= 2.0**-55
    assert rep.worst["directed_rel_over_u2"] == 0.0


def test_counterexample_words_round_trip():
    ce = COUNTEREXAMPLES["worst-cancellation-a"]
    x, y = ce.words()
    assert x.hi == 844424930131969.0 * 2.0**-49
    assert ce.sloppy_rel_error_over_u2() == 2.9999999999999813


def test_directed_repair_measurements():
    rep = directed_repair_example()
    assert rep["accurate_add_rel"] == 2.0**-54
    assert rep["accurate_add_directed_rel"] == 0.0


def test_sharpness_pair_makes_fast2sum_invalid():
    # the classic precondition-violating pair: errors of order u, not u^2
    from doubleword import SoftBackend, fast2sum, dw_value, MiniFloat

    p = 6
    a, b = sharpness_pair(p)
    bk = SoftBackend(p)
    mfa = MiniFloat.from_dyadic_exact(Dyadic.from_float(a), p)
    mfb = MiniFloat.from_dyadic_exact(Dyadic.from_float(b), p)
    s, t = fast2sum(mfa, mfb, bk)
    exact = Dyadic.from_float(a) + Dyadic.from_float(b)
    err = abs(dw_value(DoubleWord(s, t)) - exact)
    rel = float(err.as_fraction() / abs(exact).as_fraction())
    assert rel > 0.25 * 2.0**-6  # Theta(u), far above any u^2 budget


def test_registry_names_and_calling_convention():
    assert set(ALL_CHECKS) == {
        "fast2sum-uls-exactness",
        "sloppy-final-fast2sum-validity",
        "accurate-final-fast2sum-validity",
        "sloppy-cancellation-bound",
        "overlap-parametric-bounds",
        "direction-consistency",
        "unnormalized-mul-overlap",
        "counterexample-registry",
    }
    for fn in ALL_CHECKS.values():
        assert callable(fn)


def test_sweep_report_line_formats():
    ok = SweepReport(name="demo", passed=True, lanes=4, violations=0,
                     worst={"fill": 0.25}, elapsed_s=0.1)
    assert ok.line() == "PASS demo: 4 lanes, 0 violations [fill=0.25] (0.1s)"
    bad = SweepReport(name="demo", passed=False, lanes=4, violations=2)
    assert bad.line().startswith("FAIL demo: 4 lanes, 2 violations")


# --- modified relative error --------------------------------------------------------


def test_modified_rel_error_examples():
    d = DoubleWord(1.0, 0.0)
    one = Dyadic.from_int(1)
    assert modified_rel_error(d, one, one) == 0.0
    off = Dyadic.from_int(1) + Dyadic(1, -106)
    assert modified_rel_error(d, off, one) == U2
    assert modified_rel_error(d, one, Dyadic.from_int(0)) == 0.0
    assert modified_rel_error(d, off, Dyadic.from_int(0)) == math.inf
    with pytest.raises(UsageError):
        modified_rel_error(d, one, Dyadic.from_int(-1))


def test_modified_rel_error_on_worst_case_input():
    from doubleword import sloppy_add, dw_value

    ce = COUNTEREXAMPLES["worst-cancellation-a"]
    x, y = ce.words()
    z = sloppy_add(x, y)
    exact = dw_value(x) + dw_value(y)
    rel = modified_rel_error(z, exact, abs(exact))
    assert 2.9999999999999 * U2 <= rel <= 3.0 * U2


# --- multiply-add error statistics ---------------------------------------------------


def test_error_stats_zero_low_words_are_exact():
    rows = maa_error_stats(n=2000, trials=2, seed=7, generator="zero-lo")
    assert len(rows) == 4
    for row in rows:
        assert row.avg_avg == 0.0 and row.max_max == 0.0


def test_error_stats_split_lo_magnitudes():
    rows = maa_error_stats(n=20_000, trials=2, seed=3)
    assert [(r.omit_mul_norm, r.sloppy) for r in rows] == [
        (False, False), (False, True), (True, False), (True, True),
    ]
    for row in rows:
        # batch means land near the frozen full-size values; small n only
        # loosens them a little
        assert 1e-33 <= row.avg_avg <= 1e-32
        assert row.avg_avg <= row.avg_max
        assert row.max_avg <= row.max_max
        assert "avg:" in row.line()
    assert set(EXPECTED_MAA_AVG_AVG) == {(False, False), (False, True), (True, False), (True, True)}


def test_error_stats_rejects_unknown_generator():
    with pytest.raises(ValueError):
        maa_error_stats(n=16, trials=1, generator="cauchy")


def test_error_stats_seed_reproducibility():
    a = maa_error_stats(n=4000, trials=2, seed=42)
    b = maa_error_stats(n=4000, trials=2, seed=42)
    assert [(r.avg_avg, r.max_max) for r in a] == [(r.avg_avg, r.max_max) for r in b]


# --- cancellation-probability table ---------------------------------------------------


def test_probability_table_analytic_column_reference_values():
    rows = cancellation_error_probabilities(p=53, k_list=(41, 48, 52), n=0)
    by = {(r.regime, r.k): r for r in rows}
    assert by[("same-binade", 48)].analytic == 0.87890625
    assert by[("adjacent-binade", 41)].analytic == 1.0 - 2.0**-24
    r = by[("adjacent-binade", 52)]
    assert r.analytic == 0.75
    assert r.threshold == 6.0 * 2.0**-106  # 6u^2: the bound's knee
    for row in rows:
        assert math.isnan(row.empirical)
        assert "--" in row.line()


def test_probability_table_empirical_tracks_analytic():
    rows = cancellation_error_probabilities(p=12, k_list=(1, 4, 8), n=20_000, seed=5)
    assert len(rows) == 6
    for row in rows:
        assert 0.0 <= row.empirical <= 1.0
        # the analytic formula treats the worst binade fill as certain, so the
        # measured frequency should sit at or above it (small-sample slack)
        assert row.empirical >= row.analytic - 0.02


def test_probability_table_degenerate_inputs():
    assert cancellation_error_probabilities(k_list=()) == []
    with pytest.raises(UsageError):
        cancellation_error_probabilities(p=2)
    with pytest.raises(UsageError):
        cancellation_error_probabilities(p=54)
