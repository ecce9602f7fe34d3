"""Operation accounting and the GEMM microbenchmark's correctness contract."""

import json
import os

import numpy as np
import pytest

from doubleword import (
    CountingBackend,
    OpCount,
    UsageError,
    VariantConfig,
    count_ops,
    count_ops_dot2,
    dot2_compensated,
    gemm_dw,
    op_count_table,
)
from doubleword.bench import (
    _gemm_kernel,
    bench_matrix,
    gemm_reference,
    op_count_table_text,
    random_dw_matrix,
    results_json,
    table_configs,
)
from doubleword.vector import VEC_NATIVE, philox_chunk

# (omit_add_norm, omit_mul_norm, sloppy, magsel) -> (cmp, add, mul)
FROZEN_TABLE = {
    ("maa", False, False, False, False): (0, 26, 4),
    ("maa", False, False, True, False): (0, 17, 4),
    ("maa", False, True, False, False): (0, 23, 4),
    ("maa", False, True, True, False): (0, 14, 4),
    ("maa", False, False, False, True): (4, 20, 4),
    ("maa", False, False, True, True): (2, 14, 4),
    ("maa", False, True, False, True): (4, 17, 4),
    ("maa", False, True, True, True): (2, 11, 4),
    ("maa", True, True, False, False): (0, 20, 4),
    ("maa", True, True, True, False): (0, 11, 4),
    ("maa", True, True, False, True): (4, 14, 4),
    ("maa", True, True, True, True): (2, 8, 4),
    ("dot2", None, None, None, False): (0, 9, 2),
    ("dot2", None, None, None, True): (2, 6, 2),
}


def test_op_count_table_is_frozen():
    rows = op_count_table()
    assert len(rows) == 14
    got = {
        (r["kind"], r["omit_add_norm"], r["omit_mul_norm"], r["sloppy"], r["magsel"]): (
            r["cmp"],
            r["add"],
            r["mul"],
        )
        for r in rows
    }
    assert got == FROZEN_TABLE


def test_count_ops_agrees_with_direct_tally():
    cfg = VariantConfig(add_algo="sloppy", normalize_mul=False, magsel=True)
    oc = count_ops(cfg)
    assert oc.as_tuple() == (2, 11, 4)
    assert isinstance(oc, OpCount)


def test_counts_are_data_independent():
    cfg = VariantConfig()
    assert count_ops(cfg) == count_ops(cfg)
    a = count_ops_dot2(False)
    assert a.as_tuple() == (0, 9, 2)
    assert count_ops_dot2(True).as_tuple() == (2, 6, 2)


def test_table_text_has_all_rows():
    text = op_count_table_text()
    lines = text.splitlines()
    assert len(lines) == 15  # header + 14 rows
    assert lines[0].startswith("omit-add-norm")
    assert any("dot2" in ln for ln in lines[1:])


def test_dot2_values_and_errors():
    s, e = dot2_compensated([1.0], [1.0])
    assert (s, e) == (1.0, 0.0)
    # ill-conditioned cancellation: compensated result carries the tiny answer
    a = [1.0, 2.0**-60, -1.0]
    b = [1.0, 1.0, 1.0]
    s, e = dot2_compensated(a, b)
    assert s + e == 2.0**-60
    with pytest.raises(UsageError):
        dot2_compensated([1.0, 2.0], [1.0])


def test_dot2_magsel_matches_plain_values():
    g = philox_chunk(2024, 0)
    a = g.uniform(-1, 1, 50).tolist()
    b = g.uniform(-1, 1, 50).tolist()
    plain = dot2_compensated(a, b)
    msel = dot2_compensated(a, b, magsel=True)
    assert plain == msel  # same values, cheaper comparisons-for-additions mix


def test_gemm_kernel_matches_reference_bitwise():
    g = philox_chunk(555, 0)
    m, n, k = 5, 4, 6
    a_hi, a_lo = random_dw_matrix(g, (m, k))
    b_hi, b_lo = random_dw_matrix(g, (k, n))
    c_hi, c_lo = random_dw_matrix(g, (m, n))
    for cfg in (
        VariantConfig(),
        VariantConfig(add_algo="sloppy", normalize_add=False, normalize_mul=False, magsel=True),
    ):
        kh, kl = _gemm_kernel(cfg, VEC_NATIVE, a_hi, a_lo, b_hi, b_lo, c_hi, c_lo)
        rh, rl = gemm_reference(cfg, a_hi, a_lo, b_hi, b_lo, c_hi, c_lo)
        assert np.array_equal(kh, rh) and np.array_equal(kl, rl)


def test_gemm_1x1x1_equals_single_multiply_add():
    from doubleword import DoubleWord, maa

    cfg = VariantConfig()
    g = philox_chunk(0, 0)
    a_hi, a_lo = random_dw_matrix(g, (1, 1))
    b_hi, b_lo = random_dw_matrix(g, (1, 1))
    c_hi, c_lo = random_dw_matrix(g, (1, 1))
    kh, kl = _gemm_kernel(cfg, VEC_NATIVE, a_hi, a_lo, b_hi, b_lo, c_hi, c_lo)
    want = maa(
        DoubleWord(float(a_hi[0, 0]), float(a_lo[0, 0])),
        DoubleWord(float(b_hi[0, 0]), float(b_lo[0, 0])),
        DoubleWord(float(c_hi[0, 0]), float(c_lo[0, 0])),
        cfg=cfg,
    )
    assert (float(kh[0, 0]), float(kl[0, 0])) == (want.hi, want.lo)


def test_gemm_rejects_bad_dimensions():
    with pytest.raises(UsageError):
        gemm_dw(VariantConfig(), 0, 4, 4)
    with pytest.raises(UsageError):
        gemm_dw(VariantConfig(), 4096, 4096, 4096)  # cache-residency guard
    with pytest.raises(UsageError):
        gemm_dw(VariantConfig(), 4, 4, 4, reps=0)


def test_gemm_smoke_and_reps_env(monkeypatch):
    monkeypatch.setenv("DOUBLEWORD_BENCH_REPS", "2")
    res = gemm_dw(VariantConfig(add_algo="sloppy"), 4, 4, 4, warmups=1)
    assert res.reps == 2
    assert res.m == res.n == res.k == 4
    assert res.best_s > 0.0
    assert res.maa_per_s == 64 / res.best_s
    assert res.eq_double_per_s == res.maa_per_s * (res.counts.additions + res.counts.comparisons)
    assert "maa/s" in res.line()
    monkeypatch.delenv("DOUBLEWORD_BENCH_REPS")
    res = gemm_dw(VariantConfig(), 2, 2, 2, reps=1, warmups=0)
    assert res.reps == 1


def test_bench_matrix_covers_all_variants_and_serializes():
    os.environ["DOUBLEWORD_BENCH_REPS"] = "1"
    try:
        results = bench_matrix(m=2, n=2, k=2, reps=1)
    finally:
        del os.environ["DOUBLEWORD_BENCH_REPS"]
    assert len(results) == 12
    labels = [r.variant for r in results]
    assert len(set(labels)) == 12
    payload = json.loads(results_json(results))
    assert len(payload) == 12
    assert {"variant", "best_s", "counts"} <= set(payload[0])


def test_table_configs_match_variant_labels():
    cfgs = table_configs()
    assert len(cfgs) == 12
    assert len({cfg.label() for cfg in cfgs}) == 12
    for cfg in cfgs:
        oc = count_ops(cfg)
        assert oc.multiplications == 4
        assert oc.additions >= 8


def test_counting_backend_tallies_fma_as_add_plus_mul():
    bk = CountingBackend()
    bk.fma(1.0, 1.0, 1.0)
    assert (bk.n_add, bk.n_mul, bk.n_cmp) == (1, 1, 0)
    bk.reset()
    assert (bk.n_add, bk.n_mul, bk.n_cmp) == (0, 0, 0)
