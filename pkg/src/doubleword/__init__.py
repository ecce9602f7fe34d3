"""Double-word (double-double) arithmetic with verifiable error bounds.

The package has three layers:

* exact and software arithmetic -- :mod:`~doubleword.dyadic` (exact dyadic
  rationals), :mod:`~doubleword.softfloat` (precision-p floats, four rounding
  modes, per-operation direction sequences), :mod:`~doubleword.fma`;
* the double-word algorithms themselves -- :mod:`~doubleword.eft`
  (error-free transforms), :mod:`~doubleword.core` (additions,
  multiplication, multiply-add, structural variants),
  :mod:`~doubleword.interval` (directed-rounding intervals);
* machinery that checks the claimed error bounds mechanically --
  :mod:`~doubleword.lab` (sweeps, bound checkers, counterexamples),
  :mod:`~doubleword.vector` (vectorized engine for large sweeps),
  :mod:`~doubleword.bench` (operation counts and throughput).
"""

from .backends import NATIVE, Backend, CountingBackend, NativeBackend, SoftBackend
from .core import (
    DoubleWord,
    VariantConfig,
    accurate_add,
    accurate_add_directed,
    cancellation_ratio,
    dw_add,
    dw_mul,
    gamma_bound,
    maa,
    overlap_factor,
    sloppy_add,
)
from .core import dw_value
from .bench import BenchResult, OpCount, count_ops, count_ops_dot2, dot2_compensated, gemm_dw, op_count_table
from .dyadic import Dyadic
from .eft import fast2sum, split, two_prod, two_prod_split, two_sum, two_sum_magsel
from .lab import (
    ALL_CHECKS,
    ErrorProbabilityRow,
    ErrorStatsRow,
    SweepReport,
    cancellation_error_probabilities,
    check_counterexamples,
    maa_error_stats,
    modified_rel_error,
)
from .interval import (
    DWInterval,
    assert_valid,
    contains,
    contains_mask,
    directed64_factory,
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
    vector_soft_factory,
    width,
)
from .softfloat import (
    MiniFloat,
    RoundingMode,
    RoundingSpec,
    RoundingState,
    UsageError,
    enumerate_floats,
    exponent_bits,
    mf_add,
    mf_fma,
    mf_mul,
    mf_sub,
    round_dyadic,
    ufp,
    ulp,
    uls,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_CHECKS",
    "NATIVE",
    "Backend",
    "BenchResult",
    "CountingBackend",
    "DWInterval",
    "DoubleWord",
    "Dyadic",
    "ErrorProbabilityRow",
    "ErrorStatsRow",
    "MiniFloat",
    "NativeBackend",
    "OpCount",
    "RoundingMode",
    "RoundingSpec",
    "RoundingState",
    "SoftBackend",
    "SweepReport",
    "UsageError",
    "VariantConfig",
    "accurate_add",
    "accurate_add_directed",
    "assert_valid",
    "cancellation_error_probabilities",
    "cancellation_ratio",
    "check_counterexamples",
    "contains",
    "contains_mask",
    "count_ops",
    "count_ops_dot2",
    "directed64_factory",
    "dot2_compensated",
    "dw_add",
    "dw_mul",
    "dw_value",
    "enumerate_floats",
    "exponent_bits",
    "fast2sum",
    "format_interval",
    "gamma_bound",
    "gemm_dw",
    "iv_add",
    "iv_from_floats",
    "iv_maa",
    "iv_mul",
    "iv_neg",
    "iv_point",
    "maa",
    "maa_error_stats",
    "max_overlap",
    "mf_add",
    "mf_fma",
    "mf_mul",
    "mf_sub",
    "modified_rel_error",
    "op_count_table",
    "overlap_factor",
    "parse_interval",
    "round_dyadic",
    "sloppy_add",
    "soft_factory",
    "split",
    "two_prod",
    "two_prod_split",
    "two_sum",
    "two_sum_magsel",
    "ufp",
    "vector_soft_factory",
    "ulp",
    "uls",
    "width",
    "__version__",
]
