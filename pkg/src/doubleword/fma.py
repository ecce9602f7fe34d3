"""Correctly rounded fused multiply-add for binary64.

Python 3.10 has no math.fma, so we provide two independent scalar routes:

* ``fma_llvm`` -- the hardware instruction, reached through numba's LLVM
  intrinsic machinery.  Fast; used by default when numba imports and the
  compiled function passes a smoke test.
* ``fma_exact`` -- exact integer arithmetic (a*b+c has a finite binary
  expansion), rounded once to binary64.  Slow but trivially correct; serves
  as the oracle the other routes are tested against.

A third, vectorized route (Dekker splitting + round-to-odd on numpy arrays)
lives in the vector module.  Cross-checking the routes against each other is
part of the test suite; none of them is taken on faith.
"""

from __future__ import annotations

from .dyadic import Dyadic


def fma_exact(a: float, b: float, c: float) -> float:
    """a*b + c with one rounding (to nearest, ties to even), via integers."""
    return float(Dyadic.from_float(a) * Dyadic.from_float(b) + Dyadic.from_float(c))


def _build_llvm_fma():
    try:
        import numba
        from numba import types
        from numba.core import cgutils
        from numba.extending import intrinsic
        from llvmlite import ir
    except ImportError:
        return None

    @intrinsic
    def _fma_intrinsic(typingctx, a, b, c):
        sig = types.float64(types.float64, types.float64, types.float64)

        def codegen(context, builder, signature, args):
            fnty = ir.FunctionType(ir.DoubleType(), [ir.DoubleType()] * 3)
            fn = cgutils.get_or_insert_function(builder.module, fnty, "llvm.fma.f64")
            return builder.call(fn, args)

        return sig, codegen

    @numba.njit("float64(float64, float64, float64)", cache=False)
    def fma_llvm(a, b, c):
        return _fma_intrinsic(a, b, c)

    # Smoke test: a case where unfused multiply-add gives a different answer.
    x = 1.0 + 2.0**-27
    if fma_llvm(x, x, -(x * x)) != fma_exact(x, x, -(x * x)):
        return None
    return fma_llvm


_llvm = None
_llvm_tried = False


def get_llvm_fma():
    """The compiled hardware-fma function, or None if unavailable."""
    global _llvm, _llvm_tried
    if not _llvm_tried:
        _llvm = _build_llvm_fma()
        _llvm_tried = True
    return _llvm


def fma(a: float, b: float, c: float) -> float:
    f = get_llvm_fma()
    if f is not None:
        return f(a, b, c)
    return fma_exact(a, b, c)


def fma_route() -> str:
    return "llvm" if get_llvm_fma() is not None else "exact-int"
