"""Vectorized engines for large sweeps.

Two numpy backends implement the same protocol as the scalar ones:

* :class:`VectorNativeBackend` -- binary64 arrays, hardware rounding, fma as
  a real ufunc (LLVM intrinsic through numba) or as a proven round-to-odd
  emulation; the two are cross-checked in the tests.
* :class:`VectorSoftBackend` -- precision-p values carried *exactly* in
  float64 arrays (p <= 24).  Each operation computes the exact result as a
  float64 round-to-odd carrier (error-free transforms + an odd fixup), then
  rounds once to p bits in the requested mode.  Double rounding through an
  odd carrier with >= p+2 spare bits is exact, so this reproduces the
  reference scalar engine bit for bit -- which the tests verify.

Also here: exact small-sum machinery (distillation of a few float64 terms to
an accurate residual, for measuring errors ~u^2 below the data) and keyed
counter-based random streams so any chunk of a sweep can be regenerated
independently.
"""

from __future__ import annotations

import numpy as np

from .softfloat import RoundingMode, RoundingSpec, UsageError

# ---------------------------------------------------------------------------
# rounding float64 values to p bits


def round_to_p(x: np.ndarray, p: int, mode: RoundingMode) -> np.ndarray:
    """Round float64 values to precision p (2 <= p <= 52) in the given mode.

    Exact for every finite input: the scaling below is by powers of two and
    the integer rounding is performed on values < 2**p, so no intermediate
    step rounds.  Zeros stay +0.0.
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise FloatingPointError("non-finite value reached round_to_p")
    _, e = np.frexp(x)
    q = np.ldexp(x, p - e)  # |q| in [2^(p-1), 2^p) for x != 0
    if mode is RoundingMode.NEAREST_EVEN:
        r = np.rint(q)
    elif mode is RoundingMode.NEAREST_AWAY:
        # |q| + 0.5 spans at most 53 bits (top 2^(p-1), bottom 2^-1), exact.
        r = np.copysign(np.floor(np.abs(q) + 0.5), q)
    elif mode is RoundingMode.DOWN:
        r = np.floor(q)
    elif mode is RoundingMode.UP:
        r = np.ceil(q)
    else:  # pragma: no cover
        raise UsageError(f"unknown rounding mode {mode!r}")
    out = np.ldexp(r, e - p)
    return out + 0.0  # normalize -0.0 lanes produced by copysign/floor


def is_p_bit(x: np.ndarray, p: int) -> np.ndarray:
    """Mask of lanes whose value is representable in precision p."""
    return round_to_p(x, p, RoundingMode.NEAREST_EVEN) == np.asarray(x, dtype=np.float64)


# ---------------------------------------------------------------------------
# float64 building blocks (plain numpy, RN hardware arithmetic)


def two_sum_f64(a, b):
    s = a + b
    bv = s - a
    av = s - bv
    return s, (a - av) + (b - bv)


_SPLITTER = float((1 << 27) + 1)


def two_prod_split_f64(a, b):
    """Exact product pair via Veltkamp/Dekker splitting; no fma involved."""
    s = a * b
    ca = _SPLITTER * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLITTER * b
    bh = cb - (cb - b)
    bl = b - bh
    t = ((ah * bh - s) + ah * bl + al * bh) + al * bl
    return s, t


def force_odd(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Round-to-odd fixup: where t != 0, make s a faithful carrier of s + t
    with an odd last significand bit, so a later rounding to <= 51 bits of
    s alone equals rounding s + t directly."""
    s = np.asarray(s, dtype=np.float64)
    lsb_even = (s.view(np.int64) & 1) == 0
    need = (t != 0) & lsb_even
    if not np.any(need):
        return s
    toward = np.where(t > 0, np.inf, -np.inf)
    return np.where(need, np.nextafter(s, toward), s)


def fma_emulated(a, b, c):
    """fma on float64 arrays without an fma instruction: exact product by
    splitting, exact accumulation by 2Sum, one round-to-odd, one final
    rounding.  Bit-identical to a correctly rounded fma (tested against the
    exact-integer oracle and the hardware route)."""
    mh, ml = two_prod_split_f64(np.asarray(a, np.float64), np.asarray(b, np.float64))
    sh, sl = two_sum_f64(c, mh)
    vh, vl = two_sum_f64(sl, ml)
    return sh + force_odd(vh, vl)


def _build_fma_ufunc():
    try:
        import numba
        from numba import types
        from numba.core import cgutils
        from numba.extending import intrinsic
        from llvmlite import ir
    except ImportError:
        return None

    @intrinsic
    def _fma_intr(typingctx, a, b, c):
        sig = types.float64(types.float64, types.float64, types.float64)

        def codegen(context, builder, signature, args):
            fnty = ir.FunctionType(ir.DoubleType(), [ir.DoubleType()] * 3)
            fn = cgutils.get_or_insert_function(builder.module, fnty, "llvm.fma.f64")
            return builder.call(fn, args)

        return sig, codegen

    @numba.vectorize(["float64(float64, float64, float64)"], nopython=True)
    def fma_ufunc(a, b, c):
        return _fma_intr(a, b, c)

    x = 1.0 + 2.0**-27
    if float(fma_ufunc(x, x, -(x * x))) != 2.0**-54:
        return None
    return fma_ufunc


_fma_ufunc = None
_fma_ufunc_tried = False


def get_fma_ufunc():
    global _fma_ufunc, _fma_ufunc_tried
    if not _fma_ufunc_tried:
        _fma_ufunc = _build_fma_ufunc()
        _fma_ufunc_tried = True
    return _fma_ufunc


def np_fma(a, b, c):
    """Vectorized correctly rounded fma; hardware route when available."""
    f = get_fma_ufunc()
    if f is not None:
        return f(a, b, c)
    return fma_emulated(a, b, c)


# ---------------------------------------------------------------------------
# backends


class VectorNativeBackend:
    """binary64 numpy arrays, hardware round-to-nearest."""

    precision = 53

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def fma(self, a, b, c):
        return np_fma(a, b, c)

    def neg(self, a):
        return -a

    def mag_ge(self, a, b):
        return np.abs(a) >= np.abs(b)

    def where(self, mask, a, b):
        return np.where(mask, a, b)

    def sign(self, a):
        return np.sign(a)

    def to_float(self, a):
        return a

    def from_int(self, n):
        x = float(n)
        if int(x) != n:
            raise ValueError(f"{n} is not exactly representable in binary64")
        return x

    def unit_roundoff(self):
        return 2.0**-53


VEC_NATIVE = VectorNativeBackend()


class VectorSoftBackend:
    """Precision-p arithmetic on float64 arrays.

    Restrictions that keep every step exact: p <= 24 (so products of two
    p-bit significands fit in 53 bits and odd carriers leave >= p+2 spare
    bits), and magnitudes must stay inside [2^-400, 2^400] (checked in
    round_to_p only via finiteness; sweeps run near exponent 0).

    A direction sequence, if given, is consumed one entry per operation,
    uniformly across lanes, mirroring the scalar engine's ledger.
    """

    def __init__(self, p: int, rounding: RoundingSpec = RoundingSpec()):
        if not 2 <= p <= 24:
            raise UsageError(f"vector engine supports 2 <= p <= 24, got {p}")
        self.p = p
        self.spec = rounding
        self._i = 0
        self.ledger: list[RoundingMode] = []

    @property
    def precision(self) -> int:
        return self.p

    def _take(self) -> RoundingMode:
        if self.spec.directions is None:
            mode = self.spec.mode
        else:
            if self._i >= len(self.spec.directions):
                raise UsageError(f"direction sequence exhausted after {self._i} operations")
            mode = self.spec.directions[self._i]
            self._i += 1
        self.ledger.append(mode)
        return mode

    # each op: exact odd carrier in float64, then one p-bit rounding
    def _round_sum(self, a, b):
        s, t = two_sum_f64(a, b)
        return round_to_p(force_odd(s, t), self.p, self._take())

    def add(self, a, b):
        return self._round_sum(a, b)

    def sub(self, a, b):
        return self._round_sum(a, np.negative(b))

    def mul(self, a, b):
        # 2p <= 48 bits: the float64 product is already exact
        return round_to_p(np.multiply(a, b), self.p, self._take())

    def fma(self, a, b, c):
        return self._round_sum(np.multiply(a, b), c)

    def neg(self, a):
        return np.negative(a)

    def mag_ge(self, a, b):
        return np.abs(a) >= np.abs(b)

    def where(self, mask, a, b):
        return np.where(mask, a, b)

    def sign(self, a):
        return np.sign(a)

    def to_float(self, a):
        return a

    def from_int(self, n):
        x = float(n)
        if not bool(np.all(is_p_bit(np.float64(x), self.p))) or int(x) != n:
            raise ValueError(f"{n} is not exactly representable at p={self.p}")
        return x

    def unit_roundoff(self):
        return float(self.spec.unit_roundoff(self.p))


class Directed64Backend:
    """binary64 with RD or RU semantics, emulated exactly on RN hardware.

    Every operation computes the round-to-nearest result plus the exact sign
    of its residual (error-free transforms), then steps one float toward the
    rounding direction where the residual points the other way.  Works on
    scalars and arrays alike.
    """

    precision = 53

    def __init__(self, mode: RoundingMode):
        if mode not in (RoundingMode.DOWN, RoundingMode.UP):
            raise UsageError(f"Directed64Backend wants DOWN or UP, got {mode}")
        self.mode = mode

    def _fix(self, w, residual_sign):
        # w = RN(exact); residual_sign = sign(exact - w).  RD keeps w unless
        # exact < w; RU keeps w unless exact > w.
        if self.mode is RoundingMode.DOWN:
            need = residual_sign < 0
            target = -np.inf
        else:
            need = residual_sign > 0
            target = np.inf
        return np.where(need, np.nextafter(w, target), w) + 0.0

    def add(self, a, b):
        s, t = two_sum_f64(a, b)
        return self._fix(s, np.sign(t))

    def sub(self, a, b):
        return self.add(a, np.negative(b))

    def mul(self, a, b):
        s = np.multiply(a, b)
        t = np_fma(a, b, np.negative(s))
        return self._fix(s, np.sign(t))

    def fma(self, a, b, c):
        ph = np.multiply(a, b)
        pl = np_fma(a, b, np.negative(ph))
        w = np_fma(a, b, c)
        # exact residual = ph + pl + c - w; distill for its sign.  The
        # residual is either 0 or >= 2^-106 of the leading term, so four
        # EFT passes leave the sign unambiguous.
        r = accurate_sum([np.asarray(ph, np.float64), pl, np.asarray(c, np.float64),
                          np.negative(np.asarray(w, np.float64))], passes=4)
        return self._fix(w, np.sign(r))

    def neg(self, a):
        return np.negative(a)

    def mag_ge(self, a, b):
        return np.abs(a) >= np.abs(b)

    def where(self, mask, a, b):
        return np.where(mask, a, b)

    def sign(self, a):
        return np.sign(a)

    def to_float(self, a):
        return a

    def from_int(self, n):
        x = float(n)
        if int(x) != n:
            raise ValueError(f"{n} is not exactly representable in binary64")
        return x

    def unit_roundoff(self):
        return 2.0**-52


# ---------------------------------------------------------------------------
# accurate small sums (for error measurement well below u^2 of the data)


def vec_sum_passes(terms: list[np.ndarray], passes: int = 3) -> list[np.ndarray]:
    """Error-free transformation passes over a short list of float64 arrays:
    each pass runs a 2Sum chain bottom-up, concentrating the sum in the last
    component.  With k passes the plain sum of the result has a relative
    error O(u^k * condition), negligible for the condition numbers here."""
    arrs = [np.array(t, dtype=np.float64, copy=True) for t in terms]
    for _ in range(passes):
        for i in range(len(arrs) - 1):
            s, e = two_sum_f64(arrs[i], arrs[i + 1])
            arrs[i] = e
            arrs[i + 1] = s
    return arrs


def accurate_sum(terms: list[np.ndarray], passes: int = 3) -> np.ndarray:
    """Sum a short list of float64 arrays far more accurately than float64:
    suitable for residuals ~2^-110 of the summands' magnitude."""
    arrs = vec_sum_passes(terms, passes)
    total = arrs[0]
    for t in arrs[1:]:
        total = total + t
    return total


def product_expansion_f64(a, b):
    """The exact product of two (hi, lo) float64 pairs as 8 float64 terms."""
    (ah, al), (bh, bl) = a, b
    terms = []
    for x, y in ((ah, bh), (ah, bl), (al, bh), (al, bl)):
        s, t = two_prod_split_f64(np.asarray(x, np.float64), np.asarray(y, np.float64))
        terms.extend((s, t))
    return terms


# ---------------------------------------------------------------------------
# reproducible random streams


def philox_chunk(seed: int, chunk: int) -> np.random.Generator:
    """A generator for chunk #chunk of stream #seed; any chunk can be
    regenerated on its own, so failures found deep into a sweep are cheap to
    reproduce."""
    return np.random.Generator(np.random.Philox(key=[np.uint64(seed), np.uint64(chunk)]))


def uniform_chunk(seed: int, chunk: int, n: int, lo: float = -0.5, hi: float = 0.5) -> np.ndarray:
    return philox_chunk(seed, chunk).uniform(lo, hi, n)
