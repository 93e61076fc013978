"""Normals-only IEEE-754 binary32 arithmetic from integer operations.

Patterns are unsigned 32-bit words (1 sign, 8 exponent, 23 fraction bits).
Only normal values circulate: exponent fields 0 and 255 are never produced.
±0 is admitted as an input convenience (any pattern with a zero exponent
field is treated as ±0).  Results that would be subnormal flush to +0 and
results that would overflow saturate to the largest normal magnitude, so
the normals-plus-zero set is closed under the operations (no Inf/NaN).

The kernels share the conventions of the posit module: branch-free bodies
polymorphic over scalar ints and numpy uint64 lanes, working significands
with the implicit bit at bit 62 and a jammed sticky tail, exponents carried
with extra bias (+256) so intermediates stay non-negative.  Rounding is
nearest-even on the 23-bit fraction; flush applies to the normalized
pre-rounding exponent.
"""

from __future__ import annotations

import numpy as np

from . import bigfloat
from .machine import (
    MASK32,
    MASK64,
    clz64,
    logical_not,
    maximum,
    minimum,
    where,
)

EXP_BIAS = 127
_WBIAS = 256                # workspace rebias on top of the IEEE bias
_W_MIN = 257                # smallest normal exponent field (1), rebias
_W_MAX = 510                # largest normal exponent field (254), rebias

ZERO_BITS = 0x00000000
NEGZERO_BITS = 0x80000000
ONE_BITS = 0x3F800000
MAX_NORMAL_BITS = 0x7F7FFFFF
MIN_NORMAL_BITS = 0x00800000


def _unpack(p):
    sign = (p >> 31) & 1
    w = ((p >> 23) & 0xFF) + _WBIAS
    frac = p & 0x7FFFFF
    zero = ((p >> 23) & 0xFF) == 0
    return sign, w, frac, zero


def _pack_round(sign, w, sig):
    """Round/pack a normalized significand (implicit bit at 62).

    Flushes to +0 when the pre-rounding exponent is below the normal range
    and saturates to the signed max normal on overflow (including overflow
    created by the rounding carry).
    """
    flush = w < _W_MIN
    over = w > _W_MAX

    lsb = (sig >> 39) & 1
    guard = (sig >> 38) & 1
    sticky = (sig & ((1 << 38) - 1)) != 0
    roundup = (guard != 0) & ((lsb != 0) | sticky)
    man = (sig >> 39) + where(roundup, 1, 0)     # 24 bits + possible carry

    # Packing by addition lets the rounding carry bump the exponent field.
    wclamp = minimum(maximum(w, _W_MIN - 1), _W_MAX + 1)
    word = ((wclamp - (_WBIAS + 1)) << 23) + man
    over = over | ((word >> 23) >= 255)

    word = where(over, MAX_NORMAL_BITS, word)
    word = (word & 0x7FFFFFFF) | (where(sign != 0, 1, 0) << 31)
    return where(flush, ZERO_BITS, word)


def add(a, b):
    """Correctly rounded normals-only float32 addition."""
    sa, wa, fa, za = _unpack(a)
    sb, wb, fb, zb = _unpack(b)

    swap = (wb > wa) | ((wb == wa) & (fb > fa))
    s1 = where(swap, sb, sa)
    s2 = where(swap, sa, sb)
    w1 = where(swap, wb, wa)
    w2 = where(swap, wa, wb)
    f1 = where(swap, fb, fa)
    f2 = where(swap, fa, fb)

    m1 = ((1 << 23) | f1) << 39
    m2 = ((1 << 23) | f2) << 39

    shift = minimum(w1 - w2, 63)
    lost = m2 & ((1 << shift) - 1)
    m2 = (m2 >> shift) | where(lost != 0, 1, 0)

    eff_sub = (s1 ^ s2) != 0
    total = where(eff_sub, m1 - m2, m1 + m2)
    cancelled = total == 0

    carry = (total >> 63) != 0
    z = clz64(total)
    up = maximum(z, 1) - 1
    normed = where(carry, (total >> 1) | (total & 1), (total << up) & MASK64)
    w_res = where(carry, w1 + 1, w1 + 1 - z)

    res = _pack_round(s1, w_res, normed)
    res = where(cancelled, ZERO_BITS, res)
    res = where(zb, a, res)
    res = where(za, b, res)
    zero_sum = where((sa & sb) != 0, NEGZERO_BITS, ZERO_BITS)
    return where(za & zb, zero_sum, res)


def sub(a, b):
    return add(a, b ^ 0x80000000)


def mul(a, b):
    """Correctly rounded normals-only float32 multiplication."""
    sa, wa, fa, za = _unpack(a)
    sb, wb, fb, zb = _unpack(b)
    sign = sa ^ sb

    ma = (1 << 23) | fa
    mb = (1 << 23) | fb
    prod = ma * mb                     # exact, < 2**48
    big = (prod >> 47) != 0
    sig = where(big, (prod << 15) & MASK64, (prod << 16) & MASK64)
    w_res = wa + wb - (_WBIAS + EXP_BIAS) + where(big, 1, 0)

    res = _pack_round(sign, w_res, sig)
    zero_word = where(sign != 0, NEGZERO_BITS, ZERO_BITS)
    return where(za | zb, zero_word, res)


def to_real(p: int):
    """Exact value of a pattern as an mpf (zero exponent field -> 0)."""
    sign, w, frac, zero = _unpack(p)
    if zero:
        return bigfloat.mpf(0)
    v = bigfloat.scaled((1 << 23) | frac, (w - _WBIAS - EXP_BIAS) - 23)
    return -v if sign else v


def from_real(x) -> int:
    """Nearest normals-only float32 (flush/saturate) for an exact real."""
    from fractions import Fraction

    if isinstance(x, Fraction):
        if x == 0:
            return ZERO_BITS
        num, den = abs(x.numerator), x.denominator
        sign = 1 if x < 0 else 0
        shift = max(den.bit_length() - num.bit_length() + 130, 0)
        man, rem = divmod(num << shift, den)
        if rem:
            man |= 1
        exp = -shift
    else:
        sign, man, exp = bigfloat.decompose(x)
    if man == 0:
        return ZERO_BITS
    nb = man.bit_length()
    sf = exp + nb - 1
    if nb <= 63:
        sig = man << (63 - nb)
    else:
        cut = nb - 63
        sig = man >> cut
        if man & ((1 << cut) - 1):
            sig |= 1
    w = max(0, min(1023, sf + EXP_BIAS + _WBIAS))
    return _pack_round(sign, w, sig)


def from_float64_batch(values: np.ndarray) -> np.ndarray:
    """Vectorized from_real for float64 inputs, via the hardware FPU."""
    v = np.asarray(values, dtype=np.float64)
    if np.any(~np.isfinite(v)):
        raise ValueError("non-finite input to from_float64_batch")
    bits = v.astype(np.float32).view(np.uint32).astype(np.uint64)
    expf = (bits >> 23) & 0xFF
    # Flush subnormal results to +0; saturate the (absurd) overflow case.
    out = np.where(expf == 0, np.uint64(ZERO_BITS), bits)
    out = np.where(expf == 255, (bits & 0x80000000) | MAX_NORMAL_BITS, out)
    return out


def to_float64_batch(patterns: np.ndarray) -> np.ndarray:
    """Exact float64 view of float32 patterns."""
    return np.asarray(patterns, dtype=np.uint64).astype(np.uint32).view(np.float32).astype(np.float64)


def to_hex(p: int) -> str:
    return format(int(p) & MASK32, "08x")


def from_hex(s: str) -> int:
    v = int(s, 16)
    if not 0 <= v <= MASK32:
        raise ValueError(f"not a 32-bit pattern: {s!r}")
    return v
