"""Bit-exact posit32 arithmetic built from integer operations.

Patterns are unsigned 32-bit words: 0 is zero, 0x80000000 is NaR, and every
other pattern is a unique nonzero real ``(1.f) * 2**(4k + e)`` (negatives
stored as the 2's complement of their magnitude's pattern).

The arithmetic kernels are branch-free and polymorphic: each accepts either
scalar Python ints or numpy uint64 lane arrays (see ``machine``), so the
same code path serves one-off scalar use and the vectorized transform
engine.  Internal conventions:

* scaling factors are carried biased by +512 so every intermediate stays
  non-negative (identical semantics for Python ints and wrapping uint64);
* working significands are 64-bit words with the implicit bit at bit 62,
  leaving a wide guard region so alignment/renormalization shifts can jam
  discarded bits into a sticky bit and rounding stays correct;
* rounding is nearest-even on the final retained bit of the packed body,
  saturating at maxPos/minPos (a nonzero real never becomes 0 or NaR).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import bigfloat
from .machine import (
    MASK32,
    MASK64,
    clz32,
    clz64,
    logical_not,
    maximum,
    minimum,
    where,
)

ZERO_BITS = 0x00000000
NAR_BITS = 0x80000000
MAXPOS_BITS = 0x7FFFFFFF
MINPOS_BITS = 0x00000001

STATE_ZERO = 0
STATE_NAR = -1
STATE_NORMAL = 1

_SF_BIAS = 512          # biased sf = sf + 512
_SFB_MAX = 632          # sf = +120
_SFB_MIN = 392          # sf = -120


class Decoded(NamedTuple):
    """Unpacked posit: sign, scaling factor, left-aligned fraction, state.

    ``fraction`` holds the fraction bits left-aligned in a 32-bit word with
    the implicit bit not stored; low-order bits beyond the stored fraction
    act as guard information when fed back to ``encode``.
    """

    sign: int
    sf: int
    fraction: int
    state: int


def _decode_raw(p):
    """Branch-free field extraction; flags gate the special patterns."""
    nonzero = p != 0
    nar = p == NAR_BITS
    sign = (p >> 31) & 1
    mag = where(sign != 0, (0x100000000 - p) & MASK32, p)
    r = (mag >> 30) & 1
    t = (mag << 1) & MASK32
    run_word = where(r != 0, t ^ MASK32, t)
    l = clz32(run_word)
    body = (t << (l + 1)) & MASK32
    e = body >> 30
    frac = (body << 2) & MASK32
    sfb = where(r != 0, 508 + 4 * l + e, 512 - 4 * l + e)
    return sign, sfb, frac, nonzero, nar


def _encode_raw(sign, sfb, sig):
    """Pack (sign, biased sf, significand-with-tail) into the nearest posit.

    ``sig`` carries the implicit bit at bit 62; everything below the stored
    fraction acts as the rounding tail (a jammed sticky bit at bit 0 is
    honored).  Saturates for sf outside [-120, 120].
    """
    over = sfb > _SFB_MAX
    under = sfb < _SFB_MIN
    kb = sfb >> 2                     # regime value k, biased by +128
    e = sfb & 3
    rpos = kb >= 128
    m = minimum(where(rpos, kb - 127, 128 - kb), 31)   # regime run length

    reg = where(rpos, ((1 << m) - 1) << (63 - m), 1 << (62 - m))
    epart = e << (60 - m)
    f63 = (sig << 2) & MASK64         # fraction left-aligned at bit 63
    sh = m + 4
    lost = f63 & ((1 << sh) - 1)
    fpart = f63 >> sh
    wide = reg | epart | fpart

    lsb = (wide >> 32) & 1
    guard = (wide >> 31) & 1
    sticky = ((wide & 0x7FFFFFFF) != 0) | (lost != 0)
    roundup = (guard != 0) & ((lsb != 0) | sticky)
    res = (wide >> 32) + where(roundup, 1, 0)

    res = where(res == 0, MINPOS_BITS, res)            # never round to zero
    res = where(res >= NAR_BITS, MAXPOS_BITS, res)     # never round to NaR
    res = where(over, MAXPOS_BITS, res)
    res = where(under, MINPOS_BITS, res)
    return where(sign != 0, (0x100000000 - res) & MASK32, res)


def negate(p):
    """2's complement negation; fixes 0 and NaR by construction."""
    return (0x100000000 - p) & MASK32


def add(a, b):
    """Correctly rounded posit32 addition (scalar ints or uint64 lanes)."""
    sa, sfa, fa, nza, nara = _decode_raw(a)
    sb, sfb, fb, nzb, narb = _decode_raw(b)

    # Order by magnitude so the large operand is never the one shifted and
    # effective subtraction can never underflow.
    swap = (sfb > sfa) | ((sfb == sfa) & (fb > fa))
    s1 = where(swap, sb, sa)
    s2 = where(swap, sa, sb)
    sf1 = where(swap, sfb, sfa)
    sf2 = where(swap, sfa, sfb)
    f1 = where(swap, fb, fa)
    f2 = where(swap, fa, fb)

    m1 = (1 << 62) | (f1 << 30)
    m2 = (1 << 62) | (f2 << 30)

    shift = minimum(sf1 - sf2, 63)    # sf spread can reach 240: clamp + jam
    lost = m2 & ((1 << shift) - 1)
    m2 = (m2 >> shift) | where(lost != 0, 1, 0)

    eff_sub = (s1 ^ s2) != 0
    total = where(eff_sub, m1 - m2, m1 + m2)
    cancelled = total == 0

    carry = (total >> 63) != 0        # carry implies clz == 0
    z = clz64(total)
    up = maximum(z, 1) - 1            # left shift for cancellation renorm
    normed = where(carry, (total >> 1) | (total & 1), (total << up) & MASK64)
    sf_res = where(carry, sf1 + 1, sf1 + 1 - z)

    res = _encode_raw(s1, sf_res, normed)
    res = where(cancelled, ZERO_BITS, res)
    res = where(nara | narb, NAR_BITS, res)
    res = where(logical_not(nzb), a, res)
    res = where(logical_not(nza), b, res)
    return res


def sub(a, b):
    """a - b, via addition of the 2's complement of the subtrahend."""
    return add(a, negate(b))


def mul(a, b):
    """Correctly rounded posit32 multiplication."""
    sa, sfa, fa, nza, nara = _decode_raw(a)
    sb, sfb, fb, nzb, narb = _decode_raw(b)

    ma = (1 << 27) | (fa >> 5)        # 28-bit significand, implicit bit set
    mb = (1 << 27) | (fb >> 5)
    prod = ma * mb                    # exact, < 2**56
    big = (prod >> 55) != 0           # product in [2, 4): renormalize
    sig = where(big, (prod << 7) & MASK64, (prod << 8) & MASK64)
    sf_res = sfa + sfb - _SF_BIAS + where(big, 1, 0)

    res = _encode_raw(sa ^ sb, sf_res, sig)
    res = where(logical_not(nza) | logical_not(nzb), ZERO_BITS, res)
    res = where(nara | narb, NAR_BITS, res)   # NaR dominates zero
    return res


def decode(p: int) -> Decoded:
    """Unpack one pattern into sign / scaling factor / fraction / state."""
    if p == ZERO_BITS:
        return Decoded(0, 0, 0, STATE_ZERO)
    if p == NAR_BITS:
        return Decoded(1, 0, 0, STATE_NAR)
    sign, sfb, frac, _, _ = _decode_raw(p)
    return Decoded(sign, sfb - _SF_BIAS, frac, STATE_NORMAL)


def encode(d: Decoded) -> int:
    """Pack a Decoded value into the nearest posit32 pattern."""
    if d.state == STATE_ZERO:
        return ZERO_BITS
    if d.state == STATE_NAR:
        return NAR_BITS
    sfb = d.sf + _SF_BIAS
    sfb = max(_SFB_MIN - 1, min(_SFB_MAX + 1, sfb))
    sig = (1 << 62) | ((d.fraction & MASK32) << 30)
    return _encode_raw(d.sign, sfb, sig)


def to_real(p: int):
    """Exact value of a pattern as an mpf (NaN for NaR)."""
    if p == ZERO_BITS:
        return bigfloat.mpf(0)
    if p == NAR_BITS:
        import mpmath

        return mpmath.nan
    d = decode(p)
    mant = (1 << 27) | (d.fraction >> 5)
    v = bigfloat.scaled(mant, d.sf - 27)
    return -v if d.sign else v


def from_real(x) -> int:
    """Nearest posit32 for an exact real (mpf, int, float, or Fraction)."""
    from fractions import Fraction

    if isinstance(x, Fraction):
        if x == 0:
            return ZERO_BITS
        num, den = abs(x.numerator), x.denominator
        sign = 1 if x < 0 else 0
        # Scale so the quotient carries >= 128 significant bits, with the
        # division remainder jammed into the low bit as a sticky.
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
    sfb = max(_SFB_MIN - 1, min(_SFB_MAX + 1, sf + _SF_BIAS))
    return _encode_raw(sign, sfb, sig)


def from_float64_batch(values: np.ndarray) -> np.ndarray:
    """Vectorized from_real for float64 inputs (exact decomposition)."""
    v = np.asarray(values, dtype=np.float64)
    if np.any(~np.isfinite(v)):
        raise ValueError("non-finite input to from_float64_batch")
    sign = (np.signbit(v)).astype(np.uint64)
    mant, exp = np.frexp(np.abs(v))
    man_int = (mant * (1 << 53)).astype(np.uint64)     # exact: 53-bit integer
    sf = exp.astype(np.int64) - 1
    sig = man_int << np.uint64(10)                     # leading bit 52 -> 62
    sfb = np.clip(sf + _SF_BIAS, _SFB_MIN - 1, _SFB_MAX + 1).astype(np.uint64)
    out = _encode_raw(sign, sfb, sig)
    return np.where(v == 0.0, np.uint64(ZERO_BITS), out)


def to_hex(p: int) -> str:
    """8-digit lowercase hex text form."""
    return format(int(p) & MASK32, "08x")


def from_hex(s: str) -> int:
    v = int(s, 16)
    if not 0 <= v <= MASK32:
        raise ValueError(f"not a 32-bit pattern: {s!r}")
    return v
