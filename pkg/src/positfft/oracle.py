"""Independent posit32 reference used to validate the production kernels.

Everything here is written against the number-format grammar (sign bit,
regime run, 2-bit exponent, fraction) and deliberately shares no code with
the shift-based kernels it checks:

* ``posit_value`` reads fields by scanning the bit string of the pattern;
* ``posit_round`` rebuilds the bit expansion of an exact real and truncates
  it with round-to-nearest-even on the last retained bit (saturating so no
  nonzero real becomes zero or NaR), then verifies the result against its
  neighboring patterns.

Exact reals travel as (mantissa, exponent) integer pairs -- every posit and
every sum/product of posits is dyadic -- with general rationals reduced to
that form by jamming an inexact division remainder into a sticky low bit.

Rounding note: the rule is nearest-even at the final *bit* position of the
packed pattern.  Away from regime transitions this coincides with
nearest-value rounding.  Where the dropped bits include regime or exponent
bits (|scaling factor| >= ~116) the posit lattice is non-uniform and "half
the last bit" is not the value midpoint; the bit-position rule is what
posit packing implementations use, so the oracle mirrors it and the
neighbor check asserts bracketing everywhere plus nearest-value choice
wherever the bracketing pair shares one scale (where the rules agree).
"""

from __future__ import annotations

from fractions import Fraction

MASK32 = 0xFFFFFFFF
ZERO_BITS = 0x00000000
NAR_BITS = 0x80000000
MAXPOS_BITS = 0x7FFFFFFF
MINPOS_BITS = 0x00000001


def negate_bits(p: int) -> int:
    return (0x100000000 - p) & MASK32


def posit_mantexp(p: int) -> tuple[int, int]:
    """Exact (mantissa, exponent) of a pattern: value == man * 2**exp."""
    if p == ZERO_BITS:
        return (0, 0)
    if p == NAR_BITS:
        raise ValueError("NaR has no real value")
    if p & 0x80000000:
        man, exp = posit_mantexp(negate_bits(p))
        return (-man, exp)
    body = format(p, "032b")[1:]
    r0 = body[0]
    run = len(body) - len(body.lstrip(r0))
    k = run - 1 if r0 == "1" else -run
    rest = body[run + 1:]          # skip the regime terminator (may be absent)
    e = int((rest + "00")[:2], 2)
    f_bits = rest[2:]
    nf = len(f_bits)
    man = (1 << nf) | (int(f_bits, 2) if nf else 0)
    return (man, 4 * k + e - nf)


def posit_value(p: int) -> Fraction:
    """Exact value of a pattern as a Fraction."""
    man, exp = posit_mantexp(p)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def posit_round(v, verify: bool = True) -> int:
    """Round an exact real (Fraction or (man, exp) pair) to posit32."""
    if isinstance(v, tuple):
        man, exp = v
    else:
        v = Fraction(v)
        num, den = v.numerator, v.denominator
        if den & (den - 1) == 0:
            man, exp = num, -(den.bit_length() - 1)
        else:
            # Non-dyadic: take >= 128 quotient bits and jam the remainder
            # into a sticky low bit (breaks no ties: inexact is never a tie).
            shift = max(den.bit_length() - abs(num).bit_length() + 130, 0)
            q, r = divmod(abs(num) << shift, den)
            if r:
                q |= 1
            man = -q if num < 0 else q
            exp = -shift
    if man == 0:
        return ZERO_BITS
    sign = man < 0
    p = _round_magnitude(-man if sign else man, exp)
    if verify:
        _verify_neighbors(Fraction(-man if sign else man) * Fraction(2) ** exp, p)
    return negate_bits(p) if sign else p


def _round_magnitude(man: int, exp: int) -> int:
    """Positive magnitude man * 2**exp -> nearest posit pattern body."""
    nb = man.bit_length()
    sf = exp + nb - 1
    if sf > 130:
        return MAXPOS_BITS
    if sf < -130:
        return MINPOS_BITS

    k, e = divmod(sf, 4)
    if k >= 0:
        head = [1] * (k + 1) + [0]
    else:
        head = [0] * (-k) + [1]
    head += [(e >> 1) & 1, e & 1]

    frac_bits = nb - 1
    frac = man & ((1 << frac_bits) - 1) if frac_bits else 0
    nf = 31 - len(head)                       # fraction bits that fit

    if nf >= 0:
        head_int = int("".join(map(str, head)), 2)
        if frac_bits >= nf:
            rem_bits = frac_bits - nf
            body_frac = frac >> rem_bits
            rem = frac & ((1 << rem_bits) - 1)
        else:
            rem_bits = 0
            body_frac = frac << (nf - frac_bits)
            rem = 0
        p = (head_int << nf) | body_frac
        if rem_bits:
            half = 1 << (rem_bits - 1)
            if rem > half or (rem == half and (p & 1)):
                p += 1
    else:
        # Regime/exponent spill past the pattern: the tail starts with
        # head bits, then the fraction.
        p = int("".join(map(str, head[:31])), 2)
        first = head[31]
        rest = any(head[32:]) or frac != 0
        if first and (rest or (p & 1)):
            p += 1

    if p == 0:
        p = MINPOS_BITS                        # never round to zero
    if p >= NAR_BITS:
        p = MAXPOS_BITS                        # never round to NaR
    return p


def _verify_neighbors(a: Fraction, p: int) -> None:
    """Assert p correctly brackets the positive real a."""
    pv = posit_value(p)
    if pv == a:
        return
    if pv < a:
        hi = p + 1
        if hi >= NAR_BITS:
            return                             # saturated at maxPos
        assert a < posit_value(hi), (a, p, "not bracketing from below")
        lo = p
    else:
        lo = p - 1
        if lo == 0:
            return                             # saturated at minPos
        assert posit_value(lo) < a, (a, p, "not bracketing from above")
        hi = p
    # Nearest-value check where the bracketing pair shares one scaling
    # factor, i.e. everywhere the bit-position rule is nearest-value.
    if _scale_of(lo) == _scale_of(hi):
        d_lo = a - posit_value(lo)
        d_hi = posit_value(hi) - a
        want = lo if (d_lo < d_hi or (d_lo == d_hi and lo % 2 == 0)) else hi
        assert want == p, (a, p, want, "not nearest within uniform step")


def _scale_of(p: int) -> int:
    body = format(p, "032b")[1:]
    r0 = body[0]
    run = len(body) - len(body.lstrip(r0))
    k = run - 1 if r0 == "1" else -run
    rest = body[run + 1:]
    e = int((rest + "00")[:2], 2)
    return 4 * k + e


def _align(ma: int, ea: int, mb: int, eb: int) -> tuple[int, int, int]:
    if ea >= eb:
        return (ma << (ea - eb), mb, eb)
    return (ma, mb << (eb - ea), ea)


def oracle_add(a: int, b: int, verify: bool = True) -> int:
    """Reference addition: exact integer sum, then posit rounding."""
    if a == ZERO_BITS:
        return b
    if b == ZERO_BITS:
        return a
    if a == NAR_BITS or b == NAR_BITS:
        return NAR_BITS
    ma, ea = posit_mantexp(a)
    mb, eb = posit_mantexp(b)
    ma, mb, e = _align(ma, ea, mb, eb)
    return posit_round((ma + mb, e), verify)


def oracle_sub(a: int, b: int, verify: bool = True) -> int:
    return oracle_add(a, negate_bits(b), verify)


def oracle_mul(a: int, b: int, verify: bool = True) -> int:
    """Reference multiplication: NaR dominates zero, mirroring the kernel."""
    if a == NAR_BITS or b == NAR_BITS:
        return NAR_BITS
    if a == ZERO_BITS or b == ZERO_BITS:
        return ZERO_BITS
    ma, ea = posit_mantexp(a)
    mb, eb = posit_mantexp(b)
    return posit_round((ma * mb, ea + eb), verify)
