"""Arbitrary-precision binary floating point used as the accuracy reference.

Values are ``mpmath.mpf`` instances (sign / significand / exponent triples
with unbounded exponent range).  Every operation takes an explicit precision
``prec`` so the rounding point is pinned per call instead of inherited from
mpmath's global context.  Basic arithmetic is correctly rounded to nearest
even at ``prec`` bits; sin/cos are computed with guard bits and are accurate
to better than one ulp at ``prec`` (documented bound, not correct rounding).

pi comes from a stored 1024-bit constant rather than from mpmath's own
machinery, so the trig tests do not have to trust the library's argument
reduction for its own reference angle.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mpf

DEFAULT_PREC = 250

# First 256 hex digits of pi (1024 fraction bits, truncated).  These are the
# classic hexadecimal digits of pi as published in standard tables.
_PI_HEX_FRAC = (
    "243F6A8885A308D313198A2E03707344A4093822299F31D0082EFA98EC4E6C89"
    "452821E638D01377BE5466CF34E90C6CC0AC29B7C97C50DD3F84D5B5B5470917"
    "9216D5D98979FB1BD1310BA698DFB5AC2FFD72DBD01ADFB7B8E1AFED6A267E96"
    "BA7C9045F12C7F9924A19947B3916CF70801F2E2858EFC16636920D871574E69"
)
_PI_MAN = (3 << (4 * len(_PI_HEX_FRAC))) | int(_PI_HEX_FRAC, 16)
_PI_EXP = -4 * len(_PI_HEX_FRAC)
MAX_PI_PREC = 1000


def _round_to(x: mpf, prec: int) -> mpf:
    """Round an mpf to `prec` significand bits, nearest even."""
    return mpmath.fadd(x, mpmath.mpf(0), prec=prec, rounding="n")


def pi(prec: int = DEFAULT_PREC) -> mpf:
    """pi rounded to `prec` bits, from the stored 1024-bit constant."""
    if prec > MAX_PI_PREC:
        raise ValueError(f"stored pi constant supports prec <= {MAX_PI_PREC}, got {prec}")
    with mpmath.workprec(_PI_MAN.bit_length() + 8):
        exact = mpmath.ldexp(mpmath.mpf(_PI_MAN), _PI_EXP)
    return _round_to(exact, prec)


def big_add(a, b, prec: int = DEFAULT_PREC) -> mpf:
    return mpmath.fadd(a, b, prec=prec, rounding="n")


def big_sub(a, b, prec: int = DEFAULT_PREC) -> mpf:
    return mpmath.fsub(a, b, prec=prec, rounding="n")


def big_mul(a, b, prec: int = DEFAULT_PREC) -> mpf:
    return mpmath.fmul(a, b, prec=prec, rounding="n")


def big_div(a, b, prec: int = DEFAULT_PREC) -> mpf:
    if b == 0:
        raise ZeroDivisionError("big_div: division by zero")
    return mpmath.fdiv(a, b, prec=prec, rounding="n")


def big_sqrt(a, prec: int = DEFAULT_PREC) -> mpf:
    with mpmath.workprec(prec + 20):
        r = mpmath.sqrt(a)
    return _round_to(r, prec)


def big_sin(theta, prec: int = DEFAULT_PREC) -> mpf:
    with mpmath.workprec(prec + 20):
        r = mpmath.sin(theta)
    return _round_to(r, prec)


def big_cos(theta, prec: int = DEFAULT_PREC) -> mpf:
    with mpmath.workprec(prec + 20):
        r = mpmath.cos(theta)
    return _round_to(r, prec)


def from_int(n: int) -> mpf:
    """Exact conversion of a Python int."""
    with mpmath.workprec(max(n.bit_length(), 1) + 4):
        return mpmath.mpf(n)


def from_fraction(fr: Fraction, prec: int = DEFAULT_PREC) -> mpf:
    """Fraction -> mpf, correctly rounded at `prec` bits."""
    num = from_int(fr.numerator)
    den = from_int(fr.denominator)
    return big_div(num, den, prec)


def scaled(man: int, exp: int) -> mpf:
    """Exact man * 2**exp for integer man."""
    with mpmath.workprec(max(abs(man).bit_length(), 1) + 4):
        return mpmath.ldexp(mpmath.mpf(man), exp)


def to_fraction(x) -> Fraction:
    """Exact mpf -> Fraction."""
    sign, man, exp = decompose(x)
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def decompose(x) -> tuple[int, int, int]:
    """(sign, significand, exponent) with x == (-1)**sign * significand * 2**exponent.

    The significand is odd-normalized (trailing zeros stripped); zero returns
    (0, 0, 0).
    """
    if not isinstance(x, mpf):
        # Exact coercion; mpf(x) would re-round to the global context.
        if isinstance(x, int):
            x = from_int(x)
        elif isinstance(x, float):
            with mpmath.workprec(60):
                x = mpmath.mpf(x)
        else:
            raise TypeError(f"cannot decompose {type(x).__name__}")
    if x == 0:
        return (0, 0, 0)
    sign, man, exp, _ = x._mpf_
    return (int(sign), int(man), int(exp))


def sig_bits(x) -> int:
    """Number of significand bits actually needed to represent x exactly."""
    _, man, _ = decompose(x)
    return man.bit_length()


def to_decimal(x, digits: int = 40) -> str:
    with mpmath.workprec(int(digits * 3.33) + 20):
        return mpmath.nstr(mpf(x), digits)


def from_decimal(s: str, prec: int = DEFAULT_PREC) -> mpf:
    with mpmath.workprec(prec):
        return mpmath.mpf(s)


def to_hexfloat(x) -> str:
    """Exact hex-float text form, e.g. '0x1.921fb54442d18p+1'."""
    sign, man, exp = decompose(x)
    if man == 0:
        return "0x0.0p+0"
    nbits = man.bit_length()
    # Normalize to 1.xxx * 2**e with the fraction padded to whole hex digits.
    e = exp + nbits - 1
    frac_bits = nbits - 1
    pad = (-frac_bits) % 4
    frac = (man & ((1 << frac_bits) - 1)) << pad
    hex_digits = (frac_bits + pad) // 4
    body = f"{frac:0{hex_digits}x}" if hex_digits else "0"
    prefix = "-" if sign else ""
    return f"{prefix}0x1.{body}p{e:+d}"


def from_hexfloat(s: str) -> mpf:
    """Parse the exact hex-float form produced by to_hexfloat."""
    s = s.strip()
    sign = 1 if s.startswith("-") else 0
    s = s.lstrip("+-")
    if not s.lower().startswith("0x"):
        raise ValueError(f"not a hex float: {s!r}")
    mant_s, _, exp_s = s[2:].lower().partition("p")
    exp = int(exp_s) if exp_s else 0
    int_s, _, frac_s = mant_s.partition(".")
    man = int(int_s + frac_s, 16) if (int_s + frac_s) else 0
    exp -= 4 * len(frac_s)
    val = scaled(man, exp)
    if sign:
        val = -val
    return val
