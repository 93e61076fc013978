"""Scalar-format abstraction so the FFT and spectral code run unchanged on
posit32, soft float32, or the arbitrary-precision reference.

A format bundles closed add/sub/mul/neg plus conversions to and from exact
reals.  Vectors are numpy arrays: uint64 lanes holding 32-bit patterns for
the machine formats, object arrays of mpf for the reference.  All ops are
elementwise and broadcast; results are always valid scalars of the format.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np

from . import bigfloat, posit32, softfloat32


def _exact_mpf(v):
    """Exact mpf from int/float/Fraction/mpf (no context rounding)."""
    if isinstance(v, mpmath.mpf):
        return v
    if isinstance(v, (int, float)):
        sign, man, exp = bigfloat.decompose(v)
        r = bigfloat.scaled(man, exp)
        return -r if sign else r
    if isinstance(v, Fraction):
        raise TypeError("pass Fractions through from_reals of a machine format "
                        "or pre-round explicitly; they are not generally exact")
    raise TypeError(f"cannot convert {type(v).__name__} to mpf")


class Posit32Format:
    """posit32 patterns in uint64 lanes."""

    name = "posit32"
    prec = None

    def add(self, a, b):
        return posit32.add(a, b)

    def sub(self, a, b):
        return posit32.sub(a, b)

    def mul(self, a, b):
        return posit32.mul(a, b)

    def neg(self, a):
        return posit32.negate(a)

    def zeros(self, n: int):
        return np.zeros(n, dtype=np.uint64)

    def from_reals(self, values):
        return np.array([posit32.from_real(v) for v in values], dtype=np.uint64)

    def from_float64(self, arr):
        return posit32.from_float64_batch(arr)

    def to_reals(self, vec):
        return [posit32.to_real(int(p)) for p in np.atleast_1d(vec)]

    def const_vec(self, v):
        return self.from_reals([v])


class Float32Format:
    """Normals-only float32 patterns in uint64 lanes."""

    name = "float32"
    prec = None

    def add(self, a, b):
        return softfloat32.add(a, b)

    def sub(self, a, b):
        return softfloat32.sub(a, b)

    def mul(self, a, b):
        return softfloat32.mul(a, b)

    def neg(self, a):
        return a ^ 0x80000000

    def zeros(self, n: int):
        return np.zeros(n, dtype=np.uint64)

    def from_reals(self, values):
        return np.array([softfloat32.from_real(v) for v in values], dtype=np.uint64)

    def from_float64(self, arr):
        return softfloat32.from_float64_batch(arr)

    def to_reals(self, vec):
        return [softfloat32.to_real(int(p)) for p in np.atleast_1d(vec)]

    def const_vec(self, v):
        return self.from_reals([v])


class BigFloatFormat:
    """Arbitrary-precision reference format at a fixed significand width."""

    def __init__(self, prec: int = bigfloat.DEFAULT_PREC):
        self.prec = prec
        self.name = f"bigfloat{prec}"
        p = prec
        self._vadd = np.frompyfunc(lambda a, b: bigfloat.big_add(a, b, p), 2, 1)
        self._vsub = np.frompyfunc(lambda a, b: bigfloat.big_sub(a, b, p), 2, 1)
        self._vmul = np.frompyfunc(lambda a, b: bigfloat.big_mul(a, b, p), 2, 1)
        self._vneg = np.frompyfunc(lambda a: -a, 1, 1)

    def add(self, a, b):
        return self._vadd(a, b)

    def sub(self, a, b):
        return self._vsub(a, b)

    def mul(self, a, b):
        return self._vmul(a, b)

    def neg(self, a):
        return self._vneg(a)

    def zeros(self, n: int):
        z = mpmath.mpf(0)
        return np.array([z] * n, dtype=object)

    def from_reals(self, values):
        out = []
        for v in values:
            if isinstance(v, Fraction):
                out.append(bigfloat.from_fraction(v, self.prec))
            else:
                out.append(bigfloat._round_to(_exact_mpf(v), self.prec))
        return np.array(out, dtype=object)

    def from_float64(self, arr):
        return self.from_reals([float(x) for x in np.asarray(arr, dtype=np.float64)])

    def to_reals(self, vec):
        return list(np.atleast_1d(vec))

    def const_vec(self, v):
        return self.from_reals([v])


_REGISTRY = {
    "posit32": Posit32Format,
    "float32": Float32Format,
}


def get_format(name: str):
    """Format by name: 'posit32', 'float32', or 'bigfloatP' (e.g. bigfloat250)."""
    if name in _REGISTRY:
        return _REGISTRY[name]()
    if name.startswith("bigfloat"):
        prec = int(name[len("bigfloat"):] or bigfloat.DEFAULT_PREC)
        if prec < 2:
            raise ValueError(f"bad precision in format name: {name!r}")
        return BigFloatFormat(prec)
    raise ValueError(f"unknown format {name!r}")
