"""Word-level helpers shared by the soft arithmetic kernels.

Kernels operate on unsigned 64-bit words and are written branch-free, so a
single kernel body runs in two modes:

* scalar mode — operands are plain Python ints (bit patterns),
* batch mode — operands are numpy ``uint64`` arrays, one lane per value.

The helpers below are the only places that dispatch on the operand kind.
Kernel code keeps every intermediate non-negative (biased exponents,
magnitude-sorted operands) so plain ``+ - * & | ^ << >>`` behave the same
for Python ints and wrapping uint64 lanes.  Variable shift counts must stay
below 64; kernels guarantee that by construction.
"""

from __future__ import annotations

import numpy as np

MASK32 = 0xFFFFFFFF
MASK64 = 0xFFFFFFFFFFFFFFFF


def is_batch(x) -> bool:
    return isinstance(x, np.ndarray)


def where(cond, a, b):
    """Branch-free select; `cond` is a bool (scalar) or bool array."""
    if isinstance(cond, np.ndarray):
        out = np.where(cond, a, b)
        # np.where(bool_arr, int, int) yields int64; kernels need uint64 lanes.
        if out.dtype != np.uint64 and out.dtype != np.bool_:
            out = out.astype(np.uint64)
        return out
    return a if cond else b


def minimum(a, b):
    if is_batch(a) or is_batch(b):
        return np.minimum(a, b)
    return a if a < b else b


def maximum(a, b):
    if is_batch(a) or is_batch(b):
        return np.maximum(a, b)
    return a if a > b else b


def clz32(x):
    """Count leading zeros of a 32-bit value (clz32(0) == 32)."""
    if is_batch(x):
        # uint32 values are exact in float64, so frexp's exponent is
        # floor(log2(x)) + 1 with no rounding hazard (unlike full uint64).
        e = np.frexp(x.astype(np.float64))[1]
        return (32 - e).astype(np.uint64)
    return 32 - x.bit_length()


def clz64(x):
    """Count leading zeros of a 64-bit value (clz64(0) == 64)."""
    if is_batch(x):
        hi = x >> 32
        lo = x & MASK32
        return np.where(hi != 0, clz32(hi), 32 + clz32(lo)).astype(np.uint64)
    return 64 - x.bit_length()


def logical_not(flag):
    if isinstance(flag, np.ndarray):
        return np.logical_not(flag)
    return not flag


def as_lanes(patterns) -> np.ndarray:
    """Coerce a sequence of 32-bit patterns into uint64 lanes."""
    return np.asarray(patterns, dtype=np.uint64)


def as_patterns(lanes) -> np.ndarray:
    """Mask lanes back down to their 32-bit payload."""
    return np.asarray(lanes, dtype=np.uint64) & np.uint64(MASK32)
