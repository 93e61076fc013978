"""Radix-4 iterative Stockham FFT and IFFT, generic over the scalar format.

The transform is the self-sorting double-buffer Stockham scheme: no
bit-reversal pass, natural order in and out, one ping-pong buffer pair
reused across stages.  Sizes are powers of two; odd powers of two get one
twiddle-free radix-2 stage after the radix-4 stages.  Every butterfly uses
exactly the format's add/sub/mul (complex products in 4-mul/2-add
schoolbook form), so the operation stream is identical for every format.

Twiddle factors e^(-2*pi*i*k/N) are precomputed from the high-precision
reference (exact values at quarter turns, trig elsewhere), rounded once to
the target format, and cached per (size, format).
"""

from __future__ import annotations

import threading
from fractions import Fraction

from . import bigfloat

_TWIDDLE_GUARD_PREC = 96

_cache_lock = threading.Lock()
_twiddle_cache: dict[tuple[int, str], "TwiddleTable"] = {}


class TwiddleTable:
    """Per-stage twiddle arrays for one (size, format) pair.

    Each radix-4 stage of length n holds the three root arrays
    w^p, w^2p, w^3p (p < n/4, w = e^(-2*pi*i/n)) as format scalars, stored
    as (re, im) pairs for the forward direction and conjugated for the
    inverse.
    """

    def __init__(self, n: int, fmt, stages_fwd, stages_inv):
        self.n = n
        self.format_name = fmt.name
        self.stages_fwd = stages_fwd
        self.stages_inv = stages_inv


def _validate_size(n: int) -> None:
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"FFT size must be a power of two >= 2, got {n}")


def _root_parts(j: int, n: int, prec: int):
    """Exact (cos, -sin) of 2*pi*j/n as mpf values."""
    j %= n
    if 4 * j % n == 0:
        quadrant = 4 * j // n
        one = bigfloat.from_int(1)
        zero = bigfloat.from_int(0)
        return [(one, zero), (zero, -one), (-one, zero), (zero, one)][quadrant]
    theta = bigfloat.big_div(
        bigfloat.big_mul(bigfloat.from_int(2 * j), bigfloat.pi(prec), prec),
        bigfloat.from_int(n),
        prec,
    )
    return bigfloat.big_cos(theta, prec), -bigfloat.big_sin(theta, prec)


def build_twiddles(n: int, fmt) -> TwiddleTable:
    """Twiddle table for size n in the given format (cached per size+format)."""
    _validate_size(n)
    key = (n, fmt.name)
    with _cache_lock:
        hit = _twiddle_cache.get(key)
    if hit is not None:
        return hit

    prec = max(_TWIDDLE_GUARD_PREC, (fmt.prec or 0) + 30)
    stages_fwd = []
    stages_inv = []
    length = n
    while length > 2:
        m = length // 4
        stage_fwd = []
        stage_inv = []
        for c in (1, 2, 3):
            res, ims = zip(*(_root_parts(c * p, length, prec) for p in range(m)))
            re_v = fmt.from_reals(res)
            im_v = fmt.from_reals(ims)
            stage_fwd.append((re_v, im_v))
            stage_inv.append((re_v, fmt.neg(im_v)))
        stages_fwd.append(stage_fwd)
        stages_inv.append(stage_inv)
        length //= 4

    table = TwiddleTable(n, fmt, stages_fwd, stages_inv)
    with _cache_lock:
        _twiddle_cache[key] = table
    return table


def _cmul(fmt, wr, wi, zr, zi):
    """(wr + i*wi) * (zr + i*zi), schoolbook: 4 mul, 1 sub, 1 add."""
    rr = fmt.sub(fmt.mul(wr, zr), fmt.mul(wi, zi))
    ri = fmt.add(fmt.mul(wr, zi), fmt.mul(wi, zr))
    return rr, ri


def _transform(fmt, re, im, table: TwiddleTable, stages) -> tuple:
    import numpy as np

    n = table.n
    cur_r = np.array(re, copy=True)
    cur_i = np.array(im, copy=True)
    oth_r = np.empty_like(cur_r)
    oth_i = np.empty_like(cur_i)

    length = n
    stride = 1
    stage_idx = 0
    while length > 2:
        m = length // 4
        (w1r, w1i), (w2r, w2i), (w3r, w3i) = stages[stage_idx]
        x_r = cur_r.reshape(4, m, stride)
        x_i = cur_i.reshape(4, m, stride)
        y_r = oth_r.reshape(m, 4, stride)
        y_i = oth_i.reshape(m, 4, stride)
        w1r_c = w1r[:, None]
        w1i_c = w1i[:, None]
        w2r_c = w2r[:, None]
        w2i_c = w2i[:, None]
        w3r_c = w3r[:, None]
        w3i_c = w3i[:, None]

        ar, ai = x_r[0], x_i[0]
        br, bi = x_r[1], x_i[1]
        cr, ci = x_r[2], x_i[2]
        dr, di = x_r[3], x_i[3]

        apc_r = fmt.add(ar, cr)
        apc_i = fmt.add(ai, ci)
        amc_r = fmt.sub(ar, cr)
        amc_i = fmt.sub(ai, ci)
        bpd_r = fmt.add(br, dr)
        bpd_i = fmt.add(bi, di)
        bmd_r = fmt.sub(br, dr)
        bmd_i = fmt.sub(bi, di)

        y_r[:, 0, :] = fmt.add(apc_r, bpd_r)
        y_i[:, 0, :] = fmt.add(apc_i, bpd_i)

        # amc -+ j*bmd, with j*z = (-z_im, z_re)
        t1_r = fmt.add(amc_r, bmd_i)
        t1_i = fmt.sub(amc_i, bmd_r)
        t3_r = fmt.sub(amc_r, bmd_i)
        t3_i = fmt.add(amc_i, bmd_r)
        t2_r = fmt.sub(apc_r, bpd_r)
        t2_i = fmt.sub(apc_i, bpd_i)

        y_r[:, 1, :], y_i[:, 1, :] = _cmul(fmt, w1r_c, w1i_c, t1_r, t1_i)
        y_r[:, 2, :], y_i[:, 2, :] = _cmul(fmt, w2r_c, w2i_c, t2_r, t2_i)
        y_r[:, 3, :], y_i[:, 3, :] = _cmul(fmt, w3r_c, w3i_c, t3_r, t3_i)

        cur_r, oth_r = oth_r, cur_r
        cur_i, oth_i = oth_i, cur_i
        length //= 4
        stride *= 4
        stage_idx += 1

    if length == 2:
        x_r = cur_r.reshape(2, stride)
        x_i = cur_i.reshape(2, stride)
        y_r = oth_r.reshape(2, stride)
        y_i = oth_i.reshape(2, stride)
        y_r[0] = fmt.add(x_r[0], x_r[1])
        y_i[0] = fmt.add(x_i[0], x_i[1])
        y_r[1] = fmt.sub(x_r[0], x_r[1])
        y_i[1] = fmt.sub(x_i[0], x_i[1])
        cur_r, oth_r = oth_r, cur_r
        cur_i, oth_i = oth_i, cur_i

    return cur_r, cur_i


def fft_forward(fmt, re, im, table: TwiddleTable | None = None):
    """DFT X[k] = sum_n x[n] e^(-2*pi*i*n*k/N); input unmodified."""
    n = len(re)
    if table is None:
        table = build_twiddles(n, fmt)
    if table.n != n or table.format_name != fmt.name:
        raise ValueError("twiddle table does not match input size/format")
    return _transform(fmt, re, im, table, table.stages_fwd)


def fft_inverse(fmt, re, im, table: TwiddleTable | None = None):
    """Inverse DFT: conjugate-twiddle Stockham plus final 1/N scaling."""
    n = len(re)
    if table is None:
        table = build_twiddles(n, fmt)
    if table.n != n or table.format_name != fmt.name:
        raise ValueError("twiddle table does not match input size/format")
    out_r, out_i = _transform(fmt, re, im, table, table.stages_inv)
    inv_n = fmt.const_vec(Fraction(1, n))
    return fmt.mul(out_r, inv_n), fmt.mul(out_i, inv_n)
