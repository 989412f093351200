"""Brute-force reference transforms.

Everything here is a plain matrix product followed by round/shift/clamp.  It
shares no evaluation code with the optimized engines; MTS kernels come
straight from the trigonometric formulas (DCT-VIII included, not derived
from DST-VII) and the diagonal scan is rebuilt by sorting.

Accumulator width: |coeff| <= 2^17, |kernel| <= 2^7 and at most 64 terms,
so every dot product stays below 2^30 and int64 is ample.
"""

from __future__ import annotations

import numpy as np

from .kernels import KernelMatrix, TransformType, integer_kernel, real_kernel

_I64 = np.int64


def _round_shift(x: np.ndarray, shift: int) -> np.ndarray:
    if shift == 0:
        return x
    return (x + (1 << (shift - 1))) >> shift


def _clamp(x: np.ndarray, bits: int) -> np.ndarray:
    return np.clip(x, -(1 << (bits - 1)), (1 << (bits - 1)) - 1)


def naive_inverse_1d(coeffs, kernel: KernelMatrix, shift: int, clamp_bits: int) -> np.ndarray:
    c = np.asarray(coeffs, dtype=_I64)
    k = np.asarray(kernel.entries, dtype=_I64)
    if c.shape[-1] != k.shape[0]:
        raise ValueError(f"vector length {c.shape[-1]} != kernel size {k.shape[0]}")
    n = k.shape[1]
    out = np.zeros(c.shape[:-1] + (n,), dtype=_I64)
    for j in range(n):
        out[..., j] = (c * k[:, j]).sum(axis=-1)
    return _clamp(_round_shift(out, shift), clamp_bits)


def zero_beyond(block, keep_w: int, keep_h: int) -> np.ndarray:
    out = np.array(block, dtype=_I64, copy=True)
    out[keep_h:, :] = 0
    out[:, keep_w:] = 0
    return out


def kept_size(n: int, ttype: TransformType) -> int:
    limit = {TransformType.DCT2: 32, TransformType.DST7: 16, TransformType.DCT8: 16}[TransformType(ttype)]
    return n if n < limit else limit


def naive_inverse_2d(
    block,
    hor: KernelMatrix,
    ver: KernelMatrix,
    s1: int,
    s2: int,
    mid_bits: int = 18,
    out_bits: int = 11,
    vertical_first: bool = True,
) -> np.ndarray:
    """X = T_V^T . Y . T_H with a shift/clamp after each 1-D stage."""
    y = np.asarray(block, dtype=_I64)
    h, w = y.shape
    if hor.size != w or ver.size != h:
        raise ValueError(f"block {w}x{h} does not match kernels {hor.size}/{ver.size}")
    if vertical_first:
        mid = naive_inverse_1d(y.T, ver, s1, mid_bits).T  # columns
        return naive_inverse_1d(mid, hor, s2, out_bits)
    mid = naive_inverse_1d(y, hor, s1, mid_bits)
    return naive_inverse_1d(mid.T, ver, s2, out_bits).T


def naive_inverse_lfnst(vec, kernel: KernelMatrix, shift: int, clamp_bits: int) -> np.ndarray:
    z = np.asarray(vec, dtype=_I64)
    t = np.asarray(kernel.entries, dtype=_I64)
    if z.ndim != 1 or z.shape[0] > t.shape[0]:
        raise ValueError(f"input length {z.shape} incompatible with kernel {t.shape}")
    if t.shape[1] not in (16, 48):
        raise ValueError(f"LFNST kernel must have 16 or 48 columns, got {t.shape[1]}")
    acc = [sum(int(t[i, j]) * int(z[i]) for i in range(z.shape[0])) for j in range(t.shape[1])]
    return _clamp(_round_shift(np.array(acc, dtype=_I64), shift), clamp_bits)


def naive_forward_2d(residual, hor: KernelMatrix, ver: KernelMatrix) -> np.ndarray:
    """Real-arithmetic Y = T_V . X . T_H^T."""
    x = np.asarray(residual, dtype=float)
    return np.asarray(ver.entries, float) @ x @ np.asarray(hor.entries, float).T


def naive_inverse_2d_real(coeffs, hor: KernelMatrix, ver: KernelMatrix) -> np.ndarray:
    y = np.asarray(coeffs, dtype=float)
    return np.asarray(ver.entries, float).T @ y @ np.asarray(hor.entries, float)


def count_naive_ops(n: int) -> tuple[int, int]:
    """(multiplications, additions) of an N-point matrix-vector product."""
    return n * n, n * (n - 1)


# -- full reference pipeline --------------------------------------------------


def diagonal_positions(size: int = 4) -> list[tuple[int, int]]:
    """(x, y) in up-right diagonal order, built by sorting."""
    cells = [(x, y) for y in range(size) for x in range(size)]
    return sorted(cells, key=lambda p: (p[0] + p[1], p[0]))


def _lfnst_region(out_size: int) -> list[tuple[int, int]]:
    base = diagonal_positions(4)
    if out_size == 16:
        return base
    return base + [(x + 4, y) for x, y in base] + [(x, y + 4) for x, y in base]


def reference_kernels(ttype: TransformType, n: int) -> KernelMatrix:
    return integer_kernel(TransformType(ttype), n)


def reference_inverse_transform(desc, coeffs, lfnst_kernel_for, cfg) -> np.ndarray:
    """Decode one block the slow way.

    ``lfnst_kernel_for(out_size, set_idx, lfnst_idx)`` supplies the secondary
    kernel (those have no closed form).  Eligibility/shape rules are taken
    from ``desc`` helpers; all arithmetic is local.
    """
    from .lfnst import lfnst_eligible, lfnst_shape

    y = np.array(coeffs, dtype=_I64).reshape(desc.height, desc.width)
    hor_t, ver_t = desc.transform_pair()

    if lfnst_eligible(desc):
        shape = lfnst_shape(desc.width, desc.height)
        scan = diagonal_positions(4)[: shape.in_size]
        z = np.array([y[yy, xx] for xx, yy in scan], dtype=_I64)
        k = lfnst_kernel_for(shape.out_size, desc.lfnst.set_idx, desc.lfnst.kernel_idx + 1)
        v = naive_inverse_lfnst(z, k, cfg.lfnst_shift, cfg.intermediate_clamp_bits)
        y = np.zeros_like(y)
        for val, (xx, yy) in zip(v, _lfnst_region(shape.out_size)):
            y[yy, xx] = val

    if cfg.zeroing:
        y = zero_beyond(y, kept_size(desc.width, hor_t), kept_size(desc.height, ver_t))
    return naive_inverse_2d(
        y,
        reference_kernels(hor_t, desc.width),
        reference_kernels(ver_t, desc.height),
        cfg.s1,
        cfg.s2,
        cfg.intermediate_clamp_bits,
        cfg.output_clamp_bits,
        vertical_first=cfg.first_direction == "vertical",
    )
