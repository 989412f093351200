"""Inverse low-frequency non-separable transform."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .engine import StageConfig, round_shift, saturate
from .kernel_store import KernelBank, default_bank
from .kernels import TransformType


@dataclass(frozen=True)
class LfnstParams:
    set_idx: int
    kernel_idx: int
    ipm: int = 0
    last_sig_pos: int = 0

    def __post_init__(self):
        if not 0 <= self.set_idx <= 3:
            raise ValueError(f"set_idx {self.set_idx} outside 0..3")
        if self.kernel_idx not in (0, 1):
            raise ValueError(f"kernel_idx {self.kernel_idx} not in {{0, 1}}")


@dataclass(frozen=True)
class LfnstShape:
    in_size: int
    out_size: int
    in_rate: Fraction
    out_rate: Fraction

    @property
    def label(self) -> str:
        return f"{self.in_size}x{self.out_size}"


# (in_size, out_size) -> input rate; every class outputs 2 samples/cycle
_RATES = {
    (8, 16): Fraction(1),
    (8, 48): Fraction(1, 3),
    (16, 16): Fraction(2),
    (16, 48): Fraction(2, 3),
}


def lfnst_set_index(ipm: int) -> int:
    if not -14 <= ipm <= 83:
        raise ValueError(f"intra prediction mode {ipm} outside -14..83")
    if ipm < 0:
        return 1
    if ipm <= 1:
        return 0
    if ipm <= 12:
        return 1
    if ipm <= 23:
        return 2
    if ipm <= 44:
        return 3
    if ipm <= 55:
        return 2
    if ipm <= 80:
        return 1
    return 0


def lfnst_shape(width: int, height: int) -> LfnstShape:
    if min(width, height) < 4:
        raise ValueError(f"no LFNST shape for {width}x{height}")
    if width == 4 and height == 4:
        key = (8, 16)
    elif width == 8 and height == 8:
        key = (8, 48)
    elif min(width, height) == 4:
        key = (16, 16)
    else:
        key = (16, 48)
    return LfnstShape(key[0], key[1], _RATES[key], Fraction(2))


def lfnst_eligible(desc) -> bool:
    lf = desc.lfnst
    if lf is None:
        return False
    hor, ver = desc.transform_pair()
    if hor != TransformType.DCT2 or ver != TransformType.DCT2:
        return False
    if not desc.is_intra or min(desc.width, desc.height) < 4:
        return False
    small = (desc.width, desc.height) in ((4, 4), (8, 8))
    return lf.last_sig_pos < (8 if small else 16)


def _diagonal_scan(size: int = 4) -> list[tuple[int, int]]:
    order = []
    for d in range(2 * size - 1):
        y = min(d, size - 1)
        x = d - y
        while y >= 0 and x < size:
            order.append((x, y))
            x += 1
            y -= 1
    return order


DIAG4 = tuple(_diagonal_scan(4))


def _region(out_size: int) -> tuple[tuple[int, int], ...]:
    if out_size == 16:
        return DIAG4
    if out_size == 48:
        return DIAG4 + tuple((x + 4, y) for x, y in DIAG4) + tuple((x, y + 4) for x, y in DIAG4)
    raise ValueError(f"out_size must be 16 or 48, not {out_size}")


def scan_extract(block, in_size: int, scan=DIAG4) -> np.ndarray:
    b = np.asarray(block)
    if b.shape[0] < 4 or b.shape[1] < 4:
        raise ValueError("block smaller than 4x4")
    return np.array([b[y, x] for x, y in scan[:in_size]], dtype=np.int64)


def place_output(vector, out_size: int, block) -> np.ndarray:
    """Copy of ``block`` with the LFNST region written and everything else zero."""
    region = _region(out_size)
    b = np.asarray(block)
    need = 4 if out_size == 16 else 8
    if b.shape[0] < need or b.shape[1] < need:
        raise ValueError(f"{b.shape[1]}x{b.shape[0]} block cannot hold a {out_size}-sample region")
    v = np.asarray(vector, dtype=np.int64)
    if v.shape != (out_size,):
        raise ValueError(f"vector of length {v.shape} for out_size {out_size}")
    out = np.zeros(b.shape, dtype=np.int64)
    for val, (x, y) in zip(v, region):
        out[y, x] = val
    return out


def inverse_lfnst(desc, block, bank: KernelBank | None = None, cfg: StageConfig = StageConfig()) -> np.ndarray:
    """Secondary inverse transform, or bit-identical bypass when not eligible."""
    b = np.asarray(block, dtype=np.int64)
    if not lfnst_eligible(desc):
        return b.copy()
    bank = bank or default_bank()
    shape = lfnst_shape(desc.width, desc.height)
    kernel = bank.lfnst(shape.out_size, desc.lfnst.set_idx, desc.lfnst.kernel_idx + 1)
    z = scan_extract(b, shape.in_size)
    y = z @ kernel.entries[: shape.in_size]
    y = saturate(round_shift(y, cfg.lfnst_shift), cfg.intermediate_clamp_bits)
    return place_output(y, shape.out_size, b)
