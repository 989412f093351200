"""Optimized bit-exact inverse MTS.

1-D evaluation with zeroing, butterfly DCT-II, DCT-VIII via the DST-VII
kernel plus sign/permutation, and the folded 2-D process (first pass,
transpose, second pass) with per-stage rounding shifts and saturation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .kernel_store import KernelBank, default_bank
from .kernels import MTS_SIZES, OpCounter, TransformType, UnsupportedSizeError, butterfly_inverse, dct2_input_profile


class Direction(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


@dataclass(frozen=True)
class TransformSpec:
    tr_type: TransformType
    size: int
    direction: Direction = Direction.HORIZONTAL

    def __post_init__(self):
        object.__setattr__(self, "tr_type", TransformType(self.tr_type))
        sizes = MTS_SIZES.get(self.tr_type)
        if sizes is None or self.size not in sizes:
            raise UnsupportedSizeError(f"{self.tr_type.name} is not an MTS transform of size {self.size}")


@dataclass(frozen=True)
class StageConfig:
    lfnst_shift: int = 7
    s1: int = 7
    bit_depth: int = 10
    s2_override: int | None = None
    intermediate_clamp_bits: int = 18
    output_clamp_bits: int = 11
    first_direction: str = "vertical"
    zeroing: bool = True

    def __post_init__(self):
        for name in ("lfnst_shift", "s1", "s2"):
            v = getattr(self, name)
            if not 0 <= v <= 20:
                raise ValueError(f"{name}={v} outside 0..20")
        if self.first_direction not in ("vertical", "horizontal"):
            raise ValueError(f"first_direction must be vertical or horizontal, not {self.first_direction!r}")

    @property
    def s2(self) -> int:
        return 20 - self.bit_depth if self.s2_override is None else self.s2_override


@dataclass
class CoeffBlock:
    """Signed sample block, ``samples[y, x]`` with width M and height N."""

    samples: np.ndarray
    bits: int = 18

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.int64)
        if self.samples.ndim != 2:
            raise ValueError("samples must be 2-D")
        lo, hi = -(1 << (self.bits - 1)), (1 << (self.bits - 1)) - 1
        if self.samples.size and (self.samples.min() < lo or self.samples.max() > hi):
            raise ValueError(f"samples exceed {self.bits}-bit signed range")

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def height(self) -> int:
        return self.samples.shape[0]


def effective_size(n: int, tr_type: TransformType) -> int:
    return min(n, 16) if TransformType(tr_type) in (TransformType.DST7, TransformType.DCT8) else min(n, 32)


def round_shift(x: np.ndarray, shift: int) -> np.ndarray:
    if shift <= 0:
        return x
    return (x + (1 << (shift - 1))) >> shift


def saturate(x: np.ndarray, bits: int) -> np.ndarray:
    return np.clip(x, -(1 << (bits - 1)), (1 << (bits - 1)) - 1)


def _raw_inverse(coeffs: np.ndarray, spec: TransformSpec, n_eff: int, bank: KernelBank, counter: OpCounter | None):
    n = spec.size
    if spec.tr_type == TransformType.DCT2:
        return butterfly_inverse(bank.mts(TransformType.DCT2, n), coeffs, n_eff, counter)
    dst7 = bank.mts(TransformType.DST7, n).entries
    if counter is not None:
        counter.mults += n_eff * n
        counter.adds += max(n_eff - 1, 0) * n
    c = coeffs[..., :n_eff]
    if spec.tr_type == TransformType.DST7:
        return c @ dst7[:n_eff]
    # DCT-VIII: sign flip on odd inputs, DST-VII, reversed output order
    signs = np.where(np.arange(n_eff) % 2, -1, 1)
    return (c * signs) @ dst7[:n_eff][:, ::-1]


def inverse_mts_1d(
    coeffs,
    spec: TransformSpec,
    shift: int,
    clamp_bits: int,
    bank: KernelBank | None = None,
    zeroing: bool = True,
    counter: OpCounter | None = None,
) -> np.ndarray:
    """Inverse 1-D transform along the last axis (leading axes are a batch)."""
    bank = bank or default_bank()
    c = np.asarray(coeffs, dtype=np.int64)
    if c.shape[-1] != spec.size:
        raise ValueError(f"vector length {c.shape[-1]} != transform size {spec.size}")
    n_eff = effective_size(spec.size, spec.tr_type) if zeroing else spec.size
    return saturate(round_shift(_raw_inverse(c, spec, n_eff, bank, counter), shift), clamp_bits)


def mult_count_1d(spec: TransformSpec, zeroing: bool = True) -> int:
    counter = OpCounter()
    inverse_mts_1d(np.zeros(spec.size, dtype=np.int64), spec, 0, 32, zeroing=zeroing, counter=counter)
    return counter.mults


def input_mult_profile(spec: TransformSpec, zeroing: bool = True) -> list[int]:
    """Products contributed by each effective input sample, in index order."""
    n_eff = effective_size(spec.size, spec.tr_type) if zeroing else spec.size
    if spec.tr_type == TransformType.DCT2:
        return dct2_input_profile(spec.size, n_eff)
    return [spec.size] * n_eff


def inverse_mts_2d(
    block: CoeffBlock | np.ndarray,
    hor: TransformSpec,
    ver: TransformSpec,
    cfg: StageConfig = StageConfig(),
    bank: KernelBank | None = None,
) -> CoeffBlock:
    samples = block.samples if isinstance(block, CoeffBlock) else np.asarray(block, dtype=np.int64)
    h, w = samples.shape
    if hor.size != w or ver.size != h:
        raise ValueError(f"block {w}x{h} does not match hor={hor.size} ver={ver.size}")
    bank = bank or default_bank()
    if cfg.first_direction == "vertical":
        mid = inverse_mts_1d(samples.T, ver, cfg.s1, cfg.intermediate_clamp_bits, bank, cfg.zeroing)
        # mid is stored column-major (the transpose memory); the second pass reads rows of it
        out = inverse_mts_1d(mid.T, hor, cfg.s2, cfg.output_clamp_bits, bank, cfg.zeroing)
    else:
        mid = inverse_mts_1d(samples, hor, cfg.s1, cfg.intermediate_clamp_bits, bank, cfg.zeroing)
        out = inverse_mts_1d(mid.T, ver, cfg.s2, cfg.output_clamp_bits, bank, cfg.zeroing).T
    return CoeffBlock(out, bits=cfg.output_clamp_bits)
