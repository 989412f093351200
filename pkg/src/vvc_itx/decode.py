"""Per-block inverse transform: LFNST (or bypass) followed by the 2-D MTS."""

from __future__ import annotations

import numpy as np

from .engine import CoeffBlock, Direction, StageConfig, TransformSpec, inverse_mts_2d
from .kernel_store import KernelBank, default_bank
from .lfnst import inverse_lfnst
from .signaling import BlockDescriptor, Standard, Violation, validate


class InvalidBlockError(ValueError):
    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


def stage_config_for(desc: BlockDescriptor, first_direction: str = "vertical") -> StageConfig:
    # HEVC never zeroes high frequencies
    return StageConfig(
        bit_depth=desc.bit_depth,
        first_direction=first_direction,
        zeroing=desc.standard != Standard.HEVC,
    )


def coeff_array(desc: BlockDescriptor, coeffs) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=np.int64)
    if arr.size != desc.width * desc.height:
        raise InvalidBlockError(
            [Violation("coeff-count", f"expected {desc.width * desc.height} coefficients, got {arr.size}")]
        )
    arr = arr.reshape(desc.height, desc.width)
    if arr.size and (arr.min() < -(1 << 17) or arr.max() > (1 << 17) - 1):
        raise InvalidBlockError([Violation("coeff-range", "coefficients exceed the 18-bit signed range")])
    return arr


def transform_specs(desc: BlockDescriptor) -> tuple[TransformSpec, TransformSpec]:
    hor_t, ver_t = desc.transform_pair()
    return (
        TransformSpec(hor_t, desc.width, Direction.HORIZONTAL),
        TransformSpec(ver_t, desc.height, Direction.VERTICAL),
    )


def inverse_transform(
    desc: BlockDescriptor,
    coeffs,
    bank: KernelBank | None = None,
    cfg: StageConfig | None = None,
) -> np.ndarray:
    """Residual block (height x width) for one coefficient block."""
    violations = validate(desc)
    if violations:
        raise InvalidBlockError(violations)
    bank = bank or default_bank()
    cfg = cfg or stage_config_for(desc)
    y = coeff_array(desc, coeffs)
    y = inverse_lfnst(desc, y, bank, cfg)
    hor, ver = transform_specs(desc)
    return inverse_mts_2d(CoeffBlock(y), hor, ver, cfg, bank).samples
