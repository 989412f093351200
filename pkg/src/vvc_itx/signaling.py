"""Decoder-side parameter derivation and descriptor validation."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .kernels import TransformType
from .lfnst import LfnstParams, lfnst_set_index

_MTS_TABLE = (
    (TransformType.DCT2, TransformType.DCT2),
    (TransformType.DST7, TransformType.DST7),
    (TransformType.DCT8, TransformType.DST7),
    (TransformType.DST7, TransformType.DCT8),
    (TransformType.DCT8, TransformType.DCT8),
)

VALID_SIZES = (4, 8, 16, 32, 64)


class Component(str, enum.Enum):
    LUMA = "luma"
    CB = "cb"
    CR = "cr"


class Standard(str, enum.Enum):
    AVC = "AVC"
    HEVC = "HEVC"
    VVC = "VVC"


def mts_pair(tu_mts_idx: int) -> tuple[TransformType, TransformType]:
    """(horizontal, vertical) transform types for an explicit MTS index."""
    if not 0 <= tu_mts_idx < len(_MTS_TABLE):
        raise ValueError(f"tu_mts_idx {tu_mts_idx} outside 0..4")
    return _MTS_TABLE[tu_mts_idx]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class BlockDescriptor:
    width: int
    height: int
    component: Component = Component.LUMA
    standard: Standard = Standard.VVC
    tu_mts_idx: int = 0
    is_intra: bool = True
    ipm: int = 0
    lfnst: LfnstParams | None = None
    bit_depth: int = 10
    implicit_mts: bool = False

    def __post_init__(self):
        object.__setattr__(self, "component", Component(self.component))
        object.__setattr__(self, "standard", Standard(self.standard))

    def transform_pair(self) -> tuple[TransformType, TransformType]:
        return mts_pair(self.tu_mts_idx)

    @property
    def lfnst_idx(self) -> int:
        return 0 if self.lfnst is None else self.lfnst.kernel_idx + 1

    @classmethod
    def from_record(cls, rec: dict) -> "BlockDescriptor":
        """Build from a JSON block record.

        ``lfnst_idx`` 0 means no secondary transform; 1 and 2 select the kernel
        within the set derived from ``ipm``.
        """
        lfnst_idx = int(rec.get("lfnst_idx", 0))
        ipm = int(rec.get("ipm", 0))
        lfnst = None
        if lfnst_idx not in (0, 1, 2):
            raise ValueError(f"lfnst_idx {lfnst_idx} outside 0..2")
        if lfnst_idx:
            lfnst = LfnstParams(
                set_idx=lfnst_set_index(ipm),
                kernel_idx=lfnst_idx - 1,
                ipm=ipm,
                last_sig_pos=int(rec.get("last_sig_pos", 0)),
            )
        return cls(
            width=int(rec["width"]),
            height=int(rec["height"]),
            component=rec.get("component", "luma"),
            standard=rec.get("standard", "VVC"),
            tu_mts_idx=int(rec.get("tu_mts_idx", 0)),
            is_intra=bool(rec.get("is_intra", True)),
            ipm=ipm,
            lfnst=lfnst,
            bit_depth=int(rec.get("bit_depth", 10)),
            implicit_mts=bool(rec.get("implicit_mts", False)),
        )

    def to_record(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "component": self.component.value,
            "standard": self.standard.value,
            "tu_mts_idx": self.tu_mts_idx,
            "is_intra": self.is_intra,
            "ipm": self.ipm,
            "lfnst_idx": self.lfnst_idx,
            "last_sig_pos": 0 if self.lfnst is None else self.lfnst.last_sig_pos,
            "bit_depth": self.bit_depth,
        }


def _common_rules(d: BlockDescriptor) -> list[Violation]:
    out = []
    if d.width not in VALID_SIZES or d.height not in VALID_SIZES:
        out.append(Violation("size", f"{d.width}x{d.height} not in {{4..64}}^2"))
    if not 0 <= d.tu_mts_idx <= 4:
        out.append(Violation("mts-index", f"tu_mts_idx {d.tu_mts_idx} outside 0..4"))
    if not -14 <= d.ipm <= 83:
        out.append(Violation("ipm", f"intra prediction mode {d.ipm} outside -14..83"))
    if not 8 <= d.bit_depth <= 12:
        out.append(Violation("bit-depth", f"bit depth {d.bit_depth} outside 8..12"))
    if d.implicit_mts:
        out.append(Violation("implicit-mts", "implicit MTS derivation is not supported; signal tu_mts_idx explicitly"))
    return out


def _vvc_rules(d: BlockDescriptor) -> list[Violation]:
    out = []
    if d.tu_mts_idx > 0 and d.component != Component.LUMA:
        out.append(Violation("chroma-dct2", "only DCT-II is allowed for chroma components"))
    if d.tu_mts_idx > 0 and max(d.width, d.height) >= 64:
        out.append(Violation("mts-size", "DST-VII/DCT-VIII need max(width, height) < 64"))
    return out


def _hevc_rules(d: BlockDescriptor) -> list[Violation]:
    out = []
    if d.width != d.height or d.width > 32:
        out.append(Violation("hevc-size", f"HEVC transforms are square 4..32, got {d.width}x{d.height}"))
    if d.tu_mts_idx not in (0, 1):
        out.append(Violation("hevc-type", "HEVC only has DCT-II and the 4x4 DST-VII"))
    elif d.tu_mts_idx == 1 and not (d.width == d.height == 4 and d.component == Component.LUMA and d.is_intra):
        out.append(Violation("hevc-dst", "HEVC DST-VII is limited to 4x4 intra luma"))
    if d.lfnst is not None:
        out.append(Violation("hevc-lfnst", "HEVC has no secondary transform"))
    return out


def validate(desc: BlockDescriptor) -> list[Violation]:
    """All rule violations for ``desc``; an empty list means it is decodable."""
    violations = _common_rules(desc)
    if desc.standard == Standard.AVC:
        violations.append(Violation("avc-unsupported", "AVC mode is modeled as an interface flag only"))
    elif desc.standard == Standard.HEVC:
        violations += _hevc_rules(desc)
    else:
        violations += _vvc_rules(desc)
    return violations
