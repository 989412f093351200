"""Differential check: optimized engines against the brute-force oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .decode import InvalidBlockError, coeff_array, inverse_transform, stage_config_for
from .kernel_store import KernelBank
from .lfnst import lfnst_eligible
from .oracle import reference_inverse_transform
from .signaling import BlockDescriptor, validate

SIZES = (4, 8, 16, 32, 64)


def legal_combinations() -> list[dict]:
    """One record skeleton per legal (size, MTS pair, LFNST use, standard) combination."""
    combos = []
    for w, h in itertools.product(SIZES, SIZES):
        for idx in range(5):
            rec = dict(width=w, height=h, component="luma", standard="VVC", tu_mts_idx=idx)
            if not validate(BlockDescriptor.from_record(rec)):
                combos.append(rec)
        combos.append(dict(width=w, height=h, component="cb", standard="VVC", tu_mts_idx=0))
        combos.append(dict(width=w, height=h, component="luma", standard="VVC", tu_mts_idx=0,
                           lfnst_idx=1, last_sig_pos=0))
    for n in (4, 8, 16, 32):
        combos.append(dict(width=n, height=n, component="luma", standard="HEVC", tu_mts_idx=0))
    combos.append(dict(width=4, height=4, component="luma", standard="HEVC", tu_mts_idx=1))
    return combos


def _random_coeffs(rng: np.random.Generator, w: int, h: int) -> list[int]:
    mag = 1 << int(rng.integers(4, 18))
    c = rng.integers(-mag, mag, size=(h, w))
    c = np.clip(c, -(1 << 17), (1 << 17) - 1)
    if rng.random() < 0.5:
        c[rng.random((h, w)) < 0.7] = 0
    return c.reshape(-1).tolist()


def random_records(count: int, seed: int = 0) -> list[dict]:
    """``count`` legal records; the first ones sweep every legal combination."""
    rng = np.random.default_rng(seed)
    combos = legal_combinations()
    order = list(rng.permutation(len(combos)))
    out = []
    for k in range(count):
        rec = dict(combos[order[k % len(combos)]])
        hevc_dst = rec["standard"] == "HEVC" and rec["tu_mts_idx"] == 1  # intra-only in HEVC
        rec["is_intra"] = True if rec.get("lfnst_idx") or hevc_dst else bool(rng.random() < 0.8)
        rec["ipm"] = int(rng.integers(-14, 84))
        rec["bit_depth"] = int(rng.choice([8, 10, 12]))
        if rec.get("lfnst_idx"):
            rec["lfnst_idx"] = int(rng.integers(1, 3))
            small = (rec["width"], rec["height"]) in ((4, 4), (8, 8))
            rec["last_sig_pos"] = int(rng.integers(0, 8 if small else 16))
            if rng.random() < 0.15:
                rec["last_sig_pos"] += 8 if small else 16  # ineligible: bypass path
        rec["coeffs"] = _random_coeffs(rng, rec["width"], rec["height"])
        out.append(rec)
    return out


@dataclass
class Mismatch:
    index: int
    record: dict
    expected: list
    actual: list
    first_diff: tuple[int, int]


@dataclass
class VerifyResult:
    checked: int = 0
    skipped: int = 0
    lfnst_blocks: int = 0
    mismatch: Mismatch | None = None
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatch is None


def verify_records(records, bank: KernelBank, stop_at_first: bool = True) -> VerifyResult:
    res = VerifyResult()
    for i, rec in enumerate(records):
        try:
            desc = BlockDescriptor.from_record(rec)
            if validate(desc):
                res.skipped += 1
                continue
            cfg = stage_config_for(desc)
            coeffs = coeff_array(desc, rec["coeffs"])
        except (InvalidBlockError, KeyError, ValueError, TypeError) as exc:
            res.skipped += 1
            res.errors.append(f"record {i}: {exc}")
            continue
        actual = inverse_transform(desc, coeffs, bank, cfg)
        expected = reference_inverse_transform(desc, coeffs, bank.lfnst, cfg)
        res.checked += 1
        res.lfnst_blocks += lfnst_eligible(desc)
        if not np.array_equal(actual, expected):
            y, x = map(int, np.argwhere(actual != expected)[0])
            res.mismatch = Mismatch(i, rec, expected.tolist(), actual.tolist(), (x, y))
            if stop_at_first:
                break
    return res
