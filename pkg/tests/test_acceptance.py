"""The ten acceptance criteria, one test each, at their stated tolerances.

A per-criterion PASS/FAIL line is printed in the pytest terminal summary.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from vvc_itx import cli
from vvc_itx.engine import TransformSpec
from vvc_itx.kernel_store import default_bank
from vvc_itx.kernels import (
    TransformType as T,
    butterfly_inverse,
    dct8_from_dst7,
    integer_kernel,
    real_kernel,
)
from vvc_itx.lfnst import lfnst_set_index, lfnst_shape
from vvc_itx.oracle import count_naive_ops
from vvc_itx.pipeline import (
    LFNST_SHAPES,
    MemoryModel,
    PipelineConfig,
    PipelineSimulator,
    all_mts_specs,
    rom_budget_check,
    schedule_1d,
    schedule_lfnst,
)
from vvc_itx.signaling import BlockDescriptor, mts_pair, validate
from vvc_itx.verify import legal_combinations


@pytest.fixture(scope="module")
def frame_4k():
    return PipelineSimulator(PipelineConfig(clock_hz=600e6)).simulate_frame(3840, 2160, "422")


def test_criterion_01_oracle_equivalence(capsys):
    t0 = time.perf_counter()
    code = cli.main(["verify", "--random", "1000", "--seed", "0"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    assert code == 0, out
    assert "bit-exact" in out
    assert elapsed < 60
    assert len(legal_combinations()) < 1000  # every combination is swept before random fill


def test_criterion_02_throughput_4k(frame_4k):
    assert frame_4k.stream.samples == 16_588_800
    assert 35 <= frame_4k.fps <= 37


def test_criterion_03_multiplier_budget():
    peaks = {f"{s.tr_type.name}-{s.size}": schedule_1d(s, 32).peak_mults for s in all_mts_specs()}
    peaks.update({f"LFNST-{sh.label}": schedule_lfnst(sh, 32).peak_mults for sh in LFNST_SHAPES})
    assert max(peaks.values()) <= 32
    for name in ("DCT2-64", "DST7-32", "DCT8-32", "LFNST-16x16", "LFNST-16x48"):
        assert peaks[name] == 32, name


def _all_descriptors():
    for rec in legal_combinations():
        yield BlockDescriptor.from_record(rec)
        if rec.get("lfnst_idx"):
            for ipm in (-3, 30, 60, 82):
                for idx in (1, 2):
                    yield BlockDescriptor.from_record({**rec, "ipm": ipm, "lfnst_idx": idx})


def test_criterion_04_fixed_latency():
    sim = PipelineSimulator()
    seen = set()
    for d in _all_descriptors():
        assert not validate(d)
        r = sim.simulate_block(d)
        seen.add((r.l1, r.l2, r.measured_l1, r.measured_l2))
    assert len(seen) == 1, seen
    l1, l2, m1, m2 = seen.pop()
    assert (l1, l2) == (m1, m2)


def test_criterion_05_rate_tables():
    shape_sizes = {(4, 4): (8, 16), (8, 8): (8, 48), (4, 32): (16, 16), (32, 4): (16, 16),
                (8, 16): (16, 48), (16, 8): (16, 48), (32, 32): (16, 48)}
    for wh, sizes in shape_sizes.items():
        s = lfnst_shape(*wh)
        assert (s.in_size, s.out_size) == sizes, wh
    shape_rates = {(4, 4): (Fraction(1), 2), (8, 8): (Fraction(1, 3), 2),
               (4, 16): (Fraction(2), 2), (16, 16): (Fraction(2, 3), 2)}
    sim = PipelineSimulator()
    for (w, h), rates in shape_rates.items():
        r = sim.simulate_block(BlockDescriptor.from_record(dict(width=w, height=h, lfnst_idx=1)))
        assert r.lfnst_applied
        assert (r.lfnst_input_rate, r.lfnst_output_rate) == rates, (w, h)


def test_criterion_06_kernel_identities():
    rng = np.random.default_rng(6)
    for n in (4, 8, 16, 32):
        d = dct8_from_dst7(real_kernel(T.DST7, n)).entries
        assert np.abs(d - real_kernel(T.DCT8, n).entries).max() <= 1e-9
        assert (dct8_from_dst7(integer_kernel(T.DST7, n)).entries == integer_kernel(T.DCT8, n).entries).all()
    for t, sizes in ((T.DCT2, (4, 8, 16, 32, 64)), (T.DST7, (4, 8, 16, 32)), (T.DCT8, (4, 8, 16, 32))):
        for n in sizes:
            k = real_kernel(t, n).entries
            assert np.abs(k @ k.T - np.eye(n)).max() <= 1e-9
    for n in (4, 8, 16, 32, 64):
        k = integer_kernel(T.DCT2, n)
        x = rng.integers(-(1 << 17), 1 << 17, size=(1000, n))
        assert (butterfly_inverse(k, x) == x @ k.entries).all()


def test_criterion_07_naive_counts():
    assert [count_naive_ops(n) for n in (8, 16, 32, 64)] == [(64, 56), (256, 240), (1024, 992), (4096, 4032)]


def test_criterion_08_signaling_tables():
    mts_rows = [(T.DCT2, T.DCT2), (T.DST7, T.DST7), (T.DCT8, T.DST7), (T.DST7, T.DCT8), (T.DCT8, T.DCT8)]
    assert [mts_pair(i) for i in range(5)] == mts_rows
    rows = [((-14, -1), 1), ((0, 1), 0), ((2, 12), 1), ((13, 23), 2), ((24, 44), 3),
            ((45, 55), 2), ((56, 80), 1), ((81, 83), 0)]
    for (lo, hi), s in rows:
        assert all(lfnst_set_index(ipm) == s for ipm in range(lo, hi + 1)), (lo, hi)


def test_criterion_09_memory_model():
    m = MemoryModel()
    assert (m.input_bits, m.output_bits) == (147456, 90112)
    lfnst = rom_budget_check(default_bank().lfnst_kernels(), m.lfnst_rom_bits)
    assert lfnst.bits == 65536 != 32768


def test_criterion_10_scaling(frame_4k):
    fast = PipelineSimulator(PipelineConfig(mts_mults=64, lfnst_mults=64)).simulate_frame(3840, 2160, "422")
    assert fast.total_cycles / frame_4k.total_cycles == pytest.approx(0.5, rel=0.05)
