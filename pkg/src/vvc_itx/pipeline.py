"""Cycle-level model of the shared-multiplier inverse transform hardware.

Two cores of regular multipliers (32 each by default): one for the inverse
LFNST, one for the folded 1-D inverse MTS.  The MTS core is
input-stationary: each incoming coefficient is multiplied by one line of the
kernel (or butterfly sub-matrix) and accumulated.  The LFNST core is
output-stationary: each emitted sample is a full dot product.  Both cores are
padded by delay lines to fixed latencies ``L1`` (LFNST/bypass) and ``L2``
(each 1-D MTS pass).

Block timeline, cycle 0 being the ``input_enable`` pulse and ``C = W*H/r``
with ``r`` the 1-D output rate::

    stage A in        [1, 1+C)
    pass 1 in         [1+L1, 1+L1+C)
    pass 1 out        [1+L1+L2, 1+L1+L2+C)        -> transpose memory
    pass 2 in         [1+L1+L2+C, 1+L1+L2+2C)
    pass 2 out        [1+L1+2*L2+C, 1+L1+2*L2+2C) -> output memory
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .decode import coeff_array, stage_config_for, transform_specs
from .engine import StageConfig, TransformSpec, effective_size, input_mult_profile, inverse_mts_1d, mult_count_1d
from .kernel_store import KernelBank, default_bank
from .kernels import MTS_SIZES, KernelMatrix, TransformType
from .lfnst import LfnstShape, inverse_lfnst, lfnst_eligible, lfnst_shape
from .signaling import BlockDescriptor, Component, Standard

LFNST_SHAPES = tuple(lfnst_shape(w, h) for w, h in ((4, 4), (8, 8), (4, 16), (16, 16)))


class SchedulingError(RuntimeError):
    pass


class ConfigError(ValueError):
    pass


# -- configuration and memories -----------------------------------------------


@dataclass(frozen=True)
class MemoryModel:
    lines: int = 512
    samples_per_line: int = 16
    input_sample_bits: int = 18
    output_sample_bits: int = 11
    mts_rom_bits: int = 17408
    lfnst_rom_bits: int = 65536

    @property
    def input_line_bits(self) -> int:
        return self.samples_per_line * self.input_sample_bits

    @property
    def output_line_bits(self) -> int:
        return self.samples_per_line * self.output_sample_bits

    @property
    def input_bits(self) -> int:
        return self.lines * self.input_line_bits

    @property
    def output_bits(self) -> int:
        return self.lines * self.output_line_bits

    @property
    def capacity_samples(self) -> int:
        return self.lines * self.samples_per_line

    def lines_for(self, samples: int) -> int:
        return -(-samples // self.samples_per_line)


def ctu_samples(chroma_format: str, ctu: int = 64) -> int:
    luma = ctu * ctu
    return luma + 2 * (luma * _chroma_div(chroma_format)[0] // _chroma_div(chroma_format)[1])


def _chroma_div(chroma_format: str) -> tuple[int, int]:
    """Chroma samples per luma sample as (num, den)."""
    return {"420": (1, 4), "422": (1, 2), "444": (1, 1)}[_norm_chroma(chroma_format)]


def _norm_chroma(chroma_format: str) -> str:
    cf = str(chroma_format).replace(":", "")
    if cf not in ("420", "422", "444"):
        raise ValueError(f"unsupported chroma format {chroma_format!r}")
    return cf


@dataclass(frozen=True)
class PipelineConfig:
    mts_mults: int = 32
    lfnst_mults: int = 32
    register_stages: int = 4
    l1: int | None = None
    l2: int | None = None
    clock_hz: float = 600e6
    memory: MemoryModel = field(default_factory=MemoryModel)

    def __post_init__(self):
        for name in ("mts_mults", "lfnst_mults"):
            v = getattr(self, name)
            if v < 16 or v % 16:
                raise ConfigError(f"{name}={v} must be a positive multiple of 16")
        if self.latency_l1 < self.lfnst_depth or self.latency_l2 < self.mts_depth:
            raise ConfigError(
                f"fixed latencies L1={self.latency_l1}, L2={self.latency_l2} are shorter than the "
                f"worst-case compute depth ({self.lfnst_depth}, {self.mts_depth})"
            )

    @property
    def mts_rate(self) -> Fraction:
        """1-D MTS output samples per cycle (2 with 32 multipliers)."""
        return Fraction(self.mts_mults, 16)

    @property
    def lfnst_rate(self) -> Fraction:
        return Fraction(self.lfnst_mults, 16)

    @property
    def mts_depth(self) -> int:
        # worst case: all inputs of the longest line must arrive before its outputs close
        return max(_ceil(Fraction(n) / self.mts_rate) for n in MTS_SIZES[TransformType.DCT2])

    @property
    def lfnst_depth(self) -> int:
        return max(_ceil(Fraction(s.out_size) / self.lfnst_rate) for s in LFNST_SHAPES)

    @property
    def latency_l1(self) -> int:
        return self.l1 if self.l1 is not None else self.lfnst_depth + self.register_stages

    @property
    def latency_l2(self) -> int:
        return self.l2 if self.l2 is not None else self.mts_depth + self.register_stages


def _ceil(x: Fraction) -> int:
    return -(-x.numerator // x.denominator)


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise SchedulingError(f"{what} is not a whole number of cycles ({x})")
    return x.numerator


def _spread(total: int, cycles: int) -> list[int]:
    """Split ``total`` items over ``cycles`` as evenly as possible, front-loaded by floor."""
    return [((k + 1) * total) // cycles - (k * total) // cycles for k in range(cycles)]


# -- 1-D schedules ------------------------------------------------------------


@dataclass(frozen=True)
class Schedule1D:
    cycles: int
    per_cycle_mults: tuple[int, ...]
    per_cycle_inputs: tuple[int, ...]
    input_rate: Fraction
    output_rate: Fraction
    total_mults: int

    @property
    def peak_mults(self) -> int:
        return max(self.per_cycle_mults, default=0)


def schedule_1d(
    spec: TransformSpec,
    mults: int = 32,
    output_rate: Fraction | None = None,
    zeroing: bool = True,
) -> Schedule1D:
    """Input-stationary schedule of one 1-D inverse MTS line.

    Inputs are consumed in index order; each input's products go to the
    cycle(s) it occupies.  When there are fewer inputs than cycles, an input
    holds the multipliers for several cycles and its products are spread.
    """
    rate = Fraction(mults, 16) if output_rate is None else Fraction(output_rate)
    cycles = _as_int(Fraction(spec.size) / rate, f"{spec.size}-point line at {rate} samples/cycle")
    profile = input_mult_profile(spec, zeroing)
    n_in = len(profile)
    per_mults = [0] * cycles
    per_inputs = [0] * cycles
    if n_in >= cycles:
        if n_in % cycles:
            raise SchedulingError(f"{n_in} inputs do not divide into {cycles} cycles")
        step = n_in // cycles
        for k in range(cycles):
            per_inputs[k] = step
            per_mults[k] = sum(profile[k * step:(k + 1) * step])
    else:
        if cycles % n_in:
            raise SchedulingError(f"{n_in} inputs do not divide into {cycles} cycles")
        hold = cycles // n_in
        for i, prods in enumerate(profile):
            per_inputs[i * hold] = 1
            for k, m in enumerate(_spread(prods, hold)):
                per_mults[i * hold + k] = m
    sched = Schedule1D(
        cycles=cycles,
        per_cycle_mults=tuple(per_mults),
        per_cycle_inputs=tuple(per_inputs),
        input_rate=Fraction(n_in, cycles),
        output_rate=rate,
        total_mults=sum(profile),
    )
    if sched.peak_mults > mults:
        raise SchedulingError(
            f"{spec.tr_type.name}-{spec.size} needs {sched.peak_mults} multipliers in one cycle, "
            f"only {mults} available at {rate} samples/cycle"
        )
    return sched


def schedule_lfnst(shape: LfnstShape, mults: int = 32, output_rate: Fraction | None = None) -> Schedule1D:
    """Output-stationary LFNST schedule: each output is an ``in_size``-term dot product."""
    rate = Fraction(mults, 16) if output_rate is None else Fraction(output_rate)
    cycles = _as_int(Fraction(shape.out_size) / rate, f"LFNST {shape.label} at {rate} samples/cycle")
    per_cycle = rate * shape.in_size
    per_mults = [_as_int(per_cycle, "multiplications per cycle")] * cycles
    sched = Schedule1D(
        cycles=cycles,
        per_cycle_mults=tuple(per_mults),
        per_cycle_inputs=tuple(_spread(shape.in_size, cycles)),
        input_rate=Fraction(shape.in_size, cycles),
        output_rate=rate,
        total_mults=shape.in_size * shape.out_size,
    )
    if sched.peak_mults > mults:
        raise SchedulingError(
            f"LFNST {shape.label} needs {sched.peak_mults} multipliers per cycle, only {mults} available"
        )
    return sched


def all_mts_specs() -> list[TransformSpec]:
    return [TransformSpec(t, n) for t, sizes in MTS_SIZES.items() for n in sizes]


# -- block control interface --------------------------------------------------

_TXN_BITS = {
    "input_enable": 1,
    "avc_vvc": 1,
    "tr_width": 3,
    "tr_height": 3,
    "mts_type": 2,
    "mts_dir": 1,
    "lfnst_pos_x": 5,
    "lfnst_pos_y": 3,
    "lfnst_set_idx": 2,
    "lfnst_idx": 2,
}
N_BI = 18
N_BO = 11

# trType numbering used on the interface: 0 DCT-II, 1 DCT-VIII, 2 DST-VII
_MTS_TYPE_CODE = {TransformType.DCT2: 0, TransformType.DCT8: 1, TransformType.DST7: 2}


@dataclass(frozen=True)
class BlockTransaction:
    """Control word presented with the ``input_enable`` pulse.

    ``lfnst_pos_x`` carries the last significant scan position (saturated at
    31); ``lfnst_pos_y`` is reserved and driven to 0.
    """

    enable_cycle: int
    avc_vvc: int
    tr_width: int
    tr_height: int
    mts_type: int
    mts_dir: int
    lfnst_pos_x: int
    lfnst_pos_y: int
    lfnst_set_idx: int
    lfnst_idx: int
    input_enable: int = 1
    input_width: int = 2 * N_BI
    intermediate_width: int = 2 * N_BI
    output_width: int = 2 * N_BO

    def __post_init__(self):
        for name, bits in _TXN_BITS.items():
            v = getattr(self, name)
            if not 0 <= v < (1 << bits):
                raise ValueError(f"{name}={v} does not fit {bits} bits")

    @staticmethod
    def size_code(n: int) -> int:
        if n not in (4, 8, 16, 32, 64):
            raise ValueError(f"no size code for {n}")
        return int(math.log2(n)) - 2

    @classmethod
    def from_descriptor(cls, desc: BlockDescriptor, enable_cycle: int = 0, first_direction: str = "vertical"):
        hor, ver = desc.transform_pair()
        first = ver if first_direction == "vertical" else hor
        lf = desc.lfnst
        return cls(
            enable_cycle=enable_cycle,
            avc_vvc=0 if desc.standard == Standard.AVC else 1,
            tr_width=cls.size_code(desc.width),
            tr_height=cls.size_code(desc.height),
            mts_type=_MTS_TYPE_CODE[first],
            mts_dir=1 if first_direction == "vertical" else 0,
            lfnst_pos_x=0 if lf is None else min(lf.last_sig_pos, 31),
            lfnst_pos_y=0,
            lfnst_set_idx=0 if lf is None else lf.set_idx,
            lfnst_idx=desc.lfnst_idx,
        )


# -- single block --------------------------------------------------------------


@dataclass
class CycleReport:
    width: int
    height: int
    total_cycles: int
    l1: int
    l2: int
    measured_l1: int
    measured_l2: int
    compute_cycles: int
    per_cycle_mults_mts: np.ndarray
    per_cycle_mults_lfnst: np.ndarray
    per_cycle_in_reads: np.ndarray
    per_cycle_in_writes: np.ndarray
    per_cycle_out_writes: np.ndarray
    stages: list[str]
    lfnst_applied: bool
    lfnst_input_rate: Fraction | None
    lfnst_output_rate: Fraction | None
    output_rate: Fraction
    transaction: BlockTransaction
    residuals: np.ndarray | None = None

    @property
    def memory_reads(self) -> int:
        return int(self.per_cycle_in_reads.sum())

    @property
    def memory_writes(self) -> int:
        return int(self.per_cycle_in_writes.sum() + self.per_cycle_out_writes.sum())

    @property
    def throughput(self) -> Fraction:
        """Mean 2-D samples per compute cycle."""
        return Fraction(self.width * self.height, self.compute_cycles)

    def summary(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "total_cycles": self.total_cycles,
            "L1": self.l1,
            "L2": self.l2,
            "compute_cycles": self.compute_cycles,
            "throughput": str(self.throughput),
            "peak_mults_mts": int(self.per_cycle_mults_mts.max(initial=0)),
            "peak_mults_lfnst": int(self.per_cycle_mults_lfnst.max(initial=0)),
            "lfnst_applied": self.lfnst_applied,
            "lfnst_input_rate": None if self.lfnst_input_rate is None else str(self.lfnst_input_rate),
            "lfnst_output_rate": None if self.lfnst_output_rate is None else str(self.lfnst_output_rate),
            "memory_reads": self.memory_reads,
            "memory_writes": self.memory_writes,
        }

    def trace_lines(self) -> Iterator[str]:
        yield "# itx-trace v1: cycle stage mts_mults lfnst_mults in_rd in_wr out_wr"
        for k in range(self.total_cycles):
            yield (
                f"{k} {self.stages[k]} {self.per_cycle_mults_mts[k]} {self.per_cycle_mults_lfnst[k]} "
                f"{self.per_cycle_in_reads[k]} {self.per_cycle_in_writes[k]} {self.per_cycle_out_writes[k]}"
            )


def _first(stages: list[set], name: str) -> int:
    return next(k for k, s in enumerate(stages) if name in s)


def _line_accesses(samples_per_cycle: list[int] | np.ndarray, per_line: int) -> np.ndarray:
    """A memory line is accessed on the cycle its last sample moves; any partial line flushes at the end."""
    cum = np.cumsum(samples_per_cycle)
    full = cum // per_line
    acc = np.diff(np.concatenate(([0], full)))
    if len(cum) and cum[-1] % per_line:
        acc[-1] += 1
    return acc.astype(np.int64)


class PipelineSimulator:
    """Owns the cycle state of one modeled transform unit."""

    def __init__(self, config: PipelineConfig | None = None, bank: KernelBank | None = None,
                 first_direction: str = "vertical"):
        self.config = config or PipelineConfig()
        self.bank = bank or default_bank()
        self.first_direction = first_direction
        self._line_cache: dict[tuple, Schedule1D] = {}

    def _line(self, spec: TransformSpec, zeroing: bool) -> Schedule1D:
        key = (spec.tr_type, spec.size, zeroing)
        if key not in self._line_cache:
            self._line_cache[key] = schedule_1d(spec, self.config.mts_mults, zeroing=zeroing)
        return self._line_cache[key]

    def _pass_profile(self, line: TransformSpec, n_lines: int, zeroing: bool) -> tuple[np.ndarray, np.ndarray]:
        s = self._line(line, zeroing)
        return np.tile(s.per_cycle_mults, n_lines), np.tile(s.per_cycle_inputs, n_lines)

    def simulate_block(self, desc: BlockDescriptor, coeffs=None, txn: BlockTransaction | None = None) -> CycleReport:
        cfg = self.config
        w, h = desc.width, desc.height
        rate = cfg.mts_rate
        samples = w * h
        c = _as_int(Fraction(samples) / rate, "block pass")
        l1, l2 = cfg.latency_l1, cfg.latency_l2
        total = 1 + l1 + 2 * l2 + 2 * c
        txn = txn or BlockTransaction.from_descriptor(desc, 0, self.first_direction)
        zeroing = desc.standard != Standard.HEVC
        hor, ver = transform_specs(desc)
        first, second = (ver, hor) if self.first_direction == "vertical" else (hor, ver)
        first_lines, second_lines = (w, h) if self.first_direction == "vertical" else (h, w)

        mts = np.zeros(total, dtype=np.int64)
        lfn = np.zeros(total, dtype=np.int64)
        in_rd = np.zeros(total, dtype=np.int64)
        in_wr = np.zeros(total, dtype=np.int64)
        out_wr = np.zeros(total, dtype=np.int64)
        stages = [set() for _ in range(total)]

        def mark(start, length, name):
            for k in range(start, start + length):
                stages[k].add(name)

        # stage A: LFNST or bypass delay line
        a_in = 1
        applied = lfnst_eligible(desc)
        in_samples = np.zeros(c, dtype=np.int64)
        lf_in_rate = lf_out_rate = None
        if applied:
            shape = lfnst_shape(w, h)
            ls = schedule_lfnst(shape, cfg.lfnst_mults)
            in_samples[: ls.cycles] = ls.per_cycle_inputs
            depth = ls.cycles  # all inputs are needed before the first dot product closes
            lfn[a_in + depth: a_in + depth + ls.cycles] = ls.per_cycle_mults
            lf_in_rate, lf_out_rate = ls.input_rate, ls.output_rate
            mark(a_in, depth + ls.cycles, "lfnst")
            mark(a_in + ls.cycles, c - ls.cycles, "bypass")  # rest of the block rides the delay line
        else:
            in_samples[:] = _spread(samples, c)
            mark(a_in, c, "bypass")
        in_rd[a_in: a_in + c] += _line_accesses(in_samples, cfg.memory.samples_per_line)

        # pass 1 (input to MTS core at the stage A output)
        p1 = a_in + l1
        m1, _ = self._pass_profile(first, first_lines, zeroing)
        mts[p1: p1 + c] += m1
        mark(p1, c, "mts1")
        per_out = _spread(samples, c)
        in_wr[p1 + l2: p1 + l2 + c] += _line_accesses(per_out, cfg.memory.samples_per_line)
        mark(p1 + l2, c, "xpose_wr")

        # pass 2 starts once the transpose memory holds the whole block
        p2 = p1 + l2 + c
        m2, _ = self._pass_profile(second, second_lines, zeroing)
        mts[p2: p2 + c] += m2
        mark(p2, c, "mts2")
        in_rd[p2: p2 + c] += _line_accesses(per_out, cfg.memory.samples_per_line)
        out_wr[p2 + l2: p2 + l2 + c] += _line_accesses(per_out, cfg.memory.samples_per_line)
        mark(p2 + l2, c, "out_wr")

        if mts.max() > cfg.mts_mults or lfn.max(initial=0) > cfg.lfnst_mults:
            raise SchedulingError("multiplier budget exceeded")

        residuals = None
        if coeffs is not None:
            residuals = self._datapath(desc, coeffs, first, second)

        return CycleReport(
            width=w,
            height=h,
            total_cycles=total,
            l1=l1,
            l2=l2,
            measured_l1=_first(stages, "mts1") - a_in,
            measured_l2=_first(stages, "xpose_wr") - _first(stages, "mts1"),
            compute_cycles=2 * c,
            per_cycle_mults_mts=mts,
            per_cycle_mults_lfnst=lfn,
            per_cycle_in_reads=in_rd,
            per_cycle_in_writes=in_wr,
            per_cycle_out_writes=out_wr,
            stages=["+".join(sorted(s)) or "idle" for s in stages],
            lfnst_applied=applied,
            lfnst_input_rate=lf_in_rate,
            lfnst_output_rate=lf_out_rate,
            output_rate=rate,
            transaction=txn,
            residuals=residuals,
        )

    def _datapath(self, desc: BlockDescriptor, coeffs, first: TransformSpec, second: TransformSpec) -> np.ndarray:
        """Line-by-line data flow through the modeled memories."""
        scfg = stage_config_for(desc, self.first_direction)
        y = coeff_array(desc, coeffs)
        y = inverse_lfnst(desc, y, self.bank, scfg)
        if self.first_direction == "horizontal":
            y = y.T  # lines of the first pass are rows
        # pass 1: one line per column of y, written into the transpose memory
        transpose_mem = np.zeros((y.shape[1], y.shape[0]), dtype=np.int64)
        for x in range(y.shape[1]):
            transpose_mem[x] = inverse_mts_1d(y[:, x], first, scfg.s1, scfg.intermediate_clamp_bits,
                                              self.bank, scfg.zeroing)
        # pass 2 reads the transpose memory across lines
        output_mem = np.zeros((transpose_mem.shape[1], transpose_mem.shape[0]), dtype=np.int64)
        for r in range(transpose_mem.shape[1]):
            output_mem[r] = inverse_mts_1d(transpose_mem[:, r], second, scfg.s2, scfg.output_clamp_bits,
                                           self.bank, scfg.zeroing)
        return output_mem if self.first_direction == "vertical" else output_mem.T

    # -- streams -----------------------------------------------------------------

    def simulate_stream(self, descs: Iterable[BlockDescriptor]) -> "StreamReport":
        """Schedule back-to-back blocks through the shared memories and cores.

        Granularity is one pass: the MTS core runs pass 1 or pass 2 of one block
        at a time, non-preemptively, preferring the oldest pending pass 2.
        Input memory lines are held from the start of the coefficient write
        until pass 2 has read the transposed data back; output lines are held
        from pass 2 until the residuals are drained at the stream rate.
        """
        cfg = self.config
        mem = cfg.memory
        rate = cfg.mts_rate
        l1, l2 = cfg.latency_l1, cfg.latency_l2

        blocks = []
        for d in descs:
            s = d.width * d.height
            lines = mem.lines_for(s)
            if lines > mem.lines:
                raise SchedulingError(f"{d.width}x{d.height} block does not fit the input memory")
            blocks.append((s, lines, _as_int(Fraction(s) / rate, "block pass")))
        n = len(blocks)
        if n == 0:
            return StreamReport(0, [], [], 0, 0, 0, cfg.clock_hz)

        in_free = out_free = mem.lines
        peak_in = peak_out = 0
        t = 0
        next_write = 0
        writer_busy_until = 0
        core_busy_until = 0
        core_job = None
        p1_ready: list[tuple[int, int]] = []  # heap of (ready_time, block)
        p2_ready: list[tuple[int, int]] = []
        releases: list[tuple[int, str, int]] = []  # (time, memory, lines)
        writing = None
        done = [0] * n
        busy = 0

        while True:
            # retire events at time t
            while releases and releases[0][0] <= t:
                _, which, lines = heapq.heappop(releases)
                if which == "in":
                    in_free += lines
                else:
                    out_free += lines
            if writing is not None and writer_busy_until <= t:
                heapq.heappush(p1_ready, (t + l1, writing))
                writing = None
            if core_job is not None and core_busy_until <= t:
                kind, b = core_job
                s, lines, c = blocks[b]
                if kind == 1:
                    heapq.heappush(p2_ready, (t + l2, b))
                else:
                    heapq.heappush(releases, (t, "in", lines))
                    heapq.heappush(releases, (t + l2 + c, "out", lines))
                    done[b] = t + l2
                core_job = None
                continue  # releases at t may now apply

            if writing is None and next_write < n and blocks[next_write][1] <= in_free:
                s, lines, c = blocks[next_write]
                in_free -= lines
                peak_in = max(peak_in, mem.lines - in_free)
                writing = next_write
                writer_busy_until = t + c  # coefficients arrive at the stream rate
                next_write += 1

            if core_job is None:
                job = None
                if p2_ready and p2_ready[0][0] <= t and blocks[p2_ready[0][1]][1] <= out_free:
                    _, b = heapq.heappop(p2_ready)
                    job = (2, b)
                    out_free -= blocks[b][1]
                    peak_out = max(peak_out, mem.lines - out_free)
                elif p1_ready and p1_ready[0][0] <= t:
                    _, b = heapq.heappop(p1_ready)
                    job = (1, b)
                if job is not None:
                    core_job = job
                    core_busy_until = t + blocks[job[1]][2]
                    busy += blocks[job[1]][2]

            if all(done) and core_job is None:
                break
            candidates = [x for x in (
                writer_busy_until if writing is not None else None,
                core_busy_until if core_job is not None else None,
                p1_ready[0][0] if p1_ready else None,
                p2_ready[0][0] if p2_ready else None,
                releases[0][0] if releases else None,
            ) if x is not None and x > t]
            if not candidates:
                raise SchedulingError("stream scheduler deadlocked")
            t = min(candidates)

        total = max(done) + 1  # cycle 0 is the first input_enable
        return StreamReport(
            total_cycles=total,
            block_samples=[b[0] for b in blocks],
            completion_cycles=done,
            core_busy_cycles=busy,
            peak_input_lines=peak_in,
            peak_output_lines=peak_out,
            clock_hz=cfg.clock_hz,
        )

    def simulate_frame(self, width: int, height: int, chroma_format: str = "422",
                       ctu_stream: Iterable[BlockDescriptor] | None = None, max_tb: int = 64) -> "FrameReport":
        descs = list(ctu_stream) if ctu_stream is not None else list(
            frame_ctu_stream(width, height, chroma_format, max_tb=max_tb))
        rep = self.simulate_stream(descs)
        return FrameReport(width, height, _norm_chroma(chroma_format), rep)


@dataclass
class StreamReport:
    total_cycles: int
    block_samples: list[int]
    completion_cycles: list[int]
    core_busy_cycles: int
    peak_input_lines: int
    peak_output_lines: int
    clock_hz: float

    @property
    def blocks(self) -> int:
        return len(self.block_samples)

    @property
    def samples(self) -> int:
        return sum(self.block_samples)

    @property
    def throughput(self) -> float:
        return self.samples / self.total_cycles if self.total_cycles else 0.0

    def steady_state_throughput(self, warmup: int = 1) -> float:
        """Samples per cycle once ``warmup`` blocks have completed."""
        if self.blocks <= warmup:
            return self.throughput
        start = self.completion_cycles[warmup - 1]
        end = max(self.completion_cycles)
        return sum(self.block_samples[warmup:]) / (end - start)

    def summary(self) -> dict:
        return {
            "total_cycles": self.total_cycles,
            "blocks": self.blocks,
            "samples": self.samples,
            "throughput": self.throughput,
            "core_busy_cycles": self.core_busy_cycles,
            "peak_input_lines": self.peak_input_lines,
            "peak_output_lines": self.peak_output_lines,
        }


@dataclass
class FrameReport:
    width: int
    height: int
    chroma_format: str
    stream: StreamReport

    @property
    def total_cycles(self) -> int:
        return self.stream.total_cycles

    @property
    def fps(self) -> float:
        return self.stream.clock_hz / self.stream.total_cycles

    def summary(self) -> dict:
        out = {"width": self.width, "height": self.height, "chroma_format": self.chroma_format,
               "clock_hz": self.stream.clock_hz, "fps": self.fps}
        out.update(self.stream.summary())
        return out


# -- frame synthesis -------------------------------------------------------------


def _pow2_split(length: int, max_tb: int) -> list[int]:
    if length % 4:
        raise ValueError(f"dimension {length} is not a multiple of 4")
    parts = []
    while length:
        p = max_tb
        while p > length:
            p //= 2
        parts.append(p)
        length -= p
    return parts


def _tile(w: int, h: int, max_tb: int) -> list[tuple[int, int]]:
    return [(bw, bh) for bh in _pow2_split(h, max_tb) for bw in _pow2_split(w, max_tb)]


def frame_ctu_stream(width: int, height: int, chroma_format: str = "422", ctu: int = 64,
                     max_tb: int = 64) -> Iterator[BlockDescriptor]:
    """DCT-II transform blocks of a whole frame, CTU by CTU (luma, Cb, Cr)."""
    cf = _norm_chroma(chroma_format)
    sub_w = 2 if cf in ("420", "422") else 1
    sub_h = 2 if cf == "420" else 1
    for y0 in range(0, height, ctu):
        for x0 in range(0, width, ctu):
            lw, lh = min(ctu, width - x0), min(ctu, height - y0)
            for bw, bh in _tile(lw, lh, max_tb):
                yield BlockDescriptor(bw, bh, Component.LUMA)
            for comp in (Component.CB, Component.CR):
                for bw, bh in _tile(lw // sub_w, lh // sub_h, max_tb):
                    yield BlockDescriptor(bw, bh, comp)


# -- ROM accounting ----------------------------------------------------------------


@dataclass
class RomReport:
    name: str
    bits: int
    budget: int
    components: dict[str, int]

    @property
    def ok(self) -> bool:
        return self.bits <= self.budget

    @property
    def excess(self) -> int:
        return max(0, self.bits - self.budget)

    def summary(self) -> dict:
        return {"name": self.name, "bits": self.bits, "budget": self.budget, "ok": self.ok,
                "excess": self.excess, "components": self.components}


def mts_rom_layout(kernels: dict[tuple[TransformType, int], KernelMatrix]) -> dict[str, int]:
    """Bits per stored MTS component.

    DCT-II is kept as butterfly odd sub-matrices (restricted to the rows that
    survive zeroing) plus the 4-point base, with the 16-point odd sub-matrix
    held twice.  DST-VII kernels are stored whole.  DCT-VIII is never stored.
    """
    comps: dict[str, int] = {}
    for (ttype, n), k in sorted(kernels.items()):
        bits = k.precision_bits or 0
        if ttype == TransformType.DCT2:
            if n == 4:
                comps["dct2_4"] = 16 * bits
            else:
                rows = effective_size(n, ttype) // 2
                comps[f"dct2_{n}_odd"] = rows * (n // 2) * bits
                if n == 16:
                    comps["dct2_16_odd_replica"] = rows * (n // 2) * bits
        elif ttype == TransformType.DST7:
            comps[f"dst7_{n}"] = k.entries.size * bits
    return comps


def rom_budget_check(kernels, budget: int, name: str = "rom") -> RomReport:
    """Occupancy of a kernel set against a ROM budget.

    ``kernels`` is either the MTS mapping ``{(type, N): kernel}`` (modeled
    layout applies) or any iterable of kernels stored whole (LFNST).
    """
    if isinstance(kernels, dict) and all(isinstance(k, tuple) and len(k) == 2 and isinstance(k[0], TransformType)
                                         for k in kernels):
        comps = mts_rom_layout(kernels)
    else:
        items = kernels.items() if isinstance(kernels, dict) else enumerate(kernels)
        comps = {str(key): k.entries.size * (k.precision_bits or 0) for key, k in items}
    return RomReport(name, sum(comps.values()), budget, comps)


def peak_multiplier_table(mults: int = 32) -> dict[str, int]:
    """Peak per-cycle multiplier use for every MTS spec and LFNST shape."""
    out = {}
    for spec in all_mts_specs():
        out[f"{spec.tr_type.name}-{spec.size}"] = schedule_1d(spec, mults).peak_mults
    for shape in LFNST_SHAPES:
        out[f"LFNST-{shape.label}"] = schedule_lfnst(shape, mults).peak_mults
    return out


def mult_budget_ok(spec: TransformSpec) -> bool:
    return mult_count_1d(spec) <= 32 * (spec.size // 2)
