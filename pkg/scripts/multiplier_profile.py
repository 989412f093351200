"""Per-cycle multiplier demand of every 1-D MTS line and LFNST shape, plus ROM occupancy."""

import argparse

from vvc_itx.engine import mult_count_1d
from vvc_itx.kernel_store import default_bank
from vvc_itx.pipeline import (
    LFNST_SHAPES,
    PipelineConfig,
    all_mts_specs,
    rom_budget_check,
    schedule_1d,
    schedule_lfnst,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mults", type=int, default=32)
    args = ap.parse_args()
    print(f"{'line':14s} {'mults':>6s} {'cycles':>6s} {'peak':>5s} {'in/cyc':>7s}")
    for spec in all_mts_specs():
        s = schedule_1d(spec, args.mults)
        print(f"{spec.tr_type.name + '-' + str(spec.size):14s} {mult_count_1d(spec):6d} {s.cycles:6d} "
              f"{s.peak_mults:5d} {str(s.input_rate):>7s}")
    for shape in LFNST_SHAPES:
        s = schedule_lfnst(shape, args.mults)
        print(f"{'LFNST-' + shape.label:14s} {s.total_mults:6d} {s.cycles:6d} {s.peak_mults:5d} {str(s.input_rate):>7s}")
    bank, mem = default_bank(), PipelineConfig().memory
    for rep in (rom_budget_check(bank.stored_mts(), mem.mts_rom_bits, "mts"),
                rom_budget_check(bank.lfnst_kernels(), mem.lfnst_rom_bits, "lfnst")):
        print(f"{rep.name} ROM {rep.bits}/{rep.budget} bits" + ("" if rep.ok else f" (over by {rep.excess})"))


if __name__ == "__main__":
    main()
