"""Completion times and steady-state throughput of a back-to-back block stream."""

import argparse

from vvc_itx.pipeline import PipelineSimulator
from vvc_itx.signaling import BlockDescriptor


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=64)
    ap.add_argument("--blocks", type=int, default=200)
    ap.add_argument("--warmup", type=int, default=10)
    args = ap.parse_args()
    rep = PipelineSimulator().simulate_stream([BlockDescriptor(args.size, args.size)] * args.blocks)
    done = rep.completion_cycles
    print("first completions:", done[:6])
    print("gaps:", [b - a for a, b in zip(done[:6], done[1:7])])
    print(f"overall {rep.throughput:.4f} samples/cycle, steady state {rep.steady_state_throughput(args.warmup):.4f}")
    print(f"peak lines: input {rep.peak_input_lines}, output {rep.peak_output_lines}")


if __name__ == "__main__":
    main()
