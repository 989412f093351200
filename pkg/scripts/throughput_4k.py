"""Frame rate of the modeled unit for 4K and 1080p at 4:2:2, 32 and 64 multipliers per core."""

import argparse
import json

from vvc_itx.pipeline import PipelineConfig, PipelineSimulator


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--clock", type=float, default=600e6)
    ap.add_argument("--chroma", default="422")
    args = ap.parse_args()
    rows = []
    for w, h in ((3840, 2160), (1920, 1080)):
        for mults in (32, 64):
            cfg = PipelineConfig(mts_mults=mults, lfnst_mults=mults, clock_hz=args.clock)
            rep = PipelineSimulator(cfg).simulate_frame(w, h, args.chroma)
            rows.append({"frame": f"{w}x{h}", "mults": mults, "cycles": rep.total_cycles,
                         "samples": rep.stream.samples, "fps": round(rep.fps, 3)})
            print(f"{w}x{h} {args.chroma} mults={mults:2d}  cycles={rep.total_cycles:>9d}  fps={rep.fps:7.2f}")
    print(json.dumps(rows))


if __name__ == "__main__":
    main()
