"""Command-line front end.

Exit codes: 0 ok, 1 verification mismatch, 2 input format error,
3 kernel/config error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .decode import InvalidBlockError, inverse_transform
from .kernel_store import KernelBank, KernelFormatError, MissingKernelError
from .kernels import QuantizationOverflowError, TransformType
from .pipeline import PipelineConfig, PipelineSimulator, SchedulingError, rom_budget_check
from .signaling import BlockDescriptor, validate
from .verify import random_records, verify_records

EXIT_OK, EXIT_MISMATCH, EXIT_FORMAT, EXIT_KERNEL = 0, 1, 2, 3
KERNEL_ENV = "ITX_KERNEL_DIR"


def _err(msg: str) -> None:
    print(f"itx: {msg}", file=sys.stderr)


def _open_in(path: str | None):
    if path in (None, "-"):
        return sys.stdin
    return open(path, encoding="utf-8")


def _open_out(path: str | None):
    if path in (None, "-"):
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _load_bank(directory: str | None, required: bool = False) -> KernelBank:
    directory = directory or os.environ.get(KERNEL_ENV)
    if directory is None:
        if required:
            raise MissingKernelError("no kernel directory given (use --kernels or $ITX_KERNEL_DIR)")
        return KernelBank.default()
    return KernelBank.load(directory)


def _read_records(stream) -> tuple[list, bool]:
    """Parsed records (or an error dict per bad line) and whether any line was malformed."""
    out, malformed = [], False
    for lineno, line in enumerate(stream, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise ValueError("record is not a JSON object")
            out.append(rec)
        except ValueError as exc:
            malformed = True
            out.append({"_malformed": f"line {lineno}: {exc}"})
    return out, malformed


# -- gen-kernels -------------------------------------------------------------------


def cmd_gen_kernels(args) -> int:
    try:
        bank = KernelBank.default(precision_bits=args.precision_bits, seed=args.seed)
        files = bank.save(args.out_dir)
    except QuantizationOverflowError as exc:
        _err(str(exc))
        return EXIT_KERNEL
    except OSError as exc:
        _err(f"cannot write kernels: {exc}")
        return EXIT_KERNEL
    print(f"wrote {len(files)} kernel files to {args.out_dir}")
    return EXIT_OK


# -- itx ---------------------------------------------------------------------------

_BANK_FOR_WORKER: KernelBank | None = None


def _init_worker(directory):
    global _BANK_FOR_WORKER
    _BANK_FOR_WORKER = _load_bank(directory)


def _process_record(item):
    index, rec, bank = item
    bank = bank or _BANK_FOR_WORKER
    if "_malformed" in rec:
        return {"index": index, "error": {"code": "malformed-json", "message": rec["_malformed"]}}
    try:
        desc = BlockDescriptor.from_record(rec)
    except (KeyError, ValueError, TypeError) as exc:
        return {"index": index, "error": {"code": "bad-record", "message": str(exc)}}
    violations = validate(desc)
    if violations:
        return {"index": index, **desc.to_record(),
                "error": {"code": violations[0].code, "violations": [str(v) for v in violations]}}
    try:
        res = inverse_transform(desc, rec.get("coeffs", []), bank)
    except InvalidBlockError as exc:
        return {"index": index, **desc.to_record(),
                "error": {"code": exc.violations[0].code, "violations": [str(v) for v in exc.violations]}}
    return {"index": index, **desc.to_record(), "residuals": res.reshape(-1).tolist()}


def cmd_itx(args) -> int:
    try:
        bank = _load_bank(args.kernels)
    except (MissingKernelError, KernelFormatError, OSError) as exc:
        _err(f"kernel load failed: {exc}")
        return EXIT_KERNEL
    with _open_in(args.input) as fin:
        records, malformed = _read_records(fin)
    if args.jobs > 1:
        kdir = args.kernels or os.environ.get(KERNEL_ENV)
        with ProcessPoolExecutor(args.jobs, initializer=_init_worker, initargs=(kdir,)) as pool:
            results = list(pool.map(_process_record, [(i, r, None) for i, r in enumerate(records)], chunksize=16))
    else:
        results = [_process_record((i, r, bank)) for i, r in enumerate(records)]
    out = _open_out(args.output)
    try:
        for r in results:
            out.write(json.dumps(r) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_FORMAT if malformed else EXIT_OK


# -- simulate ------------------------------------------------------------------------


def _parse_frame(s: str) -> tuple[int, int]:
    try:
        w, h = s.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"frame must look like 3840x2160, not {s!r}") from None


def cmd_simulate(args) -> int:
    try:
        config = PipelineConfig(mts_mults=args.mults, lfnst_mults=args.mults, clock_hz=args.clock,
                                l1=args.l1, l2=args.l2)
        bank = _load_bank(args.kernels)
    except (ValueError, MissingKernelError, KernelFormatError, OSError) as exc:
        _err(str(exc))
        return EXIT_KERNEL
    sim = PipelineSimulator(config, bank, first_direction=args.first_direction)

    if args.frame:
        w, h = args.frame
        try:
            rep = sim.simulate_frame(w, h, args.chroma, max_tb=args.max_tb)
        except (ValueError, SchedulingError) as exc:
            _err(str(exc))
            return EXIT_KERNEL
        doc = {"mode": "frame", "mults_per_core": args.mults, "L1": config.latency_l1,
               "L2": config.latency_l2, **rep.summary()}
        print(json.dumps(doc, indent=2))
        return EXIT_OK

    with _open_in(args.input) as fin:
        records, malformed = _read_records(fin)
    blocks, descs = [], []
    trace = _open_out(args.trace) if args.trace else None
    try:
        for i, rec in enumerate(records):
            if "_malformed" in rec:
                blocks.append({"index": i, "error": {"code": "malformed-json", "message": rec["_malformed"]}})
                continue
            try:
                desc = BlockDescriptor.from_record(rec)
                violations = validate(desc)
                if violations:
                    raise InvalidBlockError(violations)
                r = sim.simulate_block(desc, rec.get("coeffs"))
            except InvalidBlockError as exc:
                blocks.append({"index": i, "error": {"code": exc.violations[0].code,
                                                     "violations": [str(v) for v in exc.violations]}})
                continue
            except (KeyError, ValueError, TypeError) as exc:
                blocks.append({"index": i, "error": {"code": "bad-record", "message": str(exc)}})
                continue
            descs.append(desc)
            entry = {"index": i, **r.summary()}
            if r.residuals is not None:
                entry["residuals"] = r.residuals.reshape(-1).tolist()
            blocks.append(entry)
            if trace is not None:
                trace.write(f"# block {i} {desc.width}x{desc.height}\n")
                for line in r.trace_lines():
                    trace.write(line + "\n")
    finally:
        if trace is not None and trace is not sys.stdout:
            trace.close()
    stream = sim.simulate_stream(descs)
    doc = {"mode": "blocks", "mults_per_core": args.mults, "L1": config.latency_l1, "L2": config.latency_l2,
           "blocks": blocks, "stream": {**stream.summary(), "fps_equivalent": None}}
    doc["stream"].pop("fps_equivalent")
    print(json.dumps(doc, indent=2))
    return EXIT_FORMAT if malformed else EXIT_OK


# -- verify --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        bank = _load_bank(args.kernels)
    except (MissingKernelError, KernelFormatError, OSError) as exc:
        _err(f"kernel load failed: {exc}")
        return EXIT_KERNEL
    if args.random is not None:
        records, malformed = random_records(args.random, args.seed), False
    else:
        with _open_in(args.input) as fin:
            records, malformed = _read_records(fin)
        if malformed:
            _err("malformed JSON in input stream")
            return EXIT_FORMAT
    res = verify_records(records, bank)
    if res.mismatch is not None:
        m = res.mismatch
        dump = {"index": m.index, "first_diff_xy": m.first_diff, "record": m.record,
                "expected": m.expected, "actual": m.actual}
        print(f"MISMATCH in block {m.index} at (x, y)={m.first_diff}")
        print(json.dumps(dump), file=sys.stderr)
        return EXIT_MISMATCH
    print(f"{res.checked} blocks bit-exact ({res.lfnst_blocks} through LFNST), {res.skipped} skipped")
    return EXIT_OK


# -- rom -----------------------------------------------------------------------------


def cmd_rom(args) -> int:
    try:
        bank = _load_bank(args.kernels)
    except (MissingKernelError, KernelFormatError, OSError) as exc:
        _err(f"kernel load failed: {exc}")
        return EXIT_KERNEL
    mem = PipelineConfig().memory
    mts = rom_budget_check(bank.stored_mts(), mem.mts_rom_bits, "mts")
    lfnst = rom_budget_check(bank.lfnst_kernels(), mem.lfnst_rom_bits, "lfnst")
    dst7 = sum(v for k, v in mts.components.items() if k.startswith("dst7"))
    if args.json:
        print(json.dumps({"mts": mts.summary(), "lfnst": lfnst.summary(), "dst7_bits": dst7}, indent=2))
        return EXIT_OK
    for rep in (mts, lfnst):
        status = "PASS" if rep.ok else f"OVER by {rep.excess}"
        print(f"{rep.name.upper():6s} ROM {rep.bits:6d}/{rep.budget} bits  {status}")
        for name, bits in rep.components.items():
            print(f"    {name:24s} {bits:6d}")
    print(f"DST-VII share of MTS ROM: {dst7} bits")
    return EXIT_OK


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="itx", description="VVC inverse transform model and hardware simulator")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-kernels", help="write DCT-II/DST-VII and default LFNST kernel files")
    g.add_argument("out_dir")
    g.add_argument("--precision-bits", type=int, default=8)
    g.add_argument("--seed", type=int, default=20200715, help="seed for the synthetic LFNST set")
    g.set_defaults(func=cmd_gen_kernels)

    i = sub.add_parser("itx", help="inverse-transform a JSON-lines block stream")
    i.add_argument("input", nargs="?", default="-")
    i.add_argument("--kernels", help=f"kernel directory (default ${KERNEL_ENV} or built-in)")
    i.add_argument("-o", "--output", default="-")
    i.add_argument("-j", "--jobs", type=int, default=1)
    i.set_defaults(func=cmd_itx)

    s = sub.add_parser("simulate", help="cycle-level simulation of blocks or a whole frame")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--frame", type=_parse_frame, help="synthesize a frame, e.g. 3840x2160")
    s.add_argument("--chroma", default="422", choices=["420", "422", "444", "4:2:0", "4:2:2", "4:4:4"])
    s.add_argument("--clock", type=float, default=600e6)
    s.add_argument("--mults", type=int, default=32, help="multipliers per core")
    s.add_argument("--l1", type=int, default=None)
    s.add_argument("--l2", type=int, default=None)
    s.add_argument("--max-tb", type=int, default=64, choices=[4, 8, 16, 32, 64])
    s.add_argument("--first-direction", default="vertical", choices=["vertical", "horizontal"])
    s.add_argument("--trace", help="write per-cycle trace lines here")
    s.add_argument("--kernels")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="compare engines with the brute-force oracle")
    v.add_argument("input", nargs="?", default="-")
    v.add_argument("--random", type=int, default=None, metavar="N")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--kernels")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("rom", help="ROM occupancy against the hardware budgets")
    r.add_argument("--kernels")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_rom)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
