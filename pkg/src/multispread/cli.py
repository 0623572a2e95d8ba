"""Command line entry point.

Exit codes: 0 success, 1 missing input, 2 invalid config or arguments,
3 I/O failure while running.
"""

from __future__ import annotations

import argparse
import sys

from multispread import bench
from multispread.config import ConfigError, load_config
from multispread.engine import perform_propagation
from multispread.logger import write_report

EXIT_OK = 0
EXIT_MISSING = 1
EXIT_INVALID = 2
EXIT_IO = 3


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(path: str):
    """Returns (config, exit code)."""
    try:
        return load_config(path), EXIT_OK
    except FileNotFoundError:
        _err(f"error: config file not found: {path}")
        return None, EXIT_MISSING
    except IsADirectoryError:
        _err(f"error: config path is a directory: {path}")
        return None, EXIT_MISSING
    except ConfigError as exc:
        for d in exc.diagnostics:
            _err(f"error: {d}")
        return None, EXIT_INVALID


def cmd_validate(args) -> int:
    cfg, code = _load(args.config)
    if cfg is None:
        return code
    s = cfg.summary()
    print(f"config ok: {args.config}")
    print(f"processes: {s['processes']}")
    print(f"global states: {s['global_states']}")
    print(f"allowed transitions: {s['allowed_transitions']}")
    for name, size in s["layers"].items():
        print(f"layer {name}: {size} members")
    return EXIT_OK


def cmd_run(args) -> int:
    cfg, code = _load(args.config)
    if cfg is None:
        return code
    out_dir = args.output_dir or cfg.output_dir
    log = perform_propagation(cfg.network, cfg.model, cfg.experiment)
    try:
        write_report(log, out_dir)
    except OSError as exc:
        _err(f"error: could not write report to {out_dir}: {exc}")
        return EXIT_IO
    print(f"output directory: {out_dir}")
    print(f"total transitions: {log.transitions}")
    return EXIT_OK


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}") from None
    if not sizes or any(n < 1 for n in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive")
    if sizes != sorted(sizes):
        raise argparse.ArgumentTypeError("sizes must be ascending")
    return sizes


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _non_negative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _probability(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {v}")
    return v


def cmd_bench(args) -> int:
    rows = bench.run_benchmark(args.sizes, args.p, args.reps, args.epochs, args.seed)
    print(bench.format_table(rows))
    try:
        bench.write_csv(rows, args.out)
    except OSError as exc:
        _err(f"error: could not write {args.out}: {exc}")
        return EXIT_IO
    print(f"timings written to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multispread",
        description="Simulate interacting spreading processes on multilayer networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a run config and print a summary")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run an experiment and write the report bundle")
    p.add_argument("config")
    p.add_argument("--output-dir", help="override output_dir from the config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="time single-layer SIR runs on Erdos-Renyi graphs")
    p.add_argument("--sizes", type=_sizes, default=list(bench.DEFAULT_SIZES),
                   help="comma-separated ascending graph sizes (default: %(default)s)")
    p.add_argument("--p", type=_probability, default=bench.DEFAULT_P, help="edge probability")
    p.add_argument("--reps", type=_positive, default=bench.DEFAULT_REPS, help="runs per size")
    p.add_argument("--epochs", type=_non_negative, default=bench.DEFAULT_EPOCHS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="bench.csv", help="timing CSV path")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
