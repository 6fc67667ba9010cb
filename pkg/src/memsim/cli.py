"""Command line: ``memsim run|check|models|bench``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import format_table, sinhlim_benchmark
from .devices import KINDS
from .devices.memristor import F1_RANGE, F2_RANGE
from .engine import AssemblyError, Tolerances, assemble
from .netlist import parse_netlist


def _positive(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {s!r}")
    return v


def _nonneg(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {s!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="memsim", description="Memristive device models and a small circuit simulator.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run every analysis in a netlist")
    r.add_argument("file", type=Path)
    r.add_argument("--out", type=Path, default=Path("."), help="output directory (default: current)")
    d = Tolerances()
    r.add_argument("--reltol", type=_positive, default=d.reltol)
    r.add_argument("--abstol-v", type=_positive, default=d.abstol_v)
    r.add_argument("--abstol-i", type=_positive, default=d.abstol_i)
    r.add_argument("--residualtol", type=_positive, default=d.residualtol)
    r.add_argument("--gmin", type=_nonneg, default=d.gmin)
    r.add_argument("--no-limiting", action="store_true", help="turn off Newton limiting")
    r.add_argument("--no-plots", action="store_true", help="write CSV files only, no PNG previews")

    c = sub.add_parser("check", help="parse and assemble a netlist without running it")
    c.add_argument("file", type=Path)

    sub.add_parser("models", help="list device kinds, parameters and defaults")

    b = sub.add_parser("bench", help="run a built-in benchmark")
    b.add_argument("name", choices=["sinhlim"])
    return p


def _load(path: Path):
    try:
        data = path.read_bytes()
    except OSError as exc:
        print(f"memsim: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return None
    doc = parse_netlist(data)
    for d in doc.diagnostics:
        print(f"{path}:{d.line}:{d.column}: {d.severity}: {d.message}", file=sys.stderr)
    return doc


def cmd_run(args) -> int:
    from .runner import run

    doc = _load(args.file)
    if doc is None or not doc.ok:
        return 1
    tol = Tolerances(args.reltol, args.abstol_v, args.abstol_i, args.residualtol, args.gmin)
    res = run(doc, args.out, tol, limiting=not args.no_limiting, plots=not args.no_plots)
    for msg in res.errors:
        print(f"error: {msg}", file=sys.stderr)
    for f in res.files:
        print(f"wrote {f}")
    return res.status


def cmd_check(args) -> int:
    doc = _load(args.file)
    if doc is None or not doc.ok:
        return 1
    try:
        dae = assemble(doc.circuit)
    except AssemblyError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    print(f"{args.file}: ok, {len(doc.circuit.instances)} instances, {dae.n} unknowns, "
          f"{len(doc.circuit.analyses)} directives")
    return 0


def cmd_models(args) -> int:
    for kind in KINDS.values():
        print(f"{kind.name}: {kind.summary}")
        if kind.source:
            print("    dc sin_amp sin_freq sin_phase pwl pwl_period (waveform)")
        for name, val in kind.defaults.items():
            print(f"    {name} = {val!r}")
        if kind.name == "memristor":
            n = len(F1_RANGE) * len(F2_RANGE)
            print(f"    {n} valid switch combinations: f1_switch 1..{F1_RANGE[-1]}, "
                  f"f2_switch 1..{F2_RANGE[-1]}")
    return 0


def cmd_bench(args) -> int:
    print(format_table(sinhlim_benchmark()))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": cmd_run, "check": cmd_check, "models": cmd_models, "bench": cmd_bench}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
