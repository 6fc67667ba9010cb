"""Execute the analysis directives of a parsed netlist and write results.

Each analysis writes ``{prefix}_{k}_{kind}.csv`` where ``prefix`` comes from
the first ``.print csv PATH`` directive (default ``memsim``), resolved
against the output directory, and ``k`` counts analyses from 1.  A
homotopy also writes ``..._homotopy_folds.csv``.  Unless plots are turned
off, a PNG with the same stem sits next to each CSV.
"""

from __future__ import annotations

import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

import numpy as np

from .analyses import ac_sweep, dc_sweep, homotopy, transient
from .analyses.homotopy import HomotopyOptions
from .circuit import Ac, DcSweep, Homotopy, Op, Print, Tran
from .engine import AssemblyError, Tolerances, assemble
from .modspec import ModelDefectError
from .netlist import NetlistDocument
from .newton import NewtonOptions, SolverError, dc_operating_point

DEFAULT_PREFIX = "memsim"


@dataclass
class RunResult:
    status: int = 0
    files: list[Path] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    # repr gives the shortest string that reads back to the same double
    return repr(float(v))


def write_csv(path: Path, header, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _prefix(document: NetlistDocument, output_dir: Path) -> Path:
    for a in document.circuit.analyses:
        if isinstance(a, Print):
            p = Path(a.path)
            return p if p.is_absolute() else output_dir / p
    return output_dir / DEFAULT_PREFIX


def run(document: NetlistDocument, output_dir=".", tol: Tolerances | None = None, limiting: bool = True,
        plots: bool = True, out: TextIO | None = None) -> RunResult:
    """Run every analysis in order; returns status 0 only if all succeed.

    A failed analysis still writes whatever it produced, and the remaining
    analyses still run.
    """
    out = out or sys.stdout
    res = RunResult()
    if not document.ok:
        for d in document.diagnostics:
            res.errors.append(str(d))
        res.status = 1
        return res
    try:
        dae = assemble(document.circuit, tol)
    except (AssemblyError, ValueError) as exc:
        res.errors.append(str(exc))
        res.status = 1
        return res
    prefix = _prefix(document, Path(output_dir))
    if plots:
        from . import plots as plotting
    opts = NewtonOptions(limiting=limiting, pseudo_transient=True)

    def fail(msg):
        res.errors.append(msg)
        res.status = 1

    k = 0
    for a in document.circuit.analyses:
        if isinstance(a, Print):
            continue
        k += 1
        kind = type(a).__name__.lower()
        kind = {"dcsweep": "dc"}.get(kind, kind)
        stem = prefix.parent / f"{prefix.name}_{k}_{kind}"
        try:
            if isinstance(a, Op):
                rep = dc_operating_point(dae, opts)
                print(f"operating point ({rep.iterations} iterations"
                      f"{'' if rep.converged else ', NOT CONVERGED'})", file=out)
                width = max(len(n) for n in dae.names)
                for name, v in zip(dae.names, rep.solution):
                    print(f"  {name:<{width}}  {v: .9g}", file=out)
                res.files.append(_write_op(stem.with_suffix(".csv"), dae.names, rep.solution))
                if not rep.converged:
                    fail(f"analysis {k} (.op): {rep.message}")
            elif isinstance(a, DcSweep):
                w = dc_sweep(dae, a.source, a.values(), opts)
                res.files.append(write_csv(stem.with_suffix(".csv"), w.header, w.rows()))
                if plots:
                    res.files.append(plotting.plot_columns(stem.with_suffix(".png"), w.variable, w.x, w.names,
                                                           w.values, f".dc {a.source}"))
                if not w.ok:
                    fail(f"analysis {k} (.dc): {w.message}")
            elif isinstance(a, Tran):
                w = transient(dae, 0.0, a.tstop, a.dt, a.method, a.ic, opts)
                res.files.append(write_csv(stem.with_suffix(".csv"), w.header, w.rows()))
                if plots:
                    res.files.append(plotting.plot_columns(stem.with_suffix(".png"), "t (s)", w.x, w.names,
                                                           w.values, f".tran {a.method}"))
                if not w.ok:
                    fail(f"analysis {k} (.tran): {w.message}")
                elif w.message:
                    print(f"note: {w.message}", file=out)
            elif isinstance(a, Ac):
                op = dc_operating_point(dae, opts)
                if not op.converged:
                    fail(f"analysis {k} (.ac): operating point did not converge: {op.message}")
                    continue
                r = ac_sweep(dae, op.solution, a.source, a.frequencies())
                res.files.append(write_csv(stem.with_suffix(".csv"), r.header, r.rows()))
                if plots:
                    res.files.append(plotting.plot_bode(stem.with_suffix(".png"), r.frequencies, r.names,
                                                        r.response, f".ac {a.source}"))
                if r.errors:
                    fail(f"analysis {k} (.ac): singular at {len(r.errors)} frequencies")
            elif isinstance(a, Homotopy):
                cs = homotopy(dae, a.source, a.lmin, a.lmax, HomotopyOptions(**a.options))
                res.files.append(write_csv(stem.with_suffix(".csv"), cs.header, cs.rows()))
                folds = stem.parent / f"{stem.name}_folds.csv"
                res.files.append(write_csv(folds, ["index", "lambda", *cs.names],
                                           ([f.index, f.lam, *f.state] for f in cs.folds)))
                if plots and cs.lam.size:
                    res.files.append(plotting.plot_columns(stem.with_suffix(".png"), "lambda", cs.lam, cs.names,
                                                           cs.X, f".homotopy {a.source}",
                                                           [(f.lam, f.state) for f in cs.folds]))
                print(f"homotopy {a.source}: {cs.lam.size} samples, {len(cs.folds)} folds", file=out)
                if not cs.ok:
                    fail(f"analysis {k} (.homotopy): {cs.message}")
        except (SolverError, ModelDefectError, ValueError, KeyError) as exc:
            fail(f"analysis {k} (.{kind}): {exc}")
    return res


def _write_op(path: Path, names, values) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["unknown", "value"])
        for n, v in zip(names, np.asarray(values)):
            w.writerow([n, _fmt(v)])
    return path
