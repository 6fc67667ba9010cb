"""The sinh limiting benchmark: V source, 1 ohm, sinhdev(k=1).

DC operating point from an all-zeros guess with and without limiting,
at tight tolerances and a 100-iteration budget.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Instance, SourceWaveform
from .engine import Tolerances, assemble
from .newton import NewtonOptions, SolveReport, dc_operating_point

VOLTAGES = (1.0, 10.0, 100.0, 1000.0)
BENCH_TOL = Tolerances(reltol=1e-6, abstol_v=1e-12, abstol_i=1e-12, residualtol=1e-12)


@dataclass(frozen=True)
class BenchRow:
    voltage: float
    limited: SolveReport
    plain: SolveReport


def sinh_circuit(v: float, k: float = 1.0) -> Circuit:
    return Circuit([
        Instance("V1", "vsource", ("1", "0"), {}, SourceWaveform(dc=v)),
        Instance("R1", "resistor", ("1", "2"), {"r": 1.0}),
        Instance("D1", "sinhdev", ("2", "0"), {"k": k}),
    ], title="sinh limiting benchmark")


def sinhlim_benchmark(voltages=VOLTAGES, max_iters: int = 100) -> list[BenchRow]:
    rows = []
    for v in voltages:
        dae = assemble(sinh_circuit(v), BENCH_TOL)
        on = dc_operating_point(dae, NewtonOptions(max_iters, limiting=True))
        off = dc_operating_point(dae, NewtonOptions(max_iters, limiting=False))
        rows.append(BenchRow(v, on, off))
    return rows


def format_table(rows: list[BenchRow]) -> str:
    def cell(rep):
        return str(rep.iterations) if rep.converged else f"no conv. ({rep.iterations})"

    lines = [f"{'V':>6}  {'sinhlim':>12}  {'no limiting':>16}"]
    for r in rows:
        lines.append(f"{r.voltage:>6g}  {cell(r.limited):>12}  {cell(r.plain):>16}")
    return "\n".join(lines)
