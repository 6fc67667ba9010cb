"""DC sweep: a sequence of operating points, each seeded by the last."""

from __future__ import annotations

import numpy as np

from ..engine import DaeSystem
from ..newton import NewtonOptions, SolverError, dc_solve
from .waveform import Waveform


def dc_sweep(dae: DaeSystem, source: str, values, opts: NewtonOptions | None = None,
             x0=None) -> Waveform:
    """Solve the DC point for each source value in order.

    No predictor is used: each point starts from the previous converged
    solution, so a folded solution curve shows up as hysteresis.  Failed
    points are recorded as NaN and the sweep continues from the last
    converged point.
    """
    opts = opts or NewtonOptions(pseudo_transient=True)
    dae.source_index(source)
    values = np.asarray(values, dtype=float)
    guess = np.zeros(dae.n) if x0 is None else np.array(x0, dtype=float)
    out = np.full((values.size, dae.n), np.nan)
    conv = np.zeros(values.size, dtype=bool)
    notes = []
    for k, v in enumerate(values):
        u = dae.source_values(0.0, dc=True, overrides={source: v})
        o = NewtonOptions(opts.max_iters, opts.tolerances, opts.limiting, guess, opts.pseudo_transient)
        try:
            rep = dc_solve(dae, u, o)
        except SolverError as exc:
            notes.append(f"{source}={v!r}: {exc}")
            continue
        if rep.converged:
            out[k] = rep.solution
            conv[k] = True
            guess = rep.solution
        else:
            notes.append(f"{source}={v!r}: {rep.message}")
    return Waveform(source, list(dae.names), values, out, conv, bool(conv.all()), "; ".join(notes))
