"""Fixed-step implicit transient integration (backward Euler, trapezoidal)."""

from __future__ import annotations

import numpy as np

from ..engine import DaeSystem
from ..newton import NewtonOptions, SolverError, dc_operating_point, newton_solve
from .waveform import Waveform

METHODS = ("be", "trap")
MAX_HALVINGS = 10
# per-step Newton budget; a failing step is cheaper to halve than to grind
STEP_MAX_ITERS = 50


class _StepProblem:
    """One implicit step from (q_n, f_n) over ``h`` at source values ``u``.

    BE:   (q - q_n)/h + f = 0
    TRAP: (q - q_n)/h + (f + f_n)/2 = 0
    """

    def __init__(self, dae, u, q_n, f_n, h, trap):
        self.dae, self.u, self.q_n, self.f_n, self.h, self.trap = dae, u, q_n, f_n, h, trap
        self.n = dae.n
        self.limited = dae.limited

    def residual(self, X, xlim):
        ev = self.dae.evaluate(X, self.u, xlim)
        if self.trap:
            return (ev.q - self.q_n) / self.h + 0.5 * (ev.f + self.f_n), ev.C / self.h + 0.5 * ev.G
        return (ev.q - self.q_n) / self.h + ev.f, ev.C / self.h + ev.G

    def limited_values(self, X):
        return self.dae.limited_values(X)

    def abstol(self):
        return self.dae.abstol()


def initial_state(dae: DaeSystem, t0: float, ic: dict | None, opts: NewtonOptions) -> tuple[np.ndarray, str]:
    """DC operating point at ``t0`` with user initial conditions laid over it."""
    note = ""
    try:
        o = NewtonOptions(opts.max_iters, opts.tolerances, opts.limiting, None, True)
        rep = dc_operating_point(dae, o, t0)
        X = rep.solution
        if not rep.converged:
            note = f"initial operating point did not converge ({rep.message})"
    except SolverError as exc:
        X = np.zeros(dae.n)
        note = f"initial operating point failed ({exc}); starting from zeros"
    X = X.copy()
    for name, val in (ic or {}).items():
        X[dae.index(name)] = val
    return X, note


def transient(dae: DaeSystem, t0: float, t1: float, dt: float, method: str = "trap",
              initial_conditions: dict | None = None, opts: NewtonOptions | None = None) -> Waveform:
    """Integrate from ``t0`` to ``t1`` with nominal step ``dt``.

    The first step is always backward Euler, which makes the state
    consistent when user initial conditions disagree with the algebraic
    equations.  A step whose Newton solve fails is retried with half the
    step, up to ten times; after that the partial waveform is returned with
    ``ok=False``.
    """
    method = method.lower()
    if method not in METHODS:
        raise ValueError(f"unknown integration method {method!r}; use be or trap")
    if not dt > 0 or not t1 > t0:
        raise ValueError("transient needs dt > 0 and t1 > t0")
    opts = opts or NewtonOptions()
    X, note = initial_state(dae, t0, initial_conditions, opts)
    ev = dae.evaluate(X, dae.source_values(t0))
    q_n, f_n = ev.q, ev.f
    ts, xs = [t0], [X]
    t = t0
    first = True
    ok, message = True, note
    eps = 1e-9 * dt
    while t < t1 - eps:
        h = min(dt, t1 - t)
        for _ in range(MAX_HALVINGS + 1):
            u = dae.source_values(t + h)
            prob = _StepProblem(dae, u, q_n, f_n, h, trap=(method == "trap" and not first))
            o = NewtonOptions(min(opts.max_iters, STEP_MAX_ITERS), opts.tolerances, opts.limiting, X)
            try:
                rep = newton_solve(prob, o, dae.tol)
            except SolverError:
                rep = None
            if rep is not None and rep.converged:
                break
            h *= 0.5
        else:
            ok = False
            message = (message + "; " if message else "") + f"step at t={t!r} failed after {MAX_HALVINGS} halvings"
            break
        X = rep.solution
        t = t + h
        ev = dae.evaluate(X, u)
        q_n, f_n = ev.q, ev.f
        ts.append(t)
        xs.append(X)
        first = False
    return Waveform("t", list(dae.names), np.array(ts), np.array(xs), None, ok, message)
