"""Newton-Raphson with SPICE-style limiting, and the DC operating point."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse.linalg import splu

from .engine import DaeSystem, Tolerances
from .limiting import pnjlim, sinhlim
from .modspec import LimitedVarSpec, ModelDefectError, limit_step

__all__ = [
    "NewtonOptions", "SolveReport", "SolverError", "SingularJacobianError",
    "StaticProblem", "newton_solve", "dc_solve", "dc_operating_point", "pseudo_transient",
    "linear_solve", "pnjlim", "sinhlim",
]


class SolverError(RuntimeError):
    pass


class SingularJacobianError(SolverError):
    def __init__(self, message: str, cond: float = float("inf")):
        super().__init__(message)
        self.cond = cond


@dataclass
class NewtonOptions:
    max_iters: int = 100
    tolerances: Tolerances | None = None  # None: use the system's own
    limiting: bool = True
    initial_guess: np.ndarray | None = None
    # DC only: when plain Newton fails, march the dynamics with backward
    # Euler at growing pseudo time steps and retry Newton from there
    pseudo_transient: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class SolveReport:
    solution: np.ndarray
    iterations: int
    converged: bool
    residual_norm: float
    step_norms: list[float] = field(default_factory=list)
    message: str = ""


class Problem(Protocol):
    n: int
    limited: list[LimitedVarSpec]

    def residual(self, X, xlim): ...
    def limited_values(self, X): ...
    def abstol(self): ...


class StaticProblem:
    """f(X, u) = 0 at fixed source values ``u``."""

    def __init__(self, dae: DaeSystem, u):
        self.dae = dae
        self.u = np.asarray(u, dtype=float)
        self.n = dae.n
        self.limited = dae.limited

    def residual(self, X, xlim):
        ev = self.dae.evaluate(X, self.u, xlim)
        return ev.f, ev.G

    def limited_values(self, X):
        return self.dae.limited_values(X)

    def abstol(self):
        return self.dae.abstol()


def linear_solve(J, rhs):
    """Dense LU for small systems, sparse LU otherwise."""
    if sparse.issparse(J):
        try:
            x = splu(sparse.csc_matrix(J)).solve(rhs)
        except RuntimeError as exc:
            raise SingularJacobianError(f"singular Jacobian: {exc}") from None
    else:
        try:
            with warnings.catch_warnings():
                # exact zero pivots are reported below with a condition number
                warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                lu, piv = scipy.linalg.lu_factor(J, check_finite=False)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise SingularJacobianError(f"singular Jacobian: {exc}") from None
        if np.any(np.diag(lu) == 0.0):
            raise SingularJacobianError(
                f"singular Jacobian (condition number {np.linalg.cond(J):.3g})", float(np.linalg.cond(J)))
        x = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    if not np.all(np.isfinite(x)):
        cond = float(np.linalg.cond(J.toarray() if sparse.issparse(J) else J))
        raise SingularJacobianError(f"singular Jacobian (condition number {cond:.3g})", cond)
    return x


def newton_solve(problem: Problem, opts: NewtonOptions | None = None, tol: Tolerances | None = None) -> SolveReport:
    """Iterate X <- X - J^-1 r until both step and residual criteria hold.

    With limiting on, every declared limited expression is passed through its
    limiter before evaluation; the limited value is the "old" value for the
    next iteration.  A step only counts as converged when no limiter changed
    its input.
    """
    opts = opts or NewtonOptions()
    tol = opts.tolerances or tol or getattr(getattr(problem, "dae", None), "tol", None) or Tolerances()
    X = np.zeros(problem.n) if opts.initial_guess is None else np.array(opts.initial_guess, dtype=float)
    abstol = problem.abstol()
    specs = problem.limited if opts.limiting else []
    lim_old = problem.limited_values(X) if specs else None
    steps: list[float] = []
    rnorm = float("inf")
    for it in range(1, opts.max_iters + 1):
        xlim = None
        limited_active = False
        if specs:
            expr = problem.limited_values(X)
            xlim = np.array([limit_step(s, e, o) for s, e, o in zip(specs, expr, lim_old)])
            limited_active = bool(np.any(np.abs(xlim - expr) > tol.reltol * np.abs(expr) + tol.abstol_v))
            lim_old = xlim
        try:
            r, J = problem.residual(X, xlim)
        except ModelDefectError as exc:
            return SolveReport(X, it, False, rnorm, steps, f"model defect: {exc}")
        rnorm = float(np.max(np.abs(r))) if r.size else 0.0
        dX = linear_solve(J, -r)
        Xn = X + dX
        steps.append(float(np.max(np.abs(dX))) if dX.size else 0.0)
        if not np.all(np.isfinite(Xn)):
            return SolveReport(X, it, False, rnorm, steps, "iterate became non-finite")
        small = np.all(np.abs(dX) <= tol.reltol * np.maximum(np.abs(Xn), np.abs(X)) + abstol)
        X = Xn
        if small and rnorm <= tol.residualtol and not limited_active:
            return SolveReport(X, it, True, rnorm, steps)
    return SolveReport(X, opts.max_iters, False, rnorm, steps, f"no convergence within {opts.max_iters} iterations")


class _PseudoStep(StaticProblem):
    """(q - q_n)/h + f = 0 at fixed sources."""

    def __init__(self, dae, u, q_n, h):
        super().__init__(dae, u)
        self.q_n, self.h = q_n, h

    def residual(self, X, xlim):
        ev = self.dae.evaluate(X, self.u, xlim)
        return (ev.q - self.q_n) / self.h + ev.f, ev.C / self.h + ev.G


PTRAN_H0 = 1e-9
PTRAN_MAX_STEPS = 60


def pseudo_transient(dae: DaeSystem, u, X0, opts: NewtonOptions, tol: Tolerances) -> SolveReport:
    """Follow the circuit dynamics towards a stable DC point.

    The step grows fourfold after each easy step; every few accepted steps
    plain Newton is tried from the current state and its answer is returned
    as soon as it converges.
    """
    X = np.array(X0, dtype=float)
    q_n = dae.evaluate(X, u).q
    h = PTRAN_H0
    total = 0
    accepted = 0
    last = None
    for _ in range(PTRAN_MAX_STEPS):
        try:
            rep = newton_solve(_PseudoStep(dae, u, q_n, h), NewtonOptions(20, tol, opts.limiting, X), tol)
        except SolverError:
            rep = None
        total += rep.iterations if rep else 1
        if rep is None or not rep.converged:
            h *= 0.25
            if h < 1e-18:
                break
            continue
        X = rep.solution
        q_n = dae.evaluate(X, u).q
        accepted += 1
        if accepted % 4 == 0:
            try:
                last = newton_solve(StaticProblem(dae, u), NewtonOptions(opts.max_iters, tol, opts.limiting, X), tol)
            except SolverError:
                last = None
            if last is not None:
                total += last.iterations
                if last.converged:
                    return SolveReport(last.solution, total, True, last.residual_norm, last.step_norms,
                                       "converged after pseudo-transient continuation")
        if rep.iterations <= 6:
            h *= 4.0
    rnorm = last.residual_norm if last is not None else float("inf")
    return SolveReport(X, total, False, rnorm, [], "pseudo-transient continuation did not reach a DC point")


def dc_solve(dae: DaeSystem, u, opts: NewtonOptions | None = None) -> SolveReport:
    """Newton on f(X, u) = 0, with the pseudo-transient fallback if enabled."""
    opts = opts or NewtonOptions()
    tol = opts.tolerances or dae.tol
    try:
        rep = newton_solve(StaticProblem(dae, u), opts, tol)
    except SolverError as exc:
        if not opts.pseudo_transient:
            raise
        rep = SolveReport(np.zeros(dae.n), 0, False, float("inf"), [], str(exc))
    if rep.converged or not opts.pseudo_transient:
        return rep
    X0 = np.zeros(dae.n) if opts.initial_guess is None else opts.initial_guess
    fallback = pseudo_transient(dae, u, X0, opts, tol)
    fallback.iterations += rep.iterations
    return fallback


def dc_operating_point(dae: DaeSystem, opts: NewtonOptions | None = None, t: float = 0.0,
                       overrides: dict | None = None) -> SolveReport:
    """Solve f(X, u_dc) = 0; sine components of sources are excluded."""
    u = dae.source_values(t, dc=True, overrides=overrides)
    return dc_solve(dae, u, opts)
