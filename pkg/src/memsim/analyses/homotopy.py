"""Pseudo-arclength continuation of DC solutions in one source value.

The curve F(X, lam) = 0 is followed in Z = (X, lam).  Each step predicts
along the unit tangent, then corrects with Newton on F together with the
hyperplane row t.(Z - Z_pred) = 0, so folds in lam are passed without the
Jacobian of F needing to be invertible there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from ..engine import DaeSystem
from ..newton import NewtonOptions, SolverError, StaticProblem, dc_solve, linear_solve, newton_solve


@dataclass(frozen=True)
class Fold:
    index: int  # sample nearest the fold
    lam: float  # refined fold parameter value
    state: np.ndarray  # refined unknowns at the fold


@dataclass
class CurveSet:
    parameter: str
    names: list[str]
    lam: np.ndarray
    X: np.ndarray  # samples x unknowns
    folds: list[Fold] = field(default_factory=list)
    ok: bool = True
    message: str = ""
    dae: DaeSystem | None = field(default=None, repr=False)

    def column(self, name: str) -> np.ndarray:
        if name.lower() in ("lambda", self.parameter.lower()):
            return self.lam
        return self.X[:, [n.lower() for n in self.names].index(name.lower())]

    @property
    def header(self) -> list[str]:
        return ["lambda"] + list(self.names)

    def rows(self):
        for lv, row in zip(self.lam, self.X):
            yield [lv, *row]

    def solutions_at(self, lam: float, polish: bool = True) -> list[np.ndarray]:
        """Every point where the curve crosses ``lam``, Newton-polished."""
        out = []
        d = self.lam - lam
        for i in range(len(d) - 1):
            if d[i] == 0 or d[i] * d[i + 1] < 0:
                w = 0.0 if d[i] == 0 else d[i] / (d[i] - d[i + 1])
                X = (1 - w) * self.X[i] + w * self.X[i + 1]
                if polish and self.dae is not None:
                    u = self.dae.source_values(0.0, dc=True, overrides={self.parameter: lam})
                    rep = newton_solve(StaticProblem(self.dae, u),
                                       NewtonOptions(limiting=False, initial_guess=X), self.dae.tol)
                    if rep.converged:
                        X = rep.solution
                out.append(X)
        if d[-1] == 0:
            out.append(self.X[-1])
        return out


@dataclass(frozen=True)
class HomotopyOptions:
    h0: float = 0.01
    hmin: float = 1e-10
    hmax: float = 0.05
    max_samples: int = 20000
    max_corrector: int = 8
    fast: int = 3  # corrector iterations at or below this grow the step
    grow: float = 1.5
    shrink: float = 0.5
    min_cos: float = 0.95  # reject steps that turn the tangent by more than ~18 degrees


def _bordered(J, Fl, row):
    n = J.shape[0]
    if sparse.issparse(J):
        return sparse.bmat([[J, sparse.csc_matrix(Fl[:, None])], [sparse.csc_matrix(row[None, :n]),
                            sparse.csc_matrix([[row[n]]])]], format="csc")
    A = np.empty((n + 1, n + 1))
    A[:n, :n] = J
    A[:n, n] = Fl
    A[n] = row
    return A


class _Curve:
    def __init__(self, dae: DaeSystem, source: str):
        self.dae = dae
        self.k = dae.source_index(source)
        self.source = dae.sources[self.k]
        self.base = dae.source_values(0.0, dc=True)

    def F(self, Z):
        u = self.base.copy()
        u[self.k] = Z[-1]
        ev = self.dae.evaluate(Z[:-1], u)
        return ev.f, ev.G, ev.B[:, self.k]

    def tangent(self, Z, t_prev):
        _, J, Fl = self.F(Z)
        rhs = np.zeros(Z.size)
        rhs[-1] = 1.0
        t = linear_solve(_bordered(J, Fl, t_prev), rhs)
        t /= np.linalg.norm(t)
        return t if t @ t_prev >= 0 else -t

    def correct(self, Zp, t, tol, abstol, max_iter):
        Z = Zp.copy()
        for it in range(1, max_iter + 1):
            f, J, Fl = self.F(Z)
            r = np.append(f, t @ (Z - Zp))
            dZ = linear_solve(_bordered(J, Fl, t), -r)
            Z = Z + dZ
            if not np.all(np.isfinite(Z)):
                return None, it
            small = np.all(np.abs(dZ) <= tol.reltol * np.abs(Z) + abstol)
            if small and np.max(np.abs(f)) <= tol.residualtol:
                return Z, it
        return None, max_iter


def _count_folds(lam: np.ndarray, eps: float) -> list[int]:
    """Indices where lam reverses direction, ignoring moves smaller than eps."""
    folds = []
    direction = 0
    anchor = 0
    for i in range(1, lam.size):
        d = lam[i] - lam[anchor]
        if abs(d) <= eps:
            continue
        s = 1 if d > 0 else -1
        if direction and s != direction:
            # extremum between anchor and i
            seg = lam[anchor:i + 1]
            folds.append(anchor + int(np.argmax(seg) if direction > 0 else np.argmin(seg)))
        direction = s
        anchor = i
    return folds


def _refine(lam, X, s, i) -> tuple[float, np.ndarray]:
    """Vertex of the parabola through three samples around fold index ``i``."""
    if i <= 0 or i >= lam.size - 1:
        return float(lam[i]), X[i]
    a = s[i - 1:i + 2]
    coef = np.polyfit(a - a[1], lam[i - 1:i + 2], 2)
    if coef[0] == 0:
        return float(lam[i]), X[i]
    sv = -coef[1] / (2 * coef[0])
    lv = float(np.polyval(coef, sv))
    xc = np.array([np.polyval(np.polyfit(a - a[1], X[i - 1:i + 2, j], 2), sv) for j in range(X.shape[1])])
    return lv, xc


def homotopy(dae: DaeSystem, source: str, lmin: float, lmax: float,
             options: HomotopyOptions | None = None, x0=None) -> CurveSet:
    """Trace the DC solution curve for ``source`` from ``lmin`` towards ``lmax``.

    Ends when lam leaves [lmin, lmax] (the last sample is solved exactly at
    the bound), when the sample budget is spent, or when the step shrinks
    below ``hmin``.  Folds are where lam reverses direction along the curve.
    """
    if not lmax > lmin:
        raise ValueError("homotopy needs lmax > lmin")
    opt = options or HomotopyOptions()
    tol = dae.tol
    curve = _Curve(dae, source)
    abstol = np.append(dae.abstol(), tol.abstol_v)

    u0 = curve.base.copy()
    u0[curve.k] = lmin
    start = dc_solve(dae, u0, NewtonOptions(initial_guess=x0, pseudo_transient=True))
    names = list(dae.names)
    if not start.converged:
        return CurveSet(curve.source, names, np.array([]), np.zeros((0, dae.n)), [], False,
                        f"no starting solution at {lmin!r}: {start.message}", dae)
    Z = np.append(start.solution, lmin)
    e_lam = np.zeros(Z.size)
    e_lam[-1] = 1.0
    t = curve.tangent(Z, e_lam)
    samples = [Z]
    h = opt.h0
    ok, message = True, ""
    while len(samples) < opt.max_samples:
        try:
            Zn, its = curve.correct(Z + h * t, t, tol, abstol, opt.max_corrector)
            tn = curve.tangent(Zn, t) if Zn is not None else None
        except SolverError:
            Zn, its, tn = None, opt.max_corrector, None
        if Zn is None or tn @ t < opt.min_cos or np.linalg.norm(Zn - Z) > opt.hmax * (1 + 1e-9):
            h *= opt.shrink
            if h < opt.hmin:
                ok, message = False, f"step fell below {opt.hmin!r} at lambda={Z[-1]!r}"
                break
            continue
        if Zn[-1] > lmax or Zn[-1] < lmin:
            bound = lmax if Zn[-1] > lmax else lmin
            w = (bound - Z[-1]) / (Zn[-1] - Z[-1])
            u = curve.base.copy()
            u[curve.k] = bound
            end = newton_solve(StaticProblem(dae, u),
                               NewtonOptions(limiting=False, initial_guess=(1 - w) * Z[:-1] + w * Zn[:-1]), tol)
            if end.converged:
                samples.append(np.append(end.solution, bound))
            break
        samples.append(Zn)
        Z, t = Zn, tn
        if its <= opt.fast:
            h = min(h * opt.grow, opt.hmax)
    else:
        ok, message = False, f"sample budget {opt.max_samples} reached at lambda={Z[-1]!r}"

    S = np.array(samples)
    lam, X = S[:, -1], S[:, :-1]
    arc = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(S, axis=0), axis=1))])
    eps = 1e-9 * max(1.0, lmax - lmin)
    folds = []
    for i in _count_folds(lam, eps):
        lv, xv = _refine(lam, X, arc, i)
        folds.append(Fold(i, lv, xv))
    return CurveSet(curve.source, names, lam, X, folds, ok, message, dae)
