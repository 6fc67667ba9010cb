"""Device-model contract.

A model exposes explicit outputs ``z = d/dt qe(x, y) + fe(x, y, u)`` and
implicit equations ``0 = d/dt qi(x, y) + fi(x, y, u)``.  Internal unknowns
``y`` are ordinary circuit unknowns; a model never sees time, step size or
history.

Limited variables are affine combinations of ``x`` and ``y`` that the model
reads through a separate argument vector ``lim``.  The Newton driver may
substitute limited values there; :func:`evaluate` then linearizes about the
substituted point so the assembled system stays consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from . import ad
from .limiting import pnjlim, sinhlim

LIMITERS = ("none", "pnjlim", "sinhlim")


class ContractError(ValueError):
    """Arguments do not match the model descriptor."""


class ModelDefectError(ArithmeticError):
    """A model produced a non-finite value or derivative."""


@dataclass(frozen=True)
class LimitedVarSpec:
    """``expr = x_coeffs . x + y_coeffs . y``, limited by ``limiter``.

    ``limiter_params`` holds (vt, xcrit) for pnjlim and (k,) for sinhlim.
    """

    name: str
    x_coeffs: tuple[float, ...]
    y_coeffs: tuple[float, ...]
    limiter: str = "none"
    limiter_params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.limiter not in LIMITERS:
            raise ValueError(f"unknown limiter {self.limiter!r}")
        for p in self.limiter_params:
            if not (np.isfinite(p) and p > 0):
                raise ValueError(f"limiter parameters must be finite and positive: {self.limiter_params}")
        need = {"none": 0, "pnjlim": 2, "sinhlim": 1}[self.limiter]
        if len(self.limiter_params) != need:
            raise ValueError(f"{self.limiter} takes {need} parameter(s)")

    def expression(self, x, y) -> float:
        return float(np.dot(self.x_coeffs, x) + np.dot(self.y_coeffs, y))


Equations = Callable[..., tuple]


@dataclass(frozen=True)
class ModelDescriptor:
    """Names, parameters and the equation function of one device model.

    ``equations(x, y, u, lim)`` receives lists of Duals and returns
    ``(fe, qe, fi, qi)``, each a list.  Parameters are bound into the
    function when the descriptor is built; ``params`` is the read-only view.
    """

    name: str
    x_names: tuple[str, ...]
    z_names: tuple[str, ...]
    y_names: tuple[str, ...]
    u_names: tuple[str, ...]
    params: Mapping[str, float]
    equations: Equations = field(repr=False, compare=False)
    limited_vars: tuple[LimitedVarSpec, ...] = ()

    def __post_init__(self):
        names = list(self.x_names) + list(self.z_names) + list(self.y_names) + list(self.u_names)
        if len(set(names)) != len(names):
            raise ValueError(f"{self.name}: I/O, internal and input names must be disjoint")
        for k, v in self.params.items():
            if not np.isfinite(v):
                raise ValueError(f"{self.name}: parameter {k} has non-finite value {v}")
        for lv in self.limited_vars:
            if len(lv.x_coeffs) != len(self.x_names) or len(lv.y_coeffs) != len(self.y_names):
                raise ValueError(f"{self.name}: limited variable {lv.name} has wrong coefficient count")
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return len(self.x_names), len(self.y_names), len(self.u_names), len(self.limited_vars)

    @property
    def limit_coeffs(self) -> tuple[np.ndarray, np.ndarray]:
        nl = len(self.limited_vars)
        cx = np.array([lv.x_coeffs for lv in self.limited_vars], dtype=float).reshape(nl, len(self.x_names))
        cy = np.array([lv.y_coeffs for lv in self.limited_vars], dtype=float).reshape(nl, len(self.y_names))
        return cx, cy

    def limited_expressions(self, x, y) -> np.ndarray:
        return np.array([lv.expression(x, y) for lv in self.limited_vars])


@dataclass
class EvalResult:
    fe: np.ndarray
    qe: np.ndarray
    fi: np.ndarray
    qi: np.ndarray
    dfe_dx: np.ndarray
    dfe_dy: np.ndarray
    dqe_dx: np.ndarray
    dqe_dy: np.ndarray
    dfi_dx: np.ndarray
    dfi_dy: np.ndarray
    dqi_dx: np.ndarray
    dqi_dy: np.ndarray
    dfe_du: np.ndarray
    dfi_du: np.ndarray


def _split(outs, n):
    """Stack a list of Duals/floats into (values, gradient matrix)."""
    vals = np.empty(len(outs))
    jac = np.zeros((len(outs), n))
    for i, o in enumerate(outs):
        if isinstance(o, ad.Dual):
            vals[i] = o.val
            jac[i] = o.grad
        else:
            vals[i] = o
    return vals, jac


def evaluate(model: ModelDescriptor, x, y, u=(), xlim=None) -> EvalResult:
    """Evaluate all four equation groups and their Jacobians.

    With ``xlim`` given, each limited expression is replaced by the given
    value inside the equations and the result is linearized back to the
    actual ``(x, y)``: values gain ``d/dlim * (expr(x, y) - xlim)`` and the
    Jacobians get the chain-rule term through the expression.  With
    ``xlim=None`` the expressions are used unmodified and the result is exact.
    """
    nx, ny, nu, nl = model.sizes
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    u = np.asarray(u, dtype=float).ravel()
    if x.size != nx or y.size != ny or u.size != nu:
        raise ContractError(
            f"{model.name}: expected |x|={nx}, |y|={ny}, |u|={nu}; got {x.size}, {y.size}, {u.size}"
        )
    inputs = np.concatenate([x, y, u])
    if not np.isfinite(inputs).all():
        raise ContractError(f"{model.name}: non-finite input")

    exprs = model.limited_expressions(x, y)
    if xlim is None:
        lim_vals = exprs
    else:
        lim_vals = np.asarray(xlim, dtype=float).ravel()
        if lim_vals.size != nl:
            raise ContractError(f"{model.name}: expected {nl} limited values, got {lim_vals.size}")
    n = nx + ny + nu + nl
    eye = np.eye(n)
    seeded = [ad.Dual(float(v), eye[k]) for k, v in enumerate(np.concatenate([inputs, lim_vals]))]
    sx, sy = seeded[:nx], seeded[nx:nx + ny]
    su, sl = seeded[nx + ny:nx + ny + nu], seeded[nx + ny + nu:]

    groups = model.equations(sx, sy, su, sl)
    sizes = [len(g) for g in groups]
    outs = [o for g in groups for o in g]
    vals, jac = _split(outs, n)
    jx, jy = jac[:, :nx], jac[:, nx:nx + ny]
    ju, jl = jac[:, nx + ny:nx + ny + nu], jac[:, nx + ny + nu:]
    if nl:
        cx, cy = model.limit_coeffs
        vals = vals + jl @ (exprs - lim_vals)
        jx = jx + jl @ cx
        jy = jy + jl @ cy
    if not (np.isfinite(vals).all() and np.isfinite(jac).all() and np.isfinite(jx).all() and np.isfinite(jy).all()):
        bad = int(np.argmax(~(np.isfinite(vals) & np.isfinite(jx).all(1) & np.isfinite(jy).all(1)
                              & np.isfinite(ju).all(1))))
        group = int(np.searchsorted(np.cumsum(sizes), bad, side="right"))
        fname = ("fe", "qe", "fi", "qi")[group]
        raise ModelDefectError(f"{model.name}: non-finite {fname}[{bad - sum(sizes[:group])}] or its "
                               f"derivatives at x={x}, y={y}")
    a, b, c = sizes[0], sizes[0] + sizes[1], sizes[0] + sizes[1] + sizes[2]
    return EvalResult(vals[:a], vals[a:b], vals[b:c], vals[c:],
                      jx[:a], jy[:a], jx[a:b], jy[a:b], jx[b:c], jy[b:c], jx[c:], jy[c:],
                      ju[:a], ju[b:c])


FD_STEPS = (1e-3, 1e-5, 1e-7)


_GROUPS = (("fe", "dfe_dx", "dfe_dy"), ("qe", "dqe_dx", "dqe_dy"),
           ("fi", "dfi_dx", "dfi_dy"), ("qi", "dqi_dx", "dqi_dy"))


def _values(model, X, Y, u):
    """Plain values of all four groups at a batch of points, one per row of X, Y.

    Equations are written elementwise, so columns are passed as arrays in one
    call; a model that cannot take arrays is evaluated point by point.
    """
    P = X.shape[0]
    u = [float(v) for v in u]
    try:
        lim = [model.limited_expressions(X[k], Y[k]) for k in range(P)]
        lim = np.asarray(lim, dtype=float).reshape(P, -1)
        groups = model.equations(list(X.T), list(Y.T), u, list(lim.T))
        out = [np.broadcast_to(np.asarray(getattr(o, "val", o), dtype=float), (P,)) for g in groups for o in g]
        sizes = [len(g) for g in groups]
    except (TypeError, ValueError):
        rows = []
        for k in range(P):
            ev = evaluate(model, X[k], Y[k], u)
            rows.append(np.concatenate([ev.fe, ev.qe, ev.fi, ev.qi]))
        ev = evaluate(model, X[0], Y[0], u)
        sizes = [ev.fe.size, ev.qe.size, ev.fi.size, ev.qi.size]
        out = list(np.array(rows).T) if rows[0].size else []
    vals = np.array(out).reshape(-1, P).T
    edges = np.cumsum([0] + sizes)
    return {g[0]: vals[:, edges[i]:edges[i + 1]] for i, g in enumerate(_GROUPS)}


def _fd_jacobians(model, x, y, u, steps):
    """Fourth-order central-difference Jacobians of all four groups, per step."""
    nx, nv = x.size, x.size + y.size
    base = np.concatenate([x, y])
    pts = []
    for step in steps:
        for k in range(nv):
            h = step * max(1.0, abs(base[k]))
            for m in (-2, -1, 1, 2):
                v = base.copy()
                v[k] += m * h
                pts.append(v)
    pts = np.array(pts)
    vals = _values(model, pts[:, :nx], pts[:, nx:], u)
    out = []
    for si, step in enumerate(steps):
        fd = {}
        for name, v in vals.items():
            v = v[si * 4 * nv:(si + 1) * 4 * nv].reshape(nv, 4, -1)
            h = step * np.maximum(1.0, np.abs(base))[:, None]
            fd[name] = ((8 * (v[:, 2] - v[:, 1]) - (v[:, 3] - v[:, 0])) / (12 * h)).T
        out.append(fd)
    return out


def check_jacobians(model: ModelDescriptor, x, y, u=(), h=None) -> float:
    """Worst relative discrepancy between analytic and central-difference Jacobians.

    Each entry is compared as ``|a - d| / max(|a|, |d|, floor)`` where ``floor``
    is 1e-6 of the largest entry of its row: exactly-zero partials do not
    divide by zero, and entries far below their row sit under the rounding
    noise of any difference quotient.  Without ``h`` a five-point difference quotient is formed
    at the relative steps in ``FD_STEPS`` and each entry keeps its best match: small
    steps lose digits to rounding on weakly coupled entries, large steps to
    truncation on strongly curved ones, while a wrong derivative disagrees
    at every step.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    base = evaluate(model, x, y, u)
    fds = _fd_jacobians(model, x, y, u, FD_STEPS if h is None else (h,))
    worst = 0.0
    for out, jxn, jyn in _GROUPS:
        ana = np.hstack([getattr(base, jxn), getattr(base, jyn)])
        if ana.size == 0:
            continue
        best = None
        for fd_all in fds:
            fd = fd_all[out]
            row_scale = np.maximum(np.max(np.abs(ana), axis=1), np.max(np.abs(fd), axis=1))
            floor = np.maximum(1e-6 * row_scale, 1e-300)[:, None]
            err = np.abs(ana - fd) / np.maximum(np.maximum(np.abs(ana), np.abs(fd)), floor)
            best = err if best is None else np.minimum(best, err)
        worst = max(worst, float(np.max(best)))
    return worst


def limit_step(spec: LimitedVarSpec, xnew: float, xold: float) -> float:
    if spec.limiter == "sinhlim":
        return sinhlim(xnew, xold, spec.limiter_params[0])
    if spec.limiter == "pnjlim":
        vt, xcrit = spec.limiter_params
        return pnjlim(xnew, xold, vt, xcrit)
    return xnew
