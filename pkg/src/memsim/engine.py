"""Modified nodal assembly of device models into ``d/dt q(X) + f(X, u) = 0``.

Unknown layout: node voltages by first appearance, then branch currents of
devices whose explicit output is a voltage (sources), then every internal
unknown in instance order.  Each two-terminal device sees ``vpn = e_p - e_n``
(or its branch current) as its I/O input; KCL rows sum currents leaving a node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .circuit import GROUND, Circuit, Instance
from .devices import KINDS, build_device
from .modspec import LimitedVarSpec, ModelDefectError, ModelDescriptor, evaluate

DENSE_LIMIT = 64


class AssemblyError(ValueError):
    def __init__(self, message: str, node: str | None = None):
        super().__init__(message)
        self.node = node


@dataclass(frozen=True)
class Tolerances:
    reltol: float = 1e-6
    abstol_v: float = 1e-6
    abstol_i: float = 1e-12
    residualtol: float = 1e-12
    gmin: float = 1e-12

    def __post_init__(self):
        for k in ("reltol", "abstol_v", "abstol_i", "residualtol"):
            if not getattr(self, k) > 0:
                raise ValueError(f"{k} must be > 0")
        if self.gmin < 0:
            raise ValueError("gmin must be >= 0")


@dataclass
class _Slot:
    inst: Instance
    model: ModelDescriptor
    p: int  # -1 for ground
    n: int
    branch: int  # branch-current index, or -1
    y: list[int]
    src: int  # index into the source vector, or -1
    lim: slice  # slice into the flat limited-variable list


@dataclass
class Evaluation:
    f: np.ndarray
    q: np.ndarray
    G: object
    C: object
    B: np.ndarray  # df/du, n x n_sources


@dataclass
class DaeSystem:
    circuit: Circuit
    tol: Tolerances
    names: list[str]
    kinds: list[str]  # "v", "i" or "y" per unknown
    slots: list[_Slot] = field(repr=False)
    sources: list[str] = field(default_factory=list)
    limited: list[LimitedVarSpec] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        low = [s.lower() for s in self.names]
        try:
            return low.index(name.lower())
        except ValueError:
            raise KeyError(f"no unknown named {name!r}") from None

    def source_index(self, name: str) -> int:
        low = [s.lower() for s in self.sources]
        try:
            return low.index(name.lower())
        except ValueError:
            raise KeyError(f"no source named {name!r}") from None

    def abstol(self) -> np.ndarray:
        t = self.tol
        return np.array([t.abstol_i if k == "i" else t.abstol_v for k in self.kinds])

    def source_values(self, t: float = 0.0, dc: bool = False, overrides: dict | None = None) -> np.ndarray:
        u = np.zeros(len(self.sources))
        for s in self.slots:
            if s.src < 0:
                continue
            wf = s.inst.waveform
            if wf is not None:
                u[s.src] = wf.dc_value(t) if dc else wf.value(t)
        for name, val in (overrides or {}).items():
            u[self.source_index(name)] = val
        return u

    def _io(self, s: _Slot, X):
        vpn = (X[s.p] if s.p >= 0 else 0.0) - (X[s.n] if s.n >= 0 else 0.0)
        xin = X[s.branch] if s.branch >= 0 else vpn
        return np.array([xin]), X[s.y]

    def limited_values(self, X) -> np.ndarray:
        out = []
        for s in self.slots:
            if s.model.limited_vars:
                x, y = self._io(s, X)
                out.extend(s.model.limited_expressions(x, y))
        return np.array(out)

    def evaluate(self, X, u, xlim=None) -> Evaluation:
        """Residual pieces f, q and their Jacobians G, C at ``X``."""
        X = np.asarray(X, dtype=float)
        n = self.n
        f = np.zeros(n)
        q = np.zeros(n)
        B = np.zeros((n, len(self.sources)))
        dense = n <= DENSE_LIMIT
        if dense:
            Gd = np.zeros((n, n))
            Cd = np.zeros((n, n))
        gr, gc, gv = [], [], []
        cr, cc, cv = [], [], []

        def g(r, c, v):
            if r >= 0 and c >= 0:
                if dense:
                    Gd[r, c] += v
                else:
                    gr.append(r); gc.append(c); gv.append(v)

        def cap(r, c, v):
            if r >= 0 and c >= 0:
                if dense:
                    Cd[r, c] += v
                else:
                    cr.append(r); cc.append(c); cv.append(v)

        gmin = self.tol.gmin
        for s in self.slots:
            x, y = self._io(s, X)
            u_dev = [u[s.src]] if s.src >= 0 else []
            lim = None if xlim is None or s.lim.start == s.lim.stop else xlim[s.lim]
            try:
                ev = evaluate(s.model, x, y, u_dev, lim)
            except ModelDefectError as exc:
                raise ModelDefectError(f"instance {s.inst.name}: {exc}") from None
            p, m = s.p, s.n
            if s.branch < 0:
                # current-output device: ipn leaves node p, enters node n
                cols_x = [(p, 1.0), (m, -1.0)]
                for row, sign in ((p, 1.0), (m, -1.0)):
                    if row < 0:
                        continue
                    f[row] += sign * ev.fe[0]
                    q[row] += sign * ev.qe[0]
                    for col, cs in cols_x:
                        g(row, col, sign * cs * ev.dfe_dx[0, 0])
                        cap(row, col, sign * cs * ev.dqe_dx[0, 0])
                    for k, col in enumerate(s.y):
                        g(row, col, sign * ev.dfe_dy[0, k])
                        cap(row, col, sign * ev.dqe_dy[0, k])
                    if s.src >= 0:
                        B[row, s.src] += sign * ev.dfe_du[0, 0]
                vpn = x[0]
                if gmin and s.src < 0:
                    for row, sign in ((p, 1.0), (m, -1.0)):
                        if row >= 0:
                            f[row] += sign * gmin * vpn
                            g(row, p, sign * gmin)
                            g(row, m, -sign * gmin)
                cols_io = cols_x
            else:
                # voltage-output device: branch current unknown b, row e_p - e_n - vpn(b) = 0
                b = s.branch
                for row, sign in ((p, 1.0), (m, -1.0)):
                    if row >= 0:
                        f[row] += sign * X[b]
                        g(row, b, sign)
                f[b] += (X[p] if p >= 0 else 0.0) - (X[m] if m >= 0 else 0.0) - ev.fe[0]
                q[b] -= ev.qe[0]
                g(b, p, 1.0)
                g(b, m, -1.0)
                g(b, b, -ev.dfe_dx[0, 0])
                cap(b, b, -ev.dqe_dx[0, 0])
                for k, col in enumerate(s.y):
                    g(b, col, -ev.dfe_dy[0, k])
                    cap(b, col, -ev.dqe_dy[0, k])
                if s.src >= 0:
                    B[b, s.src] -= ev.dfe_du[0, 0]
                cols_io = [(b, 1.0)]
            for k, row in enumerate(s.y):
                f[row] += ev.fi[k]
                q[row] += ev.qi[k]
                for col, cs in cols_io:
                    g(row, col, cs * ev.dfi_dx[k, 0])
                    cap(row, col, cs * ev.dqi_dx[k, 0])
                for j, col in enumerate(s.y):
                    g(row, col, ev.dfi_dy[k, j])
                    cap(row, col, ev.dqi_dy[k, j])
                if s.src >= 0 and ev.dfi_du.size:
                    B[row, s.src] += ev.dfi_du[k, 0]

        if dense:
            return Evaluation(f, q, Gd, Cd, B)
        G = sparse.csc_matrix((gv, (gr, gc)), shape=(n, n))
        C = sparse.csc_matrix((cv, (cr, cc)), shape=(n, n))
        return Evaluation(f, q, G, C, B)


def eval_residual(dae: DaeSystem, X, Xdot, t: float = 0.0):
    """r = C(X) Xdot + f(X, u(t)), with G = df/dX and C = dq/dX."""
    X = np.asarray(X, dtype=float)
    Xdot = np.asarray(Xdot, dtype=float)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Xdot))):
        raise ValueError("eval_residual needs finite X and Xdot")
    ev = dae.evaluate(X, dae.source_values(t))
    return ev.C @ Xdot + ev.f, ev.G, ev.C


def _check_floating(circuit: Circuit, tol: Tolerances) -> None:
    nodes = circuit.nodes
    parent = {n: n for n in nodes + [GROUND]}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for inst in circuit.instances:
        kind = inst.kind.lower()
        # without GMIN, capacitors and current sources give no DC path
        if tol.gmin == 0 and kind in ("capacitor", "isource"):
            continue
        a, b = inst.nodes
        parent[find(a)] = find(b)
    for node in nodes:
        if find(node) != find(GROUND):
            raise AssemblyError(f"floating node {node!r}: no DC path to ground", node=node)


def assemble(circuit: Circuit, tol: Tolerances | None = None) -> DaeSystem:
    tol = tol or Tolerances()
    if not circuit.instances:
        raise AssemblyError("circuit has no instances")
    seen = set()
    for inst in circuit.instances:
        if inst.name.lower() in seen:
            raise AssemblyError(f"duplicate instance name {inst.name!r}")
        seen.add(inst.name.lower())
        if inst.nodes[0] == inst.nodes[1]:
            raise AssemblyError(f"instance {inst.name}: both terminals on node {inst.nodes[0]!r}")
    _check_floating(circuit, tol)

    nodes = circuit.nodes
    node_idx = {n: k for k, n in enumerate(nodes)}
    names = [f"v({n})" for n in nodes]
    kinds = ["v"] * len(nodes)
    models = []
    for inst in circuit.instances:
        model = build_device(inst.kind, inst.params)
        if len(model.x_names) != 1 or len(model.z_names) != 1:
            raise AssemblyError(f"instance {inst.name}: only two-terminal models are supported")
        models.append(model)

    branch = {}
    for inst, model in zip(circuit.instances, models):
        if model.z_names[0].startswith("v"):
            branch[inst.name] = len(names)
            names.append(f"i({inst.name})")
            kinds.append("i")

    slots, sources, limited = [], [], []
    for inst, model in zip(circuit.instances, models):
        y = []
        for yn in model.y_names:
            y.append(len(names))
            names.append(f"{yn}({inst.name})")
            kinds.append("y")
        src = -1
        if KINDS[inst.kind.lower()].source:
            src = len(sources)
            sources.append(inst.name)
        lo = len(limited)
        limited.extend(model.limited_vars)
        slots.append(_Slot(inst, model, node_idx.get(inst.nodes[0], -1), node_idx.get(inst.nodes[1], -1),
                           branch.get(inst.name, -1), y, src, slice(lo, len(limited))))
    return DaeSystem(circuit, tol, names, kinds, slots, sources, limited)
