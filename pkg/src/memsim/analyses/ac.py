"""Small-signal analysis about an operating point."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import sparse

from ..engine import DaeSystem
from ..newton import SingularJacobianError, linear_solve


@dataclass
class AcResult:
    source: str
    names: list[str]
    frequencies: np.ndarray
    response: np.ndarray  # complex, frequencies x unknowns; NaN where singular
    errors: dict  # frequency index -> message

    def column(self, name: str) -> np.ndarray:
        return self.response[:, [n.lower() for n in self.names].index(name.lower())]

    @property
    def header(self) -> list[str]:
        cols = ["f"]
        for n in self.names:
            cols += [f"mag({n})", f"phase({n})"]
        return cols

    def rows(self):
        for f, row in zip(self.frequencies, self.response):
            out = [f]
            for z in row:
                out += [abs(z), float(np.degrees(np.angle(z)))]
            yield out


def _dense(a):
    return a.toarray() if sparse.issparse(a) else np.asarray(a)


def ac_sweep(dae: DaeSystem, operating_point, source: str, frequencies, u=None) -> AcResult:
    """Solve (G + j*w*C) dX = -df/du for a unit phasor on ``source``."""
    k = dae.source_index(source)
    u = dae.source_values(0.0, dc=True) if u is None else u
    ev = dae.evaluate(np.asarray(operating_point, dtype=float), u)
    b = -ev.B[:, k].astype(complex)
    freqs = np.asarray(frequencies, dtype=float)
    resp = np.full((freqs.size, dae.n), np.nan + 0j)
    errors = {}
    for i, f in enumerate(freqs):
        A = ev.G + 2j * np.pi * f * ev.C
        try:
            resp[i] = linear_solve(sparse.csc_matrix(A) if sparse.issparse(A) else A, b)
        except SingularJacobianError as exc:
            errors[i] = str(exc)
    return AcResult(dae.sources[k], list(dae.names), freqs, resp, errors)


def small_signal_poles(dae: DaeSystem, X, u=None) -> np.ndarray:
    """Finite eigenvalues mu of C dx/dt = -G dx (positive real part: unstable)."""
    u = dae.source_values(0.0, dc=True) if u is None else u
    ev = dae.evaluate(np.asarray(X, dtype=float), u)
    mu = scipy.linalg.eigvals(-_dense(ev.G), _dense(ev.C))
    return mu[np.isfinite(mu)]
