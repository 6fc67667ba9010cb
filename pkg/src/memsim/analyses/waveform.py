"""Tabular analysis results."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Waveform:
    """Samples of every unknown against one independent variable.

    ``variable`` names the first column (``t`` for transients, the source
    name for DC sweeps).  ``converged`` is filled by analyses that can fail
    per point; failed DC points hold NaN.
    """

    variable: str
    names: list[str]
    x: np.ndarray
    values: np.ndarray
    converged: np.ndarray | None = None
    ok: bool = True
    message: str = ""

    def column(self, name: str) -> np.ndarray:
        if name.lower() == self.variable.lower():
            return self.x
        low = [n.lower() for n in self.names]
        try:
            return self.values[:, low.index(name.lower())]
        except ValueError:
            raise KeyError(f"no column {name!r}; have {self.names}") from None

    @property
    def header(self) -> list[str]:
        return [self.variable] + list(self.names)

    def rows(self):
        for xv, row in zip(self.x, self.values):
            yield [xv, *row]
