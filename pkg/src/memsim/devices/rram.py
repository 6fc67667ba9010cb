"""Bipolar RRAM with the filament gap (nm) as internal unknown."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from scipy import constants

from .. import ad
from ..modspec import LimitedVarSpec, ModelDescriptor
from ..smoothsafe import DEFAULT_MAXSLOPE, DEFAULT_SMOOTHING, ParameterError
from .clipping import clip_rate
from .params import resolve

# the implicit row carries d/dt(-1e-9*gap) + 1e-9*f2*, bringing nm/s rates
# down to the size of ordinary branch currents
EQN_SCALE = 1e-9


def thermal_voltage(T: float) -> float:
    return constants.k * T / constants.e


@dataclass(frozen=True)
class RramParams:
    I0: float = 1e-3
    g0: float = 0.25
    V0: float = 0.25
    v0: float = 1e6
    Ea: float = 0.6
    a0: float = 0.25
    tox: float = 12.0
    gamma0: float = 16.0
    beta: float = 1.25
    T: float = 300.0
    minGap: float = 0.0
    maxGap: float = 1.7
    Kclip: float = 1e5
    smoothing: float = DEFAULT_SMOOTHING
    maxslope: float = DEFAULT_MAXSLOPE

    def __post_init__(self):
        for name in ("I0", "g0", "V0", "v0", "Ea", "a0", "tox", "gamma0", "beta", "T", "Kclip", "smoothing"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"rram: {name} must be > 0")
        if self.maxslope <= 1:
            raise ParameterError("rram: maxslope must be > 1")
        if not self.maxGap > self.minGap >= 0:
            raise ParameterError("rram: need maxGap > minGap >= 0")
        if self.gamma0 - self.beta * self.maxGap**3 <= 0:
            raise ParameterError("rram: gamma0 - beta*gap^3 must stay positive on [minGap, maxGap]")

    @property
    def VT(self) -> float:
        return thermal_voltage(self.T)

    @property
    def growth_k(self) -> float:
        """Largest coefficient of vtb inside the growth-rate sinh."""
        return self.gamma0 * self.a0 / (self.tox * self.VT)


def rram_f1(vtb, gap, p: RramParams):
    return p.I0 * ad.safeexp(gap * (-1.0 / p.g0), p.maxslope) * ad.safesinh(vtb / p.V0, p.maxslope)


def rram_f2(vtb, gap, p: RramParams):
    """Unclipped gap growth rate in nm/s."""
    vt = p.VT
    gamma = p.gamma0 - p.beta * gap**3
    rate = p.v0 * float(ad.safeexp(-p.Ea / vt, p.maxslope))
    return -rate * ad.safesinh(vtb * gamma * (p.a0 / (p.tox * vt)), p.maxslope)


def rram_f2_star(vtb, gap, p: RramParams):
    return clip_rate(rram_f2(vtb, gap, p), gap, p.minGap, p.maxGap, p.Kclip, p.smoothing, p.maxslope)


def rram(params=None) -> ModelDescriptor:
    p = RramParams(**resolve("rram", asdict(RramParams()), params))

    def eqs(x, y, u, lim):
        gap = y[0]
        itb = rram_f1(lim[0], gap, p)
        f2s = rram_f2_star(lim[1], gap, p)
        return [itb], [0.0], [f2s * EQN_SCALE], [gap * -EQN_SCALE]

    limited = (
        LimitedVarSpec("vtb_iv", (1.0,), (0.0,), "sinhlim", (1.0 / p.V0,)),
        LimitedVarSpec("vtb_growth", (1.0,), (0.0,), "sinhlim", (p.growth_k,)),
    )
    return ModelDescriptor("rram", ("vtb",), ("itb",), ("gap",), (), asdict(p), eqs, limited)
