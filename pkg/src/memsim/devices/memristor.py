"""General memristor family: 5 I-V laws x 6 state dynamics = 30 models.

The state ``s`` is dimensionless and bounded to [0, 1] by the same clipping
construction used for the RRAM gap.  ``f1_switch`` picks the I-V law and
``f2_switch`` the dynamics:

f1: 1 linear ion drift resistance, 2 exponential conductance,
    3 sinh + diode-like (nonlinear drift), 4 asymmetric sinh,
    5 tunnelling-gap (RRAM) law.
f2: 1 linear ion drift, 2 nonlinear ion drift, 3 Simmons tunnelling
    barrier, 4 VTEAM with a folded threshold, 5 Yakopcic with a folded
    threshold, 6 RRAM gap growth rewritten for s.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

from .. import ad
from ..modspec import ModelDescriptor
from ..smoothsafe import DEFAULT_MAXSLOPE, DEFAULT_SMOOTHING, ParameterError
from .clipping import clip_rate
from .params import resolve
from .rram import EQN_SCALE, thermal_voltage

F1_RANGE = range(1, 6)
F2_RANGE = range(1, 7)


@dataclass(frozen=True)
class MemristorParams:
    f1_switch: int = 1
    f2_switch: int = 1
    # f1 laws
    Ron: float = 100.0
    Roff: float = 16e3
    lambda_: float = 5.0
    n: float = 4.0
    beta: float = 1e-4
    alpha: float = 2.0
    chi: float = 1e-6
    gammaI: float = 4.0
    A1: float = 1e-3
    A2: float = 5e-4
    B: float = 3.0
    I0: float = 1e-4
    g0: float = 0.25
    V0: float = 0.25
    minGap: float = 0.0
    maxGap: float = 1.7
    # f2 laws
    mu_v: float = 1e4
    a: float = 1e4
    m: float = 3.0
    c_off: float = 1e3
    c_on: float = 1e3
    i_off: float = 1e-2
    i_on: float = 1e-2
    a_off: float = 0.6
    a_on: float = 0.4
    w_c: float = 0.1
    b: float = 1e-3
    k_off: float = 1e4
    k_on: float = -1e4
    v_off: float = 0.5
    v_on: float = -0.5
    alpha_off: float = 3.0
    alpha_on: float = 3.0
    Ap: float = 1e4
    An: float = 1e4
    Vp: float = 0.5
    Vn: float = 0.5
    v0: float = 1e6
    Ea: float = 0.6
    a0: float = 0.25
    tox: float = 12.0
    gamma0: float = 16.0
    beta0: float = 1.25
    T: float = 300.0
    # bounds enforcement
    Kclip: float = 1e5
    smoothing: float = DEFAULT_SMOOTHING
    maxslope: float = DEFAULT_MAXSLOPE

    def __post_init__(self):
        if self.f1_switch not in F1_RANGE:
            raise ParameterError(f"f1_switch out of range 1..5 (got {self.f1_switch})")
        if self.f2_switch not in F2_RANGE:
            raise ParameterError(f"f2_switch out of range 1..6 (got {self.f2_switch})")
        if not (self.Kclip > 0 and self.smoothing > 0 and self.maxslope > 1):
            raise ParameterError("memristor: need Kclip > 0, smoothing > 0, maxslope > 1")
        positive = {
            1: ("Ron", "Roff"), 2: ("Ron",), 3: ("n",), 4: (), 5: ("I0", "g0", "V0"),
        }[self.f1_switch] + {
            1: ("Ron",), 2: (), 3: ("i_off", "i_on", "w_c", "b"),
            4: ("alpha_off", "alpha_on"), 5: (), 6: ("v0", "Ea", "a0", "tox", "gamma0", "T"),
        }[self.f2_switch]
        for name in positive:
            if not getattr(self, name) > 0:
                raise ParameterError(f"memristor: {name} must be > 0")
        if self.f1_switch == 1 and self.Ron == self.Roff:
            raise ParameterError("memristor: Ron and Roff must differ")
        if self.f2_switch == 2 and not (self.m == int(self.m) and int(self.m) % 2 == 1 and self.m > 0):
            raise ParameterError("memristor: m must be a positive odd integer")
        if self.f2_switch == 4 and (self.v_off == 0 or self.v_on == 0):
            raise ParameterError("memristor: v_off and v_on must be nonzero")
        if (self.f1_switch == 5 or self.f2_switch == 6) and not self.maxGap > self.minGap:
            raise ParameterError("memristor: need maxGap > minGap")

    @classmethod
    def from_netlist(cls, params=None) -> "MemristorParams":
        p = resolve("memristor", netlist_defaults(), params)
        p["lambda_"] = p.pop("lambda")
        for key in ("f1_switch", "f2_switch"):
            if p[key] != int(p[key]):
                raise ParameterError(f"{key} must be an integer")
            p[key] = int(p[key])
        return cls(**p)


def netlist_defaults() -> dict[str, float]:
    d = asdict(MemristorParams())
    d["lambda"] = d.pop("lambda_")
    return d


def _gap(s, p):
    return s * p.minGap + (1.0 - s) * p.maxGap


def memristor_f1(vpn, s, p: MemristorParams):
    sw, sm, ms = p.f1_switch, p.smoothing, p.maxslope
    if sw == 1:
        # Ron*s + Roff*(1-s) = (Roff-Ron)*(pole-s) vanishes at the pole
        # s = Roff/(Roff-Ron); smoothclip keeps s on the side of the pole that
        # contains [0, 1], in product form to avoid cancellation near it
        pole = p.Roff / (p.Roff - p.Ron)
        if pole > 0:
            return vpn / (ad.smoothclip(pole - s, sm) * (p.Roff - p.Ron))
        return vpn / (ad.smoothclip(s - pole, sm) * (p.Ron - p.Roff))
    if sw == 2:
        return ad.safeexp((1.0 - s) * -p.lambda_, ms) * vpn * (1.0 / p.Ron)
    if sw == 3:
        sn = ad.safepow(s, p.n, sm, ms)
        return (sn * p.beta * ad.safesinh(vpn * p.alpha, ms)
                + (ad.safeexp(vpn * p.gammaI, ms) - 1.0) * p.chi)
    if sw == 4:
        sh = ad.safesinh(vpn * p.B, ms)
        f1p = s * sh * p.A1
        f1n = s * sh * p.A2
        return ad.smoothswitch(f1n, f1p, vpn, sm)
    if sw == 5:
        return p.I0 * ad.safeexp(_gap(s, p) * (-1.0 / p.g0), ms) * ad.safesinh(vpn / p.V0, ms)
    raise ParameterError(f"f1_switch out of range 1..5 (got {sw})")


def memristor_f2(vpn, s, p: MemristorParams):
    """Unclipped ds/dt."""
    sw, sm, ms = p.f2_switch, p.smoothing, p.maxslope
    if sw == 1:
        return memristor_f1(vpn, s, p) * (p.mu_v * p.Ron)
    if sw == 2:
        return vpn ** int(p.m) * p.a
    if sw == 3:
        i = memristor_f1(vpn, s, p)
        f2p = (p.c_off * ad.safesinh(i / p.i_off, ms)
               * ad.safeexp(-ad.safeexp((s - p.a_off) / p.w_c - i / p.b, ms) - s / p.w_c, ms))
        f2n = (p.c_on * ad.safesinh(i / p.i_on, ms)
               * ad.safeexp(-ad.safeexp((p.a_on - s) / p.w_c + i / p.b, ms) - s / p.w_c, ms))
        return ad.smoothswitch(f2n, f2p, i, sm)
    if sw == 4:
        vstar = (1.0 - s) * p.v_off + s * p.v_on
        dv = vpn - vstar
        f2p = p.k_off * ad.safepow(dv / p.v_off, p.alpha_off, sm, ms)
        f2n = p.k_on * ad.safepow(dv / p.v_on, p.alpha_on, sm, ms)
        return ad.smoothswitch(f2n, f2p, dv, sm)
    if sw == 5:
        vstar = s * -p.Vn + (1.0 - s) * p.Vp
        gp = (ad.safeexp(vpn, ms) - ad.safeexp(vstar, ms)) * p.Ap
        gn = (ad.safeexp(-vpn, ms) - ad.safeexp(-vstar, ms)) * -p.An
        return ad.smoothswitch(gn, gp, vpn - vstar, sm)
    if sw == 6:
        vt = thermal_voltage(p.T)
        gamma = p.gamma0 - p.beta0 * _gap(s, p) ** 3
        rate = p.v0 * math.exp(-p.Ea / vt) / (p.maxGap - p.minGap)
        return rate * ad.safesinh(vpn * gamma * (p.a0 / (p.tox * vt)), ms)
    raise ParameterError(f"f2_switch out of range 1..6 (got {sw})")


def memristor_f2_star(vpn, s, p: MemristorParams):
    return clip_rate(memristor_f2(vpn, s, p), s, 0.0, 1.0, p.Kclip, p.smoothing, p.maxslope)


def memristor(params=None) -> ModelDescriptor:
    p = MemristorParams.from_netlist(params)

    def eqs(x, y, u, lim):
        vpn, s = x[0], y[0]
        return ([memristor_f1(vpn, s, p)], [0.0],
                [memristor_f2_star(vpn, s, p) * EQN_SCALE], [s * -EQN_SCALE])

    shown = {("lambda" if f.name == "lambda_" else f.name): float(getattr(p, f.name)) for f in fields(p)}
    return ModelDescriptor("memristor", ("vpn",), ("ipn",), ("s",), (), shown, eqs)
