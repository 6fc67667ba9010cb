"""Linear elements, independent sources and the sinh benchmark device."""

from __future__ import annotations

from .. import ad
from ..modspec import LimitedVarSpec, ModelDescriptor
from .params import require_positive, resolve

RESISTOR_DEFAULTS = {"r": 1e3}
CAPACITOR_DEFAULTS = {"c": 1e-12}
INDUCTOR_DEFAULTS = {"l": 1e-9}
SINHDEV_DEFAULTS = {"k": 1.0}


def resistor(params=None) -> ModelDescriptor:
    p = resolve("resistor", RESISTOR_DEFAULTS, params)
    require_positive("resistor", p, "r")
    g = 1.0 / p["r"]

    def eqs(x, y, u, lim):
        return [x[0] * g], [0.0], [], []

    return ModelDescriptor("resistor", ("vpn",), ("ipn",), (), (), p, eqs)


def capacitor(params=None) -> ModelDescriptor:
    p = resolve("capacitor", CAPACITOR_DEFAULTS, params)
    require_positive("capacitor", p, "c")
    c = p["c"]

    def eqs(x, y, u, lim):
        return [0.0], [x[0] * c], [], []

    return ModelDescriptor("capacitor", ("vpn",), ("ipn",), (), (), p, eqs)


def inductor(params=None) -> ModelDescriptor:
    # the inductor current is an internal unknown: 0 = d/dt(-L*iL) + vpn
    p = resolve("inductor", INDUCTOR_DEFAULTS, params)
    require_positive("inductor", p, "l")
    ind = p["l"]

    def eqs(x, y, u, lim):
        return [y[0]], [0.0], [x[0]], [y[0] * -ind]

    return ModelDescriptor("inductor", ("vpn",), ("ipn",), ("iL",), (), p, eqs)


def vsource(params=None) -> ModelDescriptor:
    p = resolve("vsource", {}, params)

    def eqs(x, y, u, lim):
        return [u[0]], [0.0], [], []

    return ModelDescriptor("vsource", ("ipn",), ("vpn",), (), ("E",), p, eqs)


def isource(params=None) -> ModelDescriptor:
    p = resolve("isource", {}, params)

    def eqs(x, y, u, lim):
        return [u[0]], [0.0], [], []

    return ModelDescriptor("isource", ("vpn",), ("ipn",), (), ("I",), p, eqs)


def sinhdev(params=None) -> ModelDescriptor:
    """i = sinh(k*v), with v declared as a sinhlim-limited variable."""
    p = resolve("sinhdev", SINHDEV_DEFAULTS, params)
    require_positive("sinhdev", p, "k")
    k = p["k"]

    def eqs(x, y, u, lim):
        return [ad.sinh(lim[0] * k)], [0.0], [], []

    lv = LimitedVarSpec("vpn", (1.0,), (), "sinhlim", (k,))
    return ModelDescriptor("sinhdev", ("vpn",), ("ipn",), (), (), p, eqs, (lv,))
