"""hys_example: the two-terminal hysteresis template.

i = f1(v, s) and ds/dt = f2(v, s) with a cubic f2 whose zero set
v = s**3 - s folds back, giving three DC states near v = 0.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .. import ad
from ..modspec import ModelDescriptor
from ..smoothsafe import ParameterError
from .params import resolve


@dataclass(frozen=True)
class HysParams:
    R: float = 1.0
    tau: float = 1e-6

    def __post_init__(self):
        if not (self.R > 0 and self.tau > 0):
            raise ParameterError("hys: R and tau must be > 0")


def hys_f1(v, s, p: HysParams):
    return v / p.R * (ad.tanh(s) + 1.0)


def hys_f2(v, s, p: HysParams):
    return (v - s**3 + s) / p.tau


def hys(params=None) -> ModelDescriptor:
    p = HysParams(**resolve("hys", asdict(HysParams()), params))

    def eqs(x, y, u, lim):
        v, s = x[0], y[0]
        # tau is carried by qi, so the implicit row reads v - s^3 + s
        return [hys_f1(v, s, p)], [0.0], [v - s**3 + s], [s * -p.tau]

    return ModelDescriptor("hys", ("vpn",), ("ipn",), ("s",), (), asdict(p), eqs)
