"""Shipped device library and the kind registry used by the netlist layer."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

from ..modspec import ModelDescriptor
from ..smoothsafe import ParameterError
from . import basic
from .hys import HysParams, hys, hys_f1, hys_f2
from .memristor import MemristorParams, memristor, memristor_f1, memristor_f2, memristor_f2_star, netlist_defaults
from .rram import RramParams, rram, rram_f1, rram_f2, rram_f2_star


@dataclass(frozen=True)
class DeviceKind:
    name: str
    build: Callable[..., ModelDescriptor]
    defaults: dict
    summary: str
    source: bool = False


KINDS: dict[str, DeviceKind] = {
    k.name: k
    for k in (
        DeviceKind("resistor", basic.resistor, basic.RESISTOR_DEFAULTS, "linear resistor, i = v/r"),
        DeviceKind("capacitor", basic.capacitor, basic.CAPACITOR_DEFAULTS, "linear capacitor, q = c*v"),
        DeviceKind("inductor", basic.inductor, basic.INDUCTOR_DEFAULTS, "linear inductor, current as internal unknown"),
        DeviceKind("vsource", basic.vsource, {}, "independent voltage source", source=True),
        DeviceKind("isource", basic.isource, {}, "independent current source", source=True),
        DeviceKind("hys", hys, asdict(HysParams()), "hysteresis template, folded cubic state equation"),
        DeviceKind("rram", rram, asdict(RramParams()), "bipolar RRAM, filament gap in nm"),
        DeviceKind("memristor", memristor, netlist_defaults(), "30 memristor models via f1_switch (1..5) x f2_switch (1..6)"),
        DeviceKind("sinhdev", basic.sinhdev, basic.SINHDEV_DEFAULTS, "i = sinh(k*v) with sinhlim limiting"),
    )
}


def build_device(kind: str, params=None) -> ModelDescriptor:
    try:
        entry = KINDS[kind.lower()]
    except KeyError:
        raise ParameterError(f"unknown device kind {kind!r}") from None
    return entry.build(params)


__all__ = [
    "KINDS", "DeviceKind", "build_device",
    "HysParams", "RramParams", "MemristorParams",
    "hys_f1", "hys_f2", "rram_f1", "rram_f2", "rram_f2_star",
    "memristor_f1", "memristor_f2", "memristor_f2_star",
]
