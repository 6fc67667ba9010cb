"""Circuit description: instances, source waveforms and analysis directives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

GROUND = "0"


@dataclass(frozen=True)
class SourceWaveform:
    """dc + sin_amp*sin(2*pi*sin_freq*t + sin_phase deg) + pwl(t).

    ``pwl`` is a flat tuple t1, v1, t2, v2, ...; it holds its end values
    outside its time span and repeats with ``pwl_period`` when that is > 0.
    """

    dc: float = 0.0
    sin_amp: float = 0.0
    sin_freq: float = 0.0
    sin_phase: float = 0.0
    pwl: tuple[float, ...] = ()
    pwl_period: float = 0.0

    def __post_init__(self):
        if len(self.pwl) % 2:
            raise ValueError("pwl needs an even number of entries (t, v pairs)")
        ts = self.pwl[0::2]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("pwl times must be strictly increasing")
        if self.pwl_period < 0 or self.sin_freq < 0:
            raise ValueError("pwl_period and sin_freq must be >= 0")

    def _pwl(self, t: float) -> float:
        if not self.pwl:
            return 0.0
        if self.pwl_period > 0:
            t = math.fmod(t, self.pwl_period)
            if t < 0:
                t += self.pwl_period
        return float(np.interp(t, self.pwl[0::2], self.pwl[1::2]))

    def value(self, t: float) -> float:
        v = self.dc + self._pwl(t)
        if self.sin_amp:
            v += self.sin_amp * math.sin(2 * math.pi * self.sin_freq * t + math.radians(self.sin_phase))
        return v

    def dc_value(self, t: float = 0.0) -> float:
        """Value seen by DC analyses: the sine contributes nothing."""
        return self.dc + self._pwl(t)


@dataclass(frozen=True)
class Instance:
    name: str
    kind: str
    nodes: tuple[str, str]
    params: dict = field(default_factory=dict)
    waveform: SourceWaveform | None = None


@dataclass(frozen=True)
class Op:
    pass


@dataclass(frozen=True)
class DcSweep:
    source: str
    start: float
    stop: float
    step: float
    direction: str = "up"  # up | down | updown

    def values(self) -> np.ndarray:
        if self.step <= 0:
            raise ValueError(".dc step must be > 0")
        n = int(math.floor(abs(self.stop - self.start) / self.step + 1e-9))
        sign = 1.0 if self.stop >= self.start else -1.0
        up = self.start + sign * self.step * np.arange(n + 1)
        if self.direction == "down":
            return up[::-1].copy()
        if self.direction == "updown":
            return np.concatenate([up, up[-2::-1]])
        return up


@dataclass(frozen=True)
class Tran:
    dt: float
    tstop: float
    method: str = "trap"
    ic: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Ac:
    source: str
    fstart: float
    fstop: float
    points_per_decade: int

    def frequencies(self) -> np.ndarray:
        if not (0 < self.fstart <= self.fstop) or self.points_per_decade < 1:
            raise ValueError(".ac needs 0 < fstart <= fstop and pts_per_decade >= 1")
        decades = math.log10(self.fstop / self.fstart)
        n = int(round(decades * self.points_per_decade))
        return np.logspace(math.log10(self.fstart), math.log10(self.fstop), n + 1)


@dataclass(frozen=True)
class Homotopy:
    source: str
    lmin: float
    lmax: float
    options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Print:
    path: str


Directive = Op | DcSweep | Tran | Ac | Homotopy | Print


@dataclass
class Circuit:
    instances: list[Instance] = field(default_factory=list)
    analyses: list = field(default_factory=list)
    title: str = ""

    @property
    def nodes(self) -> list[str]:
        """Non-ground nodes in order of first appearance."""
        seen: dict[str, None] = {}
        for inst in self.instances:
            for n in inst.nodes:
                if n != GROUND:
                    seen.setdefault(n, None)
        return list(seen)

    def instance(self, name: str) -> Instance:
        for inst in self.instances:
            if inst.name.lower() == name.lower():
                return inst
        raise KeyError(name)
