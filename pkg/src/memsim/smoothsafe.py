"""Smooth and safe scalar primitives with analytic first derivatives.

Every function accepts Python floats or numpy arrays (evaluated elementwise)
and returns a ``ValDer`` pair, or a named tuple extending it when the
function has more than one input.  The branch-free numpy formulations keep
the far tails free of cancellation and overflow, so that value and
derivative stay finite for any finite input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_SMOOTHING = 1e-8
DEFAULT_MAXSLOPE = 1e15


class ParameterError(ValueError):
    """Invalid model or primitive parameter."""


class ValDer(NamedTuple):
    value: float | np.ndarray
    derivative: float | np.ndarray


class SwitchValDer(NamedTuple):
    """Result of :func:`smoothswitch`; ``derivative`` is d/dx."""

    value: float | np.ndarray
    derivative: float | np.ndarray
    d_fn: float | np.ndarray
    d_fp: float | np.ndarray


class PowValDer(NamedTuple):
    """Result of :func:`safepow`; ``derivative`` is d/da."""

    value: float | np.ndarray
    derivative: float | np.ndarray
    d_b: float | np.ndarray


@dataclass(frozen=True)
class SmoothParams:
    smoothing: float = DEFAULT_SMOOTHING
    maxslope: float = DEFAULT_MAXSLOPE

    def __post_init__(self):
        _check_smoothing(self.smoothing)
        _check_maxslope(self.maxslope)


def _check_smoothing(smoothing):
    if not (np.isfinite(smoothing) and smoothing > 0):
        raise ParameterError(f"smoothing must be a finite positive number, got {smoothing!r}")


def _check_maxslope(maxslope):
    if not (np.isfinite(maxslope) and maxslope > 1):
        raise ParameterError(f"maxslope must be finite and > 1, got {maxslope!r}")


def _out(a):
    # 0-d arrays back to Python floats so scalar callers stay scalar.
    if isinstance(a, np.ndarray) and a.ndim == 0:
        return float(a)
    return a


def smoothstep(x, smoothing=DEFAULT_SMOOTHING) -> ValDer:
    """0.5 * (x / sqrt(x**2 + smoothing) + 1)."""
    _check_smoothing(smoothing)
    if isinstance(x, float) and abs(x) < 1e150:
        r = math.sqrt(x * x + smoothing)
        if x >= 0:
            return ValDer(0.5 * (x / r + 1.0), 0.5 * smoothing / r**3)
        return ValDer(0.5 * smoothing / (r * (r - x)), 0.5 * smoothing / r**3)
    x = np.asarray(x, dtype=float)
    r = np.hypot(x, np.sqrt(smoothing))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        # lower tail written as 0.5*smoothing/(r*(r - x)) to avoid 1 - 1
        lower = 0.5 * smoothing / (r * (r - x))
        value = np.where(x >= 0, 0.5 * (x / r + 1.0), lower)
        der = 0.5 * smoothing / r**3
    der = np.where(np.isfinite(der), der, 0.0)
    return ValDer(_out(value), _out(der))


def smoothclip(x, smoothing=DEFAULT_SMOOTHING) -> ValDer:
    """Smooth positive-part: 0.5 * (x + sqrt(x**2 + smoothing))."""
    _check_smoothing(smoothing)
    x = np.asarray(x, dtype=float)
    r = np.hypot(x, np.sqrt(smoothing))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        neg = 0.5 * smoothing / (r - x)
        value = np.where(x >= 0, 0.5 * (x + r), neg)
        der = np.where(x >= 0, 0.5 * (1.0 + x / r), 0.5 * smoothing / (r * (r - x)))
    return ValDer(_out(value), _out(der))


def smoothswitch(fn, fp, x, smoothing=DEFAULT_SMOOTHING) -> SwitchValDer:
    """Blend from ``fn`` (x << 0) to ``fp`` (x >> 0) through a smoothstep."""
    w, dw = smoothstep(x, smoothing)
    value = fn + (fp - fn) * w
    return SwitchValDer(value, (fp - fn) * dw, 1.0 - w, w)


def safeexp(x, maxslope=DEFAULT_MAXSLOPE) -> ValDer:
    """exp(x), continued linearly once its slope reaches ``maxslope``."""
    _check_maxslope(maxslope)
    if isinstance(x, float):
        lnm = math.log(maxslope)
        if x <= lnm:
            e = math.exp(x)
            return ValDer(e, e)
        return ValDer(maxslope * (1.0 + x - lnm), float(maxslope))
    x = np.asarray(x, dtype=float)
    lnm = np.log(maxslope)
    e = np.exp(np.minimum(x, lnm))
    value = np.where(x <= lnm, e, maxslope * (1.0 + x - lnm))
    der = np.where(x <= lnm, e, maxslope)
    return ValDer(_out(value), _out(der))


def safesinh(x, maxslope=DEFAULT_MAXSLOPE) -> ValDer:
    """(safeexp(x) - safeexp(-x)) / 2."""
    _check_maxslope(maxslope)
    if isinstance(x, float):
        lnm = math.log(maxslope)
        if abs(x) <= lnm:
            return ValDer(math.sinh(x), math.cosh(x))
        ax = abs(x)
        tail = math.exp(-ax)
        return ValDer(math.copysign(0.5 * (maxslope * (1.0 + ax - lnm) - tail), x), 0.5 * (maxslope + tail))
    x = np.asarray(x, dtype=float)
    lnm = np.log(maxslope)
    ax = np.abs(x)
    inner = ax <= lnm
    xc = np.clip(x, -lnm, lnm)
    tail = np.exp(-np.maximum(ax, lnm))
    value = np.where(inner, np.sinh(xc), np.sign(x) * 0.5 * (maxslope * (1.0 + ax - lnm) - tail))
    der = np.where(inner, np.cosh(xc), 0.5 * (maxslope + tail))
    return ValDer(_out(value), _out(der))


def safelog(x, smoothing=DEFAULT_SMOOTHING) -> ValDer:
    """ln(smoothclip(x)); finite for every finite x."""
    c, _ = smoothclip(x, smoothing)
    x = np.asarray(x, dtype=float)
    # d/dx ln(smoothclip(x)) simplifies to 1/sqrt(x**2 + smoothing)
    der = 1.0 / np.hypot(x, np.sqrt(smoothing))
    return ValDer(_out(np.log(c)), _out(der))


def safepow(a, b, params: SmoothParams = SmoothParams()) -> PowValDer:
    """a**b computed as safeexp(b * safelog(a))."""
    la, dla = safelog(a, params.smoothing)
    e, de = safeexp(b * la, params.maxslope)
    return PowValDer(e, de * b * dla, de * la)
