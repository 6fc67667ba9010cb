"""Oscillation detection from a transient waveform."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waveform import Waveform

MIN_CORRELATION = 0.99


@dataclass(frozen=True)
class PeriodResult:
    periodic: bool
    period: float
    amplitude: float
    correlation: float


def _overlap_correlation(y: np.ndarray) -> np.ndarray:
    """Correlation coefficient between y[:-k] and y[k:] for every lag k."""
    n = y.size
    m = 1 << (2 * n - 1).bit_length()
    spec = np.fft.rfft(y, m)
    cross = np.fft.irfft(spec * np.conj(spec), m)[:n]
    e = np.concatenate([[0.0], np.cumsum(y * y)])
    head = e[n - np.arange(n)]  # energy of y[:n-k]
    tail = e[n] - e[np.arange(n)]  # energy of y[k:]
    with np.errstate(invalid="ignore", divide="ignore"):
        r = cross / np.sqrt(head * tail)
    return np.nan_to_num(r)


def detect_period(w: Waveform, column: str, abstol: float = 1e-6) -> PeriodResult:
    """Autocorrelation period estimate over the trailing half of ``w``.

    The trailing half is resampled to a uniform grid at the median step.  The
    period is the first correlation peak after the first zero crossing,
    refined by a parabola through its neighbours.
    """
    t = np.asarray(w.x, dtype=float)
    y = np.asarray(w.column(column), dtype=float)
    keep = t >= t[0] + 0.5 * (t[-1] - t[0])
    t, y = t[keep], y[keep]
    if t.size < 8 or not np.all(np.isfinite(y)):
        return PeriodResult(False, float("nan"), 0.0, 0.0)
    amplitude = 0.5 * float(np.max(y) - np.min(y))
    step = float(np.median(np.diff(t)))
    grid = np.arange(t[0], t[-1] + 0.5 * step, step)
    yu = np.interp(grid, t, y)
    yu = yu - yu.mean()
    if amplitude < 100 * abstol:
        return PeriodResult(False, float("nan"), amplitude, 0.0)
    r = _overlap_correlation(yu)
    half = yu.size // 2
    neg = np.nonzero(r[:half] < 0)[0]
    if neg.size == 0:
        return PeriodResult(False, float("nan"), amplitude, 0.0)
    start = neg[0]
    seg = r[start:half]
    if seg.size < 3:
        return PeriodResult(False, float("nan"), amplitude, 0.0)
    best = float(seg.max())
    k = None
    for i in range(1, seg.size - 1):
        if seg[i] >= seg[i - 1] and seg[i] >= seg[i + 1] and seg[i] >= 0.9 * best:
            k = start + i
            break
    if k is None:
        return PeriodResult(False, float("nan"), amplitude, best)
    a, b, c = r[k - 1], r[k], r[k + 1]
    den = a - 2 * b + c
    shift = 0.5 * (a - c) / den if den < 0 else 0.0
    corr = float(b)
    return PeriodResult(corr >= MIN_CORRELATION, (k + shift) * step, amplitude, corr)
