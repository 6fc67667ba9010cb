"""PNG previews of analysis results (matplotlib, headless Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

MAX_PANELS = 12
_RC = {"figure.dpi": 100, "font.size": 9, "axes.grid": True, "grid.alpha": 0.3, "lines.linewidth": 1.2}


def _panels(n):
    n = min(n, MAX_PANELS)
    return plt.subplots(n, 1, figsize=(6.4, 1.6 * n + 0.8), sharex=True, squeeze=False)


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    # no timestamp or version metadata, so reruns give identical files
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_columns(path, xlabel: str, x, names, values, title: str = "", marks=None) -> Path:
    """One stacked panel per column of ``values`` against ``x``.

    ``marks`` is an optional list of (x, row) points drawn as red circles,
    used for homotopy folds.
    """
    values = np.atleast_2d(np.asarray(values, dtype=float))
    with plt.rc_context(_RC):
        fig, axes = _panels(len(names))
        for k, ax in enumerate(axes[:, 0]):
            ax.plot(x, values[:, k], color="C0")
            for xm, row in marks or ():
                ax.plot(xm, row[k], "o", color="C3", ms=4)
            ax.set_ylabel(names[k])
        axes[-1, 0].set_xlabel(xlabel)
        if title:
            axes[0, 0].set_title(title)
        return _save(fig, Path(path))


def plot_bode(path, freqs, names, response, title: str = "") -> Path:
    """Magnitude in dB of each unknown's response on a log frequency axis."""
    response = np.asarray(response)
    with plt.rc_context(_RC):
        fig, axes = _panels(len(names))
        for k, ax in enumerate(axes[:, 0]):
            with np.errstate(divide="ignore"):
                ax.semilogx(freqs, 20 * np.log10(np.abs(response[:, k])), color="C0")
            ax.set_ylabel(f"|{names[k]}| dB")
        axes[-1, 0].set_xlabel("f (Hz)")
        if title:
            axes[0, 0].set_title(title)
        return _save(fig, Path(path))
