"""DC sweep, transient, AC, homotopy continuation and period detection."""

from .ac import AcResult, ac_sweep, small_signal_poles
from .dcsweep import dc_sweep
from .homotopy import CurveSet, Fold, HomotopyOptions, homotopy
from .period import PeriodResult, detect_period
from .transient import transient
from .waveform import Waveform

__all__ = [
    "AcResult", "ac_sweep", "small_signal_poles", "dc_sweep", "CurveSet", "Fold", "HomotopyOptions",
    "homotopy", "PeriodResult", "detect_period", "transient", "Waveform",
]
