"""Well-posed memristive device models and a small nonlinear circuit simulator."""

from .analyses import (AcResult, CurveSet, Fold, HomotopyOptions, PeriodResult, Waveform, ac_sweep, dc_sweep,
                       detect_period, homotopy, small_signal_poles, transient)
from .circuit import GROUND, Ac, Circuit, DcSweep, Homotopy, Instance, Op, Print, SourceWaveform, Tran
from .devices import KINDS, build_device
from .engine import AssemblyError, DaeSystem, Tolerances, assemble, eval_residual
from .limiting import pnjlim, sinhlim
from .modspec import ContractError, LimitedVarSpec, ModelDefectError, ModelDescriptor, check_jacobians, evaluate
from .netlist import NetlistDocument, format_netlist, parse_netlist
from .newton import (NewtonOptions, SingularJacobianError, SolveReport, SolverError, dc_operating_point,
                     newton_solve)
from .smoothsafe import ParameterError

__version__ = "0.1.0"

__all__ = [
    "AcResult", "CurveSet", "Fold", "HomotopyOptions", "PeriodResult", "Waveform", "ac_sweep", "dc_sweep",
    "detect_period", "homotopy", "small_signal_poles", "transient",
    "GROUND", "Ac", "Circuit", "DcSweep", "Homotopy", "Instance", "Op", "Print", "SourceWaveform", "Tran",
    "KINDS", "build_device",
    "AssemblyError", "DaeSystem", "Tolerances", "assemble", "eval_residual",
    "pnjlim", "sinhlim",
    "ContractError", "LimitedVarSpec", "ModelDefectError", "ModelDescriptor", "check_jacobians", "evaluate",
    "NetlistDocument", "format_netlist", "parse_netlist",
    "NewtonOptions", "SingularJacobianError", "SolveReport", "SolverError", "dc_operating_point", "newton_solve",
    "ParameterError",
]
