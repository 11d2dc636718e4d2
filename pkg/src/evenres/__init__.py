"""Scattering resonances of radial step potentials in even dimensions.

Resonances of ``-Delta + V`` live on the logarithmic cover of the punctured
plane; points are stored as ``z = log lambda = x + i y``. The package evaluates
``det S`` on any sheet, finds resonances mode by mode, and checks the
asymptotic and structural identities that tie them together.
"""
__version__ = "0.1.0"

from .cover import CoverPoint
from .errors import (BoxError, ConfigError, ContourError, ConvergenceError, DomainError,
                     EvenresError, InputError, NumericError, PoleError, QuadratureError,
                     RangeError, TruncationError)
from .finder import (Resonance, SearchWindow, counting_function, find_eigenvalues,
                     find_resonances, resolvent_multiplicity)
from .heat import HeatSample, heat_trace, heat_trace_many
from .radial import ModeIndex, ModeScattering, StepPotential, mode_coefficients, multiplicity
from .scattering import DetSValue, c_d, det_s, log_det_s_many, msc, sheet_shift_mobius

__all__ = [
    "__version__", "CoverPoint", "StepPotential", "ModeIndex", "ModeScattering",
    "mode_coefficients", "multiplicity", "DetSValue", "det_s", "log_det_s_many", "c_d",
    "sheet_shift_mobius", "msc", "Resonance", "SearchWindow", "find_resonances",
    "find_eigenvalues", "resolvent_multiplicity", "counting_function", "HeatSample",
    "heat_trace", "heat_trace_many", "EvenresError", "InputError", "DomainError",
    "ConfigError", "NumericError", "RangeError", "TruncationError", "ContourError",
    "BoxError", "QuadratureError", "ConvergenceError", "PoleError",
]
