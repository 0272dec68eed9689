"""Exact heat-kernel coefficients, Toda flows and Darboux-transformed Jacobi operators."""

from .algebra import LaurentPoly, PowerSeries, TruncatedLaurentSeries, formal_sqrt, residue_z
from .darboux import (
    BakerFunction,
    DarbouxSpec,
    alpha_contour,
    baker,
    commuting_pair,
    extract_L,
    orthogonality_check,
    ring_membership,
)
from .errors import (
    CapExceededError,
    DepthError,
    FitFailure,
    InconsistentSystemError,
    IntervalError,
    SingularParametersError,
    StructureError,
    TodaHeatError,
    WindowTooNarrowError,
)
from .heat import AlphaTable, alpha_constant_generating, alpha_recurrence, alpha_residue
from .lattice import BandedOperator, Seq, Window
from .toda import heat_field, stationarity_field, toda_field
from .wave import WaveTable, build_wave_table

__version__ = "0.1.0"

__all__ = [
    "AlphaTable",
    "BakerFunction",
    "BandedOperator",
    "CapExceededError",
    "DarbouxSpec",
    "DepthError",
    "FitFailure",
    "InconsistentSystemError",
    "IntervalError",
    "LaurentPoly",
    "PowerSeries",
    "Seq",
    "SingularParametersError",
    "StructureError",
    "TodaHeatError",
    "TruncatedLaurentSeries",
    "WaveTable",
    "Window",
    "WindowTooNarrowError",
    "alpha_constant_generating",
    "alpha_contour",
    "alpha_recurrence",
    "alpha_residue",
    "baker",
    "build_wave_table",
    "commuting_pair",
    "extract_L",
    "formal_sqrt",
    "heat_field",
    "orthogonality_check",
    "residue_z",
    "ring_membership",
    "stationarity_field",
    "toda_field",
]
