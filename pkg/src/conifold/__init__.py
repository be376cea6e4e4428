"""Exact computations for conifold transitions between Calabi-Yau threefolds."""

from .errors import (ConifoldError, DegeneratePairingError, DimensionMismatchError,
                     IsotropyError, MissingDataError, RankDeficiencyError)
from .linalg import IntMatrix, kernel_basis, smith_normal_form
from .series import TruncatedSeries
from .transition import (TransitionPresentation, complete_from_A, complete_from_B, euler_check,
                         presentation, validate)

__all__ = [
    "ConifoldError",
    "DegeneratePairingError",
    "DimensionMismatchError",
    "IsotropyError",
    "MissingDataError",
    "RankDeficiencyError",
    "IntMatrix",
    "kernel_basis",
    "smith_normal_form",
    "TruncatedSeries",
    "TransitionPresentation",
    "complete_from_A",
    "complete_from_B",
    "euler_check",
    "presentation",
    "validate",
]
