"""Adaptive excitation-ansatz VQE on a dense statevector simulator."""

__version__ = "0.1.0"

from .elements import ExcitationElement, canonical_double, canonical_single, double, single
from .paulis import PauliSum, PauliTerm, excitation_generator
from .state import StateVector, prepare_reference

__all__ = [
    "ExcitationElement",
    "PauliSum",
    "PauliTerm",
    "StateVector",
    "canonical_double",
    "canonical_single",
    "double",
    "excitation_generator",
    "prepare_reference",
    "single",
    "__version__",
]
