"""Positivity and divisibility diagnostics for qubit dynamical maps.

The package realizes a family of random-unitary qubit channels in closed
form, propagates arbitrary time-local generators numerically, tests maps
and their tensor squares for (complete) positivity, constructs first-order
witnesses of tensor-square positivity violations, and scans trace-distance
information flow for back-flow.
"""
from . import divisibility, generator, infoflow, linalg, pauli_family, superop

__version__ = "0.1.0"

__all__ = [
    "divisibility",
    "generator",
    "infoflow",
    "linalg",
    "pauli_family",
    "superop",
    "__version__",
]
