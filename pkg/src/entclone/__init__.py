"""Optimal covariant copying of two-qubit states with fixed entanglement."""
from ._backend import USE_NUMBA, backend_name
from .cloner import (ClonerParams, EntanglementClass, OutputState, assemble_blocks,
                     assemble_tensor, f_max, optimal_params)

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA", "backend_name", "ClonerParams", "EntanglementClass", "OutputState",
    "assemble_blocks", "assemble_tensor", "f_max", "optimal_params",
]
