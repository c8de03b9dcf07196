"""Bundled backend implementations."""
from .matrix import Mat, MatrixBackend
from .finfun import FinMap, FinFunBackend, functions_as_boolean_matrices
from .free import StrandMor, IdempotentFreeBackend, WiringMor, PointedFreeBackend
from .unitary import UnitaryBackend, tensor_separate

__all__ = [
    "Mat",
    "MatrixBackend",
    "FinMap",
    "FinFunBackend",
    "functions_as_boolean_matrices",
    "StrandMor",
    "IdempotentFreeBackend",
    "WiringMor",
    "PointedFreeBackend",
    "UnitaryBackend",
    "tensor_separate",
]
