"""Exact models of the superalgebras E(3,6), E(3,8), E(5,10) and their
degree-truncated generalized Verma complexes."""

from .algebra import (
    AlgebraModel,
    SuperElement,
    WindowError,
    bracket,
    build_algebra,
    convert,
    embed_e36_in_e510,
    jacobi_check,
    sharp_to_flat,
    twisted_action,
)

__all__ = [
    "AlgebraModel",
    "SuperElement",
    "WindowError",
    "bracket",
    "build_algebra",
    "convert",
    "embed_e36_in_e510",
    "jacobi_check",
    "sharp_to_flat",
    "twisted_action",
]

__version__ = "0.1.0"
