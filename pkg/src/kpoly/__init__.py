"""Polysymplectic forms and poly-Poisson structures at a point."""

from kpoly.errors import (
    AxiomError,
    DegenerateError,
    DimensionError,
    HypothesisError,
    KPolyError,
    NotSkewError,
    RejectionError,
    Verdict,
)
from kpoly.subspaces import EXACT, FLOAT, Scalar, Subspace

__version__ = "0.1.0"

__all__ = [
    "AxiomError",
    "DegenerateError",
    "DimensionError",
    "EXACT",
    "FLOAT",
    "HypothesisError",
    "KPolyError",
    "NotSkewError",
    "RejectionError",
    "Scalar",
    "Subspace",
    "Verdict",
]
