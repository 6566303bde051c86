"""Exceptions and the pass/fail verdict record shared by all checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class KPolyError(Exception):
    """Base class for library errors."""


class DimensionError(KPolyError, ValueError):
    """Shapes or ambient dimensions do not fit together."""


class NotSkewError(KPolyError, ValueError):
    """A matrix that must represent a 2-form is not skew-symmetric."""


class DegenerateError(KPolyError, ValueError):
    """A form required to be (poly)symplectic has a nontrivial kernel."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class RejectionError(KPolyError, ValueError):
    """A construction's admissibility condition fails; ``witness`` shows why."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class AxiomError(KPolyError):
    """Pointwise poly-Poisson axioms fail for a proposed (S, sharp)."""

    def __init__(self, message: str, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class HypothesisError(KPolyError):
    """The pointwise reduction hypotheses fail."""

    def __init__(self, message: str, verdict=None):
        super().__init__(message)
        self.verdict = verdict


@dataclass
class Verdict:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed
