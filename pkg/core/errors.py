"""
Error hierarchy for the minima lab.
Input errors map to CLI exit code 2, every other lab error to exit code 1.
"""
from typing import Any, Dict, Optional


class LabError(Exception):
    """Base class for all lab errors."""

    exit_code = 1

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.context = context or {}


class InputError(LabError, ValueError):
    """Malformed input: spec strings, configuration, flags, parameters."""

    exit_code = 2


class ConvergentIndexError(InputError, IndexError):
    """Convergent index beyond the end of a finite continued fraction."""


class ZeroPointError(InputError):
    """The zero vector has no box norm."""


class IndependenceError(InputError):
    """An exactly represented Θ fails the linear-independence hypothesis."""

    def __init__(self, message: str, failing_p: Optional[list] = None):
        super().__init__(message, {"failing_p": failing_p or []})
        self.failing_p = failing_p or []


class EnumerationBudgetExceeded(LabError):
    """The enumeration engine visited more nodes than its budget allows."""


class NoFrontFacetReachable(LabError):
    """Every lattice point of the shrinking strip has zero first coordinate."""


class NotAnEvent(LabError):
    """The supplied event does not touch the front facet."""


class HypothesisViolation(LabError):
    """A lemma instance violates the lemma's hypotheses; the instance is rejected."""


class LemmaViolation(LabError):
    """A lemma instance satisfying the hypotheses fails a conclusion."""

    def __init__(self, message: str, replay_path: Optional[str] = None):
        super().__init__(message, {"replay_path": replay_path})
        self.replay_path = replay_path


class EmptyWindowError(LabError):
    """The tail window of a trace holds no samples."""
