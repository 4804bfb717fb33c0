"""Exception and warning types shared across the package."""
from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class NonConvergenceError(RuntimeError):
    """A numerical procedure could not meet its stopping rule."""


class ConvergenceWarning(RuntimeWarning):
    """A result is returned but its error estimate is only heuristic."""
