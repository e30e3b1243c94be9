"""Exception types shared across the package."""

from __future__ import annotations


class HistciError(Exception):
    """Base class for all package errors.

    ``location`` optionally points at the offending input (a CSV row,
    a config key path, a bin index) for structured error reporting.
    """

    def __init__(self, message: str, *, location: str | None = None):
        super().__init__(message)
        self.location = location


class ValidationError(HistciError):
    """Malformed or inconsistent input data / configuration."""


class EstimationError(HistciError):
    """An estimator could not produce a valid result for valid input.

    ``report`` carries a partial result when one exists (e.g. the best
    fit found before a non-convergence error).
    """

    def __init__(self, message: str, *, location: str | None = None, report=None):
        super().__init__(message, location=location)
        self.report = report
