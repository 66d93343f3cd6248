"""Exception types shared across the package."""


class CycleAuthError(Exception):
    """Base class for all package errors."""


class DataError(CycleAuthError, ValueError):
    """Input data violates a contract (non-finite values, bad shapes, ...)."""


class ParseError(CycleAuthError, ValueError):
    """A CSV or JSON input could not be parsed. Carries a line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnderdeterminedFitError(CycleAuthError, ValueError):
    """Too few samples for the requested model complexity."""


class DegenerateRateError(CycleAuthError, ValueError):
    """A logistic segment rate is exactly zero; the continuity correction is undefined."""


class InsufficientSimulationsError(CycleAuthError, ValueError):
    """Fewer Monte Carlo paths requested than the minimum needed for quantiles."""


class InsufficientDataError(CycleAuthError, ValueError):
    """A recording is too short for the requested split or window."""


class TooShortWindowError(CycleAuthError, ValueError):
    """An activity window is too short for feature extraction."""


class TrainingContractError(CycleAuthError, ValueError):
    """Novelty training input violates the one-class contract."""


class ColdStartError(CycleAuthError, LookupError):
    """No profile entry exists for the requested activity; collect more cycles."""


class InsufficientCyclesError(CycleAuthError, ValueError):
    """Enrollment data does not contain the minimum number of activity cycles."""


class ContractViolationError(CycleAuthError, RuntimeError):
    """An operation was called outside its allowed state (e.g. update after reject)."""


class ProfileMismatchError(CycleAuthError, KeyError):
    """A duty-cycle schedule references a mode absent from the sensor power profile."""
