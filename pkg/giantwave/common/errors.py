"""
GIANTWAVE Error Classes
=======================
Standardized error handling for the library and the experiment runner.

- Every error carries the module ("handler") and function it came from
- `status` doubles as the CLI exit code (2 config, 3 numeric, 4 I/O)
- Serializable so failed runs can record the error in their manifest
"""

import json
import traceback
from typing import Optional
from giantwave.common.constants import EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO
from giantwave.common.logger import get_logger

log = get_logger(__file__)


class GiantWaveError(Exception):
    """
    Base exception class for all giantwave errors.

    Usage:
        raise GiantWaveError("Something went wrong", status=3)

    Or catch and convert to an exit status:
        except GiantWaveError as e:
            e.log_error()
            return e.status
    """

    def __init__(
        self,
        message: str,
        handler: str = "unknown",
        function: str = "unknown",
        status: int = EXIT_NUMERIC,
        details: Optional[dict] = None
    ):
        self.message = message
        self.handler = handler
        self.function = function
        self.status = status
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> dict:
        """Convert error to dictionary for manifests and JSON output."""
        return {
            "error": {
                "type": self.__class__.__name__,
                "message": self.message,
                "handler": self.handler,
                "function": self.function,
                "status": self.status,
                **self.details
            }
        }

    def log_error(self):
        """Log the error with full context."""
        log.error(f"💥 {self.__class__.__name__} in {self.handler}.{self.function}: {self.message}")
        if self.details:
            log.error(f"   Details: {self.details}")

    def __str__(self) -> str:
        return json.dumps(self.to_dict(), default=str)


# ============================================
# Configuration / Argument Errors (exit 2)
# ============================================

class ValidationError(GiantWaveError):
    """Raised when a config, spec or argument is invalid."""

    def __init__(self, message: str, handler: str = "unknown", function: str = "unknown", field: str = None):
        details = {"field": field} if field else {}
        super().__init__(
            message=message,
            handler=handler,
            function=function,
            status=EXIT_CONFIG,
            details=details
        )


class StepTooCoarse(ValidationError):
    """Raised when steps_per_tau0 is below the supported minimum."""

    def __init__(self, steps_per_tau0: int, minimum: int, function: str = "integrate"):
        super().__init__(
            message=f"steps_per_tau0={steps_per_tau0} is below the minimum of {minimum}",
            handler="dde",
            function=function,
            field="steps_per_tau0"
        )


class HorizonNegative(ValidationError):
    """Raised when an integration horizon is negative."""

    def __init__(self, horizon: float, function: str = "integrate"):
        super().__init__(
            message=f"horizon={horizon} must be >= 0",
            handler="dde",
            function=function,
            field="horizon"
        )


class HistoryTooShort(ValidationError):
    """Raised when a field lookup needs trajectory samples past the stored horizon."""

    def __init__(self, t: float, horizon: float, function: str = "field_amplitude"):
        super().__init__(
            message=f"requested t={t} exceeds trajectory horizon {horizon}",
            handler="field",
            function=function,
            field="t"
        )


# ============================================
# Numeric Errors (exit 3)
# ============================================

class NumericError(GiantWaveError):
    """Raised when a numerical procedure cannot produce a result."""

    def __init__(self, message: str, handler: str = "unknown", function: str = "unknown", details: dict = None):
        super().__init__(
            message=message,
            handler=handler,
            function=function,
            status=EXIT_NUMERIC,
            details=details
        )


class CotangentPole(NumericError):
    """Raised when a bound-state index sits on a cotangent pole."""

    def __init__(self, k: int, period: int, function: str = "bound_state_frequency"):
        super().__init__(
            message=f"k={k} is a multiple of {period}; cot(k*pi/{period}) diverges",
            handler="spectral",
            function=function,
            details={"k": k, "period": period}
        )


class Infeasible(NumericError):
    """Raised when a requested mode coexistence has no physical parameter set."""

    def __init__(self, message: str, function: str = "unknown", details: dict = None):
        super().__init__(message=message, handler="spectral", function=function, details=details)


class ConditionNotMet(NumericError):
    """Raised when a config does not satisfy the bound-state condition asked for."""

    def __init__(self, message: str, function: str = "static_amplitude", details: dict = None):
        super().__init__(message=message, handler="analytic", function=function, details=details)


class WrongCase(NumericError):
    """Raised when a ModeSet has the wrong case label for an operation."""

    def __init__(self, expected: str, actual: str, function: str = "envelope_metrics"):
        super().__init__(
            message=f"expected a {expected} mode set, got {actual}",
            handler="analytic",
            function=function,
            details={"expected": expected, "actual": actual}
        )


class NoConvergence(NumericError):
    """Raised when a root search fails to converge."""

    def __init__(self, message: str, function: str = "find_poles", details: dict = None):
        super().__init__(message=message, handler="spectral", function=function, details=details)


# ============================================
# Output Errors (exit 4)
# ============================================

class OutputError(GiantWaveError):
    """Raised when artifacts cannot be written."""

    def __init__(self, message: str, handler: str = "cli", function: str = "unknown", path: str = None):
        details = {"path": path} if path else {}
        super().__init__(
            message=message,
            handler=handler,
            function=function,
            status=EXIT_IO,
            details=details
        )


# ============================================
# Error Handler Decorator
# ============================================

def handle_errors(handler_name: str):
    """
    Decorator that turns errors into CLI exit statuses.

    Usage:
        @handle_errors("cli")
        def main(argv=None) -> int:
            ...
    """
    def decorator(func):
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except GiantWaveError as e:
                e.log_error()
                return e.status
            except OSError as e:
                error = OutputError(message=str(e), handler=handler_name, function=func.__name__)
                error.log_error()
                return error.status
            except Exception as e:
                log.error(f"💥 Unexpected error in {handler_name}: {str(e)}")
                log.error(traceback.format_exc())
                return EXIT_NUMERIC
        wrapper.__name__ = func.__name__
        wrapper.__doc__ = func.__doc__
        return wrapper
    return decorator
