import logging
from fractions import Fraction
from typing import Any

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class QBernoulliError(Exception):
    """Base exception for qbernoulli errors"""

    def __init__(self, message: str, exit_code: int = EXIT_USAGE, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}


class ParameterError(QBernoulliError):
    """Raised when an operation receives parameters outside its preconditions"""

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message, exit_code=EXIT_USAGE, details=details)


class ConfigurationError(QBernoulliError):
    """Raised when the settings file cannot be used"""

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message, exit_code=EXIT_USAGE, details=details)


class DomainError(QBernoulliError):
    """Raised when a p-adic operation leaves its domain of definition"""

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message, exit_code=EXIT_USAGE, details=details)


class SeriesError(QBernoulliError):
    """Raised for invalid formal series operations"""

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message, exit_code=EXIT_USAGE, details=details)


class BudgetExceededError(QBernoulliError):
    """Raised when a brute-force level sum would visit too many points"""

    def __init__(self, message: str, points: int, budget: int):
        super().__init__(
            message,
            exit_code=EXIT_BUDGET,
            details={"points": points, "budget": budget},
        )


class IdentityFailure(QBernoulliError):
    """Raised when a non-diagnostic identity check reports a nonzero residual"""

    def __init__(self, message: str, failures: int):
        super().__init__(message, exit_code=EXIT_IDENTITY_FAILURE, details={"failures": failures})


def _json_safe(value: Any) -> Any:
    if isinstance(value, bool | int | float | str) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_json_safe(v) for v in value]
    return str(value)


def _sanitize_error_details(details: dict[str, Any]) -> dict[str, Any]:
    return {key: _json_safe(value) for key, value in details.items()}


def handle_error(error: Exception) -> tuple[dict[str, Any], int]:
    """Translate an exception into a JSON error payload and a process exit code."""
    if isinstance(error, QBernoulliError):
        sanitized_details = _sanitize_error_details(error.details)
        logger.error("%s: %s", error.__class__.__name__, error.message)
        return {
            "error": {
                "type": error.__class__.__name__,
                "message": error.message,
                "details": sanitized_details,
            }
        }, error.exit_code
    # Handle unexpected errors
    logger.exception("Unexpected error occurred")
    return {
        "error": {
            "type": "UnexpectedError",
            "message": "An unexpected error occurred",
            "details": {"error": error.__class__.__name__},
        }
    }, EXIT_IDENTITY_FAILURE
