from typing import Optional


class K3mlError(Exception):
    """Base class for every error raised by k3ml"""


class DomainError(K3mlError, ValueError):
    """Argument outside the domain of an operation"""


class FieldMismatchError(K3mlError, TypeError):
    """Operands live over different coefficient fields or variables"""


class ParseError(K3mlError, ValueError):
    """Malformed input text; keeps the offending position"""

    def __init__(self, message: str, position: int = -1, text: str = ""):
        self.position = position
        self.text = text
        if position >= 0:
            message = f"{message} at position {position}"
        super().__init__(message)


class ConvergenceError(K3mlError):
    """Numeric budget exhausted before the requested tolerance"""

    def __init__(self, message: str, best_value: Optional[float] = None, error_estimate: Optional[float] = None):
        self.best_value = best_value
        self.error_estimate = error_estimate
        super().__init__(message)


class InconsistencyError(K3mlError):
    """Two routes to the same quantity disagree, or a derived count is impossible"""


class ConfigError(K3mlError, ValueError):
    """Invalid run configuration value"""


class FixtureError(K3mlError):
    """A fixture file is missing or malformed"""
