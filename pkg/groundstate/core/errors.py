"""Exception hierarchy shared by every service module.

Each error carries a human readable ``detail`` like an HTTP error payload, so
the CLI can print it without knowing the concrete class.
"""
from typing import Optional


class GroundstateError(Exception):
    """Base class for all library errors."""

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DomainError(GroundstateError, ValueError):
    """Inadmissible input: bad parameters, divergent forms, r <= 0, ..."""


class QuadratureError(GroundstateError):
    """Adaptive integration did not reach the requested tolerance."""

    def __init__(self, detail: str, value: float, error: float, subdivisions: int = 0):
        super().__init__(f"{detail} (best estimate {value!r}, error {error!r}, {subdivisions} subdivisions)")
        self.value = value
        self.error = error
        self.subdivisions = subdivisions


class AsymmetricIntegrandError(QuadratureError):
    """Spot sampling found F(r, r') != F(r', r)."""


class UnsupportedRouteError(GroundstateError):
    """The requested evaluation route does not exist for this input."""


class FormEvaluationError(GroundstateError):
    """A component form failed inside a verifier or a sweep."""

    def __init__(self, operation: str, cause: Exception):
        detail = getattr(cause, "detail", str(cause))
        super().__init__(f"{operation}: {detail}")
        self.operation = operation


class ConfigError(GroundstateError):
    """Invalid run configuration."""

    def __init__(self, detail: str, field: Optional[str] = None):
        super().__init__(detail if field is None else f"{field}: {detail}")
        self.field = field
