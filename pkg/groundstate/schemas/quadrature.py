import math
from typing import Literal, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class QuadratureSpec(BaseModel):
    """Tolerances and subdivision limits for the adaptive integrator."""
    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=1e-10, gt=0)
    abs_tol: float = Field(default=1e-14, gt=0)
    max_subdivisions: int = Field(default=2000, ge=1)
    diagonal_band_width: float = Field(default=0.1, gt=0, lt=1)

    @field_validator('rel_tol', 'abs_tol', 'diagonal_band_width')
    @classmethod
    def finite(cls, v):
        if not math.isfinite(v):
            raise ValueError('must be finite')
        return v


class Decay(BaseModel):
    """Tail behaviour of an integrand on (a, inf).

    ``algebraic``: f = O(x^-rate), rate > 1.  ``exponential``: f = O(e^{-rate x}).
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["algebraic", "exponential"]
    rate: float = Field(default=1.0, gt=0)

    @classmethod
    def algebraic(cls, rate: float) -> "Decay":
        return cls(kind="algebraic", rate=rate)

    @classmethod
    def exponential(cls, rate: float = 1.0) -> "Decay":
        return cls(kind="exponential", rate=rate)


class QuadratureResult(NamedTuple):
    value: float
    error: float
    subdivisions: int = 0


DEFAULT_SPEC = QuadratureSpec()
