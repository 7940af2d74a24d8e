import enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from groundstate.schemas.params import ParamsRecord


class FormRoute(str, enum.Enum):
    DOUBLE_INTEGRAL = "double_integral"
    FOURIER = "fourier"
    RADIAL_1D = "radial_1d"


class FormValue(BaseModel):
    """A functional value with its quadrature error estimate."""
    model_config = ConfigDict(frozen=True)

    value: float
    err_estimate: float = Field(ge=0)
    route: FormRoute


class PointSample(BaseModel):
    """Pointwise comparison used by the convolution checks."""
    radius: float
    lhs: float
    rhs: float
    deviation: float


class VerificationReport(BaseModel):
    """LHS / RHS decomposition of one identity."""
    model_config = ConfigDict(populate_by_name=True)

    identity_name: str
    params: Optional[ParamsRecord] = None
    profile: str
    lhs: float
    rhs_main: float
    rhs_remainder: float
    residual_rel: float = Field(ge=0)
    tolerance: float = Field(ge=0)
    passed: bool = Field(alias="pass")
    err_budget: float = Field(ge=0)
    samples: List[PointSample] = []
    notes: List[str] = []
    runtime_seconds: Optional[float] = None
    artifact_version: Optional[str] = None

    @field_validator('passed')
    @classmethod
    def verdict_matches_residual(cls, v, info):
        residual = info.data.get('residual_rel')
        tolerance = info.data.get('tolerance')
        if residual is not None and tolerance is not None and v != (residual <= tolerance):
            raise ValueError('pass must equal residual_rel <= tolerance')
        return v


class SweepRow(BaseModel):
    """One lambda of a sharpness sweep."""
    model_config = ConfigDict(populate_by_name=True)

    lam: float = Field(alias="lambda")
    quotient: float
    deficit: float
    remainder_J: float
    remainder_R: Optional[float] = None
    denominator: float
    err_budget: float = 0.0
    identity_residual: Optional[float] = None


class PropertyCheck(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class SweepResult(BaseModel):
    params: Optional[ParamsRecord] = None
    sharp_constant: float
    rows: List[SweepRow]
    checks: List[PropertyCheck]
    notes: List[str] = []

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)
