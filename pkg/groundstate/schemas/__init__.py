from .params import InequalityParams, ParamsRecord
from .quadrature import Decay, QuadratureResult, QuadratureSpec, DEFAULT_SPEC
from .report import (
    FormRoute,
    FormValue,
    PointSample,
    PropertyCheck,
    SweepResult,
    SweepRow,
    VerificationReport,
)

__all__ = [
    "InequalityParams",
    "ParamsRecord",
    "Decay",
    "QuadratureResult",
    "QuadratureSpec",
    "DEFAULT_SPEC",
    "FormRoute",
    "FormValue",
    "PointSample",
    "PropertyCheck",
    "SweepResult",
    "SweepRow",
    "VerificationReport",
]
