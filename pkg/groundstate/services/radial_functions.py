"""Closed-form radial test functions and the cutoff used to build u_lambda.

Every profile is an immutable pydantic model with vectorised ``value`` and
``derivative`` methods (numpy arrays in, numpy arrays out) together with the
analytic information the integrators need: breakpoints where the profile is
only C^1, the blow-up order at the origin and the algebraic decay order at
infinity.
"""
import logging
import math
from typing import Annotated, Literal, Protocol, Tuple, Union, runtime_checkable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from groundstate.core.errors import DomainError
from groundstate.schemas.params import InequalityParams

logger = logging.getLogger(__name__)


@runtime_checkable
class RadialFunction(Protocol):
    """Anything the forms and kernels can integrate against."""

    def value(self, r: np.ndarray) -> np.ndarray: ...

    def breakpoints(self) -> Tuple[float, ...]: ...

    @property
    def origin_order(self) -> float: ...

    @property
    def tail_order(self) -> float: ...


def cutoff(t):
    """Smoothstep cutoff: 1 on (0, 1], 0 on [2, inf), C^1 in between."""
    u = np.clip(np.asarray(t, dtype=float) - 1.0, 0.0, 1.0)
    return 1.0 - 3.0 * u**2 + 2.0 * u**3


def cutoff_derivative(t):
    t = np.asarray(t, dtype=float)
    u = np.clip(t - 1.0, 0.0, 1.0)
    return np.where((t > 1.0) & (t < 2.0), 6.0 * u * (u - 1.0), 0.0)


class _Profile(BaseModel):
    model_config = ConfigDict(frozen=True)

    amplitude: float = Field(default=1.0, ge=0)

    @property
    def is_localized(self) -> bool:
        """True when every quadratic form of the package is finite for it."""
        return True

    def scaled(self, c: float) -> "_Profile":
        """The profile multiplied by c >= 0."""
        return self.model_copy(update={"amplitude": self.amplitude * c})


class PurePower(_Profile):
    """r -> r^{-p}."""
    kind: Literal["power"] = "power"
    p: float

    @property
    def is_localized(self) -> bool:
        return False

    @property
    def origin_order(self) -> float:
        return self.p

    @property
    def tail_order(self) -> float:
        return self.p

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * r ** (-self.p)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return -self.p * self.amplitude * r ** (-self.p - 1.0)

    def breakpoints(self) -> Tuple[float, ...]:
        return (1.0,)

    def describe(self) -> str:
        return _describe("power", [self.p], self.amplitude)


class TruncatedPower(_Profile):
    """r -> eta(r/lam) eta(1/(lam r)) r^{-p}, supported on [1/(2 lam), 2 lam]."""
    kind: Literal["truncated"] = "truncated"
    p: float
    lam: float = Field(ge=1.0, alias="lambda")

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @property
    def origin_order(self) -> float:
        return -math.inf

    @property
    def tail_order(self) -> float:
        return math.inf

    @property
    def support(self) -> Tuple[float, float]:
        return 0.5 / self.lam, 2.0 * self.lam

    def value(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.support
        inside = (r > lo) & (r < hi)
        rr = np.where(inside, r, 1.0)
        out = cutoff(rr / self.lam) * cutoff(1.0 / (self.lam * rr)) * rr ** (-self.p)
        return self.amplitude * np.where(inside, out, 0.0)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.support
        inside = (r > lo) & (r < hi)
        rr = np.where(inside, r, 1.0)
        outer = cutoff(rr / self.lam)
        inner = cutoff(1.0 / (self.lam * rr))
        power = rr ** (-self.p)
        d = (
            cutoff_derivative(rr / self.lam) / self.lam * inner * power
            - outer * cutoff_derivative(1.0 / (self.lam * rr)) / (self.lam * rr**2) * power
            - self.p * outer * inner * power / rr
        )
        return self.amplitude * np.where(inside, d, 0.0)

    def breakpoints(self) -> Tuple[float, ...]:
        lam = self.lam
        return tuple(sorted({0.5 / lam, 1.0 / lam, lam, 2.0 * lam}))

    def describe(self) -> str:
        return _describe("truncated", [self.p, self.lam], self.amplitude)


class Gaussian(_Profile):
    """r -> exp(-r^2 / (2 sigma^2))."""
    kind: Literal["gaussian"] = "gaussian"
    sigma: float = Field(gt=0)

    @property
    def origin_order(self) -> float:
        return 0.0

    @property
    def tail_order(self) -> float:
        return math.inf

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * np.exp(-0.5 * (r / self.sigma) ** 2)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return -self.amplitude * r / self.sigma**2 * np.exp(-0.5 * (r / self.sigma) ** 2)

    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(self.sigma * k for k in (0.25, 1.0, 2.0, 4.0, 8.0))

    def describe(self) -> str:
        return _describe("gaussian", [self.sigma], self.amplitude)


class Bump(_Profile):
    """C^1 hump (1 - (r/2a)^2)^2 on [0, 2a], a = scale."""
    kind: Literal["bump"] = "bump"
    scale: float = Field(default=1.0, gt=0)

    @property
    def origin_order(self) -> float:
        return 0.0

    @property
    def tail_order(self) -> float:
        return math.inf

    @property
    def support(self) -> Tuple[float, float]:
        return 0.0, 2.0 * self.scale

    def value(self, r):
        x = np.asarray(r, dtype=float) / (2.0 * self.scale)
        return self.amplitude * np.where(x < 1.0, (1.0 - x**2) ** 2, 0.0)

    def derivative(self, r):
        x = np.asarray(r, dtype=float) / (2.0 * self.scale)
        d = -4.0 * x * (1.0 - x**2) / (2.0 * self.scale)
        return self.amplitude * np.where(x < 1.0, d, 0.0)

    def breakpoints(self) -> Tuple[float, ...]:
        a = self.scale
        return (0.5 * a, a, 2.0 * a)

    def describe(self) -> str:
        return _describe("bump", [] if self.scale == 1.0 else [self.scale], self.amplitude)


RadialProfile = Annotated[
    Union[PurePower, TruncatedPower, Gaussian, Bump],
    Field(discriminator="kind"),
]
_profile_adapter = TypeAdapter(RadialProfile)

_POSITIONAL = {
    "power": ("p",),
    "truncated": ("p", "lambda"),
    "gaussian": ("sigma",),
    "bump": ("scale",),
}


def _describe(kind: str, args, amplitude: float) -> str:
    text = kind
    if args:
        text += ":" + ",".join(repr(float(a)) for a in args)
    if amplitude != 1.0:
        text += ("," if args else ":") + f"amplitude={float(amplitude)!r}"
    return text


def parse_profile(descriptor: str):
    """Parse a CLI descriptor such as ``gaussian:1`` or ``truncated:1.5,10``."""
    kind, _, rest = descriptor.strip().partition(":")
    kind = kind.strip().lower()
    if kind not in _POSITIONAL:
        raise DomainError(f"unknown profile kind '{kind}' (expected one of {', '.join(_POSITIONAL)})")

    data = {"kind": kind}
    positional = list(_POSITIONAL[kind])
    for item in filter(None, (x.strip() for x in rest.split(","))):
        key, eq, raw = item.partition("=")
        if not eq:
            if not positional:
                raise DomainError(f"too many arguments in profile descriptor '{descriptor}'")
            key, raw = positional.pop(0), item
        try:
            data[key.strip()] = float(raw)
        except ValueError:
            raise DomainError(f"non-numeric value '{raw}' in profile descriptor '{descriptor}'")

    try:
        return _profile_adapter.validate_python(data)
    except ValidationError as e:
        raise DomainError(f"invalid profile '{descriptor}': {e.errors()[0]['msg']}")


def _check_radius(r) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0.0)):
        raise DomainError(f"radius must be positive, got {r}")
    return arr


def evaluate(profile: RadialFunction, r):
    """Pointwise value of the profile at r > 0."""
    arr = _check_radius(r)
    out = profile.value(arr)
    return float(out) if np.ndim(out) == 0 else out


def evaluate_derivative(profile, r):
    """d/dr of the profile at r > 0."""
    arr = _check_radius(r)
    out = profile.derivative(arr)
    return float(out) if np.ndim(out) == 0 else out


def u_lambda(params: InequalityParams, lam: float) -> TruncatedPower:
    """Extremizing family member with groundstate exponent (N - s)/2."""
    if not lam >= 1.0:
        raise DomainError(f"lambda must be >= 1, got {lam}")
    return TruncatedPower(p=params.ground_exponent, lam=lam)


class PowerWeighted:
    """r -> f(r) r^{-w}; the weighted density entering the Stein-Weiss form."""

    def __init__(self, base: RadialFunction, weight: float):
        self.base = base
        self.weight = weight

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return self.base.value(r) * r ** (-self.weight)

    def breakpoints(self) -> Tuple[float, ...]:
        return self.base.breakpoints()

    @property
    def origin_order(self) -> float:
        return self.base.origin_order + self.weight

    @property
    def tail_order(self) -> float:
        return self.base.tail_order + self.weight

    @property
    def is_localized(self) -> bool:
        return getattr(self.base, "is_localized", False)

    def describe(self) -> str:
        return f"{self.base.describe()}*r^{-self.weight!r}"
