"""Sphere-averaged kernels and radial Riesz potentials.

For radial f, g the double integral of f(|x|) |x - y|^{-gamma} g(|y|) over
R^N x R^N equals |S^{N-1}| times a double radial integral against the
angular average

    avg(r, r2) = |S^{N-2}| int_0^pi (r^2 + r2^2 - 2 r r2 cos t)^{-gamma/2} sin^{N-2} t dt

(N >= 2), or |r - r2|^{-gamma} + (r + r2)^{-gamma} for N = 1. The average is
homogeneous of degree -gamma, so everything is evaluated at r = 1 against the
relative gap u = (r2 - r)/r.
"""
import logging
import math
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.special import roots_jacobi

from groundstate.core.config import settings
from groundstate.core.errors import DomainError
from groundstate.schemas.quadrature import DEFAULT_SPEC, Decay, QuadratureSpec
from groundstate.services.constants import riesz_normalization, sphere_area
from groundstate.services.quadrature import (
    Panel,
    _cap,
    integrate_1d,
    integrate_panels,
    panels_1d,
    panels_semi_infinite,
    shifted,
)
from groundstate.services.radial_functions import RadialFunction

logger = logging.getLogger(__name__)

# Radius ratio below which the fixed Gauss-Jacobi rule is exact to rounding.
_JACOBI_RATIO = 0.7
_JACOBI_POINTS = 48


class AngularKernel(BaseModel):
    """|x - y|^{-exponent} times ``normalization``, averaged over the sphere."""
    model_config = ConfigDict(frozen=True)

    N: int
    exponent: float
    normalization: float = 1.0

    @model_validator(mode='after')
    def validate_kernel(self):
        if self.N < 1:
            raise ValueError('N must be a positive integer')
        if not 0.0 < self.exponent < self.N + 2.0:
            raise ValueError(f'kernel exponent must lie in (0, N + 2), got {self.exponent}')
        if not self.normalization > 0.0:
            raise ValueError('normalization must be positive')
        return self

    @classmethod
    def riesz(cls, N: int, alpha: float) -> "AngularKernel":
        return cls(N=N, exponent=N - alpha, normalization=riesz_normalization(N, alpha))

    @classmethod
    def seminorm(cls, N: int, s: float) -> "AngularKernel":
        return cls(N=N, exponent=N + s)

    @property
    def diag_order(self) -> float:
        """Blow-up order of the average at r = r2: exponent - (N - 1)."""
        return self.exponent - (self.N - 1)


@lru_cache(maxsize=None)
def _jacobi_rule(N: int) -> Tuple[np.ndarray, np.ndarray]:
    a = 0.5 * (N - 3)
    nodes, weights = roots_jacobi(_JACOBI_POINTS, a, a)
    return nodes, weights


def _closed_form_3d(gamma: float, u: np.ndarray) -> np.ndarray:
    """2 pi [(2+u)^e - |u|^e] / ((1+u) e), e = 2 - gamma, at r = 1."""
    eps = 2.0 - gamma
    gap = np.abs(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        # log((2 + u) / |u|) without rounding the quotient first
        log_ratio = np.log1p(np.where(u > 0.0, 2.0, 2.0 * (1.0 + u)) / gap)
        if abs(eps) < 1e-12:
            bracket = log_ratio
        elif eps > 0.0:
            bracket = np.where(
                gap > 0.0,
                gap**eps * np.expm1(eps * log_ratio) / eps,
                (2.0 + u) ** eps / eps,
            )
        else:
            bracket = gap**eps * np.expm1(eps * log_ratio) / eps
    return 2.0 * math.pi * bracket / (1.0 + u)


def _closed_form_1d(gamma: float, u: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.abs(u) ** (-gamma) + (2.0 + u) ** (-gamma)


def _jacobi_average(N: int, gamma: float, u: np.ndarray) -> np.ndarray:
    nodes, weights = _jacobi_rule(N)
    r2 = 1.0 + u[:, None]
    base = 1.0 + r2**2 - 2.0 * r2 * nodes[None, :]
    return sphere_area(N - 1) * (base ** (-0.5 * gamma) @ weights)


def _adaptive_average(N: int, gamma: float, u: float, spec: QuadratureSpec) -> float:
    r2 = 1.0 + u
    gap = abs(u)
    product = 4.0 * r2

    def integrand(theta):
        base = gap**2 + product * np.sin(0.5 * theta) ** 2
        return base ** (-0.5 * gamma) * np.sin(theta) ** (N - 2)

    if gap == 0.0:
        value = integrate_1d(integrand, 0.0, math.pi, (gamma - (N - 2), None), spec).value
        return sphere_area(N - 1) * value

    edges = [0.0]
    theta = gap / math.sqrt(r2)
    while theta < math.pi:
        edges.append(theta)
        theta *= 4.0
    edges.append(math.pi)
    panels = panels_1d(integrand, edges[0], edges[1], (0.0, None))
    panels += [Panel(integrand, lo, hi) for lo, hi in zip(edges[1:-1], edges[2:])]
    return sphere_area(N - 1) * integrate_panels(panels, spec).value


@lru_cache(maxsize=settings.KERNEL_CACHE_SIZE)
def _cached_average(N: int, gamma: float, u: float, spec: QuadratureSpec) -> float:
    return _adaptive_average(N, gamma, u, spec)


def average_at_gap(kernel: AngularKernel, r: float, u, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """avg(r, r (1 + u)) for an array of relative gaps u > -1."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    N, gamma = kernel.N, kernel.exponent
    if np.any(u <= -1.0):
        raise DomainError("relative gap must exceed -1")
    if gamma >= N - 1 and np.any(u == 0.0):
        raise DomainError(f"angular average has a pole at r = r2 for exponent {gamma} in dimension {N}")

    if N == 1:
        h = _closed_form_1d(gamma, u)
    elif N == 3:
        h = _closed_form_3d(gamma, u)
    else:
        h = np.empty_like(u)
        ratio = np.minimum(1.0, 1.0 + u) / np.maximum(1.0, 1.0 + u)
        far = ratio <= _JACOBI_RATIO
        if np.any(far):
            h[far] = _jacobi_average(N, gamma, u[far])
        for i in np.flatnonzero(~far):
            h[i] = _cached_average(N, gamma, float(u[i]), spec)
    return kernel.normalization * r ** (-gamma) * h


def angular_average(kernel: AngularKernel, r: float, r2: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Sphere-averaged kernel between the shells |x| = r and |y| = r2."""
    if not (r > 0.0 and r2 > 0.0):
        raise DomainError(f"radii must be positive, got r={r}, r2={r2}")
    return float(average_at_gap(kernel, r, (r2 - r) / r, spec)[0])


def _check_potential(f: RadialFunction, N: int, alpha: float) -> None:
    if not N - f.origin_order > 0.0:
        raise DomainError(
            f"Riesz potential diverges at the origin (profile order {f.origin_order} >= N = {N})"
        )
    if not f.tail_order > alpha:
        raise DomainError(
            f"Riesz potential diverges at infinity (profile decay {f.tail_order} <= alpha = {alpha})"
        )


def riesz_radial_potential(
    f: RadialFunction,
    N: int,
    alpha: float,
    r: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """(I_alpha * f)(x) at |x| = r for a radial f."""
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    _check_potential(f, N, alpha)
    kernel = AngularKernel.riesz(N, alpha)
    beta = kernel.diag_order
    band = spec.diagonal_band_width

    def near(u):
        r2 = r * (1.0 + u)
        return average_at_gap(kernel, r, u, spec) * f.value(r2) * r2 ** (N - 1) * r

    def far(w):
        r2 = r * np.exp(w)
        return average_at_gap(kernel, r, np.expm1(w), spec) * f.value(r2) * r2**N

    panels = panels_1d(near, 0.0, band, (beta, None))
    panels += panels_1d(shifted(near, 0.0, -1.0), 0.0, band, (beta, None))

    w_lo, w_hi = math.log1p(-band), math.log1p(band)
    cuts = sorted(math.log(k / r) for k in f.breakpoints() if k > 0.0)
    right = [w_hi] + [c for c in cuts if c > w_hi]
    left = [w_lo] + [c for c in reversed(cuts) if c < w_lo]

    panels += [Panel(far, lo, hi) for lo, hi in zip(right[:-1], right[1:])]
    panels += [Panel(far, lo, hi) for hi, lo in zip(left[:-1], left[1:])]

    # r2^N f(r2) avg ~ r2^{N - origin} towards 0, r2^{alpha - tail} towards inf
    panels += panels_semi_infinite(shifted(far, right[-1]), 0.0, Decay.exponential(_cap(f.tail_order - alpha)))
    panels += panels_semi_infinite(shifted(far, left[-1], -1.0), 0.0, Decay.exponential(_cap(N - f.origin_order)))
    return integrate_panels(panels, spec).value


class RieszPotential:
    """The radial function r -> (I_beta * f)(r), evaluated on demand."""

    def __init__(self, base: RadialFunction, N: int, beta: float, spec: QuadratureSpec = DEFAULT_SPEC):
        _check_potential(base, N, beta)
        self.base = base
        self.N = N
        self.beta = beta
        self.spec = spec
        self._cache = {}

    def _at(self, r: float) -> float:
        cached: Optional[float] = self._cache.get(r)
        if cached is None:
            cached = riesz_radial_potential(self.base, self.N, self.beta, r, self.spec)
            self._cache[r] = cached
        return cached

    def value(self, r):
        r = np.asarray(r, dtype=float)
        flat = np.array([self._at(float(x)) for x in r.ravel()])
        return flat.reshape(r.shape)

    def breakpoints(self):
        return self.base.breakpoints()

    @property
    def origin_order(self) -> float:
        return max(0.0, self.base.origin_order - self.beta)

    @property
    def tail_order(self) -> float:
        return self.N - self.beta

    def describe(self) -> str:
        return f"I_{self.beta!r}*{self.base.describe()}"
