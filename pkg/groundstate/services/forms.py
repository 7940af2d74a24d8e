"""Quadratic and bilinear functionals of radial profiles.

Every form is reduced by angular averaging to a one- or two-dimensional
radial integral. Remainder terms are integrated directly from the squared
difference of the groundstate-transformed profile, never by expanding the
square.
"""
import logging
import math

import numpy as np

from groundstate.core.errors import DomainError, UnsupportedRouteError
from groundstate.schemas.params import InequalityParams
from groundstate.schemas.quadrature import DEFAULT_SPEC, QuadratureSpec
from groundstate.schemas.report import FormRoute, FormValue
from groundstate.services.constants import (
    radial_gaussian_moment,
    seminorm_normalization,
    sphere_area,
)
from groundstate.services.kernels import AngularKernel, average_at_gap, riesz_radial_potential
from groundstate.services.quadrature import integrate_diagonal_singular_2d, integrate_radial
from groundstate.services.radial_functions import Gaussian, PowerWeighted, PurePower

logger = logging.getLogger(__name__)


def _require_localized(phi, form: str) -> None:
    if isinstance(phi, PurePower):
        raise DomainError(f"{form} diverges for the pure power r^-{phi.p}")


def _require_rate(rate: float, form: str, where: str = "the origin") -> float:
    if not rate > 0.0:
        raise DomainError(f"{form} diverges at {where}")
    return rate


def _is_exact_groundstate(phi, p: float) -> bool:
    return isinstance(phi, PurePower) and phi.p == p


def _result(res, route: FormRoute, factor: float = 1.0) -> FormValue:
    return FormValue(value=factor * res.value, err_estimate=abs(factor) * res.error, route=route)


def _zero(route: FormRoute) -> FormValue:
    return FormValue(value=0.0, err_estimate=0.0, route=route)


# Below this relative gap psi(r (1 + u)) - psi(r) is integrated from psi'.
_TAYLOR_GAP = 1e-3
_GAUSS_OFFSET = 0.5 / math.sqrt(3.0)


def _gauss_step(dpsi, x0, h):
    """psi(x0 + h) - psi(x0) by two-point Gauss on psi'."""
    return 0.5 * h * (dpsi(x0 + (0.5 - _GAUSS_OFFSET) * h) + dpsi(x0 + (0.5 + _GAUSS_OFFSET) * h))


def _increment(phi, p: float, r: float, u: np.ndarray) -> np.ndarray:
    """psi(r (1 + u)) - psi(r) for psi = phi r^p, free of cancellation as u -> 0.

    Small gaps use the derivative over the exact gap r u, split at any
    breakpoint of phi inside the step, where phi is only C^1.
    """
    u = np.asarray(u, dtype=float)

    def psi(x):
        return phi.value(x) * x**p

    plain = psi(r * (1.0 + u)) - psi(r)
    small = np.abs(u) < _TAYLOR_GAP
    if not np.any(small) or not hasattr(phi, "derivative"):
        return plain

    def dpsi(x):
        return phi.derivative(x) * x**p + p * phi.value(x) * x ** (p - 1.0)

    h = r * u[small]
    step = _gauss_step(dpsi, r, h)
    for knot in phi.breakpoints():
        offset = knot - r
        inside = (np.minimum(h, 0.0) < offset) & (offset < np.maximum(h, 0.0))
        if np.any(inside):
            step[inside] = _gauss_step(dpsi, r, offset) + _gauss_step(dpsi, knot, h[inside] - offset)
    out = np.array(plain, dtype=float, copy=True)
    out[small] = step
    return out


def weighted_l2(phi, N: int, s: float, spec: QuadratureSpec = DEFAULT_SPEC) -> FormValue:
    """|S^{N-1}| int phi^2 r^{N-1-s} dr, i.e. int |phi|^2 / |x|^s."""
    _require_localized(phi, "weighted L2 norm")
    rate = _require_rate(N - s - 2.0 * phi.origin_order, "weighted L2 norm")

    def g(r):
        return phi.value(r) ** 2 * r ** (N - 1 - s)

    res = integrate_radial(g, phi.breakpoints(), rate, 1.0, spec)
    return _result(res, FormRoute.RADIAL_1D, sphere_area(N))


def l2_norm_sq(phi, N: int, spec: QuadratureSpec = DEFAULT_SPEC) -> FormValue:
    return weighted_l2(phi, N, 0.0, spec)


def gradient_form(phi, N: int, spec: QuadratureSpec = DEFAULT_SPEC) -> FormValue:
    """|S^{N-1}| int phi'(r)^2 r^{N-1} dr."""
    _require_localized(phi, "gradient form")
    q = phi.origin_order
    rate = _require_rate(N - 2.0 * q - 2.0 if q > 0.0 else float(N), "gradient form")

    def g(r):
        return phi.derivative(r) ** 2 * r ** (N - 1)

    res = integrate_radial(g, phi.breakpoints(), rate, 1.0, spec)
    return _result(res, FormRoute.RADIAL_1D, sphere_area(N))


def local_hardy_remainder(phi, N: int, spec: QuadratureSpec = DEFAULT_SPEC) -> FormValue:
    """|S^{N-1}| int psi'(r)^2 r dr with psi = r^{(N-2)/2} phi."""
    if N < 3:
        raise DomainError(f"local Hardy remainder requires N >= 3, got {N}")
    a = 0.5 * (N - 2)
    if _is_exact_groundstate(phi, a):
        return _zero(FormRoute.RADIAL_1D)
    _require_localized(phi, "local Hardy remainder")
    rate = _require_rate(N - 2.0 - 2.0 * phi.origin_order, "local Hardy remainder")

    def g(r):
        dpsi = a * r ** (a - 1.0) * phi.value(r) + r**a * phi.derivative(r)
        return dpsi**2 * r

    res = integrate_radial(g, phi.breakpoints(), rate, 1.0, spec)
    return _result(res, FormRoute.RADIAL_1D, sphere_area(N))


def riesz_energy(
    phi,
    N: int,
    alpha: float,
    weight: float = 0.0,
    route: FormRoute = FormRoute.DOUBLE_INTEGRAL,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> FormValue:
    """int int phi(x)|x|^-w I_alpha(x - y) phi(y)|y|^-w dx dy for radial phi."""
    route = FormRoute(route)
    kernel = AngularKernel.riesz(N, alpha)
    _require_localized(phi, "Riesz energy")

    if route is FormRoute.FOURIER:
        if not isinstance(phi, Gaussian) or weight != 0.0:
            raise UnsupportedRouteError(
                "the Fourier route exists only for unweighted Gaussians"
            )
        value = phi.amplitude**2 * phi.sigma ** (N + alpha) * radial_gaussian_moment(N, -alpha)
        return FormValue(value=value, err_estimate=4.0 * np.finfo(float).eps * value, route=route)

    q = phi.origin_order + weight
    origin_rate = _require_rate(min(N + alpha - 2.0 * q, N - q), "Riesz energy")
    S = sphere_area(N)
    weighted = PowerWeighted(phi, weight)

    if route is FormRoute.RADIAL_1D:
        def g(r):
            potential = np.array([
                riesz_radial_potential(weighted, N, alpha, float(x), spec) for x in np.atleast_1d(r)
            ])
            return weighted.value(r) * potential * r ** (N - 1)

        res = integrate_radial(g, phi.breakpoints(), origin_rate, 1.0, spec)
        return _result(res, route, S)

    def F(r, u):
        r2 = r * (1.0 + u)
        left = weighted.value(r) * r ** (N - 1)
        return average_at_gap(kernel, r, u, spec) * left * weighted.value(r2) * r2 ** (N - 1)

    res = integrate_diagonal_singular_2d(
        F,
        diag_order=kernel.diag_order,
        vanishing_order=0.0,
        spec=spec,
        knots=phi.breakpoints(),
        outer_rates=(origin_rate, 1.0),
        inner_rate=1.0,
    )
    return _result(res, route, S)


def stein_weiss_form(
    phi,
    params: InequalityParams,
    spec: QuadratureSpec = DEFAULT_SPEC,
    route: FormRoute = FormRoute.DOUBLE_INTEGRAL,
) -> FormValue:
    """Q_{alpha,s}[phi]: the Riesz energy with weights |x|^{-(alpha+s)/2}."""
    return riesz_energy(phi, params.N, params.alpha, params.weight_exponent, route, spec)


def fractional_seminorm(
    phi,
    N: int,
    s: float,
    route: FormRoute = FormRoute.DOUBLE_INTEGRAL,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> FormValue:
    """Squared homogeneous H^{s/2} seminorm, D_{N,s} int int |phi(x)-phi(y)|^2 / |x-y|^{N+s}."""
    route = FormRoute(route)
    normalization = seminorm_normalization(N, s)
    _require_localized(phi, "fractional seminorm")

    if route is FormRoute.FOURIER:
        if not isinstance(phi, Gaussian):
            raise UnsupportedRouteError(
                f"the Fourier route is only available for Gaussians, not {phi.describe()}"
            )
        value = phi.amplitude**2 * phi.sigma ** (N - s) * radial_gaussian_moment(N, s)
        return FormValue(value=value, err_estimate=4.0 * np.finfo(float).eps * value, route=route)
    if route is FormRoute.RADIAL_1D:
        raise UnsupportedRouteError("the fractional seminorm has no one-dimensional route")

    kernel = AngularKernel.seminorm(N, s)

    def F(r, u):
        r2 = r * (1.0 + u)
        diff = _increment(phi, 0.0, r, u)
        return average_at_gap(kernel, r, u, spec) * diff**2 * (r * r2) ** (N - 1)

    res = integrate_diagonal_singular_2d(
        F,
        diag_order=kernel.diag_order,
        vanishing_order=2.0,
        spec=spec,
        knots=phi.breakpoints(),
        outer_rates=(float(N), 1.0),
        inner_rate=s,
    )
    return _result(res, route, normalization * sphere_area(N))


def _groundstate_remainder(phi, kernel: AngularKernel, p: float, weight: float,
                           origin_rate: float, inner_rate: float, spec: QuadratureSpec):
    """Double integral of avg(r, r') |psi(r) - psi(r')|^2 (r r')^weight, psi = phi r^p."""

    def F(r, u):
        r2 = r * (1.0 + u)
        diff = _increment(phi, p, r, u)
        return average_at_gap(kernel, r, u, spec) * diff**2 * (r * r2) ** weight

    return integrate_diagonal_singular_2d(
        F,
        diag_order=kernel.diag_order,
        vanishing_order=2.0,
        spec=spec,
        knots=phi.breakpoints(),
        outer_rates=(origin_rate, 1.0),
        inner_rate=inner_rate,
    )


def riesz_remainder(
    phi,
    params: InequalityParams,
    p: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> FormValue:
    """(1/2) int int I_alpha(x-y) |x|^{-(N+alpha)/2} |y|^{-(N+alpha)/2} |psi(x) - psi(y)|^2,
    psi = phi |x|^p.
    """
    N, alpha = params.N, params.alpha
    if _is_exact_groundstate(phi, p):
        return _zero(FormRoute.DOUBLE_INTEGRAL)
    _require_localized(phi, "Riesz remainder")
    origin_rate = _require_rate(min(0.5 * (N - alpha), 2.0 * (p - phi.origin_order)), "Riesz remainder")

    res = _groundstate_remainder(
        phi,
        AngularKernel.riesz(N, alpha),
        p,
        weight=N - 1 - 0.5 * (N + alpha),
        origin_rate=origin_rate,
        inner_rate=0.5 * (N - alpha),
        spec=spec,
    )
    return _result(res, FormRoute.DOUBLE_INTEGRAL, 0.5 * sphere_area(N))


def fractional_remainder(phi, N: int, s: float, spec: QuadratureSpec = DEFAULT_SPEC) -> FormValue:
    """int int |x|^{-(N-s)/2} |x-y|^{-(N+s)} |y|^{-(N-s)/2} |psi(x) - psi(y)|^2,
    psi = phi |x|^{(N-s)/2}; no D_{N,s} factor.
    """
    if not (0.0 < s < 2.0 and s < N):
        raise DomainError(f"fractional remainder requires 0 < s < min(2, N), got s={s}, N={N}")
    p = 0.5 * (N - s)
    if _is_exact_groundstate(phi, p):
        return _zero(FormRoute.DOUBLE_INTEGRAL)
    _require_localized(phi, "fractional remainder")
    origin_rate = _require_rate(min(0.5 * (N + s), 2.0 * (p - phi.origin_order)), "fractional remainder")

    res = _groundstate_remainder(
        phi,
        AngularKernel.seminorm(N, s),
        p,
        weight=N - 1 - p,
        origin_rate=origin_rate,
        inner_rate=0.5 * (N + s),
        spec=spec,
    )
    return _result(res, FormRoute.DOUBLE_INTEGRAL, sphere_area(N))
