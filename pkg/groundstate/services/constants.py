"""Gamma-function constants of the Stein-Weiss / Hardy family.

All Gamma ratios are assembled in log space and exponentiated once.
"""
import math

from scipy.special import gammaln

from groundstate.core.errors import DomainError
from groundstate.schemas.params import InequalityParams

LN2 = math.log(2.0)
LNPI = math.log(math.pi)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not (x > 0.0 and math.isfinite(x)):
        raise DomainError(f"log_gamma requires a positive finite argument, got {x}")
    return float(gammaln(x))


def _check_dimension(N: int) -> None:
    if int(N) != N or N < 1:
        raise DomainError(f"dimension must be a positive integer, got {N}")


def sphere_area(N: int) -> float:
    """|S^{N-1}| = 2 pi^{N/2} / Gamma(N/2); 2 for N = 1."""
    _check_dimension(N)
    return 2.0 * math.exp(0.5 * N * LNPI - log_gamma(0.5 * N))


def riesz_normalization(N: int, alpha: float) -> float:
    """A_alpha = Gamma((N-alpha)/2) / (2^alpha pi^{N/2} Gamma(alpha/2))."""
    _check_dimension(N)
    if not 0.0 < alpha < N:
        raise DomainError(f"Riesz order must lie in (0, {N}), got {alpha}")
    return math.exp(
        log_gamma(0.5 * (N - alpha)) - alpha * LN2 - 0.5 * N * LNPI - log_gamma(0.5 * alpha)
    )


def seminorm_normalization(N: int, s: float) -> float:
    """D_{N,s} = s Gamma((N+s)/2) / (2^{2-s} pi^{N/2} Gamma(1 - s/2))."""
    _check_dimension(N)
    if not 0.0 < s < 2.0:
        raise DomainError(f"seminorm order must lie in (0, 2), got {s}")
    return s * math.exp(
        log_gamma(0.5 * (N + s)) - (2.0 - s) * LN2 - 0.5 * N * LNPI - log_gamma(1.0 - 0.5 * s)
    )


def fractional_sharp_constant(N: int, alpha: float, s: float) -> float:
    """2^{-(alpha+s)} [Gamma((N-s)/4) Gamma((N-alpha)/4) / (Gamma((N+s)/4) Gamma((N+alpha)/4))]^2.

    Valid on the closed range 0 <= s <= 2, s < N; alpha = 0 gives the Hardy constant.
    """
    _check_dimension(N)
    if not 0.0 <= alpha < N:
        raise DomainError(f"alpha must lie in [0, {N}), got {alpha}")
    if not (0.0 <= s <= 2.0 and s < N):
        raise DomainError(f"s must lie in [0, 2] with s < N, got s={s}, N={N}")
    log_ratio = (
        log_gamma(0.25 * (N - s)) + log_gamma(0.25 * (N - alpha))
        - log_gamma(0.25 * (N + s)) - log_gamma(0.25 * (N + alpha))
    )
    return math.exp(2.0 * log_ratio - (alpha + s) * LN2)


def l2_sharp_constant(N: int, alpha: float) -> float:
    """2^{-alpha} (Gamma((N-alpha)/4) / Gamma((N+alpha)/4))^2."""
    _check_dimension(N)
    if not 0.0 < alpha < N:
        raise DomainError(f"alpha must lie in (0, {N}), got {alpha}")
    log_ratio = log_gamma(0.25 * (N - alpha)) - log_gamma(0.25 * (N + alpha))
    return math.exp(2.0 * log_ratio - alpha * LN2)


def gradient_sharp_constant(N: int, alpha: float) -> float:
    """2^{2-alpha} [Gamma((N-alpha)/4) / ((N-2) Gamma((N+alpha)/4))]^2, N >= 3."""
    _check_dimension(N)
    if N < 3:
        raise DomainError(f"the gradient constant requires N >= 3, got {N}")
    if not 0.0 < alpha < N:
        raise DomainError(f"alpha must lie in (0, {N}), got {alpha}")
    log_ratio = log_gamma(0.25 * (N - alpha)) - math.log(N - 2.0) - log_gamma(0.25 * (N + alpha))
    return math.exp(2.0 * log_ratio + (2.0 - alpha) * LN2)


def sharp_constant(params: InequalityParams) -> float:
    """C_{N,alpha,s}; s = 0 and s = 2 use their own closed forms."""
    if params.regime == "l2":
        return l2_sharp_constant(params.N, params.alpha)
    if params.regime == "gradient":
        return gradient_sharp_constant(params.N, params.alpha)
    return fractional_sharp_constant(params.N, params.alpha, params.s)


def hardy_constant(N: int, s: float) -> float:
    """C_{N,0,s}, the reciprocal of the sharp fractional Hardy constant."""
    if s == 2.0:
        if N < 3:
            raise DomainError(f"the local Hardy constant requires N >= 3, got {N}")
        return 1.0 / (0.5 * (N - 2.0)) ** 2
    return fractional_sharp_constant(N, 0.0, s)


def riesz_power_law_constant(N: int, alpha: float, beta: float) -> float:
    """c with (I_alpha * |.|^{-beta})(x) = c |x|^{alpha - beta}, 0 < alpha < beta < N."""
    _check_dimension(N)
    if not 0.0 < alpha < beta < N:
        raise DomainError(f"power law requires 0 < alpha < beta < N, got alpha={alpha}, beta={beta}, N={N}")
    return math.exp(
        -alpha * LN2
        + log_gamma(0.5 * (beta - alpha)) + log_gamma(0.5 * (N - beta))
        - log_gamma(0.5 * beta) - log_gamma(0.5 * (N - beta + alpha))
    )


def radial_gaussian_moment(N: int, q: float) -> float:
    """Integral over R^N of |x|^q exp(-|x|^2), N + q > 0."""
    _check_dimension(N)
    if not N + q > 0.0:
        raise DomainError(f"Gaussian moment diverges for N + q <= 0 (N={N}, q={q})")
    return 0.5 * sphere_area(N) * math.exp(log_gamma(0.5 * (N + q)))
