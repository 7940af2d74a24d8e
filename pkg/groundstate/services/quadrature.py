"""Adaptive Gauss-Kronrod integration engine.

One-dimensional integrals use the 7/15-point Gauss-Kronrod pair with global
adaptive bisection (largest error estimate first, across all panels of one
integral) and the QUADPACK error heuristic. Endpoint singularities are
removed by explicit algebraic substitutions requested by the caller.
Half-lines are mapped onto (0, 1); radial integrals over (0, inf) are done
in the logarithmic variable so the cost does not depend on the length scales
involved. Double radial integrals with a singular diagonal are reduced to
nested one-dimensional integrals.

Integrands are vectorised: they receive a numpy array of abscissae and
return an array of the same shape.
"""
import heapq
import logging
import math
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from groundstate.core.errors import AsymmetricIntegrandError, DomainError, QuadratureError
from groundstate.schemas.quadrature import DEFAULT_SPEC, Decay, QuadratureResult, QuadratureSpec

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

# Kronrod abscissae (positive half, descending) and weights; Gauss-7 weights
# belong to XGK[1], XGK[3], XGK[5] and the centre.
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-XGK[:7], [0.0], XGK[6::-1]])
_WK = np.concatenate([WGK[:7], [WGK[7]], WGK[6::-1]])
_WG = np.zeros(15)
for _i, _w in zip((1, 3, 5), WG[:3]):
    _WG[_i] = _w
    _WG[14 - _i] = _w
_WG[7] = WG[3]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny
# |t| beyond this in the logarithmic variable means r under/overflows.
_LOG_LIMIT = 700.0


def _evaluate(f: Integrand, x: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise DomainError(f"integrand is not finite at x={bad!r}")
    return y


def gauss_kronrod_15(f: Integrand, a: float, b: float) -> Tuple[float, float]:
    """One 15-point Kronrod panel on [a, b]: (estimate, error estimate)."""
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y = _evaluate(f, centre + half * _NODES)

    resk = half * float(np.dot(_WK, y))
    resg = half * float(np.dot(_WG, y))
    resabs = abs(half) * float(np.dot(_WK, np.abs(y)))
    mean = 0.5 * float(np.dot(_WK, y))
    resasc = abs(half) * float(np.dot(_WK, np.abs(y - mean)))

    err = abs(resk - resg)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > _TINY / (50.0 * _EPS):
        err = max(50.0 * _EPS * resabs, err)
    return resk, err


class Panel(NamedTuple):
    """A finite interval and the integrand on it, in the panel's own variable."""
    f: Integrand
    a: float
    b: float


def _tolerance(total: float, spec: QuadratureSpec) -> float:
    return max(spec.abs_tol, spec.rel_tol * abs(total))


def integrate_panels(panels: Sequence[Panel], spec: QuadratureSpec = DEFAULT_SPEC) -> QuadratureResult:
    """Sum of the panel integrals under one shared error budget.

    Every panel starts with one 15-point Kronrod estimate. The interval with
    the largest error estimate over all panels is bisected next, until the
    summed error meets max(abs_tol, rel_tol |total|). The subdivision limit is
    ``max_subdivisions`` per panel.
    """
    panels = list(panels)
    if not panels:
        return QuadratureResult(0.0, 0.0, 0)

    heap = []
    for index, (f, a, b) in enumerate(panels):
        value, err = gauss_kronrod_15(f, a, b)
        heap.append((-err, index, a, b, value, err))
    heapq.heapify(heap)
    frozen = []
    intervals = len(heap)
    limit = spec.max_subdivisions * len(panels)
    # running sums drift; they only decide when to take the exact fsum
    total = math.fsum(e[4] for e in heap)
    total_err = math.fsum(e[5] for e in heap)

    while True:
        if total_err <= _tolerance(total, spec) or not heap:
            entries = heap + frozen
            total = math.fsum(e[4] for e in entries)
            total_err = math.fsum(e[5] for e in entries)
            if total_err <= _tolerance(total, spec):
                return QuadratureResult(total, total_err, intervals)

        if intervals >= limit or not heap:
            _, _, lo, hi, _, _ = heap[0] if heap else min(frozen)
            logger.warning(
                "quadrature over %d panels stopped at %d intervals, error %.3e, worst [%r, %r]",
                len(panels), intervals, total_err, lo, hi,
            )
            raise QuadratureError(
                f"no convergence on [{lo!r}, {hi!r}]", total, total_err, intervals
            )

        entry = heapq.heappop(heap)
        _, index, lo, hi, piece_value, piece_err = entry
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            frozen.append(entry)
            continue
        total -= piece_value
        total_err -= piece_err
        f = panels[index].f
        for left, right in ((lo, mid), (mid, hi)):
            v, e = gauss_kronrod_15(f, left, right)
            heapq.heappush(heap, (-e, index, left, right, v, e))
            total += v
            total_err += e
        intervals += 1


def _substitution_power(beta: float) -> float:
    if not beta < 1.0:
        raise DomainError(f"endpoint singularity of order {beta} is not integrable")
    return max(2.0, 1.0 / (1.0 - beta))


def _endpoint_panel(f: Integrand, origin: float, length: float, sign: float, beta: float) -> Panel:
    """x = origin + sign * length * v^k on v in (0, 1).

    When x rounds back onto ``origin`` the integrand is taken one ulp inside
    and rescaled by (realised / exact distance)^beta, so f only ever sees a
    positive distance and the |x - origin|^-beta blow-up keeps its exact size.
    """
    k = _substitution_power(beta)
    inside = np.nextafter(origin, origin + sign * length)

    def g(v):
        d = np.maximum(length * v**k, _TINY)
        x = origin + sign * d
        x = np.where(sign * (x - origin) > 0.0, x, inside)
        realised = sign * (x - origin)
        return f(x) * (realised / d) ** beta * (length * k * v ** (k - 1.0))
    return Panel(g, 0.0, 1.0)


def panels_1d(
    f: Integrand,
    a: float,
    b: float,
    singular_endpoints: Tuple[Optional[float], Optional[float]] = (None, None),
) -> List[Panel]:
    """Panels covering (a, b), with flagged endpoints mapped away."""
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"integration requires finite a < b, got a={a}, b={b}")
    left, right = singular_endpoints

    if left is not None and right is not None:
        mid = 0.5 * (a + b)
        return [_endpoint_panel(f, a, mid - a, 1.0, left), _endpoint_panel(f, b, b - mid, -1.0, right)]
    if left is not None:
        return [_endpoint_panel(f, a, b - a, 1.0, left)]
    if right is not None:
        return [_endpoint_panel(f, b, b - a, -1.0, right)]
    return [Panel(f, a, b)]


def integrate_1d(
    f: Integrand,
    a: float,
    b: float,
    singular_endpoints: Tuple[Optional[float], Optional[float]] = (None, None),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> QuadratureResult:
    """Integral of f over (a, b).

    ``singular_endpoints`` holds, for the left and right endpoint, either None
    or the exponent beta of an algebraic blow-up |x - endpoint|^{-beta}
    (beta < 1). A flagged endpoint is removed by x = endpoint +- h v^k with
    k = max(2, 1/(1 - beta)); both flags split the interval at its midpoint.
    """
    return integrate_panels(panels_1d(f, a, b, singular_endpoints), spec)


def panels_semi_infinite(
    f: Integrand,
    a: float,
    decay: Decay,
    scale: float = 1.0,
    singular_start: Optional[float] = None,
) -> List[Panel]:
    """Panels covering (a, inf); see :func:`integrate_semi_infinite`."""
    if not math.isfinite(a):
        raise DomainError(f"half-line must start at a finite point, got {a}")
    if singular_start is not None:
        return (
            panels_1d(f, a, a + scale, (singular_start, None))
            + panels_semi_infinite(f, a + scale, decay, scale)
        )

    if decay.kind == "algebraic":
        q = decay.rate
        if not q > 1.0:
            raise DomainError(f"algebraic decay of order {q} is not integrable at infinity")

        def g(v):
            return f(a + scale * (1.0 - v) / v) * (scale / v**2)
        return panels_1d(g, 0.0, 1.0, (2.0 - q if q < 2.0 else None, None))

    c = decay.rate

    def h(v):
        return f(a - np.log(v) / c) / (c * v)
    return [Panel(h, 0.0, 1.0)]


def integrate_semi_infinite(
    f: Integrand,
    a: float,
    decay: Decay,
    spec: QuadratureSpec = DEFAULT_SPEC,
    scale: float = 1.0,
    singular_start: Optional[float] = None,
) -> QuadratureResult:
    """Integral of f over (a, inf).

    Algebraic decay O(x^-q), q > 1, uses x = a + scale (1 - v)/v; exponential
    decay O(e^{-c x}) uses x = a - ln(v)/c; v runs over (0, 1) in both cases.
    ``singular_start`` flags an algebraic blow-up at a, handled on the first
    ``scale`` length separately.
    """
    return integrate_panels(panels_semi_infinite(f, a, decay, scale, singular_start), spec)


def _log_integrand(g: Integrand) -> Integrand:
    def h(t):
        t = np.asarray(t, dtype=float)
        inside = np.abs(t) <= _LOG_LIMIT
        r = np.exp(np.where(inside, t, 0.0))
        return np.where(inside, g(r) * r, 0.0)
    return h


def _log_knots(knots: Iterable[float]) -> Sequence[float]:
    ts = sorted({math.log(k) for k in knots if k > 0.0 and math.isfinite(k)})
    return ts or [0.0]


def _cap(rate: float) -> float:
    return min(max(rate, 1e-6), 4.0)


def shifted(f: Integrand, origin: float, sign: float = 1.0) -> Integrand:
    """x -> f(origin + sign * x)."""
    def g(x):
        return f(origin + sign * x)
    return g


def panels_radial(
    g: Integrand,
    knots: Iterable[float] = (1.0,),
    origin_rate: float = 1.0,
    tail_rate: float = 1.0,
) -> List[Panel]:
    """Panels for the integral of g over (0, inf) in t = ln r."""
    if not origin_rate > 0.0 or not tail_rate > 0.0:
        raise DomainError(f"radial integral diverges (rates {origin_rate}, {tail_rate})")
    h = _log_integrand(g)
    ts = _log_knots(knots)

    panels = panels_semi_infinite(shifted(h, ts[0], -1.0), 0.0, Decay.exponential(_cap(origin_rate)))
    panels += [Panel(h, lo, hi) for lo, hi in zip(ts[:-1], ts[1:])]
    panels += panels_semi_infinite(shifted(h, ts[-1]), 0.0, Decay.exponential(_cap(tail_rate)))
    return panels


def integrate_radial(
    g: Integrand,
    knots: Iterable[float] = (1.0,),
    origin_rate: float = 1.0,
    tail_rate: float = 1.0,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> QuadratureResult:
    """Integral of g over (0, inf) in the variable t = ln r.

    ``origin_rate``/``tail_rate`` are lower bounds for the exponential decay of
    g(r) r in t at -inf / +inf (power rates of r g(r) at 0 and at infinity).
    The range is split at ln(knot) for each knot.
    """
    return integrate_panels(panels_radial(g, knots, origin_rate, tail_rate), spec)


RelativeIntegrand = Callable[[float, np.ndarray], np.ndarray]

_SYMMETRY_POINTS = ((0.8, 0.35), (1.3, 0.8), (1.0, 2.5))


def _check_symmetry(F: RelativeIntegrand, centre: float) -> None:
    for factor, u in _SYMMETRY_POINTS:
        r = centre * factor
        forward = float(np.asarray(F(r, np.array([u])), dtype=float)[0])
        r2 = r * (1.0 + u)
        backward = float(np.asarray(F(r2, np.array([-u / (1.0 + u)])), dtype=float)[0])
        if abs(forward - backward) > 1e-8 * max(abs(forward), abs(backward)) + 1e-300:
            raise AsymmetricIntegrandError(
                f"integrand not symmetric at (r, r')=({r!r}, {r2!r}): {forward!r} vs {backward!r}",
                float("nan"), float("nan"),
            )


# Share of the outer tolerance granted to one inner integral.
_INNER_SHARE = 0.1


def integrate_diagonal_singular_2d(
    F: RelativeIntegrand,
    diag_order: float,
    vanishing_order: float = 2.0,
    spec: QuadratureSpec = DEFAULT_SPEC,
    knots: Sequence[float] = (1.0,),
    outer_rates: Tuple[float, float] = (1.0, 1.0),
    inner_rate: float = 1.0,
    check_symmetry: bool = True,
) -> QuadratureResult:
    """Double integral over (0, inf)^2 of a symmetric integrand.

    ``F(r, u)`` is the integrand at (r, r') = (r, r (1 + u)), vectorised in u,
    so that the gap r u is exact near the diagonal. Near the diagonal F
    behaves like |u|^{vanishing_order - diag_order}. Only r' > r is
    integrated and the result doubled: the inner variable is u on
    (0, band) with a singular flag at u = 0, then w = ln(r'/r) split at the
    knots with an exponential tail of rate ``inner_rate``. The outer integral
    runs in ln r with tail rates ``outer_rates`` (towards 0, towards inf).

    An inner integral at r only has to resolve its contribution r I(r) to
    ``_INNER_SHARE * rel_tol`` times the largest contribution seen so far.
    Inner errors enter the reported error weighted by r, like the values.
    """
    beta = diag_order - vanishing_order
    if not beta < 1.0:
        raise DomainError(
            f"diagonal singularity of order {diag_order} with vanishing order {vanishing_order} is not integrable"
        )
    knots = sorted(k for k in knots if k > 0.0)
    if check_symmetry:
        _check_symmetry(F, knots[len(knots) // 2] if knots else 1.0)

    band = spec.diagonal_band_width
    w_band = math.log1p(band)
    largest = [0.0]
    weighted_err = []
    weighted_abs = []

    def inner(r: float) -> float:
        def near(u):
            return F(r, u) * r

        def g(w):
            return F(r, np.expm1(w)) * (r * np.exp(w))

        cuts = [w_band] + sorted(math.log(k / r) for k in knots if math.log(k / r) > w_band)
        panels = panels_1d(near, 0.0, band, (beta, None))
        panels += [Panel(g, lo, hi) for lo, hi in zip(cuts[:-1], cuts[1:])]
        panels += panels_semi_infinite(shifted(g, cuts[-1]), 0.0, Decay.exponential(_cap(inner_rate)))

        floor = _INNER_SHARE * spec.rel_tol * largest[0] / r
        local = spec.model_copy(update={"abs_tol": max(spec.abs_tol, floor)})
        try:
            res = integrate_panels(panels, local)
        except QuadratureError as exc:
            logger.warning("inner integral at r=%r kept at error %.3e", r, exc.error)
            res = QuadratureResult(exc.value, exc.error, exc.subdivisions)
        largest[0] = max(largest[0], abs(res.value) * r)
        weighted_err.append(res.error * r)
        weighted_abs.append(abs(res.value) * r)
        return res.value

    def outer(r):
        return np.array([inner(float(x)) for x in np.atleast_1d(r)])

    result = integrate_radial(outer, knots, outer_rates[0], outer_rates[1], spec)
    total_abs = math.fsum(weighted_abs)
    inner_rel = math.fsum(weighted_err) / total_abs if total_abs > 0.0 else 0.0
    error = 2.0 * (result.error + inner_rel * abs(result.value))
    logger.debug("2d integral: %r (+- %.2e), %d outer intervals", 2.0 * result.value, error, result.subdivisions)
    return QuadratureResult(2.0 * result.value, error, result.subdivisions)
