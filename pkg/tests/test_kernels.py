"""
Tests for angular averages and radial Riesz potentials
"""
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from pydantic import ValidationError
from scipy import integrate
from scipy.special import erf

from groundstate.core.errors import DomainError
from groundstate.services.constants import riesz_normalization, sphere_area
from groundstate.services.kernels import (
    AngularKernel,
    RieszPotential,
    angular_average,
    average_at_gap,
    riesz_radial_potential,
)
from groundstate.services.radial_functions import Gaussian, PurePower


def _reference_average(N, gamma, r, r2):
    """|S^{N-2}| int_0^pi (r^2 + r2^2 - 2 r r2 cos t)^{-gamma/2} sin^{N-2} t dt"""
    if r == r2:
        # t^{N-2-gamma} goes to the alg weight; sinc keeps the rest finite at t = 0
        smooth = lambda t: np.sinc(t / math.pi) ** (N - 2) * (r * np.sinc(t / (2 * math.pi))) ** (-gamma)
        value, _ = integrate.quad(smooth, 0.0, math.pi, weight="alg", wvar=(N - 2 - gamma, 0.0),
                                  epsabs=0.0, epsrel=1e-13)
        return sphere_area(N - 1) * value
    f = lambda t: (r**2 + r2**2 - 2 * r * r2 * math.cos(t)) ** (-gamma / 2) * math.sin(t) ** (N - 2)
    gap = abs(r - r2) / math.sqrt(r * r2)
    points = [p for p in (gap, 4 * gap, 16 * gap) if 0.0 < p < math.pi] or None
    value, _ = integrate.quad(f, 0.0, math.pi, points=points, limit=400, epsabs=0.0, epsrel=1e-13)
    return sphere_area(N - 1) * value


class TestAngularKernel:
    """Kernel construction"""

    def test_riesz_kernel(self):
        k = AngularKernel.riesz(3, 1.0)
        assert k.exponent == 2.0
        assert k.normalization == pytest.approx(riesz_normalization(3, 1.0))
        assert k.diag_order == 0.0

    def test_seminorm_kernel(self):
        k = AngularKernel.seminorm(3, 1.0)
        assert k.exponent == 4.0
        assert k.normalization == 1.0
        assert k.diag_order == 2.0

    def test_invalid_exponent(self):
        with pytest.raises(ValidationError):
            AngularKernel(N=3, exponent=5.5)


class TestAverageAtGap:
    """Sphere integral of |x - y|^-gamma over |y| = r2"""

    @pytest.mark.parametrize("gamma", [0.5, 1.5, 2.0, 3.2])
    @pytest.mark.parametrize("r2", [0.2, 0.9, 1.05, 1.6, 7.0])
    def test_three_dimensional_closed_form(self, gamma, r2):
        k = AngularKernel(N=3, exponent=gamma)
        assert angular_average(k, 1.0, r2) == pytest.approx(_reference_average(3, gamma, 1.0, r2), rel=1e-10)

    @pytest.mark.parametrize("N", [2, 4, 5, 7])
    @pytest.mark.parametrize("r2", [0.3, 0.8, 0.97, 1.1, 1.6, 4.0])
    def test_general_dimension_against_scipy(self, N, r2):
        gamma = N - 0.6
        k = AngularKernel(N=N, exponent=gamma)
        assert angular_average(k, 1.0, r2) == pytest.approx(_reference_average(N, gamma, 1.0, r2), rel=1e-9)

    @pytest.mark.parametrize("u", [1e2, 1e4, 1e6, 1e8])
    def test_three_dimensional_far_gap_logarithm(self, u):
        k = AngularKernel(N=3, exponent=2.0)
        value = average_at_gap(k, 1.0, np.array([u]))[0]
        assert value == pytest.approx(2 * math.pi * math.log1p(2 / u) / (1 + u), rel=1e-12)

    @pytest.mark.parametrize("u", [1e2, 1e4, 1e6, 1e8])
    def test_three_dimensional_far_gap_power(self, u):
        # (2 + u)^{1/2} - u^{1/2} = 2 / ((2 + u)^{1/2} + u^{1/2})
        k = AngularKernel(N=3, exponent=1.5)
        value = average_at_gap(k, 1.0, np.array([u]))[0]
        expected = 2 * math.pi * 4.0 / ((math.sqrt(2 + u) + math.sqrt(u)) * (1 + u))
        assert value == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("u", [-1e-9, 1e-9])
    def test_three_dimensional_near_gap_logarithm(self, u):
        k = AngularKernel(N=3, exponent=2.0)
        value = average_at_gap(k, 1.0, np.array([u]))[0]
        assert value == pytest.approx(2 * math.pi * math.log((2 + u) / abs(u)) / (1 + u), rel=1e-12)

    def test_one_dimensional_closed_form(self):
        k = AngularKernel(N=1, exponent=0.5)
        assert angular_average(k, 2.0, 3.0) == pytest.approx(1.0 + 5.0**-0.5, rel=1e-14)

    def test_normalization_is_applied(self):
        plain = AngularKernel(N=3, exponent=2.0)
        riesz = AngularKernel.riesz(3, 1.0)
        assert angular_average(riesz, 1.0, 2.0) == pytest.approx(
            riesz_normalization(3, 1.0) * angular_average(plain, 1.0, 2.0), rel=1e-14
        )

    def test_vectorised_gaps(self):
        k = AngularKernel(N=4, exponent=2.5)
        u = np.array([-0.5, -0.1, 0.05, 2.0])
        values = average_at_gap(k, 1.5, u)
        assert values.shape == (4,)
        for ui, v in zip(u, values):
            assert v == pytest.approx(angular_average(k, 1.5, 1.5 * (1 + ui)), rel=1e-10)

    def test_diagonal_is_finite_below_pole_threshold(self):
        k = AngularKernel(N=3, exponent=1.5)
        at_diagonal = angular_average(k, 1.0, 1.0)
        assert at_diagonal == pytest.approx(_reference_average(3, 1.5, 1.0, 1.0), rel=1e-10)
        k4 = AngularKernel(N=4, exponent=2.5)
        assert angular_average(k4, 1.0, 1.0) == pytest.approx(_reference_average(4, 2.5, 1.0, 1.0), rel=1e-8)

    def test_pole_on_the_diagonal(self):
        with pytest.raises(DomainError):
            angular_average(AngularKernel(N=3, exponent=2.0), 1.0, 1.0)
        with pytest.raises(DomainError):
            angular_average(AngularKernel.seminorm(5, 0.5), 2.0, 2.0)

    def test_nonpositive_radius(self):
        with pytest.raises(DomainError):
            angular_average(AngularKernel(N=3, exponent=1.0), 0.0, 1.0)


class TestKernelProperties:
    """Symmetry and homogeneity"""

    @settings(max_examples=60, deadline=None)
    @given(
        N=st.sampled_from([1, 2, 3, 4, 5]),
        frac=st.floats(min_value=0.05, max_value=0.95),
        r=st.floats(min_value=0.1, max_value=10.0),
        r2=st.floats(min_value=0.1, max_value=10.0),
    )
    def test_symmetric_in_the_radii(self, N, frac, r, r2):
        assume(abs(r - r2) > 1e-3 * r)
        k = AngularKernel(N=N, exponent=frac * (N + 2))
        a = angular_average(k, r, r2)
        b = angular_average(k, r2, r)
        assert a == pytest.approx(b, rel=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(
        N=st.sampled_from([1, 2, 3, 4, 6]),
        frac=st.floats(min_value=0.05, max_value=0.95),
        r2=st.floats(min_value=0.1, max_value=10.0),
        t=st.sampled_from([0.01, 0.5, 2.0, 10.0, 1000.0]),
    )
    def test_homogeneous_of_degree_minus_gamma(self, N, frac, r2, t):
        assume(abs(r2 - 1.0) > 1e-3)
        gamma = frac * (N + 2)
        k = AngularKernel(N=N, exponent=gamma)
        scaled = angular_average(k, t, t * r2)
        assert scaled == pytest.approx(t ** (-gamma) * angular_average(k, 1.0, r2), rel=1e-9)


class TestRieszPotential:
    """(I_alpha * f)(r) for radial f"""

    @pytest.mark.parametrize("r", [0.1, 1.0, 3.0, 10.0])
    def test_newtonian_potential_of_a_gaussian(self, r):
        mass = (2 * math.pi) ** 1.5
        expected = mass * erf(r / math.sqrt(2)) / (4 * math.pi * r)
        assert riesz_radial_potential(Gaussian(sigma=1.0), 3, 2.0, r) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("r", [0.1, 1.0, 10.0])
    def test_power_law(self, r):
        value = riesz_radial_potential(PurePower(p=2.0), 3, 1.0, r)
        assert value == pytest.approx(0.5 * math.pi / r, rel=1e-8)

    def test_divergent_potentials(self):
        with pytest.raises(DomainError):
            riesz_radial_potential(PurePower(p=3.0), 3, 1.0, 1.0)
        with pytest.raises(DomainError):
            riesz_radial_potential(PurePower(p=0.5), 3, 1.0, 1.0)
        with pytest.raises(DomainError):
            riesz_radial_potential(Gaussian(sigma=1.0), 3, 1.0, 0.0)

    def test_potential_as_radial_function(self):
        pot = RieszPotential(Gaussian(sigma=1.0), 3, 2.0)
        r = np.array([0.5, 2.0])
        values = pot.value(r)
        assert values.shape == (2,)
        assert values[1] == pytest.approx(riesz_radial_potential(Gaussian(sigma=1.0), 3, 2.0, 2.0))
        assert pot.tail_order == 1.0
        assert pot.origin_order == 0.0
        assert "gaussian" in pot.describe()

    def test_potential_origin_order_of_a_power(self):
        # I_{1/2} * r^{-3/2} = c r^{-1} in three dimensions
        pot = RieszPotential(PurePower(p=1.5), 3, 0.5)
        assert pot.origin_order == 1.0
        values = pot.value(np.array([0.01, 1.0]))
        assert values[0] / values[1] == pytest.approx(100.0, rel=1e-7)

    def test_potential_of_a_bounded_profile_is_bounded(self):
        assert RieszPotential(Gaussian(sigma=1.0), 3, 0.5).origin_order == 0.0
