"""
Tests for the Gamma-function constants
"""
import math

import numpy as np
import pytest
from scipy.special import gamma as G

from groundstate.core.errors import DomainError
from groundstate.schemas.params import InequalityParams
from groundstate.services.constants import (
    fractional_sharp_constant,
    gradient_sharp_constant,
    hardy_constant,
    l2_sharp_constant,
    radial_gaussian_moment,
    riesz_normalization,
    riesz_power_law_constant,
    seminorm_normalization,
    sharp_constant,
    sphere_area,
)


class TestSphereArea:
    """|S^{N-1}| for small dimensions"""

    @pytest.mark.parametrize("N, expected", [
        (1, 2.0),
        (2, 2.0 * math.pi),
        (3, 4.0 * math.pi),
        (4, 2.0 * math.pi**2),
    ])
    def test_known_values(self, N, expected):
        assert sphere_area(N) == pytest.approx(expected, rel=1e-14)

    def test_rejects_non_integer_dimension(self):
        with pytest.raises(DomainError):
            sphere_area(2.5)
        with pytest.raises(DomainError):
            sphere_area(0)


class TestSharpConstant:
    """Closed forms of C_{N,alpha,s}"""

    def test_l2_case_in_three_dimensions(self):
        assert sharp_constant(InequalityParams(N=3, alpha=1, s=0)) == pytest.approx(math.pi / 2, rel=1e-12)

    def test_gradient_case_in_three_dimensions(self):
        assert sharp_constant(InequalityParams(N=3, alpha=1, s=2)) == pytest.approx(2 * math.pi, rel=1e-12)

    def test_fractional_formula_matches_gradient_formula_at_s2(self):
        for N in range(3, 7):
            for alpha in np.arange(0.25, N, 0.25):
                assert fractional_sharp_constant(N, alpha, 2.0) == pytest.approx(
                    gradient_sharp_constant(N, alpha), rel=1e-12
                )

    def test_fractional_formula_matches_l2_formula_at_s0(self):
        for N in range(1, 7):
            for alpha in np.arange(0.25, N, 0.25):
                assert fractional_sharp_constant(N, alpha, 0.0) == pytest.approx(
                    l2_sharp_constant(N, alpha), rel=1e-12
                )

    def test_against_direct_gamma_evaluation(self):
        N, alpha, s = 5, 1.5, 0.7
        ratio = G((N - s) / 4) * G((N - alpha) / 4) / (G((N + s) / 4) * G((N + alpha) / 4))
        expected = 2 ** (-(alpha + s)) * ratio**2
        assert sharp_constant(InequalityParams(N=N, alpha=alpha, s=s)) == pytest.approx(expected, rel=1e-13)

    def test_constant_is_positive_and_continuous_in_s(self):
        values = [fractional_sharp_constant(4, 1.0, s) for s in np.linspace(0.0, 2.0, 41)]
        assert all(v > 0.0 for v in values)
        jumps = np.abs(np.diff(np.log(values)))
        assert jumps.max() < 0.1

    def test_gradient_requires_three_dimensions(self):
        with pytest.raises(DomainError):
            gradient_sharp_constant(2, 1.0)

    def test_alpha_outside_range_is_rejected(self):
        with pytest.raises(DomainError):
            l2_sharp_constant(3, 3.0)
        with pytest.raises(DomainError):
            fractional_sharp_constant(3, -0.1, 1.0)


class TestHardyConstant:
    """alpha = 0 member of the family"""

    def test_trivial_at_s0(self):
        assert hardy_constant(3, 0.0) == pytest.approx(1.0, rel=1e-14)

    def test_local_hardy_at_s2(self):
        for N in range(3, 8):
            assert hardy_constant(N, 2.0) == pytest.approx(((N - 2) / 2) ** -2, rel=1e-14)

    def test_fractional_limit_approaches_local_value(self):
        assert hardy_constant(5, 2.0 - 1e-9) == pytest.approx(hardy_constant(5, 2.0), rel=1e-7)

    def test_local_case_requires_three_dimensions(self):
        with pytest.raises(DomainError):
            hardy_constant(2, 2.0)


class TestNormalizations:
    """Riesz and seminorm constants"""

    def test_riesz_normalization_against_gamma(self):
        N, alpha = 3, 1.0
        expected = G((N - alpha) / 2) / (2**alpha * math.pi ** (N / 2) * G(alpha / 2))
        assert riesz_normalization(N, alpha) == pytest.approx(expected, rel=1e-13)
        assert riesz_normalization(3, 2.0) == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-13)

    def test_seminorm_normalization_against_gamma(self):
        N, s = 2, 1.2
        expected = s * G((N + s) / 2) / (2 ** (2 - s) * math.pi ** (N / 2) * G(1 - s / 2))
        assert seminorm_normalization(N, s) == pytest.approx(expected, rel=1e-13)

    def test_seminorm_normalization_requires_open_range(self):
        for s in (0.0, 2.0, -1.0):
            with pytest.raises(DomainError):
                seminorm_normalization(3, s)

    def test_power_law_constant(self):
        assert riesz_power_law_constant(3, 1.0, 2.0) == pytest.approx(math.pi / 2, rel=1e-13)

    def test_power_law_constant_domain(self):
        with pytest.raises(DomainError):
            riesz_power_law_constant(3, 2.0, 1.0)
        with pytest.raises(DomainError):
            riesz_power_law_constant(3, 1.0, 3.0)


class TestGaussianMoment:
    """Integral of |x|^q exp(-|x|^2) over R^N"""

    def test_total_mass(self):
        for N in range(1, 6):
            assert radial_gaussian_moment(N, 0.0) == pytest.approx(math.pi ** (N / 2), rel=1e-13)

    def test_second_moment(self):
        assert radial_gaussian_moment(3, 2.0) == pytest.approx(1.5 * math.pi**1.5, rel=1e-13)

    def test_divergent_moment(self):
        with pytest.raises(DomainError):
            radial_gaussian_moment(2, -2.0)
