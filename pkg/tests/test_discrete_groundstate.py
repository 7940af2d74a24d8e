"""
Tests for the discrete groundstate identity
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from groundstate.core.errors import DomainError
from groundstate.services.identities import IdentityVerifier, random_discrete_instance


@pytest.fixture
def discrete_verifier():
    return IdentityVerifier()


class TestDiscreteGroundstate:
    """sum V phi^2 = sum K phi phi + (1/2) sum K u u (phi/u - phi/u)^2"""

    def test_random_instances(self, discrete_verifier):
        rng = np.random.default_rng(20240601)
        for _ in range(1000):
            n = int(rng.integers(1, 51))
            K, u, phi = random_discrete_instance(rng, n)
            report = discrete_verifier.verify_discrete_groundstate(K, u, phi)
            assert report.residual_rel <= 1e-12
            assert report.passed
            assert report.rhs_remainder >= 0.0

    def test_groundstate_has_zero_remainder(self, discrete_verifier):
        rng = np.random.default_rng(7)
        for n in (1, 5, 50):
            K, u, _ = random_discrete_instance(rng, n)
            report = discrete_verifier.verify_discrete_groundstate(K, u, u.copy())
            assert abs(report.rhs_remainder) <= 1e-14 * max(abs(report.lhs), 1.0)

    def test_zero_matrix(self, discrete_verifier):
        report = discrete_verifier.verify_discrete_groundstate(np.zeros((3, 3)), np.ones(3), np.arange(3.0))
        assert report.lhs == report.rhs_main == report.rhs_remainder == 0.0
        assert report.passed

    def test_report_metadata(self, discrete_verifier):
        report = discrete_verifier.verify_discrete_groundstate(np.ones((4, 4)), np.ones(4), np.ones(4))
        assert report.identity_name == "discrete-gs"
        assert report.profile == "discrete(n=4)"
        assert report.params is None

    @pytest.mark.parametrize("K, u, phi", [
        (np.array([[0.0, 1.0], [2.0, 0.0]]), np.ones(2), np.ones(2)),
        (np.array([[0.0, -1.0], [-1.0, 0.0]]), np.ones(2), np.ones(2)),
        (np.ones((2, 2)), np.array([1.0, 0.0]), np.ones(2)),
        (np.ones((2, 3)), np.ones(2), np.ones(2)),
        (np.ones((2, 2)), np.ones(3), np.ones(2)),
        (np.ones((2, 2)), np.ones(2), np.array([1.0, np.nan])),
    ])
    def test_invalid_inputs(self, discrete_verifier, K, u, phi):
        with pytest.raises(DomainError):
            discrete_verifier.verify_discrete_groundstate(K, u, phi)


# keep products away from the subnormal range, where relative residuals lose meaning
_weights = st.floats(min_value=0.0, max_value=100.0).filter(lambda x: x == 0.0 or x > 1e-50)
_values = st.floats(min_value=-1e3, max_value=1e3).filter(lambda x: x == 0.0 or abs(x) > 1e-50)


@st.composite
def discrete_instances(draw):
    n = draw(st.integers(min_value=1, max_value=12))
    entries = arrays(np.float64, (n, n), elements=_weights)
    A = draw(entries)
    K = 0.5 * (A + A.T)
    u = draw(arrays(np.float64, n, elements=st.floats(min_value=1e-3, max_value=1e3)))
    phi = draw(arrays(np.float64, n, elements=_values))
    return K, u, phi


class TestDiscreteProperties:
    """Property-based closure"""

    @settings(max_examples=200, deadline=None)
    @given(discrete_instances())
    def test_identity_closes(self, instance):
        K, u, phi = instance
        report = IdentityVerifier().verify_discrete_groundstate(K, u, phi)
        assert report.residual_rel <= 1e-12
        assert report.rhs_remainder >= 0.0

    @settings(max_examples=50, deadline=None)
    @given(discrete_instances(), st.floats(min_value=-10.0, max_value=10.0).filter(lambda c: c == 0.0 or abs(c) > 1e-3))
    def test_quadratic_in_phi(self, instance, c):
        K, u, phi = instance
        verifier = IdentityVerifier()
        base = verifier.verify_discrete_groundstate(K, u, phi)
        scaled = verifier.verify_discrete_groundstate(K, u, c * phi)
        assert scaled.lhs == pytest.approx(c**2 * base.lhs, rel=1e-12, abs=1e-300)
