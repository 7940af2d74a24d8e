"""
Tests for the sharpness sweep
"""
import math

import pytest

from groundstate.core.errors import DomainError
from groundstate.schemas.params import InequalityParams
from groundstate.schemas.report import SweepRow
from groundstate.services.constants import sharp_constant
from groundstate.services.sharpness import SharpnessService, get_sharpness_service


@pytest.fixture
def service(loose_spec):
    return SharpnessService(loose_spec, max_workers=1)


def _row(lam, quotient, deficit, J, denominator, R=None):
    return SweepRow(lam=lam, quotient=quotient, deficit=deficit, remainder_J=J,
                    remainder_R=R, denominator=denominator)


class TestSharpnessSweep:
    """u_lambda approaches the sharp constant"""

    def test_l2_sweep(self, service):
        params = InequalityParams(N=3, alpha=1.0, s=0.0)
        lambdas = [1.0, 10.0, 100.0, 1000.0, 10000.0]
        result = service.sharpness_sweep(params, lambdas)
        C = math.pi / 2
        assert result.sharp_constant == pytest.approx(C, rel=1e-12)
        assert [r.lam for r in result.rows] == lambdas

        deficits = [r.deficit for r in result.rows]
        assert all(b < a for a, b in zip(deficits, deficits[1:]))
        assert all(r.quotient < C for r in result.rows)
        assert all(r.remainder_R is None for r in result.rows)

        tail = [r.remainder_J for r in result.rows[-3:]]
        assert max(tail) / min(tail) <= 3.0

        # the L2 mass grows by 2 |S^2| ln 10 per decade
        for a, b in zip(result.rows[1:], result.rows[2:]):
            assert (b.denominator - a.denominator) == pytest.approx(8 * math.pi * math.log(10), rel=1e-6)

        checks = {c.name: c for c in result.checks}
        for name in ("remainder_bounded", "denominator_diverges", "log_growth",
                     "deficit_decreasing", "quotient_below_constant", "deficit_log_rate"):
            assert checks[name].passed, checks[name].detail
        assert "identity_closure" not in checks
        assert result.passed
        assert result.notes

    def test_gradient_sweep(self, service):
        params = InequalityParams(N=3, alpha=1.0, s=2.0)
        result = service.sharpness_sweep(params, [1.0, 10.0, 100.0])
        C = sharp_constant(params)
        assert all(r.quotient < C for r in result.rows)
        assert all(r.remainder_R is not None and r.remainder_R >= 0.0 for r in result.rows)
        deficits = [r.deficit for r in result.rows]
        assert all(b < a for a, b in zip(deficits, deficits[1:]))

    def test_row_with_identity_check(self, service):
        params = InequalityParams(N=3, alpha=1.0, s=0.0)
        row = service.rayleigh_quotient(params, 1.0, verify=True)
        assert row.identity_residual is not None
        assert row.identity_residual <= 1e-4
        assert 0.0 < row.deficit < 1.0
        assert row.err_budget >= 0.0

    @pytest.mark.parametrize("lambdas", [[], [0.5, 10.0], [10.0, 1.0], [1.0, 1.0]])
    def test_invalid_lambdas(self, service, lambdas):
        with pytest.raises(DomainError):
            service.sharpness_sweep(InequalityParams(N=3, alpha=1.0), lambdas)


class TestPostHocChecks:
    """Property checks evaluated on synthetic rows"""

    def setup_method(self):
        self.service = get_sharpness_service()
        self.params = InequalityParams(N=3, alpha=1.0, s=0.0)
        self.C = sharp_constant(self.params)

    def _rows(self, deficits, J=(1.0, 1.0, 1.0, 1.0)):
        lambdas = [1.0, 10.0, 100.0, 1000.0]
        slope = 8 * math.pi
        return [
            _row(lam, self.C * (1 - d), d, j, 5.0 + slope * math.log(lam))
            for lam, d, j in zip(lambdas, deficits, J)
        ]

    def _checks(self, rows, verify=False):
        return {c.name: c for c in self.service._post_hoc_checks(self.params, rows, self.C, verify)}

    def test_ideal_rows_pass(self):
        checks = self._checks(self._rows([0.5, 0.3, 0.15, 0.1]))
        assert all(c.passed for c in checks.values())
        assert checks["log_growth"].passed

    def test_increasing_deficit_fails(self):
        checks = self._checks(self._rows([0.5, 0.3, 0.35, 0.1]))
        assert not checks["deficit_decreasing"].passed

    def test_unbounded_remainder_fails(self):
        checks = self._checks(self._rows([0.5, 0.3, 0.15, 0.1], J=(1.0, 1.0, 10.0, 100.0)))
        assert not checks["remainder_bounded"].passed

    def test_quotient_above_constant_fails(self):
        rows = self._rows([0.5, 0.3, 0.15, 0.1])
        rows[-1] = _row(1000.0, 1.01 * self.C, -0.01, 1.0, rows[-1].denominator)
        checks = self._checks(rows)
        assert not checks["quotient_below_constant"].passed

    def test_wrong_growth_rate_fails(self):
        rows = self._rows([0.5, 0.3, 0.15, 0.1])
        for row in rows:
            row.denominator *= 2.0
        assert not self._checks(rows)["log_growth"].passed

    def test_identity_closure_check(self):
        rows = self._rows([0.5, 0.3, 0.15, 0.1])
        for row in rows:
            row.identity_residual = 1e-7
        rows[2].identity_residual = 1e-2
        checks = self._checks(rows, verify=True)
        assert not checks["identity_closure"].passed
