"""Shared fixtures for the groundstate test suite."""
import os
import sys

import pytest

# Add project root to path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)

from groundstate.schemas.quadrature import QuadratureSpec
from groundstate.services.identities import IdentityVerifier
from groundstate.services.radial_functions import Gaussian


@pytest.fixture
def spec():
    return QuadratureSpec()


@pytest.fixture
def loose_spec():
    """Coarser tolerances for the slow double integrals."""
    return QuadratureSpec(rel_tol=1e-8, abs_tol=1e-13)


@pytest.fixture
def verifier(spec):
    return IdentityVerifier(spec)


@pytest.fixture
def gaussian():
    return Gaussian(sigma=1.0)
