"""Shared fixtures: expensive spectral solves are computed once per session."""

import pytest

from ptwa.equilibrium import ModelParams
from ptwa.spectral import SpectralParams, solve_gci


@pytest.fixture(scope="session")
def unit_model():
    return ModelParams(lam=1.0, alpha=1.0)


@pytest.fixture(scope="session")
def small_solution(unit_model):
    """Cheap solved invariant at lam = alpha = 1 for qualitative tests."""
    sp = SpectralParams(m=10, n=21, model=unit_model)
    return solve_gci(sp), sp


@pytest.fixture(scope="session")
def medium_solution(unit_model):
    """Well-converged solved invariant at lam = alpha = 1."""
    sp = SpectralParams(m=20, n=41, model=unit_model)
    return solve_gci(sp), sp
