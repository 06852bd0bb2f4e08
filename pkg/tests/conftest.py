"""Shared fixtures: the K=6, q=4 worked example and small parameter grids."""

from fractions import Fraction

import pytest

from src.config import (
    EXAMPLE_BASELINE_RATES,
    EXAMPLE_K,
    EXAMPLE_M,
    EXAMPLE_MU,
    EXAMPLE_N,
    EXAMPLE_NON_STRAGGLERS,
    EXAMPLE_PROPOSED_RATES,
    EXAMPLE_Q,
)
from src.scheme.params import RatePair, SystemParams


@pytest.fixture
def example_params() -> SystemParams:
    return SystemParams(K=EXAMPLE_K, q=EXAMPLE_Q, mu=EXAMPLE_MU, m=EXAMPLE_M, N=EXAMPLE_N)


@pytest.fixture
def proposed() -> RatePair:
    l, r2 = EXAMPLE_PROPOSED_RATES
    return RatePair(l=l, r2=r2, q=EXAMPLE_Q)


@pytest.fixture
def baseline() -> RatePair:
    l, r2 = EXAMPLE_BASELINE_RATES
    return RatePair(l=l, r2=r2, q=EXAMPLE_Q)


@pytest.fixture
def example_q():
    return EXAMPLE_NON_STRAGGLERS


def instance_grid(k_values, m: int = 1, columns_per_server: int = 3):
    """Every (K, mu, q) with mu in {1/K, ..., 1} and q in [ceil(1/mu), K]; N = 3q."""
    for K in k_values:
        for numerator in range(1, K + 1):
            mu = Fraction(numerator, K)
            full = SystemParams(K=K, q=K, mu=mu, m=m, N=K)
            for q in range(full.q_min, K + 1):
                yield SystemParams(K=K, q=q, mu=mu, m=m, N=columns_per_server * q)


@pytest.fixture(scope="session")
def small_grid():
    return list(instance_grid(range(4, 9)))


@pytest.fixture(scope="session")
def narrow_grid():
    """Same grid with one column of Y per non-straggler, for the end-to-end sweep."""
    return list(instance_grid(range(4, 9), columns_per_server=1))
