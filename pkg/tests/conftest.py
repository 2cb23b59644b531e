"""Shared helpers for the test suite."""

import numpy as np
import pytest

from ringgames import ChainTriple, SpatialParams

# canonical table parameters used throughout the numerical checks
TABLE_P = (1.0, 4 / 25, 4 / 25, 7 / 10)


def as_dense(m) -> np.ndarray:
    return m.toarray() if hasattr(m, "toarray") else np.asarray(m)


def draw_params(rng, n: int) -> SpatialParams:
    # interior draws keep every chain ergodic with probability one
    return SpatialParams(n, tuple(rng.uniform(0.05, 0.95, size=4)))


def random_chain(rng, dim: int, payoffs=(-1, 0, 1)) -> ChainTriple:
    """Dense random ergodic chain with a payoff attached to every transition."""
    p = rng.uniform(0.1, 1.0, size=(dim, dim))
    p /= p.sum(axis=1, keepdims=True)
    w = rng.choice(payoffs, size=(dim, dim)).astype(float)
    return ChainTriple(dim, p, p * w, p * w * w)


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)
