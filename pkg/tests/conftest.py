import numpy as np
import pytest

from lqg_infodesign.core import GameSpec, benchmark_h, benchmark_sigma


def random_spd(rng, n, floor=0.1):
    A = rng.standard_normal((n, n))
    return A @ A.T + floor * np.eye(n)


def random_invertible(rng, n):
    while True:
        H = rng.standard_normal((n, n)) + 2 * np.eye(n)
        if np.linalg.cond(H) < 1e3:
            return H


def random_sym_invertible(rng, n):
    while True:
        A = rng.standard_normal((n, n))
        H = 0.5 * (A + A.T) + 3 * np.eye(n)
        if np.linalg.cond(H) < 1e3:
            return H


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def benchmark_game():
    n = 4
    eps = np.full((n, n), 0.001)
    np.fill_diagonal(eps, 0.03)
    return GameSpec(benchmark_h(), benchmark_sigma(), eps=eps)
