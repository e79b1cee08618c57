"""Shared fixtures and independent dense oracles used across the suite."""

import numpy as np
import pytest

from turbogp import GridSpec, KernelSpec, build_kernel_table


@pytest.fixture
def grid8():
    return GridSpec(8)


@pytest.fixture
def grid16():
    return GridSpec(16)


@pytest.fixture
def grid64():
    return GridSpec(64)


@pytest.fixture
def cht_spec():
    return KernelSpec.cht(1.5)


@pytest.fixture
def cht_table16(grid16, cht_spec):
    return build_kernel_table(cht_spec, grid16)


def dense_prior_covariance(table):
    """Full covariance matrix over every grid point, by table lookup."""
    n = table.grid.n
    idx = np.arange(n * n)
    aa, bb = idx // n, idx % n
    da = (aa[:, None] - aa[None, :]) % n
    db = (bb[:, None] - bb[None, :]) % n
    return table.values[da, db]


def dense_condition(table, locations, values, noise_variance):
    """Brute-force GP conditioning via the full prior covariance matrix.

    Returns (posterior mean over the grid, posterior covariance matrix).
    """
    n = table.grid.n
    sigma = dense_prior_covariance(table)
    locs = np.asarray(locations, dtype=np.int64).reshape(-1, 2)
    x = locs[:, 0] * n + locs[:, 1]
    if len(x) == 0:
        return np.zeros(n * n), sigma
    gram = sigma[np.ix_(x, x)] + noise_variance * np.eye(len(x))
    solve = np.linalg.solve
    mean = sigma[:, x] @ solve(gram, np.asarray(values, dtype=np.float64))
    cov = sigma - sigma[:, x] @ solve(gram, sigma[x, :])
    return mean, cov


def dense_greedy(table, obs_locations, noise_variance, candidates, count):
    """Exhaustive greedy placement via dense conditioning at every step."""
    n = table.grid.n
    cands = np.asarray(candidates, dtype=np.int64).reshape(-1, 2)
    chosen = [tuple(map(int, p)) for p in np.asarray(obs_locations).reshape(-1, 2)]
    picked = []
    available = np.ones(len(cands), dtype=bool)
    for _ in range(count):
        _, cov = dense_condition(
            table, chosen, np.zeros(len(chosen)), noise_variance
        )
        diag = np.diag(cov)
        var = diag[cands[:, 0] * n + cands[:, 1]]
        masked = np.where(available, var, -np.inf)
        best = np.flatnonzero(masked == masked.max())
        linear = cands[best, 0] * n + cands[best, 1]
        pick = int(best[np.argmin(linear)])
        point = (int(cands[pick, 0]), int(cands[pick, 1]))
        picked.append(point)
        chosen.append(point)
        available[pick] = False
    return picked
