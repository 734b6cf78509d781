import math

import pytest

import qvplab as q

THETA_223 = 2.23 * math.pi


class BuildCache:
    """Shared conditional-state builds, keyed by (n, theta/pi)."""

    def __init__(self):
        self._cache = {}

    def weyl(self, n, theta_pi=2.23):
        key = (n, theta_pi)
        if key not in self._cache:
            theta = theta_pi * math.pi
            space = q.suggest_weyl_grid(n, theta)
            pair = q.build_weyl_pair(space, theta)
            params = q.qvp_params(pair, n, 1.0)
            seed = q.default_seed(pair, params)
            self._cache[key] = (pair, params, seed, q.build_qvp(pair, params, seed))
        return self._cache[key]


@pytest.fixture(scope="session")
def builds():
    return BuildCache()


@pytest.fixture(scope="session")
def grid64():
    return q.make_grid(1024, 64.0)


@pytest.fixture(scope="session")
def weyl_pair_pi(grid64):
    return q.build_weyl_pair(grid64, math.pi)
