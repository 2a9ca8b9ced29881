import itertools
import random

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gbcrypt.algebra.field import PrimeField
from gbcrypt.mpoly.poly import PolyRing

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def brute_zeros(polys, q, n):
    """All points of F_q^n where every polynomial vanishes, vectorised over the grid."""
    grid = np.indices((q,) * n, dtype=np.int64).reshape(n, -1)
    alive = np.ones(grid.shape[1], dtype=bool)
    for f in polys:
        acc = np.zeros(grid.shape[1], dtype=np.int64)
        for mono, c in f.terms.items():
            t = np.full(grid.shape[1], c, dtype=np.int64)
            for i, e in enumerate(mono):
                for _ in range(e):
                    t = t * grid[i] % q
            acc = (acc + t) % q
        alive &= acc == 0
    return sorted(tuple(int(v) for v in grid[:, j]) for j in np.flatnonzero(alive))


def scan_roots(coeffs, q):
    xs = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * xs + c) % q
    return sorted(int(v) for v in np.flatnonzero(acc == 0))


def special_shape_system(q: int, n: int, rng: random.Random):
    """n quadratics with LM x_i^2, x_i^2 + quadratic terms in later variables + affine part with x_{n-1-i}."""
    R = PolyRing(PrimeField(q), [f"x{i}" for i in range(1, n + 1)])
    g = R.gens
    G = []
    for i in range(n):
        f = g[i] * g[i]
        for j, k in itertools.combinations_with_replacement(range(i, n), 2):
            if (j, k) != (i, i) and rng.random() < 0.5:
                f = f + g[j] * g[k] * rng.randrange(q)
        f = f + g[n - 1 - i] * rng.randrange(1, q)
        for j in range(n):
            if rng.random() < 0.5:
                f = f + g[j] * rng.randrange(q)
        G.append(f + rng.randrange(q))
    return R, G


@pytest.fixture
def F7():
    return PrimeField(7)


@pytest.fixture
def F7741():
    return PrimeField(7741)
