import random

import pytest

from freelat.lattice import GramLattice


def random_pd_gram(rank, rng, entry_bound=10):
    """Rejection-sample a symmetric positive-definite integer Gram matrix
    with entries in [-entry_bound, entry_bound]."""
    while True:
        g = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            g[i][i] = rng.randint(1, entry_bound)
            for j in range(i + 1, rank):
                g[i][j] = g[j][i] = rng.randint(-entry_bound, entry_bound)
        try:
            return GramLattice.from_rows(g)
        except Exception:
            continue


def random_point(rng, n=2, coord_bound=20):
    from freelat.projective import normalize

    while True:
        v = [rng.randint(-coord_bound, coord_bound) for _ in range(n + 1)]
        if any(v):
            return normalize(v)


@pytest.fixture
def rng():
    return random.Random(0xF5EE)
