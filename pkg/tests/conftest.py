import random

import pytest

from pcrbds.graphs import ConnGraph, Instance, RedBlueGraph
from pcrbds.generators import random_connected

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture
def i1():
    # conn path 0-1-2, red_adj = [{0,1},{1,2},{2,3}], k=2, t=3
    return Instance(ConnGraph.path(3), RedBlueGraph.from_red_adj([[0, 1], [1, 2], [2, 3]], 4), 2, 3)


def small_instance(seed, max_red=8, max_blue=6, max_k=3, max_t=3, conn_p=None):
    """Unstructured random instance; connectivity may be disconnected."""
    rng = random.Random(seed)
    nr = rng.randint(1, max_red)
    nb = rng.randint(1, max_blue)
    p = rng.choice([0.2, 0.4, 0.7]) if conn_p is None else conn_p
    conn = ConnGraph.from_edges(nr, [(u, v) for u in range(nr) for v in range(u + 1, nr) if rng.random() < p])
    adj = [[b for b in range(nb) if rng.random() < 0.35] for _ in range(nr)]
    cov = RedBlueGraph.from_red_adj(adj, nb)
    return Instance(conn, cov, rng.randint(0, min(max_k, nr)), rng.randint(0, max_t))


def pair_block_instance(rng, nr, k, private=(4, 12), shared=(0, 1), pair_p=0.4, conn_extra=0.3):
    """Coverage with blues of degree <= 2.

    Every red owns a private block; chosen pairs of reds share a block of
    ``shared`` blues. With at most one shared blue per pair this is
    K_{2,2}-free; larger pair blocks are still K_{3,3}-free.
    """
    adj = [[] for _ in range(nr)]
    nb = 0
    for r in range(nr):
        size = rng.randint(*private)
        adj[r] += range(nb, nb + size)
        nb += size
    for u in range(nr):
        for v in range(u + 1, nr):
            if rng.random() < pair_p:
                size = rng.randint(*shared)
                adj[u] += range(nb, nb + size)
                adj[v] += range(nb, nb + size)
                nb += size
    conn = random_connected(nr, rng, conn_extra)
    return Instance(conn, RedBlueGraph.from_red_adj(adj, nb), k, 0)


def regime_instance(seed, eps_small_bound=None):
    """K_{2,2}-free instance from one of three size regimes, with t = 0.

    Regime ``seed % 3``: 0 keeps blocks tiny so targets stay in the exact
    branch; 1 (k=2) and 2 (k=3) use large private blocks so the best
    coverage lands in the approximation branches.
    """
    rng = random.Random(seed)
    regime = seed % 3
    nr = rng.randint(4, 9)
    if regime == 0:
        k = rng.randint(1, 3)
        return pair_block_instance(rng, nr, k, private=(0, 1), pair_p=0.3), regime
    if regime == 1:
        return pair_block_instance(rng, nr, 2, private=(30, 45)), regime
    nr = min(nr, 7)
    return pair_block_instance(rng, nr, 3, private=(75, 95)), regime


def random_cov_instance(rng, nr, nb, density, k, t):
    conn = random_connected(nr, rng, 0.3)
    adj = [[b for b in range(nb) if rng.random() < density] for _ in range(nr)]
    return Instance(conn, RedBlueGraph.from_red_adj(adj, nb), k, t)
