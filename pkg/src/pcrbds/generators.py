"""Seeded random instance families for tests, benchmarks and ``pcrbds gen``."""

from __future__ import annotations

import math
import random

from .graphs import ConnGraph, Instance, RedBlueGraph, ResourceLimitError, is_kdd_free

FAMILIES = ("random-bipartite", "matching", "grid-conn", "tree-conn", "clique-conn")


def random_tree(n: int, rng: random.Random) -> ConnGraph:
    return ConnGraph.from_edges(n, [(rng.randrange(i), i) for i in range(1, n)])


def random_connected(n: int, rng: random.Random, extra: float = 0.3) -> ConnGraph:
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra:
                edges.add((u, v))
    return ConnGraph.from_edges(n, edges)


def random_graph(n: int, p: float, rng: random.Random) -> ConnGraph:
    return ConnGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def grid(n: int) -> ConnGraph:
    cols = max(1, math.ceil(math.sqrt(n)))
    edges = []
    for v in range(n):
        if (v + 1) % cols and v + 1 < n:
            edges.append((v, v + 1))
        if v + cols < n:
            edges.append((v, v + cols))
    return ConnGraph.from_edges(n, edges)


def random_cov(nr: int, nb: int, max_red_degree: int, rng: random.Random) -> RedBlueGraph:
    top = max(0, min(max_red_degree, nb))
    adj = [rng.sample(range(nb), rng.randint(min(1, top), top)) for _ in range(nr)]
    return RedBlueGraph.from_red_adj(adj, nb)


def generate(family: str, nr: int, nb: int, k: int | None = None, t: int = 1, max_red_degree: int = 3,
             d_free: int | None = None, seed: int = 0, max_resamples: int = 1000) -> tuple[Instance, dict]:
    """One instance from ``family``; identical arguments give identical output.

    With ``d_free`` the coverage graph is resampled until it is
    K_{d,d}-free, raising :class:`ResourceLimitError` after ``max_resamples``.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    rng = random.Random(seed)
    k = min(2, nr) if k is None else k
    if family == "random-bipartite":
        conn = random_connected(nr, rng)
    elif family == "matching":
        conn = ConnGraph.path(nr)
    elif family == "grid-conn":
        conn = grid(nr)
    elif family == "tree-conn":
        conn = random_tree(nr, rng)
    else:
        conn = ConnGraph.clique(nr)
    for _ in range(max_resamples):
        if family == "matching":
            cov = RedBlueGraph.from_edges(nr, nb, [(i, i) for i in range(min(nr, nb))])
        else:
            cov = random_cov(nr, nb, max_red_degree, rng)
        if d_free is None or is_kdd_free(cov, d_free):
            break
    else:
        raise ResourceLimitError(f"no K_{d_free},{d_free}-free sample within {max_resamples} attempts")
    meta = {"family": family, "seed": seed}
    if d_free is not None:
        meta["d_hint"] = d_free
    return Instance(conn, cov, k, t), meta
