"""(1+eps, 1) approximation: full coverage, size at most ``k + max(1, ceil(eps k))``.

Any connected solution is covered by few radius-``r`` balls around a small
seed set (tree cover). For every seed set the search is confined to that
ball and proceeds by a bounded branching on high-degree reds, driven by a
Steiner EPAS call that forces the seed into its answer.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from fractions import Fraction
from typing import Iterable

from .epas import steiner_epas_solve
from .exact import exact_solve_by_t
from .graphs import (ConnGraph, Infeasible, InfeasibleReason, Instance, InstanceError,
                     InternalConsistencyError, RedBlueGraph, ResourceLimitError, Solution, ball,
                     is_connected_in, shortest_path)
from .validation import SolverConfig, check_d, check_epsilon, warn_if_not_kdd_free


def _is_tree(g: ConnGraph) -> bool:
    return g.vertex_count >= 1 and g.edge_count == g.vertex_count - 1 and is_connected_in(g, range(g.vertex_count))


def tree_cover(tree: ConnGraph, q: int) -> frozenset[int]:
    """Vertex set whose radius-``q`` balls cover ``tree``, of size <= ceil(n/(q+1)).

    Roots the tree at vertex 0. While the deepest vertex is farther than
    ``q`` from the root, takes its ancestor exactly ``q`` levels up and cuts
    off that ancestor's subtree; finally takes the root.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if not _is_tree(tree):
        raise InstanceError("tree_cover needs a tree (connected, |E| = |V| - 1)")
    parent = {0: None}
    depth = {0: 0}
    order = [0]
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in tree.adjacency[u]:
            if w not in parent:
                parent[w] = u
                depth[w] = depth[u] + 1
                order.append(w)
                queue.append(w)
    children = {v: [] for v in order}
    for v in order[1:]:
        children[parent[v]].append(v)
    alive = set(order)
    cover = []
    while True:
        deepest = max(alive, key=lambda v: (depth[v], -v))
        if depth[deepest] <= q:
            cover.append(0)
            break
        x = deepest
        for _ in range(q):
            x = parent[x]
        cover.append(x)
        stack = [x]
        while stack:
            u = stack.pop()
            alive.discard(u)
            stack.extend(c for c in children[u] if c in alive)
    return frozenset(cover)


def spanning_tree(conn: ConnGraph, S: Iterable[int]) -> tuple[ConnGraph, list[int]]:
    """BFS spanning tree of ``conn[S]`` relabelled to ``0..|S|-1``, plus labels."""
    sub, labels = conn.induced(S)
    if sub.vertex_count == 0:
        return sub, labels
    seen = {0}
    edges = []
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in sub.adjacency[u]:
            if w not in seen:
                seen.add(w)
                edges.append((u, w))
                queue.append(w)
    if len(seen) != sub.vertex_count:
        raise InstanceError("vertex set is not connected")
    return ConnGraph.from_edges(sub.vertex_count, edges), labels


def branching_width(k: int, d: int) -> int:
    """Number of highest-degree reds to branch on: ``k (d-1) k^(2(d-1)) + 1``."""
    return k * (d - 1) * k ** (2 * (d - 1)) + 1


def _host(inst: Instance, reds: Iterable[int]) -> tuple[Instance, list[int]]:
    """Restrict ``inst`` to ``reds`` and their blue neighbourhood, relabelled."""
    conn, labels = inst.conn.induced(reds)
    blues = sorted({b for r in labels for b in inst.cov.red_adj[r]})
    bindex = {b: i for i, b in enumerate(blues)}
    cov = RedBlueGraph(len(labels), len(blues), tuple(tuple(bindex[b] for b in inst.cov.red_adj[r]) for r in labels))
    return Instance(conn, cov, min(inst.k, len(labels)), inst.t), labels


def _smallest(sets):
    return min(sets, key=lambda S: (len(S), sorted(S)), default=None)


def pas_inner(host: Instance, X: Iterable[int], d: int, config: SolverConfig = SolverConfig(),
              _cache: dict | None = None) -> frozenset[int] | None:
    """Connected ``S`` containing ``X`` covering ``host.t``, or None.

    ``host.conn`` must be connected. The answer has at most ``host.k + p``
    vertices, ``p`` being the largest distance from a host red to ``X``.
    """
    X = frozenset(X)
    cache = {} if _cache is None else _cache
    if X in cache:
        return cache[X]
    k, t = host.k, host.t

    def done(S):
        if S is not None and not (X <= S and is_connected_in(host.conn, S)):
            raise InternalConsistencyError(f"inner search returned {sorted(S)} for X={sorted(X)}")
        cache[X] = S
        return S

    if len(X) >= k:
        ok = len(X) == k and is_connected_in(host.conn, X) and host.cov.coverage(X) >= t
        return done(X if ok else None)
    approx = steiner_epas_solve(host, Fraction(1, 4 * k), d, config, terminals=X)
    if isinstance(approx, Infeasible):
        return done(None)
    S0 = frozenset(approx.vertices)
    if approx.coverage >= t:
        return done(S0)
    base = host.cov.set_mask(S0)
    H = sorted(range(host.red_count), key=lambda v: (-len(host.cov.red_adj[v]), v))[:branching_width(k, d)]
    for h in sorted(H):
        if (base | host.cov.mask(h)).bit_count() >= t:
            path = shortest_path(host.conn, X, h)
            return done(S0 | frozenset(path))
    found = []
    for h in sorted(H):
        if h in X:
            continue
        S = pas_inner(host, X | {h}, d, config, cache)
        if S is not None:
            found.append(S)
    return done(_smallest(found))


def pas_outer(inst: Instance, eps, d, config: SolverConfig = SolverConfig()) -> Solution | Infeasible:
    """Connected ``S`` with ``|S| <= k + max(1, ceil(eps k))`` covering ``t``, or Infeasible.

    Targets below ``4 k^2 d`` are solved exactly.
    """
    eps = check_epsilon(eps)
    d = check_d(d)
    if inst.terminals:
        raise InstanceError("the size-approximation solver does not take terminals")
    k, t = inst.k, inst.t
    if t == 0 or t < 4 * k * k * d:
        return exact_solve_by_t(inst, config)
    if k == 0:
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)
    warn_if_not_kdd_free(inst, d, config.kdd_limit)
    r = max(1, math.ceil(eps * k))
    c = min(math.ceil(1 / eps), k, inst.red_count)
    n_seeds = sum(math.comb(inst.red_count, i) for i in range(1, c + 1))
    if n_seeds > config.max_seeds:
        raise ResourceLimitError(f"{n_seeds} seed sets exceeds limit {config.max_seeds}")
    found = []
    for size in range(1, c + 1):
        for C in itertools.combinations(range(inst.red_count), size):
            region = ball(inst.conn, C, r)
            if not is_connected_in(inst.conn, region):
                continue
            host, labels = _host(inst, region)
            index = {v: i for i, v in enumerate(labels)}
            S = pas_inner(host, [index[v] for v in C], d, config)
            if S is not None:
                found.append(frozenset(labels[v] for v in S))
    best = _smallest(found)
    if best is None:
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)
    sol = inst.solution(best)
    if not (sol.connected and sol.coverage >= t and sol.size <= k + r):
        raise InternalConsistencyError(f"PAS output {sol} violates its guarantee")
    return sol
