"""Encodings of classical coverage problems as red-blue instances.

Star-mode encodings append the hub ``z`` as the last red vertex, with no
blue neighbours, and raise a positive budget by one for it. Budgets larger than
the number of reds are clamped, since extra budget cannot help.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import ConnGraph, Instance, InstanceError, RedBlueGraph

PlainGraph = ConnGraph


@dataclass(frozen=True)
class SetSystem:
    universe_size: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sets = tuple(tuple(sorted(set(int(x) for x in s))) for s in self.sets)
        for i, s in enumerate(sets):
            for x in s:
                if not 0 <= x < self.universe_size:
                    raise InstanceError(f"element {x} of set {i} outside universe of size {self.universe_size}")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def of(cls, universe_size: int, sets: Iterable[Iterable[int]]) -> "SetSystem":
        return cls(universe_size, tuple(tuple(s) for s in sets))


def _star(n: int) -> ConnGraph:
    return ConnGraph.from_edges(n + 1, [(i, n) for i in range(n)])


def _with_hub(red_adj: Sequence[Sequence[int]], blue_count: int, k: int, t: int) -> Instance:
    n = len(red_adj)
    cov = RedBlueGraph.from_red_adj(list(red_adj) + [()], blue_count)
    # k = 0 stays 0: with budget 1 a lone leaf would be a valid answer
    return Instance(_star(n), cov, min(k + 1, n + 1) if k > 0 else 0, t)


def _closed_neighborhoods(g: ConnGraph) -> list[list[int]]:
    return [sorted({u, *g.adjacency[u]}) for u in range(g.vertex_count)]


def from_max_coverage(ss: SetSystem, k: int, t: int, conn_mode="clique") -> Instance:
    """Reds are the sets, blues the elements.

    ``conn_mode`` is ``"clique"`` (plain max coverage), ``"star"`` (hub ``z``,
    budget ``k + 1``) or a :class:`ConnGraph` on the sets.
    """
    n = len(ss.sets)
    if isinstance(conn_mode, ConnGraph):
        if conn_mode.vertex_count != n:
            raise InstanceError("custom connectivity graph must have one vertex per set")
        return Instance(conn_mode, RedBlueGraph.from_red_adj(ss.sets, ss.universe_size), min(k, n), t)
    if conn_mode == "clique":
        return Instance(ConnGraph.clique(n), RedBlueGraph.from_red_adj(ss.sets, ss.universe_size), min(k, n), t)
    if conn_mode == "star":
        return _with_hub(ss.sets, ss.universe_size, k, t)
    raise ValueError(f"unknown conn_mode {conn_mode!r}")


def from_partial_dominating_set(g: PlainGraph, k: int, t: int, conn_mode: str = "clique") -> Instance:
    """Red copy ``u`` covers the blue copies of the closed neighbourhood ``N[u]``."""
    nbhd = _closed_neighborhoods(g)
    n = g.vertex_count
    if conn_mode == "clique":
        return Instance(ConnGraph.clique(n), RedBlueGraph.from_red_adj(nbhd, n), min(k, n), t)
    if conn_mode == "star":
        return _with_hub(nbhd, n, k, t)
    raise ValueError(f"unknown conn_mode {conn_mode!r}")


def from_budgeted_cds(g: PlainGraph, k: int, t: int) -> Instance:
    """Connectivity is ``g`` itself; coverage of ``S`` equals ``|N_g[S]|``."""
    n = g.vertex_count
    return Instance(g, RedBlueGraph.from_red_adj(_closed_neighborhoods(g), n), min(k, n), t)


def from_partial_vertex_cover(g: PlainGraph, k: int, t: int, conn_mode: str = "clique") -> Instance:
    """Reds are vertices, blues are edges of ``g`` (in ``g.edges()`` order).

    ``"gadget"`` adds a hub ``z`` adjacent to every vertex plus ``m`` pendant
    vertices on ``z``; the result uses ``g + z + pendants`` as connectivity
    graph, with ``k' = k + 1`` and ``t' = m + n + t``. Hub is red ``n``,
    pendants are reds ``n+1..n+m``.
    """
    n = g.vertex_count
    edges = g.edges()
    m = len(edges)
    incidence = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        incidence[u].append(i)
        incidence[v].append(i)
    if conn_mode == "clique":
        return Instance(ConnGraph.clique(n), RedBlueGraph.from_red_adj(incidence, m), min(k, n), t)
    if conn_mode == "star":
        return _with_hub(incidence, m, k, t)
    if conn_mode != "gadget":
        raise ValueError(f"unknown conn_mode {conn_mode!r}")
    z = n
    all_edges = list(edges) + [(v, z) for v in range(n)] + [(z, z + 1 + j) for j in range(m)]
    total = n + 1 + m
    incidence = [[] for _ in range(total)]
    for i, (u, v) in enumerate(all_edges):
        incidence[u].append(i)
        incidence[v].append(i)
    conn = ConnGraph.from_edges(total, all_edges)
    return Instance(conn, RedBlueGraph.from_red_adj(incidence, len(all_edges)), min(k + 1, total), m + n + t)


def from_partial_hitting_set(ss: SetSystem, k: int, t: int) -> Instance:
    """Reds are elements, blues are sets; no connectivity constraint."""
    members = [[] for _ in range(ss.universe_size)]
    for j, s in enumerate(ss.sets):
        for x in s:
            members[x].append(j)
    n = ss.universe_size
    return Instance(ConnGraph.clique(n), RedBlueGraph.from_red_adj(members, len(ss.sets)), min(k, n), t)


def degeneracy_order(g: PlainGraph) -> list[int]:
    """Smallest-last ordering: each vertex has at most ``degeneracy`` later neighbours."""
    degree = {v: len(g.adjacency[v]) for v in range(g.vertex_count)}
    alive = set(degree)
    order = []
    while alive:
        v = min(alive, key=lambda u: (degree[u], u))
        order.append(v)
        alive.remove(v)
        for u in g.adjacency[v]:
            if u in alive:
                degree[u] -= 1
    return order


def interleaved_order_later_degree(g: PlainGraph, order: Sequence[int], cov: RedBlueGraph) -> int:
    """Max later-neighbour count in the order ``v1^R, v1^B, v2^R, v2^B, ...`` of ``cov``.

    ``cov`` must be the closed-neighbourhood double cover of ``g`` (as built
    by :func:`from_partial_dominating_set`).
    """
    pos = {}
    for i, v in enumerate(order):
        pos[("R", v)] = 2 * i
        pos[("B", v)] = 2 * i + 1
    worst = 0
    for r in range(g.vertex_count):
        later = sum(1 for b in cov.red_adj[r] if pos[("B", b)] > pos[("R", r)])
        worst = max(worst, later)
    for b in range(g.vertex_count):
        later = sum(1 for r in cov.blue_adj[b] if r < g.vertex_count and pos[("R", r)] > pos[("B", b)])
        worst = max(worst, later)
    return worst
