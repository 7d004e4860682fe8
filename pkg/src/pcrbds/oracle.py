"""Brute-force reference solvers.

These share nothing with the FPT/approximation solvers except the core
types in :mod:`pcrbds.graphs`. They refuse inputs beyond
:class:`OracleLimits` rather than running for hours.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .graphs import (ConnGraph, Infeasible, InfeasibleReason, Instance, OutTree,
                     ResourceLimitError, Solution)


@dataclass(frozen=True)
class OracleLimits:
    max_red: int = 24
    max_subset_size: int = 8
    max_digraph_vertices: int = 16
    max_sets: int = 2_000_000

    def __post_init__(self):
        if min(self.max_red, self.max_subset_size, self.max_digraph_vertices, self.max_sets) <= 0:
            raise ValueError("oracle limits must be positive")


DEFAULT_LIMITS = OracleLimits()


def _guard(n: int, size: int, limits: OracleLimits) -> None:
    if n > limits.max_red:
        raise ResourceLimitError(f"oracle refuses {n} red vertices (limit {limits.max_red})")
    if min(size, n) > limits.max_subset_size:
        raise ResourceLimitError(f"oracle refuses subset size {size} (limit {limits.max_subset_size})")


def connected_subsets(conn: ConnGraph, max_size: int) -> Iterator[frozenset[int]]:
    """Every non-empty connected vertex set of size <= ``max_size``, once each.

    Sets are grown from their smallest vertex; a vertex joins the extension
    frontier only when it is first seen, which makes the generation canonical.
    """
    adj = conn.adjacency

    def grow(sub: frozenset[int], ext: list[int], seen: frozenset[int], root: int):
        yield sub
        if len(sub) == max_size:
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            new = [u for u in adj[w] if u > root and u not in seen]
            yield from grow(sub | {w}, ext + new, seen | set(new), root)

    for v in range(conn.vertex_count):
        if max_size < 1:
            return
        start = [u for u in adj[v] if u > v]
        yield from grow(frozenset([v]), start, frozenset(start) | {v}, v)


def connected_subsets_powerset(conn: ConnGraph, max_size: int) -> Iterator[frozenset[int]]:
    """Same family as :func:`connected_subsets`, by filtering the powerset."""
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(range(conn.vertex_count), size):
            if _connected(conn, combo):
                yield frozenset(combo)


def _connected(conn: ConnGraph, S: Sequence[int]) -> bool:
    S = set(S)
    if len(S) <= 1:
        return True
    todo = [min(S)]
    reached = {todo[0]}
    while todo:
        u = todo.pop()
        for w in conn.adjacency[u]:
            if w in S and w not in reached:
                reached.add(w)
                todo.append(w)
    return reached == S


def _candidates(inst: Instance, k: int, limits: OracleLimits) -> Iterator[frozenset[int]]:
    _guard(inst.red_count, k, limits)
    if not inst.terminals:
        yield frozenset()
    for S in connected_subsets(inst.conn, k):
        if inst.terminals <= S:
            yield S


def _key(S: Iterable[int]):
    S = sorted(S)
    return (len(S), S)


def _cov(inst: Instance, S: Iterable[int]) -> int:
    out = set()
    for v in S:
        out.update(inst.cov.red_adj[v])
    return len(out)


def brute_force_best_coverage(inst: Instance, k: int | None = None,
                              limits: OracleLimits = DEFAULT_LIMITS) -> tuple[int, frozenset[int]] | None:
    """Maximum coverage over connected ``S`` with ``|S| <= k`` and terminals in ``S``.

    Ties prefer smaller, then lexicographically smaller sets. ``None`` when no
    candidate set exists (terminals cannot be connected within ``k``).
    """
    k = inst.k if k is None else k
    best = None
    for S in _candidates(inst, k, limits):
        c = _cov(inst, S)
        if best is None or c > best[0] or (c == best[0] and _key(S) < _key(best[1])):
            best = (c, S)
    return best


def brute_force_decide(inst: Instance, limits: OracleLimits = DEFAULT_LIMITS) -> Solution | Infeasible:
    if len(inst.terminals) > inst.k:
        return Infeasible(InfeasibleReason.TERMINALS_OVER_BUDGET)
    if inst.t == 0 and not inst.terminals:
        return Solution((), 0, True)
    best = brute_force_best_coverage(inst, inst.k, limits)
    if best is None or best[0] < inst.t:
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)
    return Solution(tuple(sorted(best[1])), best[0], True)


def brute_force_min_size(inst: Instance, t: int | None = None,
                         limits: OracleLimits = DEFAULT_LIMITS) -> tuple[int, frozenset[int]] | None:
    """Smallest connected ``S`` (containing the terminals) covering ``>= t``."""
    t = inst.t if t is None else t
    best = None
    for S in _candidates(inst, min(inst.red_count, limits.max_subset_size), limits):
        if _cov(inst, S) >= t and (best is None or _key(S) < _key(best)):
            best = S
    if best is None:
        if inst.red_count > limits.max_subset_size:
            raise ResourceLimitError("no witness within the oracle's subset-size limit")
        return None
    return len(best), best


def brute_force_max_weight_tree(conn: ConnGraph, w: Mapping[int, int] | Sequence[int], k: int,
                                terminals: Iterable[int] = (),
                                limits: OracleLimits = DEFAULT_LIMITS) -> frozenset[int] | None:
    """Max total weight connected set of size <= ``k`` containing ``terminals``."""
    terminals = frozenset(terminals)
    _guard(conn.vertex_count, k, limits)
    weight = (lambda v: w[v])
    pool = [frozenset()] if not terminals else []
    best = None
    for S in itertools.chain(pool, connected_subsets(conn, k)):
        if not terminals <= S:
            continue
        score = sum(weight(v) for v in S)
        if best is None or score > best[0] or (score == best[0] and _key(S) < _key(best[1])):
            best = (score, S)
    return None if best is None else best[1]


def brute_force_steiner_out_tree(n: int, arcs: Iterable[Sequence[int]], T: Iterable[int], p: int,
                                 roots: Iterable[int] | None = None,
                                 limits: OracleLimits = DEFAULT_LIMITS) -> OutTree | None:
    """Minimum-vertex out-tree containing ``T`` with at most ``p`` vertices.

    Enumerates vertex subsets by increasing size and accepts the first one in
    which some admissible root reaches every vertex of the subset.
    """
    if n > limits.max_digraph_vertices:
        raise ResourceLimitError(f"oracle refuses {n}-vertex digraph (limit {limits.max_digraph_vertices})")
    T = frozenset(T)
    succ = [set() for _ in range(n)]
    for u, v in arcs:
        if u != v:
            succ[u].add(v)
    allowed_roots = set(range(n)) if roots is None else set(roots)
    others = [v for v in range(n) if v not in T]
    for size in range(max(1, len(T)), min(p, n) + 1):
        extra = size - len(T)
        if extra < 0 or extra > len(others):
            continue
        for add in itertools.combinations(others, extra):
            V = T | set(add)
            for r in sorted(V & allowed_roots):
                parent = {}
                frontier = [r]
                while frontier:
                    nxt = []
                    for u in frontier:
                        for x in sorted(succ[u]):
                            if x in V and x != r and x not in parent:
                                parent[x] = u
                                nxt.append(x)
                    frontier = nxt
                if len(parent) == len(V) - 1:
                    return OutTree(r, parent)
    return None
