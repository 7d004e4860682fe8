"""Exact solver parameterized by the coverage target ``t``.

Blue vertices are coloured with ``t`` colours; each colouring turns the
instance into a relaxed directed Steiner out-tree problem whose terminals
are one sink per colour class. A colouring that is injective on ``t``
covered blues of some solution makes the digraph contain a small out-tree,
and every small out-tree yields a solution. The Steiner problem itself is
solved by a Dreyfus-Wagner style dynamic program over terminal subsets.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .graphs import (Digraph, Infeasible, InfeasibleReason, Instance, InternalConsistencyError,
                     OutTree, RedBlueGraph, ResourceLimitError, Solution, verify_solution)
from .validation import SolverConfig

INF = math.inf


@dataclass(frozen=True)
class RdsotInstance:
    """Derived digraph: reds, then blues, then colour sinks, then pendants.

    ``p`` is the vertex budget as stated for the construction. ``tight_p``
    is the budget actually decided: a minimal out-tree holds exactly ``t``
    blues, ``t`` colour sinks and one pendant per terminal, so anything above
    ``k + 2t + |T|`` vertices would need more than ``k`` reds.
    """

    digraph: Digraph
    terminals: frozenset[int]
    p: int
    red_count: int
    blue_count: int
    t: int
    pendant_of: dict

    @property
    def tight_p(self) -> int:
        return self.p - len(self.pendant_of)

    def color_sink(self, i: int) -> int:
        """Vertex id of the sink for colour ``i`` (1-based)."""
        return self.red_count + self.blue_count + i - 1

    def kind(self, v: int) -> str:
        if v < self.red_count:
            return "red"
        if v < self.red_count + self.blue_count:
            return "blue"
        if v < self.red_count + self.blue_count + self.t:
            return "color"
        return "pendant"

    def arc_type_counts(self) -> dict[int, int]:
        counts = {1: 0, 2: 0, 3: 0, 4: 0}
        for u, v in self.digraph.arcs():
            ku, kv = self.kind(u), self.kind(v)
            if ku == "red" and kv == "red":
                counts[1] += 1
            elif ku == "red" and kv == "blue":
                counts[2] += 1
            elif ku == "blue" and kv == "color":
                counts[3] += 1
            else:
                counts[4] += 1
        return counts


def build_rdsot(inst: Instance, coloring: Sequence[int]) -> RdsotInstance:
    """Build the out-tree instance for a blue colouring with values in ``1..t``."""
    t = inst.t
    if t < 1:
        raise ValueError("t must be >= 1; t = 0 is decided without a reduction")
    if len(coloring) != inst.blue_count:
        raise ValueError("coloring must assign a colour to every blue vertex")
    R, B = inst.red_count, inst.blue_count
    arcs = []
    for u, v in inst.conn.edges():
        arcs += [(u, v), (v, u)]
    for r, b in inst.cov.edges():
        arcs.append((r, R + b))
    for b, c in enumerate(coloring):
        if not 1 <= c <= t:
            raise ValueError(f"colour {c} of blue {b} outside 1..{t}")
        arcs.append((R + b, R + B + c - 1))
    terminals = {R + B + i for i in range(t)}
    pendant_of = {}
    n = R + B + t
    for r in sorted(inst.terminals):
        arcs.append((r, n))
        terminals.add(n)
        pendant_of[n] = r
        n += 1
    p = inst.k + 2 * t + 2 * len(inst.terminals)
    return RdsotInstance(Digraph.from_arcs(n, arcs), frozenset(terminals), p, R, B, t, pendant_of)


def solve_steiner_out_tree(digraph: Digraph, T: Iterable[int], p: int, roots: Iterable[int] | None = None,
                           max_terminals: int = 20) -> OutTree | None:
    """Minimum-vertex out-tree containing ``T``, or ``None`` if it exceeds ``p``.

    ``cost[X][v]`` is the fewest vertices of an out-tree rooted at ``v`` that
    contains terminal subset ``X``. Subtrees merge at a shared root (``-1``
    for the double-counted root) and extend backwards along arcs. ``roots``
    restricts the admissible roots; ties go to the smallest root.
    """
    T = sorted(set(T))
    m = len(T)
    if m > max_terminals:
        raise ResourceLimitError(f"{m} terminals exceeds DP limit {max_terminals}")
    n = digraph.vertex_count
    root_pool = sorted(range(n) if roots is None else set(roots))
    if not root_pool:
        return None
    if m == 0:
        return OutTree(root_pool[0], {}) if p >= 1 else None
    pred = digraph.predecessors()
    full = (1 << m) - 1
    cost: list[list[float]] = [None] * (full + 1)  # type: ignore[list-item]
    back: list[list] = [None] * (full + 1)  # type: ignore[list-item]
    for X in range(1, full + 1):
        c = [INF] * n
        b = [None] * n
        if X & (X - 1) == 0:
            v = T[X.bit_length() - 1]
            c[v] = 1
            b[v] = ("leaf",)
        else:
            low = X & -X
            sub = (X - 1) & X
            while sub:
                # each unordered split once: the part holding the lowest bit
                if sub & low:
                    cs, co = cost[sub], cost[X ^ sub]
                    for v in range(n):
                        val = cs[v] + co[v] - 1
                        if val < c[v]:
                            c[v] = val
                            b[v] = ("merge", sub)
                sub = (sub - 1) & X
        heap = [(c[v], v) for v in range(n) if c[v] < INF]
        heapq.heapify(heap)
        while heap:
            cu, u = heapq.heappop(heap)
            if cu > c[u] or cu >= p:
                continue
            for v in pred[u]:
                if cu + 1 < c[v]:
                    c[v] = cu + 1
                    b[v] = ("arc", u)
                    heapq.heappush(heap, (cu + 1, v))
        cost[X], back[X] = c, b
    best = min(root_pool, key=lambda v: (cost[full][v], v))
    if cost[full][best] > p:
        return None
    arcs: set[tuple[int, int]] = set()
    stack = [(full, best)]
    while stack:
        X, v = stack.pop()
        step = back[X][v]
        if step[0] == "arc":
            arcs.add((v, step[1]))
            stack.append((X, step[1]))
        elif step[0] == "merge":
            stack += [(step[1], v), (X ^ step[1], v)]
    # merged subtrees may overlap; re-derive a tree over the union of arcs
    succ: dict[int, list[int]] = {}
    for u, w in sorted(arcs):
        succ.setdefault(u, []).append(w)
    parent = {}
    frontier = [best]
    while frontier:
        nxt = []
        for u in frontier:
            for w in succ.get(u, ()):
                if w != best and w not in parent:
                    parent[w] = u
                    nxt.append(w)
        frontier = nxt
    tree = OutTree(best, parent)
    if not set(T) <= tree.vertices or len(tree) > cost[full][best]:
        raise InternalConsistencyError("out-tree reconstruction lost terminals")
    return tree


def extract_solution(tree: OutTree, inst: Instance, rdsot: RdsotInstance | None = None) -> frozenset[int]:
    """Drop sinks, pendants and blues from the tree; re-verify the red remainder."""
    S = frozenset(v for v in tree.vertices if v < inst.red_count)
    report = verify_solution(inst, S)
    if not report.ok:
        raise InternalConsistencyError(f"extracted set {sorted(S)} fails verification: {report}")
    return S


def _terminal_tree(inst: Instance, config: SolverConfig) -> Solution | Infeasible:
    """t = 0: the smallest connected set spanning the terminals, if it fits in k."""
    if not inst.terminals:
        return Solution((), 0, True)
    arcs = [(u, v) for u, v in inst.conn.edges()] + [(v, u) for u, v in inst.conn.edges()]
    g = Digraph.from_arcs(inst.red_count, arcs)
    tree = solve_steiner_out_tree(g, inst.terminals, inst.k, max_terminals=config.max_terminals)
    if tree is None:
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)
    return inst.solution(tree.vertices)


def rainbow_colorings(n: int, t: int) -> Iterator[list[int]]:
    """One colouring of ``n`` items per ``t``-subset, rainbow on that subset.

    Subset ``Q`` (lexicographic order) gets colours ``1..t`` in order and
    every other item gets colour 1. Any ``t`` covered blues of a solution
    form some ``Q``, so this family is complete while only holding
    ``C(n, t)`` colourings.
    """
    for Q in itertools.combinations(range(n), t):
        coloring = [1] * n
        for c, b in enumerate(Q, start=1):
            coloring[b] = c
        yield coloring


def _try_coloring(inst: Instance, coloring: Sequence[int], config: SolverConfig) -> frozenset[int] | None:
    rd = build_rdsot(inst, coloring)
    tree = solve_steiner_out_tree(rd.digraph, rd.terminals, rd.tight_p, roots=range(inst.red_count),
                                  max_terminals=config.max_terminals)
    if tree is None:
        return None
    return extract_solution(tree, inst, rd)


def _truncate_twins(inst: Instance) -> Instance:
    """Keep at most ``t`` blues per class of identical red neighbourhoods.

    A set covers a whole twin class or none of it, so capping every class at
    ``t`` members leaves "covers at least t" unchanged. Blues without red
    neighbours are dropped too.
    """
    kept = []
    per_class: dict[tuple, int] = {}
    for b, reds in enumerate(inst.cov.blue_adj):
        if reds and per_class.get(reds, 0) < inst.t:
            per_class[reds] = per_class.get(reds, 0) + 1
            kept.append(b)
    if len(kept) == inst.blue_count:
        return inst
    index = {b: i for i, b in enumerate(kept)}
    adj = tuple(tuple(index[b] for b in nbrs if b in index) for nbrs in inst.cov.red_adj)
    return inst.replace(cov=RedBlueGraph(inst.red_count, len(kept), adj))


def _random_coloring(seed: int, trial: int, blue_count: int, t: int) -> list[int]:
    rng = random.Random(seed ^ trial)
    return [rng.randint(1, t) for _ in range(blue_count)]


def exact_solve_by_t(inst: Instance, config: SolverConfig = SolverConfig()) -> Solution | Infeasible:
    """Decide the instance exactly, returning a witness set when one exists.

    ``config.mode="randomized"`` tries ``config.trials`` independent uniform
    colourings (default ``ceil(e^t)``); a YES-instance is missed by one trial
    with probability at most ``1 - e^-t``. ``"exhaustive"`` runs one colouring per
    ``t``-subset of blues (rainbow on it) and never misses.
    """
    if len(inst.terminals) > inst.k:
        return Infeasible(InfeasibleReason.TERMINALS_OVER_BUDGET)
    if inst.t == 0:
        return _terminal_tree(inst, config)
    if inst.k == 0:
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)
    if inst.t + len(inst.terminals) > config.max_terminals:
        raise ResourceLimitError(f"{inst.t + len(inst.terminals)} DP terminals exceeds {config.max_terminals}")
    original = inst
    inst = _truncate_twins(inst)
    if inst.blue_count < inst.t:
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)

    if config.mode == "exhaustive":
        count = math.comb(inst.blue_count, inst.t)
        if count > config.max_colorings:
            raise ResourceLimitError(f"{count} colourings exceeds limit {config.max_colorings}")
        for coloring in rainbow_colorings(inst.blue_count, inst.t):
            S = _try_coloring(inst, coloring, config)
            if S is not None:
                return original.solution(S)
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)

    trials = config.trial_count(math.exp(inst.t))

    def run(i: int):
        return _try_coloring(inst, _random_coloring(config.seed, i, inst.blue_count, inst.t), config)

    if config.n_jobs == 1:
        for i in range(trials):
            S = run(i)
            if S is not None:
                return original.solution(S)
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)
    # batches keep "first success by trial index" independent of scheduling
    with ThreadPoolExecutor(config.n_jobs) as pool:
        for start in range(0, trials, config.n_jobs):
            for S in pool.map(run, range(start, min(trials, start + config.n_jobs))):
                if S is not None:
                    return original.solution(S)
    return Infeasible(InfeasibleReason.NO_CONNECTED_SET)
