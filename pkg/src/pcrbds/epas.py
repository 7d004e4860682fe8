"""(1, 1-eps) approximation for K_{d,d}-free coverage graphs.

Pipeline per separation colouring: keep the purple connected components of
the conflict graph (pairs of reds with a large common blue neighbourhood)
of size at most ``k``; sparsify the coverage graph so each blue keeps one
edge into each component; weight reds by sparsified degree; pick the
heaviest connected ``<= k`` set. Weights overcount true coverage by less
than ``eps * t`` and never undercount a union of whole components.

All thresholds use exact rational arithmetic.
"""

from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .exact import exact_solve_by_t
from .graphs import (ConnGraph, Infeasible, InfeasibleReason, Instance, InternalConsistencyError,
                     RedBlueGraph, ResourceLimitError, Solution, minimal_kdd_d)
from .validation import SolverConfig, check_d, check_epsilon, warn_if_not_kdd_free

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConflictGraph:
    graph: ConnGraph
    eps: Fraction
    t: int
    k: int

    def threshold(self) -> Fraction:
        return self.eps * self.t / (self.k * self.k)

    def max_degree(self) -> int:
        return max((len(a) for a in self.graph.adjacency), default=0)


@dataclass(frozen=True)
class SeparationColoring:
    red_count: int
    purple: frozenset[int]

    @property
    def green(self) -> frozenset[int]:
        return frozenset(range(self.red_count)) - self.purple


@dataclass(frozen=True)
class SparsifiedGraph:
    cov: RedBlueGraph
    component_of: Mapping[int, int]
    components: tuple[frozenset[int], ...]


def _overlaps(cov: RedBlueGraph, u: int, v: int) -> int:
    return (cov.mask(u) & cov.mask(v)).bit_count()


def build_conflict_graph(inst: Instance, eps) -> ConflictGraph:
    """Join reds ``u, v`` when ``|N(u) & N(v)| >= eps * t / k^2``."""
    eps = check_epsilon(eps)
    if inst.k < 1 or inst.t < 1:
        raise ValueError("conflict graph needs k >= 1 and t >= 1")
    num, den = eps.numerator, eps.denominator
    kk = inst.k * inst.k
    cov = inst.cov
    edges = []
    for u in range(inst.red_count):
        if not cov.red_adj[u]:
            continue
        for v in range(u + 1, inst.red_count):
            if _overlaps(cov, u, v) * kk * den >= num * inst.t:
                edges.append((u, v))
    return ConflictGraph(ConnGraph.from_edges(inst.red_count, edges), eps, inst.t, inst.k)


def conflict_degree_bound(k: int, d: int, eps) -> float:
    """Upper bound ``(d-1) * (e k^2 / eps)^d`` on the conflict graph's max degree."""
    eps = check_epsilon(eps)
    if d < 1 or k < 1:
        raise ValueError("k and d must be >= 1")
    if d == 1:
        return 0.0
    try:
        return (d - 1) * math.pow(math.e * k * k / float(eps), d)
    except OverflowError:
        log.warning("conflict degree bound overflows for k=%d d=%d eps=%s", k, d, eps)
        return math.inf


def gen_colorings(conflict: ConflictGraph, k: int, config: SolverConfig = SolverConfig(),
                  witness: Iterable[int] | None = None) -> Iterator[SeparationColoring]:
    """Purple/green colourings of the reds.

    With ``witness`` set, yields the single colouring that makes the witness
    purple and its other conflict neighbours green. Otherwise ``config.mode``
    picks between all ``2^|R|`` colourings and independent random ones with
    ``P(purple) = 1 / (1 + max conflict degree)``.
    """
    n = conflict.graph.vertex_count
    if witness is not None:
        S = frozenset(witness)
        blocked = {u for v in S for u in conflict.graph.adjacency[v]} - S
        yield SeparationColoring(n, frozenset(range(n)) - blocked)
        return
    if config.mode == "exhaustive":
        if (1 << n) > config.max_separation_colorings:
            raise ResourceLimitError(f"2^{n} separation colourings exceeds {config.max_separation_colorings}")
        for bits in range(1 << n):
            yield SeparationColoring(n, frozenset(v for v in range(n) if bits >> v & 1))
        return
    delta = conflict.max_degree()
    if delta == 0:
        yield SeparationColoring(n, frozenset(range(n)))
        return
    p = 1.0 / (1 + delta)
    trials = config.trial_count(((1 + delta) * math.e) ** k)
    for i in range(trials):
        rng = random.Random(config.seed ^ i)
        yield SeparationColoring(n, frozenset(v for v in range(n) if rng.random() < p))


def filter_purple(conflict: ConflictGraph, coloring: SeparationColoring, k: int) -> tuple[frozenset[int], ...]:
    """Components of the purple conflict subgraph, dropping those larger than ``k``."""
    purple = coloring.purple
    adj = conflict.graph.adjacency
    seen: set[int] = set()
    out = []
    for s in sorted(purple):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in purple and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        if len(comp) <= k:
            out.append(frozenset(comp))
    return tuple(out)


def sparsify(cov: RedBlueGraph, comps: Iterable[Iterable[int]]) -> SparsifiedGraph:
    """Keep, for every blue and component, only the edge to the smallest red."""
    comps = tuple(frozenset(c) for c in comps)
    component_of = {}
    for i, c in enumerate(comps):
        for v in c:
            if v in component_of:
                raise ValueError(f"red {v} appears in two components")
            component_of[v] = i
    adj: list[list[int]] = [[] for _ in range(cov.red_count)]
    for b, reds in enumerate(cov.blue_adj):
        taken = set()
        for r in reds:  # ascending, so the first hit per component is the smallest
            c = component_of.get(r)
            if c is not None and c not in taken:
                taken.add(c)
                adj[r].append(b)
    spar = RedBlueGraph(cov.red_count, cov.blue_count, tuple(tuple(a) for a in adj))
    return SparsifiedGraph(spar, component_of, comps)


def weights(spar: SparsifiedGraph) -> dict[int, int]:
    return {v: len(spar.cov.red_adj[v]) for v in sorted(spar.component_of)}


def _rank(weight: int, S: frozenset[int]):
    # larger is better: heavier, then smaller, then lexicographically smaller
    return (weight, -len(S), [-v for v in sorted(S)])


def _connected_sets_containing(conn: ConnGraph, alive: frozenset[int], k: int,
                               seeds: Iterable[int]) -> set[frozenset[int]]:
    level = {frozenset([s]) for s in seeds if s in alive}
    found = set(level)
    for _ in range(k - 1):
        nxt = set()
        for S in level:
            for v in S:
                for u in conn.adjacency[v]:
                    if u in alive and u not in S:
                        T = S | {u}
                        if T not in found:
                            nxt.add(T)
        found |= nxt
        level = nxt
    return found


def _exhaustive_tree(conn: ConnGraph, w: Mapping[int, int], k: int, terminals: frozenset[int]):
    alive = frozenset(w)
    if terminals:
        sets = _connected_sets_containing(conn, alive, k, [min(terminals)])
        sets = [S for S in sets if terminals <= S]
    else:
        sets = list(_connected_sets_containing(conn, alive, k, alive)) + [frozenset()]
    if not sets:
        return None
    return max(sets, key=lambda S: _rank(sum(w[v] for v in S), S))


def _colorful_tree(conn: ConnGraph, w: Mapping[int, int], k: int, terminals: list[int], seed: int):
    """Heaviest colourful connected set under one random k-colouring."""
    rng = random.Random(seed)
    reserved = len(terminals)
    color = {}
    for i, v in enumerate(terminals):
        color[v] = i
    for v in sorted(w):
        if v not in color:
            c = rng.randrange(k)
            if c >= reserved:
                color[v] = c
    alive = sorted(color)
    must = (1 << reserved) - 1
    best: dict[int, dict[int, tuple]] = {}
    for v in alive:
        best.setdefault(1 << color[v], {})[v] = (w[v], frozenset([v]))
    nbrs = {v: [u for u in conn.adjacency[v] if u in color] for v in alive}
    for S in sorted(range(1, 1 << k), key=lambda m: m.bit_count()):
        if S.bit_count() < 2:
            continue
        table = best.setdefault(S, {})
        for v in alive:
            cv = 1 << color[v]
            if not S & cv:
                continue
            sub = (S - 1) & S
            while sub:
                if sub & cv:
                    left = best.get(sub, {}).get(v)
                    rest_table = best.get(S ^ sub)
                    if left is not None and rest_table:
                        for u in nbrs[v]:
                            right = rest_table.get(u)
                            if right is None:
                                continue
                            cand = (left[0] + right[0], left[1] | right[1])
                            cur = table.get(v)
                            if cur is None or _rank(*cand) > _rank(*cur):
                                table[v] = cand
                sub = (sub - 1) & S
    out = None if terminals else (0, frozenset())
    for S, table in best.items():
        if S & must != must:
            continue
        for cand in table.values():
            if out is None or _rank(*cand) > _rank(*out):
                out = cand
    return out


def max_weight_k_tree(conn: ConnGraph, w: Mapping[int, int], k: int, terminals: Iterable[int] = (),
                      config: SolverConfig = SolverConfig()) -> frozenset[int] | None:
    """Heaviest connected set of at most ``k`` vertices of ``w`` containing ``terminals``.

    Vertices missing from ``w`` are treated as deleted. Randomized mode is
    colour coding with ``ceil(e^k * k * ln 4)`` default trials; terminals get
    reserved colours so they are always colourful.
    """
    terminals = frozenset(terminals)
    if len(terminals) > k or not terminals <= set(w):
        return None
    if k == 0:
        return frozenset()
    if config.mode == "exhaustive":
        return _exhaustive_tree(conn, w, k, terminals)
    trials = config.trial_count(math.exp(k) * k * math.log(4))
    terms = sorted(terminals)

    def run(i: int):
        return _colorful_tree(conn, w, k, terms, config.seed ^ i)

    if config.n_jobs == 1:
        results = [run(i) for i in range(trials)]
    else:
        with ThreadPoolExecutor(config.n_jobs) as pool:
            results = list(pool.map(run, range(trials)))
    results = [r for r in results if r is not None]
    if not results:
        return None
    return max(results, key=lambda r: _rank(*r))[1]


def _resolve_d(inst: Instance, d, config: SolverConfig) -> int:
    if d is None or d == "auto":
        return minimal_kdd_d(inst.cov, config.kdd_limit)
    d = check_d(d)
    warn_if_not_kdd_free(inst, d, config.kdd_limit)
    return d


def epas_solve(inst: Instance, eps, d, config: SolverConfig = SolverConfig()) -> Solution | Infeasible:
    """Connected ``S`` with ``|S| <= k`` covering at least ``(1-eps) t``, or Infeasible.

    Small targets (``t <= k^2 d / eps``) are solved exactly. Terminals in
    ``inst`` are forced into the solution. In exhaustive mode a YES-instance
    never yields Infeasible.
    """
    eps = check_epsilon(eps)
    if len(inst.terminals) > inst.k:
        return Infeasible(InfeasibleReason.TERMINALS_OVER_BUDGET)
    d = _resolve_d(inst, d, config)
    num, den = eps.numerator, eps.denominator
    # t <= k^2 d / eps, cross-multiplied
    if inst.t * num <= inst.k * inst.k * d * den:
        return exact_solve_by_t(inst, config)
    if inst.k == 0:
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)

    conflict = build_conflict_graph(inst, eps)
    best = None
    tried = {}
    for coloring in gen_colorings(conflict, inst.k, config):
        comps = filter_purple(conflict, coloring, inst.k)
        if comps in tried:
            continue
        spar = sparsify(inst.cov, comps)
        w = weights(spar)
        tree = max_weight_k_tree(inst.conn, w, inst.k, inst.terminals, config)
        tried[comps] = tree
        if tree is None:
            continue
        cand = (sum(w[v] for v in tree), tree)
        if best is None or _rank(*cand) > _rank(*best):
            best = cand
    if best is None:
        return Infeasible(InfeasibleReason.EMPTY_SEARCH_SPACE if not tried else InfeasibleReason.NO_CONNECTED_SET)
    if best[0] < inst.t:
        return Infeasible(InfeasibleReason.NO_CONNECTED_SET)
    sol = inst.solution(best[1])
    if not (sol.connected and sol.size <= inst.k and inst.terminals <= set(sol.vertices)
            and sol.coverage * den >= (den - num) * inst.t):
        raise InternalConsistencyError(f"EPAS output {sol} violates its guarantee")
    return sol


def steiner_epas_solve(inst: Instance, eps, d, config: SolverConfig = SolverConfig(),
                       terminals: Iterable[int] | None = None) -> Solution | Infeasible:
    """:func:`epas_solve` with ``terminals`` (default ``inst.terminals``) forced in."""
    if terminals is not None:
        terminals = frozenset(terminals)
        if len(terminals) > inst.k:
            return Infeasible(InfeasibleReason.TERMINALS_OVER_BUDGET)
        inst = inst.replace(terminals=terminals)
    return epas_solve(inst, eps, d, config)
