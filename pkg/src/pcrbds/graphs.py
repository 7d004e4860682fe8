"""Instance model, graph primitives and solution verification.

Red vertices are dense integers ``0..red_count-1``, blue vertices are dense
integers ``0..blue_count-1``. Everything here is immutable; the solver
modules only read these objects.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class InstanceError(ValueError):
    """Malformed instance or out-of-range vertex index."""


class ResourceLimitError(RuntimeError):
    """A configured enumeration or trial limit would be exceeded."""


class InternalConsistencyError(AssertionError):
    """A solver produced a set that fails re-verification."""


def _sorted_adjacency(n: int, pairs: Iterable[tuple[int, int]]):
    adj = [set() for _ in range(n)]
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    return tuple(tuple(sorted(s)) for s in adj)


@dataclass(frozen=True)
class ConnGraph:
    """Simple undirected connectivity graph on the red vertices."""

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.vertex_count < 0 or len(self.adjacency) != self.vertex_count:
            raise InstanceError("adjacency length must equal vertex_count")
        for u, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise InstanceError(f"adjacency of {u} must be sorted without duplicates")
            for v in nbrs:
                if not 0 <= v < self.vertex_count:
                    raise InstanceError(f"neighbor {v} of {u} out of range")
                if v == u:
                    raise InstanceError(f"self-loop at {u}")
                if u not in self.adjacency[v]:
                    raise InstanceError(f"edge {u}-{v} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "ConnGraph":
        pairs = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InstanceError(f"connectivity edge {u}-{v} out of range for {n} vertices")
            if u == v:
                raise InstanceError(f"self-loop at {u}")
            pairs.append((u, v))
        return cls(n, _sorted_adjacency(n, pairs))

    @classmethod
    def clique(cls, n: int) -> "ConnGraph":
        return cls.from_edges(n, itertools.combinations(range(n), 2))

    @classmethod
    def path(cls, n: int) -> "ConnGraph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def induced(self, vertices: Iterable[int]) -> tuple["ConnGraph", list[int]]:
        """Subgraph on ``vertices`` relabelled to ``0..len-1``, plus the old labels."""
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        edges = [(index[u], index[v]) for u in old for v in self.adjacency[u] if v in index and u < v]
        return ConnGraph.from_edges(len(old), edges), old


@dataclass(frozen=True)
class RedBlueGraph:
    """Bipartite coverage graph; ``blue_adj`` mirrors ``red_adj``."""

    red_count: int
    blue_count: int
    red_adj: tuple[tuple[int, ...], ...]
    blue_adj: tuple[tuple[int, ...], ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if len(self.red_adj) != self.red_count:
            raise InstanceError("red_adj length must equal red_count")
        mirror = [[] for _ in range(self.blue_count)]
        for r, nbrs in enumerate(self.red_adj):
            if list(nbrs) != sorted(set(nbrs)):
                raise InstanceError(f"red_adj of {r} must be sorted without duplicates")
            for b in nbrs:
                if not 0 <= b < self.blue_count:
                    raise InstanceError(f"blue {b} adjacent to red {r} out of range")
                mirror[b].append(r)
        mirror_t = tuple(tuple(m) for m in mirror)
        if self.blue_adj is None:
            object.__setattr__(self, "blue_adj", mirror_t)
        elif tuple(tuple(x) for x in self.blue_adj) != mirror_t:
            raise InstanceError("blue_adj does not mirror red_adj")
        # bitmask of blue neighbours per red vertex
        object.__setattr__(self, "_masks", tuple(sum(1 << b for b in nbrs) for nbrs in self.red_adj))

    @classmethod
    def from_edges(cls, red_count: int, blue_count: int, edges: Iterable[Sequence[int]]) -> "RedBlueGraph":
        adj = [set() for _ in range(red_count)]
        for e in edges:
            r, b = int(e[0]), int(e[1])
            if not (0 <= r < red_count and 0 <= b < blue_count):
                raise InstanceError(f"coverage edge {r}-{b} out of range")
            adj[r].add(b)
        return cls(red_count, blue_count, tuple(tuple(sorted(s)) for s in adj))

    @classmethod
    def from_red_adj(cls, red_adj: Sequence[Iterable[int]], blue_count: int | None = None) -> "RedBlueGraph":
        adj = tuple(tuple(sorted(set(a))) for a in red_adj)
        if blue_count is None:
            blue_count = 1 + max((max(a) for a in adj if a), default=-1)
        return cls(len(adj), blue_count, adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(r, b) for r, nbrs in enumerate(self.red_adj) for b in nbrs]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.red_adj)

    def mask(self, r: int) -> int:
        return self._masks[r]

    def set_mask(self, reds: Iterable[int]) -> int:
        m = 0
        for r in reds:
            m |= self._masks[r]
        return m

    def coverage(self, reds: Iterable[int]) -> int:
        return self.set_mask(reds).bit_count()


class InfeasibleReason(str, enum.Enum):
    NO_CONNECTED_SET = "no-connected-k-set-covers-t"
    TERMINALS_OVER_BUDGET = "budget-exceeded-by-terminals"
    EMPTY_SEARCH_SPACE = "empty-search-space"


@dataclass(frozen=True)
class Infeasible:
    reason: InfeasibleReason = InfeasibleReason.NO_CONNECTED_SET

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Solution:
    vertices: tuple[int, ...]
    coverage: int
    connected: bool

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Instance:
    conn: ConnGraph
    cov: RedBlueGraph
    k: int
    t: int
    terminals: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "terminals", frozenset(int(x) for x in self.terminals))
        if self.conn.vertex_count != self.cov.red_count:
            raise InstanceError("connectivity graph and coverage graph disagree on red count")
        if not 0 <= self.k <= self.cov.red_count:
            raise InstanceError(f"k={self.k} must lie in [0, {self.cov.red_count}]")
        if self.t < 0:
            raise InstanceError("t must be non-negative")
        for v in self.terminals:
            if not 0 <= v < self.cov.red_count:
                raise InstanceError(f"terminal {v} out of range")
        # more terminals than k is representable; solvers answer it with
        # Infeasible(TERMINALS_OVER_BUDGET)

    @property
    def red_count(self) -> int:
        return self.cov.red_count

    @property
    def blue_count(self) -> int:
        return self.cov.blue_count

    def replace(self, **changes) -> "Instance":
        fields = dict(conn=self.conn, cov=self.cov, k=self.k, t=self.t, terminals=self.terminals)
        fields.update(changes)
        return Instance(**fields)

    def solution(self, vertices: Iterable[int]) -> Solution:
        """Wrap ``vertices`` with freshly recomputed certificates."""
        vs = tuple(sorted(set(vertices)))
        return Solution(vs, len(neighborhood(self.cov, vs)), is_connected_in(self.conn, vs))


def _check_reds(n: int, S: Iterable[int]) -> list[int]:
    S = list(S)
    for v in S:
        if not 0 <= v < n:
            raise InstanceError(f"red vertex {v} out of range [0, {n})")
    return S


def neighborhood(cov: RedBlueGraph, S: Iterable[int]) -> frozenset[int]:
    """Blue vertices adjacent to at least one red vertex of ``S``."""
    out: set[int] = set()
    for v in _check_reds(cov.red_count, S):
        out.update(cov.red_adj[v])
    return frozenset(out)


def is_connected_in(conn: ConnGraph, S: Iterable[int]) -> bool:
    """Whether ``conn[S]`` is connected; sets of size <= 1 count as connected."""
    S = set(_check_reds(conn.vertex_count, S))
    if len(S) <= 1:
        return True
    start = next(iter(S))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in conn.adjacency[u]:
            if w in S and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(S)


def ball(conn: ConnGraph, X: Iterable[int], r: int) -> frozenset[int]:
    """All vertices within distance ``r`` of ``X`` (multi-source BFS)."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    X = _check_reds(conn.vertex_count, X)
    dist = {v: 0 for v in X}
    queue = deque(X)
    while queue:
        u = queue.popleft()
        if dist[u] == r:
            continue
        for w in conn.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return frozenset(dist)


def bfs_distances(conn: ConnGraph, sources: Iterable[int], allowed: frozenset[int] | None = None) -> dict[int, int]:
    dist = {v: 0 for v in sources}
    queue = deque(sorted(dist))
    while queue:
        u = queue.popleft()
        for w in conn.adjacency[u]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def shortest_path(conn: ConnGraph, sources: Iterable[int], target: int, allowed: frozenset[int] | None = None) -> list[int] | None:
    """Shortest path from the nearest source to ``target``; ties go to the smaller index."""
    sources = sorted(set(sources))
    parent: dict[int, int | None] = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        if u == target:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in conn.adjacency[u]:
            if w not in parent and (allowed is None or w in allowed):
                parent[w] = u
                queue.append(w)
    return None


DEFAULT_KDD_LIMIT = 200_000


def is_kdd_free(cov: RedBlueGraph, d: int, limit: int = DEFAULT_KDD_LIMIT) -> bool:
    """True iff no ``d`` red vertices share ``d`` or more common blue neighbours.

    Enumerates red ``d``-subsets, so refuses with :class:`ResourceLimitError`
    when ``C(red_count, d)`` exceeds ``limit``.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if d > cov.red_count or d > cov.blue_count:
        return True
    if math.comb(cov.red_count, d) > limit:
        raise ResourceLimitError(f"C({cov.red_count},{d}) red subsets exceeds limit {limit}")
    candidates = [r for r in range(cov.red_count) if len(cov.red_adj[r]) >= d]

    def extend(start: int, mask: int, depth: int) -> bool:
        if depth == d:
            return True
        for i in range(start, len(candidates)):
            m = mask & cov.mask(candidates[i])
            if m.bit_count() >= d and extend(i + 1, m, depth + 1):
                return True
        return False

    all_blue = (1 << cov.blue_count) - 1
    return not extend(0, all_blue, 0)


def minimal_kdd_d(cov: RedBlueGraph, limit: int = DEFAULT_KDD_LIMIT) -> int:
    """Smallest ``d`` for which ``cov`` is K_{d,d}-free."""
    d = 1
    while not is_kdd_free(cov, d, limit):
        d += 1
    return d


@dataclass(frozen=True)
class VerificationReport:
    size_ok: bool
    terminals_ok: bool
    connected: bool
    coverage: int
    meets_target: bool

    @property
    def ok(self) -> bool:
        return self.size_ok and self.terminals_ok and self.connected and self.meets_target


def verify_solution(inst: Instance, S: Iterable[int], coverage_target: int | None = None,
                    size_budget: int | None = None) -> VerificationReport:
    """Recompute every certificate of ``S`` against ``inst`` from scratch.

    ``size_budget`` defaults to ``inst.k``; the bicriteria solvers pass a
    relaxed budget.
    """
    S = set(_check_reds(inst.red_count, S))
    target = inst.t if coverage_target is None else coverage_target
    budget = inst.k if size_budget is None else size_budget
    covered: set[int] = set()
    for v in S:
        covered.update(inst.cov.red_adj[v])
    return VerificationReport(
        size_ok=len(S) <= budget,
        terminals_ok=inst.terminals <= S,
        connected=is_connected_in(inst.conn, S),
        coverage=len(covered),
        meets_target=len(covered) >= target,
    )


@dataclass(frozen=True)
class Digraph:
    """Directed graph on ``0..vertex_count-1`` with sorted successor lists."""

    vertex_count: int
    successors: tuple[tuple[int, ...], ...]

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Sequence[int]]) -> "Digraph":
        succ = [set() for _ in range(n)]
        for a in arcs:
            u, v = int(a[0]), int(a[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InstanceError(f"arc {u}->{v} out of range")
            if u != v:
                succ[u].add(v)
        return cls(n, tuple(tuple(sorted(s)) for s in succ))

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, out in enumerate(self.successors) for v in out]

    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        pred = [[] for _ in range(self.vertex_count)]
        for u, v in self.arcs():
            pred[v].append(u)
        return tuple(tuple(p) for p in pred)


@dataclass(frozen=True)
class OutTree:
    """Arborescence: every non-root vertex has exactly one parent."""

    root: int
    parent: dict

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.parent) | {self.root}

    def __len__(self):
        return len(self.parent) + 1

    def is_valid_in(self, digraph: Digraph) -> bool:
        if self.root in self.parent:
            return False
        for child, par in self.parent.items():
            if child not in digraph.successors[par]:
                return False
        # every vertex must reach the root by parent pointers without cycling
        for v in self.parent:
            seen = set()
            while v != self.root:
                if v in seen or v not in self.parent:
                    return False
                seen.add(v)
                v = self.parent[v]
        return True
