import itertools
import random

import networkx as nx
import pytest

from pcrbds.graphs import ConnGraph, Infeasible, ResourceLimitError
from pcrbds.oracle import (OracleLimits, brute_force_best_coverage, brute_force_decide, brute_force_max_weight_tree,
                           brute_force_min_size, brute_force_steiner_out_tree, connected_subsets,
                           connected_subsets_powerset)

from conftest import small_instance


def _nx_connected_sets(conn, k):
    g = nx.Graph()
    g.add_nodes_from(range(conn.vertex_count))
    g.add_edges_from(conn.edges())
    out = set()
    for size in range(1, k + 1):
        for S in itertools.combinations(range(conn.vertex_count), size):
            if nx.is_connected(g.subgraph(S)):
                out.add(frozenset(S))
    return out


def test_connected_subset_enumerators_agree():
    rng = random.Random(1)
    for _ in range(40):
        n = rng.randint(1, 8)
        conn = ConnGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.35])
        k = rng.randint(1, n)
        canon = list(connected_subsets(conn, k))
        assert len(canon) == len(set(canon)), "each connected set exactly once"
        assert set(canon) == set(connected_subsets_powerset(conn, k)) == _nx_connected_sets(conn, k)


def _slow_best(inst):
    best = 0 if not inst.terminals else None
    sets = _nx_connected_sets(inst.conn, inst.k)
    for S in sets:
        if inst.terminals <= S:
            c = len({b for r in S for b in inst.cov.red_adj[r]})
            best = c if best is None else max(best, c)
    if inst.terminals and best is None:
        return None
    return best


def test_decide_matches_independent_enumeration():
    for seed in range(150):
        inst = small_instance(seed)
        slow = _slow_best(inst)
        res = brute_force_decide(inst)
        expected = inst.t == 0 or (slow is not None and slow >= inst.t)
        assert bool(res) == expected, seed
        if res:
            assert len(res.vertices) <= inst.k and res.coverage >= inst.t


def test_i1_oracle_values(i1):
    assert brute_force_best_coverage(i1, 2) == (3, frozenset({0, 1}))
    assert brute_force_decide(i1).vertices == (0, 1)
    assert isinstance(brute_force_decide(i1.replace(t=4)), Infeasible)
    assert brute_force_min_size(i1, 4) == (3, frozenset({0, 1, 2}))
    assert brute_force_decide(i1.replace(t=0)).vertices == ()


def test_oracle_limits(i1):
    with pytest.raises(ResourceLimitError):
        brute_force_best_coverage(i1, 2, OracleLimits(max_red=2))
    with pytest.raises(ValueError):
        OracleLimits(max_red=0)


def test_max_weight_tree_examples():
    tri, path = ConnGraph.clique(3), ConnGraph.path(3)
    w = (5, 1, 3)
    assert brute_force_max_weight_tree(tri, w, 2) == {0, 2}
    assert brute_force_max_weight_tree(path, w, 2) == {0, 1}
    # {0,1} (weight 6) beats {1,2} (weight 4) among connected supersets of {1}
    assert brute_force_max_weight_tree(path, w, 2, {1}) == {0, 1}


def test_steiner_out_tree_oracle_small():
    arcs = [(0, 1), (1, 2), (0, 3)]
    tree = brute_force_steiner_out_tree(4, arcs, {2, 3}, 4)
    assert tree.root == 0 and tree.vertices == {0, 1, 2, 3}
    assert brute_force_steiner_out_tree(4, arcs, {2, 3}, 3) is None
