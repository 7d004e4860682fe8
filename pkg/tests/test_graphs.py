import itertools
import random

import networkx as nx
import pytest

from pcrbds.graphs import (ConnGraph, Digraph, Infeasible, Instance, InstanceError, OutTree, RedBlueGraph,
                           ResourceLimitError, ball, bfs_distances, is_connected_in, is_kdd_free, minimal_kdd_d,
                           neighborhood, shortest_path, verify_solution)


def test_conn_graph_rejects_bad_edges():
    with pytest.raises(InstanceError):
        ConnGraph.from_edges(3, [(0, 3)])
    with pytest.raises(InstanceError):
        ConnGraph.from_edges(3, [(1, 1)])


def test_coverage_mirror_and_masks():
    cov = RedBlueGraph.from_red_adj([[0, 1], [1, 2], [2, 3]], 4)
    assert cov.blue_adj == ((0,), (0, 1), (1, 2), (2,))
    assert cov.coverage([0, 2]) == 4
    assert cov.set_mask([0, 1]) == 0b0111
    with pytest.raises(InstanceError):
        RedBlueGraph(1, 2, ((0,),), ((0,), (0,)))


def test_instance_invariants(i1):
    with pytest.raises(InstanceError):
        i1.replace(k=4)
    with pytest.raises(InstanceError):
        i1.replace(t=-1)
    with pytest.raises(InstanceError):
        i1.replace(terminals={3})
    with pytest.raises(InstanceError):
        Instance(ConnGraph.path(2), i1.cov, 1, 1)
    # more terminals than k is representable
    assert i1.replace(k=1, terminals={0, 2}).terminals == {0, 2}


def test_verify_solution_i1(i1):
    rep = verify_solution(i1, [0, 1])
    assert (rep.size_ok, rep.connected, rep.coverage, rep.meets_target) == (True, True, 3, True)
    rep = verify_solution(i1, [0, 2])
    assert not rep.connected and rep.coverage == 4
    assert not verify_solution(i1, [0, 1, 2]).size_ok
    assert verify_solution(i1, [0, 1, 2], size_budget=3).ok
    with pytest.raises(InstanceError):
        verify_solution(i1, [5])


def test_empty_set_conventions(i1):
    assert is_connected_in(i1.conn, [])
    assert neighborhood(i1.cov, []) == frozenset()
    assert not verify_solution(i1, []).meets_target
    assert verify_solution(i1.replace(t=0), []).ok


def test_infeasible_is_falsy():
    assert not Infeasible()


def _nx(conn):
    g = nx.Graph()
    g.add_nodes_from(range(conn.vertex_count))
    g.add_edges_from(conn.edges())
    return g


def test_connectivity_ball_and_paths_match_networkx():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(1, 9)
        conn = ConnGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3])
        g = _nx(conn)
        S = rng.sample(range(n), rng.randint(1, n))
        assert is_connected_in(conn, S) == nx.is_connected(g.subgraph(S))
        src = rng.sample(range(n), rng.randint(1, min(2, n)))
        dist = nx.multi_source_dijkstra_path_length(g, src)
        assert bfs_distances(conn, src) == dist
        r = rng.randint(0, 3)
        assert ball(conn, src, r) == {v for v, dv in dist.items() if dv <= r}
        target = rng.randrange(n)
        path = shortest_path(conn, src, target)
        if target in dist:
            assert len(path) == dist[target] + 1 and path[0] in src and path[-1] == target
            assert all(path[i + 1] in conn.adjacency[path[i]] for i in range(len(path) - 1))
        else:
            assert path is None


def _has_kdd(cov, d):
    for A in itertools.combinations(range(cov.red_count), d):
        common = set(range(cov.blue_count))
        for r in A:
            common &= set(cov.red_adj[r])
        if len(common) >= d:
            return True
    return False


def test_kdd_freeness_matches_enumeration():
    rng = random.Random(5)
    for _ in range(80):
        nr, nb = rng.randint(1, 7), rng.randint(1, 7)
        cov = RedBlueGraph.from_red_adj([[b for b in range(nb) if rng.random() < 0.5] for _ in range(nr)], nb)
        for d in (1, 2, 3):
            assert is_kdd_free(cov, d) == (not _has_kdd(cov, d))
        d = minimal_kdd_d(cov)
        assert not _has_kdd(cov, d) and (d == 1 or _has_kdd(cov, d - 1))


def test_kdd_limit_raises():
    cov = RedBlueGraph.from_red_adj([[0, 1, 2, 3, 4]] * 30, 5)
    with pytest.raises(ResourceLimitError):
        is_kdd_free(cov, 5, limit=10)


def test_out_tree_validity():
    g = Digraph.from_arcs(4, [(0, 1), (1, 2), (0, 3)])
    assert OutTree(0, {1: 0, 2: 1}).is_valid_in(g)
    assert not OutTree(0, {2: 0}).is_valid_in(g)
    assert g.predecessors() == ((), (0,), (1,), (0,))
