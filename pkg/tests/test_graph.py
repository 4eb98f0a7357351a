import math
import random

import pytest

from cluspt.errors import (
    DisconnectedSubgraph,
    NotATree,
    ValidationError,
)
from cluspt.graph import (
    ClusteredInstance,
    WeightedGraph,
    dfs_orient,
    dijkstra_spt,
    tree_cost,
)


def test_explicit_graph_validation():
    g = WeightedGraph(3, edges=[(1, 0, 2.0), (1, 2, 3.0)])
    assert g.weight(0, 1) == 2.0
    assert g.weight(1, 0) == 2.0
    with pytest.raises(ValidationError):
        WeightedGraph(3, edges=[(0, 0, 1.0)])
    with pytest.raises(ValidationError):
        WeightedGraph(3, edges=[(0, 1, 1.0), (1, 0, 2.0)])
    with pytest.raises(ValidationError):
        WeightedGraph(3, edges=[(0, 1, -1.0)])
    with pytest.raises(ValidationError):
        WeightedGraph(3, edges=[(0, 5, 1.0)])
    with pytest.raises(ValidationError):
        WeightedGraph(3)


def test_euclidean_graph():
    g = WeightedGraph(3, coords=[(0.0, 0.0), (3.0, 4.0), (0.0, 1.0)])
    assert g.is_complete_euclidean
    assert g.weight(0, 1) == 5.0
    assert g.weight(1, 0) == 5.0
    edges = list(g.iter_edges())
    assert len(edges) == 3
    assert all(u < v for u, v, _ in edges)


def _floyd_warshall(g, allowed):
    idx = sorted(allowed)
    pos = {v: i for i, v in enumerate(idx)}
    m = len(idx)
    d = [[math.inf] * m for _ in range(m)]
    for i in range(m):
        d[i][i] = 0.0
    for u, v, w in g.iter_edges():
        if u in allowed and v in allowed:
            i, j = pos[u], pos[v]
            d[i][j] = min(d[i][j], w)
            d[j][i] = d[i][j]
    for t in range(m):
        for i in range(m):
            for j in range(m):
                if d[i][t] + d[t][j] < d[i][j]:
                    d[i][j] = d[i][t] + d[t][j]
    return {v: d[pos[src]][pos[v]] for src in [idx[0]] for v in idx}


def test_dijkstra_matches_floyd_warshall():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(3, 12)
        edges = []
        seen = set()
        # random connected graph: a path plus extras
        for v in range(1, n):
            u = rng.randrange(v)
            edges.append((u, v, rng.uniform(0.5, 9.5)))
            seen.add((u, v))
        for _ in range(n):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v and (min(u, v), max(u, v)) not in seen:
                seen.add((min(u, v), max(u, v)))
                edges.append((u, v, rng.uniform(0.5, 9.5)))
        g = WeightedGraph(n, edges=edges)
        allowed = set(range(n))
        want = _floyd_warshall(g, allowed)
        tree = dijkstra_spt(g, allowed, min(allowed))
        for v in allowed:
            assert tree.dist[v] == pytest.approx(want[v], abs=1e-9)
        assert tree.parent[tree.root] is None
        for v in allowed:
            if v != tree.root:
                p = tree.parent[v]
                assert tree.dist[v] == pytest.approx(
                    tree.dist[p] + tree.parent_weight[v], abs=1e-9)


def test_dijkstra_restriction_and_disconnect():
    g = WeightedGraph(4, edges=[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
    t = dijkstra_spt(g, {0, 1}, 0)
    assert set(t.vertices()) == {0, 1}
    with pytest.raises(DisconnectedSubgraph):
        dijkstra_spt(g, {0, 2}, 0)


def test_tree_cost_sums_root_distances():
    g = WeightedGraph(3, edges=[(0, 1, 2.0), (1, 2, 3.0)])
    t = dijkstra_spt(g, {0, 1, 2}, 0)
    assert tree_cost(t) == pytest.approx(2.0 + 5.0)


def test_dfs_orient():
    t = dfs_orient([(0, 1, 1.0), (1, 2, 2.0)], root=2)
    assert t.root == 2
    assert t.parent[1] == 2
    assert t.parent[0] == 1
    assert t.dist[0] == pytest.approx(3.0)
    with pytest.raises(NotATree):
        dfs_orient([(0, 1, 1.0), (0, 1, 2.0)], root=0)
    with pytest.raises(NotATree):
        dfs_orient([(0, 1, 1.0)], root=2)


def test_instance_validation_and_rotation():
    g = WeightedGraph(4, edges=[(0, 1, 1.0), (2, 3, 1.0), (1, 2, 2.0)])
    inst = ClusteredInstance(g, [[2, 3], [0, 1]], 0)
    # cluster containing the root comes first
    assert 0 in inst.cluster_set(0)
    assert inst.cluster_of[0] == 0
    with pytest.raises(ValidationError):
        ClusteredInstance(g, [[0, 1], [2]], 0)          # not a partition
    with pytest.raises(ValidationError):
        ClusteredInstance(g, [[0, 1], [1, 2, 3]], 0)    # overlap
    with pytest.raises(ValidationError):
        ClusteredInstance(g, [[0, 1], [2, 3]], 9)       # root out of range


def test_instance_rejects_disconnected_cluster():
    g = WeightedGraph(4, edges=[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
    with pytest.raises(ValidationError):
        ClusteredInstance(g, [[0, 2], [1, 3]], 0)


def test_local_spt_memoized(toy):
    t1 = toy.local_spt(0, 0)
    t2 = toy.local_spt(0, 0)
    assert t1 is t2
    assert tree_cost(t1) == pytest.approx(1.0)
