import itertools
import random

import pytest

from cluspt.decode import (
    arborescence_cost,
    arborescence_is_valid,
    brute_force_optimum,
    build_cluster_multigraph,
    build_directed_cluster_graph,
    decode_arborescence,
    decode_genome,
    genome_cost,
    genome_is_valid,
    neighbors,
)
from cluspt.errors import DisconnectedClusterGraph, InfeasibleRoots, TooLarge
from cluspt.graph import ClusteredInstance, WeightedGraph, tree_cost
from cluspt.instances import generate_instance


def _all_genomes(inst):
    mg = build_cluster_multigraph(inst)
    for combo in itertools.combinations(mg.medges, inst.k - 1):
        genome = tuple(sorted(combo))
        if genome_is_valid(genome, mg):
            yield genome


def _all_arborescences(h):
    k = max(max(a, b) for a, b in h.arcs) + 1 if h.arcs else 1
    choices = [[p for (p, c) in h.arcs if c == j] for j in range(1, k)]
    for parents in itertools.product(*choices):
        arb = (-1,) + parents
        if arborescence_is_valid(arb, h):
            yield arb


def test_multigraph_toy(toy):
    mg = build_cluster_multigraph(toy)
    pe = mg.parallel_edges(0, 1)
    assert sorted(pe) == [(0, 1, 0, 3, 5.0), (0, 1, 1, 2, 2.0)]
    assert mg.parallel_edges(1, 0) == pe


def test_genome_costs_toy(toy):
    mg = build_cluster_multigraph(toy)
    assert genome_cost(toy, ((0, 1, 1, 2, 2.0),)) == pytest.approx(8.0)
    assert genome_cost(toy, ((0, 1, 0, 3, 5.0),)) == pytest.approx(12.0)
    sol = decode_genome(toy, mg, ((0, 1, 1, 2, 2.0),))
    assert sol.cost == pytest.approx(8.0)
    assert tree_cost(sol.tree) == pytest.approx(8.0)
    # the spanning tree uses intra-cluster edges plus the genome edge
    assert sorted((min(u, v), max(u, v)) for u, v, _ in sol.tree.edges()) == \
        [(0, 1), (1, 2), (2, 3)]


def test_genome_validity(toy):
    mg = build_cluster_multigraph(toy)
    assert genome_is_valid(((0, 1, 1, 2, 2.0),), mg)
    assert not genome_is_valid((), mg)                       # wrong size
    assert not genome_is_valid(((0, 1, 9, 9, 1.0),), mg)     # not an edge


def test_decode_cost_matches_tree_cost():
    rng = random.Random(11)
    for s in range(20):
        inst = generate_instance(rng.randint(4, 12), rng.randint(2, 4), seed=s)
        mg = build_cluster_multigraph(inst)
        genomes = list(_all_genomes(inst))
        for genome in rng.sample(genomes, min(10, len(genomes))):
            sol = decode_genome(inst, mg, genome)
            assert sol.cost == pytest.approx(genome_cost(inst, genome),
                                             abs=1e-9)
            assert sol.cost == pytest.approx(tree_cost(sol.tree), abs=1e-9)
            # every cluster induces a connected subtree
            for ci in range(inst.k):
                inside = inst.cluster_set(ci)
                roots = [v for v in inside
                         if sol.tree.parent[v] is None
                         or sol.tree.parent[v] not in inside]
                assert len(roots) == 1


def test_brute_force_matches_enumeration():
    rng = random.Random(3)
    for s in range(15):
        inst = generate_instance(rng.randint(4, 9), rng.randint(2, 4),
                                 seed=100 + s)
        want = min(genome_cost(inst, g) for g in _all_genomes(inst))
        sol = brute_force_optimum(inst)
        assert sol.cost == pytest.approx(want, abs=1e-9)


def test_brute_force_too_large():
    inst = generate_instance(30, 8, seed=0)
    with pytest.raises(TooLarge):
        brute_force_optimum(inst, max_trees=10)


def test_disconnected_cluster_graph():
    g = WeightedGraph(4, edges=[(0, 1, 1.0), (2, 3, 1.0)])
    with pytest.raises(DisconnectedClusterGraph):
        ClusteredInstance(g, [[0, 1], [2, 3]], 0)


def test_neighbors(toy):
    u = (0, 2)
    nbrs = neighbors(u, toy)
    assert nbrs == [(0, 3)]
    # position 0 is pinned to the instance root
    inst = generate_instance(8, 3, seed=5)
    combos = neighbors((inst.root,) + tuple(
        min(inst.cluster_set(i)) for i in range(1, 3)), inst)
    for c in combos:
        assert c[0] == inst.root
        assert sum(1 for a, b in zip(c, combos[0]) if a != b) <= 2


def test_directed_cluster_graph_toy(toy):
    h = build_directed_cluster_graph(toy, (0, 2))
    # cluster 1's root is vertex 2; reachable from cluster 0 via edge (1,2)
    assert (0, 1) in h.arcs
    arb = (-1, 0)
    assert arborescence_is_valid(arb, h)
    sol = decode_arborescence(toy, (0, 2), arb, h)
    assert sol.cost == pytest.approx(8.0)
    assert arborescence_cost(toy, (0, 2), arb, h) == pytest.approx(8.0)
    # root combination (0, 3) forces the expensive port
    h2 = build_directed_cluster_graph(toy, (0, 3))
    sol2 = decode_arborescence(toy, (0, 3), (-1, 0), h2)
    assert sol2.cost == pytest.approx(12.0)


def test_arborescence_decode_matches_exhaustive():
    rng = random.Random(17)
    for s in range(12):
        inst = generate_instance(rng.randint(5, 10), rng.randint(2, 4),
                                 seed=200 + s)
        u = tuple(rng.choice(sorted(inst.cluster_set(i)))
                  for i in range(inst.k))
        u = (inst.root,) + u[1:]
        h = build_directed_cluster_graph(inst, u)
        best_full = min(genome_cost(inst, g) for g in _all_genomes(inst))
        costs = []
        for arb in _all_arborescences(h):
            sol = decode_arborescence(inst, u, arb, h)
            assert sol.cost == pytest.approx(tree_cost(sol.tree), abs=1e-9)
            assert sol.cost == pytest.approx(
                arborescence_cost(inst, u, arb, h), abs=1e-9)
            # local roots must match the chosen combination
            for i in range(inst.k):
                inside = inst.cluster_set(i)
                entry = [v for v in inside
                         if sol.tree.parent[v] is None
                         or sol.tree.parent[v] not in inside]
                assert entry == [u[i]]
            costs.append(sol.cost)
        assert costs
        assert min(costs) >= best_full - 1e-9


def test_infeasible_roots():
    g = WeightedGraph(4, edges=[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
    inst = ClusteredInstance(g, [[0, 1], [2, 3]], 0)
    # from cluster 0, only vertex 2 is adjacent; choosing root 3 for
    # cluster 1 leaves it unreachable
    with pytest.raises(InfeasibleRoots):
        build_directed_cluster_graph(inst, (0, 3))
