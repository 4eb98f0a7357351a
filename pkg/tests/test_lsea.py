import itertools
import random

import pytest

from cluspt.decode import (
    arborescence_cost,
    arborescence_is_valid,
    brute_force_optimum,
    build_directed_cluster_graph,
    decode_arborescence,
)
from cluspt.errors import InvalidParameters
from cluspt.graph import ClusteredInstance, WeightedGraph
from cluspt.instances import generate_instance
from cluspt.lsea import (
    LowerConfig,
    gafll_crossover,
    gafll_mutate,
    gafll_prim_rst,
    random_combination,
    run_gafll,
    run_nlsea,
)


def test_lower_config_validation():
    with pytest.raises(InvalidParameters):
        LowerConfig(pop_size=1)
    with pytest.raises(InvalidParameters):
        LowerConfig(pop_size=30, eval_budget=10)
    with pytest.raises(InvalidParameters):
        LowerConfig(mutation_rate=-0.1)


def _instance_and_h(seed, n=10, k=4):
    inst = generate_instance(n, k, seed=seed)
    rng = random.Random(seed)
    u = random_combination(inst, rng)
    return inst, u, build_directed_cluster_graph(inst, u)


def test_gafll_operators_preserve_validity():
    rng = random.Random(2)
    inst, u, h = _instance_and_h(21)
    for _ in range(200):
        a = gafll_prim_rst(h, rng)
        b = gafll_prim_rst(h, rng)
        assert arborescence_is_valid(a, h)
        child = gafll_crossover(a, b, h, rng)
        assert arborescence_is_valid(child, h)
        assert all(child[j] in (a[j], b[j]) or (child[j], j) in h.arcs
                   for j in range(1, inst.k))
        mutant = gafll_mutate(child, h, rng)
        assert arborescence_is_valid(mutant, h)


def test_run_gafll_optimal_on_enumerable_cases():
    for seed in range(8):
        inst, u, h = _instance_and_h(400 + seed, n=9, k=3)
        choices = [[p for (p, c) in h.arcs if c == j]
                   for j in range(1, inst.k)]
        best = min(
            arborescence_cost(inst, u, (-1,) + parents, h)
            for parents in itertools.product(*choices)
            if arborescence_is_valid((-1,) + parents, h))
        rng = random.Random(seed)
        sol, evals = run_gafll(inst, u,
                               LowerConfig(pop_size=12, eval_budget=400),
                               rng, h=h)
        assert evals <= 400
        assert sol.cost == pytest.approx(best, abs=1e-9)


def test_random_combination_pins_root():
    inst = generate_instance(15, 5, seed=8)
    rng = random.Random(0)
    for _ in range(20):
        u = random_combination(inst, rng)
        assert u[0] == inst.root
        for i, r in enumerate(u):
            assert r in inst.cluster_set(i)


def test_nlsea_deterministic_and_near_optimal():
    cfg = LowerConfig(pop_size=15, eval_budget=600, stall_generations=10)
    for seed in range(6):
        inst = generate_instance(10, 3, seed=500 + seed)
        bf = brute_force_optimum(inst)
        a, ta = run_nlsea(inst, cfg, rng=random.Random(seed))
        b, tb = run_nlsea(inst, cfg, rng=random.Random(seed))
        assert a.cost == b.cost
        assert ta.best_costs == tb.best_costs
        assert a.cost >= bf.cost - 1e-9
        assert all(x >= y - 1e-12 for x, y in
                   zip(ta.best_costs, ta.best_costs[1:]))


def test_nlsea_handles_partially_infeasible_roots():
    # path graph: cluster 1 is only reachable through vertex 2
    g = WeightedGraph(4, edges=[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
    inst = ClusteredInstance(g, [[0, 1], [2, 3]], 0)
    sol, _ = run_nlsea(inst, LowerConfig(pop_size=2, eval_budget=20),
                       rng=random.Random(0))
    assert sol.cost == pytest.approx(1.0 + 2.0 + 3.0)


def test_single_cluster_reduces_to_spt():
    inst = generate_instance(8, 1, seed=6)
    sol, _ = run_nlsea(inst, LowerConfig(pop_size=2, eval_budget=10),
                       rng=random.Random(0))
    from cluspt.graph import dijkstra_spt, tree_cost
    spt = dijkstra_spt(inst.graph, set(range(8)), inst.root)
    assert sol.cost == pytest.approx(tree_cost(spt), abs=1e-9)
