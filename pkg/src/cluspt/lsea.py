"""Bi-level search: hill climbing over root combinations, GA over
arborescences of the induced directed cluster graph (GAFLL)."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .decode import (
    arborescence_cost,
    build_directed_cluster_graph,
    decode_arborescence,
    neighbors,
)
from .errors import InfeasibleRoots, InvalidParameters
from .gacspt import EvalTrace, _tournament

_MUTATE_RETRIES = 10


@dataclass
class LowerConfig:
    pop_size: int = 20
    eval_budget: int = 1200
    mutation_rate: float = 0.1
    crossover_rate: float = 0.9
    seed: int = 0
    # early stop after this many lower-level generations without improvement;
    # None runs the full budget
    stall_generations: int | None = None

    def __post_init__(self):
        if self.pop_size < 2:
            raise InvalidParameters("pop_size must be >= 2")
        if self.eval_budget < self.pop_size:
            raise InvalidParameters("eval_budget must cover the initial population")
        for p in (self.mutation_rate, self.crossover_rate):
            if not 0.0 <= p <= 1.0:
                raise InvalidParameters("rates must lie in [0, 1]")


def gafll_prim_rst(h, rng):
    """Random arborescence grown from the root cluster of h."""
    k = h.k
    arb = [-1] * k
    covered = [False] * k
    covered[0] = True
    frontier = [a for a in sorted(h.arcs) if a[0] == 0]
    remaining = k - 1
    while remaining:
        if not frontier:
            raise InfeasibleRoots("some cluster unreachable from the root cluster")
        i = rng.randrange(len(frontier))
        frontier[i], frontier[-1] = frontier[-1], frontier[i]
        cj, ci = frontier.pop()
        if covered[ci]:
            continue
        covered[ci] = True
        arb[ci] = cj
        remaining -= 1
        frontier.extend(a for a in sorted(h.arcs)
                        if a[0] == ci and not covered[a[1]])
    return tuple(arb)


def _prim_arborescence_from_arcs(k, arcs, rng):
    """gafll_prim_rst over an explicit arc set (used for parent unions)."""
    arb = [-1] * k
    covered = [False] * k
    covered[0] = True
    out = {}
    for a in sorted(arcs):
        out.setdefault(a[0], []).append(a)
    frontier = list(out.get(0, ()))
    remaining = k - 1
    while remaining:
        i = rng.randrange(len(frontier))
        frontier[i], frontier[-1] = frontier[-1], frontier[i]
        cj, ci = frontier.pop()
        if covered[ci]:
            continue
        covered[ci] = True
        arb[ci] = cj
        remaining -= 1
        frontier.extend(a for a in out.get(ci, ()) if not covered[a[1]])
    return tuple(arb)


def arcs_of(arb):
    return {(arb[j], j) for j in range(1, len(arb))}


def gafll_crossover(p1, p2, h, rng):
    """Random arborescence from the union of the parents' arc sets."""
    return _prim_arborescence_from_arcs(h.k, arcs_of(p1) | arcs_of(p2), rng)


def _is_ancestor(arb, anc, node):
    v = node
    while v != -1 and v != 0:
        if v == anc:
            return True
        v = arb[v]
    return anc == 0


def gafll_mutate(arb, h, rng):
    """Replace the in-arc of one cluster by another arc of h with the same
    head, resampling (bounded) when the swap would create a cycle."""
    candidates = sorted(a for a in h.arcs
                        if a[1] != 0 and arb[a[1]] != a[0])
    if not candidates:
        return arb
    for _ in range(_MUTATE_RETRIES):
        ci, cj = candidates[rng.randrange(len(candidates))]
        # new parent ci must not be a descendant of cj
        if _is_ancestor(arb, cj, ci):
            continue
        out = list(arb)
        out[cj] = ci
        return tuple(out)
    return arb


def run_gafll(inst, u, cfg, rng, h=None):
    """GA over arborescences of H_u, stopping when the evaluation budget is
    consumed (or after stall_generations without improvement, when set).

    Returns (best CluSolution, evaluations used).
    """
    if h is None:
        h = build_directed_cluster_graph(inst, u)
    evals = 0

    def fitness(arb):
        nonlocal evals
        evals += 1
        return arborescence_cost(inst, u, arb, h)

    pop = [gafll_prim_rst(h, rng) for _ in range(cfg.pop_size)]
    costs = [fitness(a) for a in pop]
    best_i = min(range(len(pop)), key=lambda i: (costs[i], i))
    best_arb, best_cost = pop[best_i], costs[best_i]
    stall = 0
    while evals < cfg.eval_budget:
        new_pop = [best_arb]
        new_costs = [best_cost]
        improved = False
        while len(new_pop) < cfg.pop_size and evals < cfg.eval_budget:
            i1 = _tournament(costs, rng)
            i2 = _tournament(costs, rng)
            if rng.random() < cfg.crossover_rate:
                child = gafll_crossover(pop[i1], pop[i2], h, rng)
            else:
                child = pop[i1]
            if rng.random() < cfg.mutation_rate:
                child = gafll_mutate(child, h, rng)
            c = fitness(child)
            new_pop.append(child)
            new_costs.append(c)
            if c < best_cost:
                best_arb, best_cost = child, c
                improved = True
        pop, costs = new_pop, new_costs
        stall = 0 if improved else stall + 1
        if cfg.stall_generations is not None and stall >= cfg.stall_generations:
            break
    return decode_arborescence(inst, u, best_arb, h), evals


def random_combination(inst, rng):
    """Uniform root per cluster; the instance root is fixed at position 0."""
    return tuple(
        inst.root if i == 0 else inst.clusters[i][rng.randrange(len(inst.clusters[i]))]
        for i in range(inst.k)
    )


def run_nlsea(inst, cfg, rng=None, max_total_evals=10**6):
    """Hill climbing over root combinations with a GAFLL lower-level solve.

    Each sweep enumerates the neighbors of the sweep-start combination and
    adopts any strictly improving candidate immediately; the search stops
    when a full sweep yields no improvement or the evaluation cap is hit.
    Combinations already solved in this run are not re-solved.
    """
    if rng is None:
        rng = random.Random(cfg.seed)
    trace = EvalTrace()
    cache = {}

    def solve(u):
        if u in cache:
            return cache[u]
        try:
            sol, used = run_gafll(inst, u, cfg, rng)
        except InfeasibleRoots:
            sol, used = None, 0
        trace.evaluations += used
        cache[u] = sol
        return sol

    current = random_combination(inst, rng)
    best = solve(current)
    for _ in range(200):
        if best is not None:
            break
        current = random_combination(inst, rng)
        best = solve(current)
    if best is None:
        raise InfeasibleRoots(
            "no feasible root combination found after 200 samples")
    trace.best_costs.append(best.cost)
    while trace.evaluations < max_total_evals:
        improved = False
        for cand in neighbors(current, inst):
            sol = solve(cand)
            if sol is not None and sol.cost < best.cost:
                current, best = cand, sol
                improved = True
            if trace.evaluations >= max_total_evals:
                break
        trace.best_costs.append(best.cost)
        if not improved:
            break
    return best, trace
