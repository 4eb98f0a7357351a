"""Multifactorial lower level: neighboring root combinations are paired and
their arborescence tasks solved jointly by one population with skill factors,
assortative mating and vertical cultural transmission."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .decode import (
    arborescence_cost,
    build_directed_cluster_graph,
    decode_arborescence,
    neighbors,
)
from .errors import InfeasibleRoots
from .gacspt import EvalTrace
from .lsea import (
    _prim_arborescence_from_arcs,
    arcs_of,
    gafll_mutate,
    gafll_prim_rst,
    random_combination,
    run_gafll,
)

INF = math.inf


@dataclass(frozen=True)
class MfIndividual:
    arborescence: tuple
    skill_factor: int          # task index, 0 or 1
    factorial_cost: tuple      # cost per task; +inf on the non-skill task


@dataclass(frozen=True)
class TaskPair:
    """One or two lower-level tasks; two-task pairs differ at one position."""

    tasks: tuple               # ((u, H_u), ...) with 1 or 2 entries
    differing_position: int | None = None


def _diff_positions(a, b):
    return [i for i in range(len(a)) if a[i] != b[i]]


def pair_neighbors(nbrs):
    """Greedy pairing of a neighbor list into groups of at most two.

    Consecutive candidates that differ from each other at exactly one
    position (i.e. the same cluster block) are paired; leftovers stay single.
    Returns a list of tuples of RootCombinations.
    """
    groups = []
    i = 0
    while i < len(nbrs):
        if i + 1 < len(nbrs) and len(_diff_positions(nbrs[i], nbrs[i + 1])) == 1:
            groups.append((nbrs[i], nbrs[i + 1]))
            i += 2
        else:
            groups.append((nbrs[i],))
            i += 1
    return groups


def make_task_pair(inst, combos):
    """Build the TaskPair (with H graphs) for a pairing group."""
    tasks = tuple((u, build_directed_cluster_graph(inst, u)) for u in combos)
    q = None
    if len(combos) == 2:
        diff = _diff_positions(combos[0], combos[1])
        if len(diff) != 1:
            raise ValueError("paired combinations must differ at one position")
        q = diff[0]
    return TaskPair(tasks=tasks, differing_position=q)


def is_feasible_for(arb, h):
    return all((arb[j], j) in h.arcs for j in range(1, len(arb)))


def assortative_mating(p1, p2, pair, rmp, rng):
    """Same skill factor or rand < rmp yields one crossover child from the
    arc union; otherwise each parent is mutated within its own task."""
    if p1.skill_factor == p2.skill_factor or rng.random() < rmp:
        child = _prim_arborescence_from_arcs(
            len(p1.arborescence),
            arcs_of(p1.arborescence) | arcs_of(p2.arborescence),
            rng,
        )
        return [(child, (p1, p2))]
    h1 = pair.tasks[p1.skill_factor][1]
    h2 = pair.tasks[p2.skill_factor][1]
    c1 = gafll_mutate(p1.arborescence, h1, rng)
    c2 = gafll_mutate(p2.arborescence, h2, rng)
    return [(c1, (p1,)), (c2, (p2,))]


def cultural_transmission(inst, child, parents, pair, rng, evaluator):
    """Assign a skill factor by imitation and evaluate only that task."""
    if len(parents) == 1:
        skill = parents[0].skill_factor
    else:
        feas = [is_feasible_for(child, h) for _u, h in pair.tasks]
        if all(feas):
            skill = parents[0].skill_factor if rng.random() < 0.5 \
                else parents[1].skill_factor
        elif feas[0]:
            skill = 0
        else:
            skill = 1
    cost = evaluator(skill, child)
    costs = [INF] * len(pair.tasks)
    costs[skill] = cost
    return MfIndividual(arborescence=child, skill_factor=skill,
                        factorial_cost=tuple(costs))


def _select_survivors(pool, pop_size, n_tasks):
    """Elitist (mu+lambda) selection by reciprocal factorial rank on the
    individual's skill task; ties resolve by pool order."""
    rank = [INF] * len(pool)
    for t in range(n_tasks):
        idxs = [i for i, ind in enumerate(pool)
                if ind.factorial_cost[t] < INF]
        idxs.sort(key=lambda i: (pool[i].factorial_cost[t], i))
        for r, i in enumerate(idxs, start=1):
            if pool[i].skill_factor == t:
                rank[i] = r
    order = sorted(range(len(pool)), key=lambda i: (rank[i], i))
    return [pool[i] for i in order[:pop_size]]


def run_mfea_pair(inst, pair, cfg, rng):
    """Solve the group's lower-level tasks under one shared budget.

    Singleton groups fall back to a plain GAFLL run with the same rng.
    Returns ([CluSolution per task], evaluations used).
    """
    if len(pair.tasks) == 1:
        u, h = pair.tasks[0]
        sol, used = run_gafll(inst, u, cfg, rng, h=h)
        return [sol], used

    evals = 0
    best = [None, None]  # (cost, arb) per task

    def evaluator(task, arb):
        nonlocal evals
        evals += 1
        u, h = pair.tasks[task]
        c = arborescence_cost(inst, u, arb, h)
        if best[task] is None or c < best[task][0]:
            best[task] = (c, arb)
        return c

    half = cfg.pop_size // 2
    pop = []
    for i in range(cfg.pop_size):
        task = 0 if i < cfg.pop_size - half else 1
        arb = gafll_prim_rst(pair.tasks[task][1], rng)
        costs = [INF, INF]
        costs[task] = evaluator(task, arb)
        pop.append(MfIndividual(arborescence=arb, skill_factor=task,
                                factorial_cost=tuple(costs)))
    stall = 0
    while evals < cfg.eval_budget:
        children = []
        improved_before = (best[0][0], best[1][0])
        while len(children) < cfg.pop_size and evals < cfg.eval_budget:
            i1 = rng.randrange(len(pop))
            i2 = rng.randrange(len(pop))
            while i2 == i1:
                i2 = rng.randrange(len(pop))
            for child, parents in assortative_mating(
                    pop[i1], pop[i2], pair, cfg.crossover_rate, rng):
                if evals >= cfg.eval_budget:
                    break
                children.append(cultural_transmission(
                    inst, child, parents, pair, rng, evaluator))
        pop = _select_survivors(pop + children, cfg.pop_size, 2)
        stall = 0 if (best[0][0], best[1][0]) != improved_before else stall + 1
        if cfg.stall_generations is not None and stall >= cfg.stall_generations:
            break
    sols = []
    for t, (u, h) in enumerate(pair.tasks):
        sols.append(decode_arborescence(inst, u, best[t][1], h))
    return sols, evals


def run_mlsea(inst, cfg, rng=None, max_total_evals=10**6):
    """M-LSEA: the N-LSEA upper loop with paired multifactorial lower solves.

    Neighbors already solved in this run are dropped before pairing; the
    adoption rule and stop conditions match run_nlsea.
    """
    if rng is None:
        rng = random.Random(cfg.seed)
    trace = EvalTrace()
    cache = {}

    def record(u, sol):
        cache[u] = sol

    def solve_single(u):
        try:
            sol, used = run_gafll(inst, u, cfg, rng)
        except InfeasibleRoots:
            sol, used = None, 0
        trace.evaluations += used
        record(u, sol)
        return sol

    current = random_combination(inst, rng)
    best = solve_single(current)
    for _ in range(200):
        if best is not None:
            break
        current = random_combination(inst, rng)
        best = cache[current] if current in cache else solve_single(current)
    if best is None:
        raise InfeasibleRoots(
            "no feasible root combination found after 200 samples")
    trace.best_costs.append(best.cost)
    while trace.evaluations < max_total_evals:
        improved = False
        nbrs = neighbors(current, inst)
        fresh = [u for u in nbrs if u not in cache]
        for group in pair_neighbors(fresh):
            if trace.evaluations >= max_total_evals:
                break
            try:
                pair = make_task_pair(inst, group)
            except InfeasibleRoots:
                # degrade to singleton solves so one bad task cannot mask
                # a feasible partner
                for u in group:
                    if u not in cache:
                        solve_single(u)
                continue
            sols, used = run_mfea_pair(inst, pair, cfg, rng)
            trace.evaluations += used
            for u, sol in zip(group, sols):
                record(u, sol)
        for u in nbrs:
            sol = cache.get(u)
            if sol is not None and sol.cost < best.cost:
                current, best = u, sol
                improved = True
        trace.best_costs.append(best.cost)
        if not improved:
            break
    return best, trace
