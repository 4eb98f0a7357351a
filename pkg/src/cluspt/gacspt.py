"""Evolutionary search over spanning trees of the cluster multigraph."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .decode import build_cluster_multigraph, decode_genome, genome_cost
from .errors import InvalidParameters


@dataclass
class GaConfig:
    pop_size: int = 200
    max_generations: int = 6000
    mutation_rate: float = 0.1
    crossover_rate: float = 0.9
    seed: int = 0
    elitism: int = 1
    convergence_patience: int = 500

    def __post_init__(self):
        if self.pop_size < 2:
            raise InvalidParameters("pop_size must be >= 2")
        if self.max_generations < 0:
            raise InvalidParameters("max_generations must be >= 0")
        for p in (self.mutation_rate, self.crossover_rate):
            if not 0.0 <= p <= 1.0:
                raise InvalidParameters("rates must lie in [0, 1]")


@dataclass
class EvalTrace:
    """Best cost per generation plus the total evaluation count."""

    best_costs: list = field(default_factory=list)
    evaluations: int = 0


def _prim_random_tree(k, edges, rng, start=None):
    """Prim-style random spanning tree: grow from a vertex, repeatedly pop a
    uniformly random frontier edge and keep it if it reaches a new vertex."""
    if k <= 1:
        return ()
    incident = [[] for _ in range(k)]
    for e in edges:
        incident[e[0]].append(e)
        incident[e[1]].append(e)
    if start is None:
        start = rng.randrange(k)
    in_tree = [False] * k
    in_tree[start] = True
    frontier = list(incident[start])
    chosen = []
    covered = 1
    while covered < k:
        i = rng.randrange(len(frontier))
        frontier[i], frontier[-1] = frontier[-1], frontier[i]
        e = frontier.pop()
        nxt = e[1] if in_tree[e[0]] else (e[0] if in_tree[e[1]] else None)
        if nxt is None or in_tree[nxt]:
            continue
        in_tree[nxt] = True
        covered += 1
        chosen.append(e)
        frontier.extend(x for x in incident[nxt]
                        if not (in_tree[x[0]] and in_tree[x[1]]))
    return tuple(sorted(chosen))


def prim_rst(mg, rng):
    """Random spanning-tree genome of the cluster multigraph."""
    return _prim_random_tree(mg.k, mg.medges, rng)


def crossover(p1, p2, rng):
    """Random tree from the union of the parents' gene sets."""
    union = sorted(set(p1) | set(p2))
    k = len(p1) + 1
    return _prim_random_tree(k, union, rng)


def mutate(genome, mg, rng):
    """Swap one gene for a different parallel edge between the same clusters.

    Genes whose cluster pair has a single edge are ineligible; with no
    eligible gene the genome is returned unchanged.
    """
    eligible = [i for i, g in enumerate(genome)
                if len(mg.pair_index[(g[0], g[1])]) >= 2]
    if not eligible:
        return genome
    pos = eligible[rng.randrange(len(eligible))]
    old = genome[pos]
    alternatives = [e for e in mg.parallel_edges(old[0], old[1]) if e != old]
    new = alternatives[rng.randrange(len(alternatives))]
    genes = list(genome)
    genes[pos] = new
    return tuple(sorted(genes))


def _tournament(costs, rng):
    a = rng.randrange(len(costs))
    b = rng.randrange(len(costs))
    return a if costs[a] <= costs[b] else b


def run_gacspt(inst, cfg):
    """Generational GA with binary tournament and elitist replacement.

    Stops at max_generations or when the best cost has not improved for
    convergence_patience generations. Deterministic per (instance, cfg).
    """
    rng = random.Random(cfg.seed)
    mg = build_cluster_multigraph(inst)
    trace = EvalTrace()

    def fitness(genome):
        trace.evaluations += 1
        return genome_cost(inst, genome)

    pop = [prim_rst(mg, rng) for _ in range(cfg.pop_size)]
    costs = [fitness(g) for g in pop]
    best_idx = min(range(len(pop)), key=lambda i: (costs[i], i))
    best_genome, best_cost = pop[best_idx], costs[best_idx]
    trace.best_costs.append(best_cost)
    stall = 0
    for _gen in range(cfg.max_generations):
        order = sorted(range(len(pop)), key=lambda i: (costs[i], i))
        elites = order[:cfg.elitism]
        new_pop = [pop[i] for i in elites]
        new_costs = [costs[i] for i in elites]
        while len(new_pop) < cfg.pop_size:
            i1 = _tournament(costs, rng)
            i2 = _tournament(costs, rng)
            if rng.random() < cfg.crossover_rate:
                child = crossover(pop[i1], pop[i2], rng)
            else:
                child = pop[i1]
            if rng.random() < cfg.mutation_rate:
                child = mutate(child, mg, rng)
            new_pop.append(child)
            new_costs.append(fitness(child))
        pop, costs = new_pop, new_costs
        gen_best = min(range(len(pop)), key=lambda i: (costs[i], i))
        if costs[gen_best] < best_cost:
            best_cost = costs[gen_best]
            best_genome = pop[gen_best]
            stall = 0
        else:
            stall += 1
        trace.best_costs.append(best_cost)
        if stall >= cfg.convergence_patience:
            break
    return decode_genome(inst, mg, best_genome), trace
