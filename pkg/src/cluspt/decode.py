"""Reduced search structures and genotype decoding.

Two genotypes decode to clustered spanning trees: an inter-cluster edge set
(spanning tree of the undirected cluster multigraph) and a root combination
plus cluster arborescence (directed tree of the per-combination cluster
graph). Both share the memoized per-cluster shortest-path trees, so a decode
is O(k) cluster stitches plus O(n) tree assembly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DisconnectedClusterGraph,
    InfeasibleRoots,
    TooLarge,
    ValidationError,
)
from .graph import RootedTree, tree_cost


@dataclass(frozen=True)
class ClusterMultiGraph:
    """Clusters contracted to vertices; parallel edges keep original endpoints.

    medges entries are (ci, cj, u, v, w) with ci < cj, u in C_ci, v in C_cj.
    """

    k: int
    medges: tuple
    pair_index: dict  # (ci, cj) -> tuple of medge indices

    def parallel_edges(self, ci, cj):
        pair = (ci, cj) if ci < cj else (cj, ci)
        return [self.medges[i] for i in self.pair_index.get(pair, ())]


# An InterClusterGenome is a tuple of k-1 genes (ci, cj, u, v, w), sorted.
# A RootCombination is a tuple (r_0..r_{k-1}) with r_0 the instance root.
# A ClusterArborescence is a tuple of per-cluster parent ids, -1 at cluster 0.


def build_cluster_multigraph(inst):
    """All inter-cluster edges of G, grouped by cluster pair (memoized)."""
    if inst._multigraph is not None:
        return inst._multigraph
    medges = []
    for u, v, w in inst.graph.iter_edges():
        cu, cv = inst.cluster_of[u], inst.cluster_of[v]
        if cu == cv:
            continue
        if cu > cv:
            cu, cv, u, v = cv, cu, v, u
        medges.append((cu, cv, u, v, w))
    medges.sort()
    pair_index = {}
    for i, (ci, cj, *_rest) in enumerate(medges):
        pair_index.setdefault((ci, cj), []).append(i)
    mg = ClusterMultiGraph(
        k=inst.k,
        medges=tuple(medges),
        pair_index={p: tuple(ix) for p, ix in pair_index.items()},
    )
    if inst.k > 1:
        parent = list(range(inst.k))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ci, cj, *_rest in medges:
            parent[find(ci)] = find(cj)
        if len({find(i) for i in range(inst.k)}) != 1:
            raise DisconnectedClusterGraph(
                f"instance {inst.name}: cluster multigraph is disconnected")
    inst._multigraph = mg
    return mg


def genome_is_valid(genome, mg):
    """Genes must form a spanning tree over cluster ids and exist in mg."""
    if len(genome) != mg.k - 1:
        return False
    medge_set = set(mg.medges)
    parent = list(range(mg.k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gene in genome:
        if gene not in medge_set:
            return False
        a, b = find(gene[0]), find(gene[1])
        if a == b:
            return False
        parent[a] = b
    return True


def _local_roots_of_genome(inst, genome):
    """DFS from cluster 0 fixes each cluster's entry gene and local root.

    Returns (roots, entry) where entry[i] = (port_vertex, local_root, w) for
    i != 0 and roots[0] is the instance root.
    """
    k = inst.k
    adj = [[] for _ in range(k)]
    for ci, cj, u, v, w in genome:
        adj[ci].append((cj, v, u, w))  # entering cj: local root v, port u
        adj[cj].append((ci, u, v, w))
    roots = [None] * k
    entry = [None] * k
    roots[0] = inst.root
    stack = [0]
    seen = [False] * k
    seen[0] = True
    order = [0]
    while stack:
        c = stack.pop()
        for nxt, local_root, port, w in sorted(adj[c], reverse=True):
            if seen[nxt]:
                continue
            seen[nxt] = True
            roots[nxt] = local_root
            entry[nxt] = (port, local_root, w)
            order.append(nxt)
            stack.append(nxt)
    if not all(seen):
        raise ValidationError("genome does not span all clusters")
    return roots, entry, order


def genome_cost(inst, genome):
    """Objective of the decoded tree without materializing it.

    cost = sum_i |C_i| * d(r, r_i) + local SPT cost of C_i from r_i.
    """
    roots, entry, order = _local_roots_of_genome(inst, genome)
    droot = [0.0] * inst.k
    total = 0.0
    for c in order:
        spt = inst.local_spt(c, roots[c])
        if c != 0:
            port, local_root, w = entry[c]
            cp = inst.cluster_of[port]
            droot[c] = droot[cp] + inst.local_spt(cp, roots[cp]).dist[port] + w
        total += len(inst.clusters[c]) * droot[c] + tree_cost(spt)
    return total


@dataclass(frozen=True)
class CluSolution:
    """A decoded clustered spanning tree with its objective value."""

    tree: RootedTree
    inter_edges: tuple  # (u, v, w) with u on the parent side
    cost: float


def _assemble(inst, roots, entry, order):
    """Stitch memoized local trees and entry edges into one rooted tree."""
    parent = {inst.root: None}
    pweight = {inst.root: 0.0}
    dist = {inst.root: 0.0}
    inter = []
    droot = [0.0] * inst.k
    for c in order:
        spt = inst.local_spt(c, roots[c])
        if c != 0:
            port, local_root, w = entry[c]
            cp = inst.cluster_of[port]
            droot[c] = droot[cp] + inst.local_spt(cp, roots[cp]).dist[port] + w
            parent[local_root] = port
            pweight[local_root] = w
            dist[local_root] = droot[c]
            inter.append((port, local_root, w))
        for v, p in spt.parent.items():
            if p is None:
                continue
            parent[v] = p
            pweight[v] = spt.parent_weight[v]
            dist[v] = droot[c] + spt.dist[v]
    tree = RootedTree(root=inst.root, parent=parent, parent_weight=pweight, dist=dist)
    return CluSolution(tree=tree, inter_edges=tuple(inter), cost=sum(dist.values()))


def decode_genome(inst, mg, genome):
    """Decode an inter-cluster edge set into an evaluated solution."""
    roots, entry, order = _local_roots_of_genome(inst, genome)
    return _assemble(inst, roots, entry, order)


@dataclass(frozen=True)
class DirectedClusterGraph:
    """For fixed local roots: arc (cj -> ci) exists when some vertex of C_cj
    is adjacent to the chosen root r_i; candidate entry edges ride along."""

    k: int
    arcs: frozenset           # set of (cj, ci)
    entry_edges: dict         # (cj, ci) -> tuple of (u, r_i, w), u in C_cj

    def out_arcs(self, cj):
        return [a for a in self.arcs if a[0] == cj]


def neighbors(u, inst):
    """All combinations replacing one non-fixed root by a cluster mate."""
    out = []
    for i in range(1, inst.k):
        for v in inst.clusters[i]:
            if v != u[i]:
                out.append(u[:i] + (v,) + u[i + 1:])
    return out


def build_directed_cluster_graph(inst, u):
    """Construct H_u with candidate entry-edge lists per arc."""
    if len(u) != inst.k or u[0] != inst.root:
        raise ValidationError("root combination does not match instance")
    for i, r in enumerate(u):
        if inst.cluster_of[r] != i:
            raise ValidationError(f"combination root {r} not in cluster {i}")
    g = inst.graph
    entry = {}
    if g.is_complete_euclidean:
        for i in range(inst.k):
            ri = u[i]
            for j in range(inst.k):
                if i == j:
                    continue
                cands = tuple((x, ri, g.weight(x, ri)) for x in inst.clusters[j])
                entry[(j, i)] = cands
    else:
        for i in range(inst.k):
            ri = u[i]
            for x, w in g.neighbors_within(ri, range(g.n)):
                j = inst.cluster_of[x]
                if j != i:
                    entry.setdefault((j, i), []).append((x, ri, w))
        entry = {a: tuple(sorted(c)) for a, c in entry.items()}
    h = DirectedClusterGraph(k=inst.k, arcs=frozenset(entry), entry_edges=entry)
    # every cluster must be reachable from the root cluster
    seen = {0}
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for (cj, ci) in h.arcs:
            if cj == c and ci not in seen:
                seen.add(ci)
                frontier.append(ci)
    if len(seen) != inst.k:
        raise InfeasibleRoots(
            f"clusters {sorted(set(range(inst.k)) - seen)} unreachable for roots {u}")
    return h


def arborescence_is_valid(arb, h):
    """in-degree 1 per non-root cluster, arcs in h, all reachable from 0."""
    if len(arb) != h.k or arb[0] != -1:
        return False
    for j in range(1, h.k):
        if (arb[j], j) not in h.arcs:
            return False
    seen = {0}
    frontier = [0]
    children = [[] for _ in range(h.k)]
    for j in range(1, h.k):
        children[arb[j]].append(j)
    while frontier:
        c = frontier.pop()
        for j in children[c]:
            if j in seen:
                return False
            seen.add(j)
            frontier.append(j)
    return len(seen) == h.k


def _arb_topo_entries(inst, u, arb, h):
    """Topological cluster order with the argmin entry edge per arc.

    The entry edge for (cj -> ci) minimizes d(r, port) + w, which is optimal
    for the fixed (u, arb) because downstream costs depend only on d(r, r_i).
    """
    children = [[] for _ in range(inst.k)]
    for j in range(1, inst.k):
        children[arb[j]].append(j)
    order = [0]
    stack = [0]
    entry = [None] * inst.k
    droot = [0.0] * inst.k
    while stack:
        c = stack.pop()
        spt = inst.local_spt(c, u[c])
        for j in sorted(children[c], reverse=True):
            best = None
            for x, ri, w in h.entry_edges[(c, j)]:
                d = droot[c] + spt.dist[x] + w
                if best is None or d < best[0] or (d == best[0] and x < best[1]):
                    best = (d, x, ri, w)
            droot[j] = best[0]
            entry[j] = (best[1], best[2], best[3])
            order.append(j)
            stack.append(j)
    return order, entry, droot


def arborescence_cost(inst, u, arb, h):
    """Objective of decode_arborescence without materializing the tree."""
    order, _entry, droot = _arb_topo_entries(inst, u, arb, h)
    total = 0.0
    for c in order:
        total += len(inst.clusters[c]) * droot[c] + tree_cost(inst.local_spt(c, u[c]))
    return total


def decode_arborescence(inst, u, arb, h=None):
    """Decode (root combination, cluster arborescence) into a solution."""
    if h is None:
        h = build_directed_cluster_graph(inst, u)
    order, entry, _droot = _arb_topo_entries(inst, u, arb, h)
    return _assemble(inst, list(u), entry, order)


def brute_force_optimum(inst, max_trees=200_000):
    """Global optimum by enumerating every spanning tree of the multigraph.

    Parallel edges count as distinct trees since they decode differently.
    By the shortest-path-tree optimality of local trees, the minimum over
    all decoded multigraph trees is the CluSPT optimum.
    """
    mg = build_cluster_multigraph(inst)
    k = inst.k
    if k == 1:
        return decode_genome(inst, mg, ())
    best_cost = None
    best_genes = None
    count = 0
    medges = mg.medges

    def rec(idx, chosen, comp):
        nonlocal best_cost, best_genes, count
        # comp holds a representative id per cluster
        reps = len(set(comp))
        if reps == 1:
            count += 1
            if count > max_trees:
                raise TooLarge(
                    f"more than {max_trees} multigraph spanning trees")
            cost = genome_cost(inst, tuple(chosen))
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_genes = tuple(chosen)
            return
        if len(medges) - idx < reps - 1:
            return
        ci, cj, u, v, w = medges[idx]
        # include, if it joins two components
        if comp[ci] != comp[cj]:
            old = comp[cj]
            new = comp[ci]
            merged = [new if c == old else c for c in comp]
            chosen.append(medges[idx])
            rec(idx + 1, chosen, merged)
            chosen.pop()
        # exclude
        rec(idx + 1, chosen, comp)

    rec(0, [], list(range(k)))
    if best_genes is None:
        raise DisconnectedClusterGraph("no spanning tree found")
    return decode_genome(inst, mg, tuple(sorted(best_genes)))
