"""Weighted graphs, cluster partitions and rooted-tree primitives."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import (
    DisconnectedClusterGraph,
    DisconnectedSubgraph,
    NotATree,
    ValidationError,
)


class WeightedGraph:
    """Undirected graph with non-negative real weights.

    Two storage modes: an explicit edge list with adjacency index, or a
    complete Euclidean graph given by 2-D coordinates with weights computed
    on demand (keeps large instances tractable).
    """

    def __init__(self, n, edges=None, coords=None):
        if n < 1:
            raise ValidationError("graph needs at least one vertex")
        if (edges is None) == (coords is None):
            raise ValidationError("provide exactly one of edges or coords")
        self.n = n
        self.coords = None
        self._adj = None
        self._edges = None
        if coords is not None:
            if len(coords) != n:
                raise ValidationError("coordinate count != vertex count")
            self.coords = tuple((float(x), float(y)) for x, y in coords)
        else:
            adj = [[] for _ in range(n)]
            seen = set()
            canon = []
            for u, v, w in edges:
                if u == v:
                    raise ValidationError(f"self-loop at vertex {u}")
                if not (0 <= u < n and 0 <= v < n):
                    raise ValidationError(f"vertex id out of range: ({u},{v})")
                w = float(w)
                if w < 0:
                    raise ValidationError(f"negative weight on edge ({u},{v})")
                a, b = (u, v) if u < v else (v, u)
                if (a, b) in seen:
                    raise ValidationError(f"duplicate edge ({a},{b})")
                seen.add((a, b))
                canon.append((a, b, w))
                adj[a].append((b, w))
                adj[b].append((a, w))
            self._edges = sorted(canon)
            self._adj = [sorted(nbrs) for nbrs in adj]

    @property
    def is_complete_euclidean(self):
        return self.coords is not None

    def weight(self, u, v):
        if self.coords is not None:
            return math.dist(self.coords[u], self.coords[v])
        for x, w in self._adj[u]:
            if x == v:
                return w
        return None

    def iter_edges(self):
        """Yield every edge once as (u, v, w) with u < v."""
        if self.coords is not None:
            for u in range(self.n):
                for v in range(u + 1, self.n):
                    yield u, v, math.dist(self.coords[u], self.coords[v])
        else:
            yield from self._edges

    def neighbors_within(self, v, allowed):
        """Neighbors of v restricted to `allowed`, ascending by id."""
        if self.coords is not None:
            pv = self.coords[v]
            for u in allowed:
                if u != v:
                    yield u, math.dist(pv, self.coords[u])
        else:
            for u, w in self._adj[v]:
                if u in allowed:
                    yield u, w


@dataclass(frozen=True)
class RootedTree:
    """Tree with parent pointers and distances measured from the root.

    Vertex membership is the key set of `dist`; for subtrees this is a strict
    subset of the host graph's vertices.
    """

    root: int
    parent: dict          # vertex -> parent id, None for the root
    parent_weight: dict   # vertex -> weight of the edge to its parent
    dist: dict            # vertex -> distance from root along tree path

    def vertices(self):
        return self.dist.keys()

    def edges(self):
        """The tree's edges as (parent, child, weight)."""
        return [
            (p, v, self.parent_weight[v])
            for v, p in self.parent.items()
            if p is not None
        ]


def tree_cost(tree):
    """Sum of root distances over all vertices (the CluSPT objective)."""
    return sum(tree.dist.values())


def dijkstra_spt(graph, restrict_to, source):
    """Shortest-path tree of the induced subgraph G[restrict_to] from source.

    Tie-break: equal tentative distances settle the lower vertex id first,
    so the returned tree is deterministic.
    """
    allowed = restrict_to if isinstance(restrict_to, (set, frozenset)) else set(restrict_to)
    if source not in allowed:
        raise ValidationError(f"source {source} not in restricted vertex set")
    dist = {source: 0.0}
    parent = {source: None}
    pweight = {source: 0.0}
    done = set()
    heap = [(0.0, source)]
    # sorted once so the complete-graph path relaxes in ascending id order
    allowed_sorted = sorted(allowed)
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if graph.is_complete_euclidean:
            nbrs = ((u, math.dist(graph.coords[v], graph.coords[u]))
                    for u in allowed_sorted if u != v)
        else:
            nbrs = graph.neighbors_within(v, allowed)
        for u, w in nbrs:
            if u in done:
                continue
            nd = d + w
            if u not in dist or nd < dist[u]:
                dist[u] = nd
                parent[u] = v
                pweight[u] = w
                heapq.heappush(heap, (nd, u))
    if len(done) != len(allowed):
        missing = sorted(allowed - done)
        raise DisconnectedSubgraph(
            f"vertices {missing} unreachable from {source} in restricted subgraph")
    return RootedTree(root=source, parent=parent, parent_weight=pweight, dist=dist)


def dfs_orient(edges, root):
    """Orient an undirected tree edge list away from `root`.

    Child order is ascending vertex id, which makes decode deterministic.
    Edges are (u, v, w) triples.
    """
    adj = {}
    for u, v, w in edges:
        adj.setdefault(u, []).append((v, w))
        adj.setdefault(v, []).append((u, w))
    if root not in adj and edges:
        raise NotATree(f"root {root} not an endpoint of any edge")
    if not edges:
        return RootedTree(root=root, parent={root: None},
                          parent_weight={root: 0.0}, dist={root: 0.0})
    nvert = len(adj)
    if len(edges) != nvert - 1:
        raise NotATree(f"{len(edges)} edges for {nvert} vertices")
    parent = {root: None}
    pweight = {root: 0.0}
    dist = {root: 0.0}
    stack = [root]
    seen = {root}
    while stack:
        v = stack.pop()
        for u, w in sorted(adj[v], reverse=True):
            if u in seen:
                continue
            seen.add(u)
            parent[u] = v
            pweight[u] = w
            dist[u] = dist[v] + w
            stack.append(u)
    if len(seen) != nvert:
        raise NotATree("edge list is disconnected")
    return RootedTree(root=root, parent=parent, parent_weight=pweight, dist=dist)


class ClusteredInstance:
    """A weighted graph, a partition into clusters and a root vertex.

    Cluster 0 always contains the root. Instances are validated on
    construction and immutable afterwards; local shortest-path trees are
    memoized per (cluster, local root) since decoding reuses them heavily.
    """

    def __init__(self, graph, clusters, root, name="unnamed"):
        self.graph = graph
        self.name = name
        n = graph.n
        clusters = [tuple(sorted(c)) for c in clusters]
        seen = set()
        for c in clusters:
            if not c:
                raise ValidationError("empty cluster")
            for v in c:
                if not 0 <= v < n:
                    raise ValidationError(f"cluster vertex {v} out of range")
                if v in seen:
                    raise ValidationError(f"vertex {v} in two clusters")
                seen.add(v)
        if len(seen) != n:
            raise ValidationError("clusters do not cover all vertices")
        if not 0 <= root < n:
            raise ValidationError(f"root {root} out of range 0..{n - 1}")
        if root not in clusters[0]:
            # rotate so the root's cluster sits at index 0
            idx = next(i for i, c in enumerate(clusters) if root in c)
            clusters[idx], clusters[0] = clusters[0], clusters[idx]
        self.root = root
        self.clusters = tuple(clusters)
        self.k = len(clusters)
        cluster_of = [0] * n
        for i, c in enumerate(clusters):
            for v in c:
                cluster_of[v] = i
        self.cluster_of = tuple(cluster_of)
        self._cluster_sets = tuple(frozenset(c) for c in self.clusters)
        self._local_spt = {}
        self._multigraph = None
        self._validate_connectivity()

    def cluster_set(self, i):
        return self._cluster_sets[i]

    def _validate_connectivity(self):
        g = self.graph
        if not g.is_complete_euclidean:
            for i, c in enumerate(self.clusters):
                try:
                    dijkstra_spt(g, self._cluster_sets[i], c[0])
                except DisconnectedSubgraph as exc:
                    raise ValidationError(
                        f"cluster {i} induces a disconnected subgraph: {exc}") from exc
            if self.k > 1:
                # union-find over clusters on inter-cluster edges
                parent = list(range(self.k))

                def find(x):
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    return x

                for u, v, _ in g.iter_edges():
                    cu, cv = self.cluster_of[u], self.cluster_of[v]
                    if cu != cv:
                        parent[find(cu)] = find(cv)
                if len({find(i) for i in range(self.k)}) != 1:
                    raise DisconnectedClusterGraph(
                        f"instance {self.name}: cluster multigraph is disconnected")
        # complete Euclidean graphs are trivially connected everywhere

    def local_spt(self, cluster_index, local_root):
        """Memoized shortest-path tree of G[C_i] rooted at local_root."""
        key = (cluster_index, local_root)
        cached = self._local_spt.get(key)
        if cached is None:
            cached = dijkstra_spt(self.graph, self._cluster_sets[cluster_index],
                                  local_root)
            self._local_spt[key] = cached
        return cached
