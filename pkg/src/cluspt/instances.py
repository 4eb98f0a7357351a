"""Parsing, serialization and synthesis of clustered instances.

Canonical text format (TSPLIB-style, UTF-8, LF endings):

    NAME: <identifier>
    TYPE: CluSPT
    DIMENSION: <n>
    EDGE_WEIGHT_TYPE: EUC_2D_REAL | EXPLICIT
    NUMBER_OF_CLUSTERS: <k>
    ROOT: <1-based vertex id>
    NODE_COORD_SECTION            (EUC_2D_REAL: "<id> <x> <y>")
      or EDGE_SECTION             (EXPLICIT:   "<u> <v> <w>")
    CLUSTER_SECTION               (one line per cluster, ids then -1)

Vertex ids are 1-based in files and 0-based in memory. The cluster that
contains the root is listed first; vertices within a cluster line ascend.
"""

from __future__ import annotations

import math
import random

from .errors import InvalidParameters, ParseError, ValidationError
from .graph import ClusteredInstance, WeightedGraph

_HEADER_KEYS = ("NAME", "TYPE", "DIMENSION", "EDGE_WEIGHT_TYPE",
                "NUMBER_OF_CLUSTERS", "ROOT")
_SECTION_KEYS = ("NODE_COORD_SECTION", "EDGE_SECTION", "CLUSTER_SECTION", "EOF")


def _fmt(x: float) -> str:
    """Shortest float representation that round-trips exactly."""
    return repr(float(x))


def parse_instance(text) -> ClusteredInstance:
    """Parse the canonical format; raises ParseError / ValidationError."""
    if hasattr(text, "read"):
        text = text.read()
    header = {}
    coords = {}
    edges = []
    clusters = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key = line.split(":", 1)[0].strip() if ":" in line else line
        if key in _SECTION_KEYS:
            if key == "EOF":
                break
            section = key
            continue
        if key in _HEADER_KEYS:
            if ":" not in line:
                raise ParseError(f"header '{key}' missing ':'", lineno)
            header[key] = line.split(":", 1)[1].strip()
            continue
        if section is None:
            raise ParseError(f"unexpected line outside any section: {line!r}", lineno)
        parts = line.split()
        try:
            if section == "NODE_COORD_SECTION":
                if len(parts) != 3:
                    raise ParseError("expected '<id> <x> <y>'", lineno)
                coords[int(parts[0])] = (float(parts[1]), float(parts[2]))
            elif section == "EDGE_SECTION":
                if len(parts) != 3:
                    raise ParseError("expected '<u> <v> <w>'", lineno)
                edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
            elif section == "CLUSTER_SECTION":
                ids = [int(p) for p in parts]
                if not ids or ids[-1] != -1:
                    raise ParseError("cluster line must end with -1", lineno)
                clusters.append(ids[:-1])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc

    for key in _HEADER_KEYS:
        if key not in header:
            raise ParseError(f"missing header field {key}")
    if header["TYPE"] != "CluSPT":
        raise ParseError(f"unsupported TYPE {header['TYPE']!r}")
    try:
        n = int(header["DIMENSION"])
        k = int(header["NUMBER_OF_CLUSTERS"])
        root1 = int(header["ROOT"])
    except ValueError as exc:
        raise ParseError(f"non-integer header value: {exc}") from exc
    mode = header["EDGE_WEIGHT_TYPE"]
    if mode not in ("EUC_2D_REAL", "EXPLICIT"):
        raise ParseError(f"unsupported EDGE_WEIGHT_TYPE {mode!r}")

    if mode == "EUC_2D_REAL":
        if set(coords) != set(range(1, n + 1)):
            raise ParseError("NODE_COORD_SECTION ids must be exactly 1..DIMENSION")
        graph = WeightedGraph(n, coords=[coords[i] for i in range(1, n + 1)])
    else:
        if not edges:
            raise ParseError("EXPLICIT instance without EDGE_SECTION")
        try:
            graph = WeightedGraph(n, edges=[(u - 1, v - 1, w) for u, v, w in edges])
        except ValidationError as exc:
            raise ValidationError(f"bad edge list: {exc}") from exc

    if len(clusters) != k:
        raise ValidationError(
            f"NUMBER_OF_CLUSTERS is {k} but CLUSTER_SECTION has {len(clusters)} lines")
    if not 1 <= root1 <= n:
        raise ValidationError(f"ROOT {root1} out of range 1..{n}")
    clusters0 = [[v - 1 for v in c] for c in clusters]
    for c in clusters0:
        for v in c:
            if not 0 <= v < n:
                raise ValidationError(f"cluster vertex {v + 1} out of range")
    return ClusteredInstance(graph, clusters0, root1 - 1,
                             name=header["NAME"])


def serialize_instance(inst: ClusteredInstance) -> str:
    """Canonical text for an instance (parse∘serialize is the identity)."""
    g = inst.graph
    mode = "EUC_2D_REAL" if g.is_complete_euclidean else "EXPLICIT"
    lines = [
        f"NAME: {inst.name}",
        "TYPE: CluSPT",
        f"DIMENSION: {g.n}",
        f"EDGE_WEIGHT_TYPE: {mode}",
        f"NUMBER_OF_CLUSTERS: {inst.k}",
        f"ROOT: {inst.root + 1}",
    ]
    if mode == "EUC_2D_REAL":
        lines.append("NODE_COORD_SECTION")
        for i, (x, y) in enumerate(g.coords, start=1):
            lines.append(f"{i} {_fmt(x)} {_fmt(y)}")
    else:
        lines.append("EDGE_SECTION")
        for u, v, w in g.iter_edges():
            lines.append(f"{u + 1} {v + 1} {_fmt(w)}")
    lines.append("CLUSTER_SECTION")
    for c in inst.clusters:
        lines.append(" ".join(str(v + 1) for v in c) + " -1")
    return "\n".join(lines) + "\n"


def generate_instance(n, k, layout="uniform-square", seed=0) -> ClusteredInstance:
    """Synthetic complete Euclidean instance, deterministic per seed.

    uniform-square: points uniform in [0,100]^2, clustered by nearest of the
    first k points (so every cluster is non-empty and n == k degenerates to
    singletons). grid-cells: the square is cut into an a x b grid of k cells
    and points are sampled inside their assigned cell.
    """
    if n < 1 or k < 1:
        raise InvalidParameters("n and k must be positive")
    if k > n:
        raise InvalidParameters(f"k={k} exceeds n={n}")
    rng = random.Random(seed)
    if layout == "uniform-square":
        pts = [(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(n)]
        centroids = pts[:k]
        assign = []
        for p in pts:
            best = min(range(k), key=lambda i: (math.dist(p, centroids[i]), i))
            assign.append(best)
        name = f"uni-n{n}-k{k}-s{seed}"
    elif layout == "grid-cells":
        a = int(math.sqrt(k))
        while k % a:
            a -= 1
        b = k // a
        cw, ch = 100.0 / b, 100.0 / a
        pts = []
        assign = []
        for i in range(n):
            cell = i % k
            row, col = divmod(cell, b)
            pts.append((rng.uniform(col * cw, (col + 1) * cw),
                        rng.uniform(row * ch, (row + 1) * ch)))
            assign.append(cell)
        name = f"grid-n{n}-{a}x{b}-s{seed}"
    else:
        raise InvalidParameters(f"unknown layout {layout!r}")
    clusters = [[] for _ in range(k)]
    for v, c in enumerate(assign):
        clusters[c].append(v)
    graph = WeightedGraph(n, coords=pts)
    # vertex 0 seeds cluster 0 in both layouts, so it is a valid root there
    return ClusteredInstance(graph, clusters, root=0, name=name)
