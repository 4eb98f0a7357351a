import pytest

from cluspt.graph import ClusteredInstance, WeightedGraph


@pytest.fixture
def toy():
    """4-vertex instance with two clusters and a known optimum of 8."""
    g = WeightedGraph(4, edges=[(0, 1, 1.0), (2, 3, 1.0),
                                (1, 2, 2.0), (0, 3, 5.0)])
    return ClusteredInstance(g, [[0, 1], [2, 3]], 0, name="toy")


@pytest.fixture
def toy_text():
    return """NAME: toy
TYPE: CluSPT
DIMENSION: 4
EDGE_WEIGHT_TYPE: EXPLICIT
NUMBER_OF_CLUSTERS: 2
ROOT: 1
EDGE_SECTION
1 2 1.0
3 4 1.0
2 3 2.0
1 4 5.0
CLUSTER_SECTION
1 2 -1
3 4 -1
EOF
"""
