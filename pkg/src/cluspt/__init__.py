"""Clustered shortest-path tree: instances, solvers, benchmarking."""

from .decode import (
    CluSolution,
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
from .errors import (
    CluSPTError,
    DegenerateInput,
    DisconnectedClusterGraph,
    DisconnectedSubgraph,
    InfeasibleRoots,
    InvalidBaseline,
    InvalidParameters,
    NotATree,
    ParseError,
    TooLarge,
    ValidationError,
)
from .gacspt import GaConfig, run_gacspt
from .graph import ClusteredInstance, RootedTree, WeightedGraph, dijkstra_spt, tree_cost
from .instances import generate_instance, parse_instance, serialize_instance
from .lsea import LowerConfig, run_gafll, run_nlsea
from .metrics import (
    RunRecord,
    normalize_trace,
    pi_gap,
    rpd,
    run_campaign,
    run_single,
    summarize,
)
from .mfea import run_mfea_pair, run_mlsea
from .stats import friedman_suite, friedman_test, holm_adjust, wilcoxon_signed_rank

__version__ = "1.0.0"

__all__ = [
    "CluSPTError", "ParseError", "ValidationError", "InvalidParameters",
    "DisconnectedSubgraph", "DisconnectedClusterGraph", "NotATree",
    "InfeasibleRoots", "TooLarge", "InvalidBaseline", "DegenerateInput",
    "WeightedGraph", "RootedTree", "ClusteredInstance", "dijkstra_spt",
    "tree_cost", "parse_instance", "serialize_instance", "generate_instance",
    "CluSolution", "build_cluster_multigraph", "genome_is_valid",
    "genome_cost", "decode_genome", "build_directed_cluster_graph",
    "arborescence_is_valid", "arborescence_cost", "decode_arborescence",
    "neighbors", "brute_force_optimum",
    "GaConfig", "run_gacspt", "LowerConfig", "run_gafll", "run_nlsea",
    "run_mfea_pair", "run_mlsea",
    "rpd", "pi_gap", "normalize_trace", "RunRecord", "run_single",
    "run_campaign", "summarize",
    "friedman_test", "friedman_suite", "holm_adjust", "wilcoxon_signed_rank",
]
