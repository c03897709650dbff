"""Color-coding subgraph isomorphism enumerator over nice tree decompositions."""

from .graph import (Graph, GraphParseError, all_ones_mask, all_pairs_distances,
                    bfs_distances, degree_filter, erdos_renyi, load_graph,
                    parse_graph)
from .treedecomp import (NiceTreeDecomposition, TreeDecomposition,
                         decomposition_from_ordering, exact_treewidth,
                         make_nice, validate)
from .codec import CodecError, compress, decompress
from .dp import (ConfigList, DeadlineExceeded, MemoryBudgetExceeded,
                 iteration_count, process_forget, process_introduce,
                 process_join, process_leaf, random_coloring, run_iteration)
from .reconstruct import (ALL_MAPPINGS, DISTINCT_VERTEX_SETS, ArchiveCorruption,
                          ArchiveView, OccurrenceSet, enumerate_occurrences,
                          reconstruct)
from .engine import (SolveOptions, SolveReport, brute_force_all,
                     brute_force_colorful, derive_seed, iteration_rng, solve)
from .bench import SweepCell, SweepConfig, run_sweep, treewidth_curve

__version__ = "0.1.0"

__all__ = [
    "ALL_MAPPINGS", "ArchiveCorruption", "ArchiveView", "CodecError",
    "ConfigList", "DISTINCT_VERTEX_SETS", "DeadlineExceeded", "Graph",
    "GraphParseError", "MemoryBudgetExceeded", "NiceTreeDecomposition",
    "OccurrenceSet", "SolveOptions", "SolveReport", "SweepCell", "SweepConfig",
    "TreeDecomposition", "all_ones_mask", "all_pairs_distances",
    "bfs_distances", "brute_force_all", "brute_force_colorful", "compress",
    "decompress", "decomposition_from_ordering", "degree_filter",
    "derive_seed", "enumerate_occurrences", "erdos_renyi", "exact_treewidth",
    "iteration_count", "iteration_rng", "load_graph", "make_nice",
    "parse_graph", "process_forget", "process_introduce", "process_join",
    "process_leaf", "random_coloring", "reconstruct", "run_iteration",
    "solve", "validate",
]
