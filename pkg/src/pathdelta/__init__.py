"""Path-length distance between phylogenetic trees in near-linear time."""

from .trees import (
    TreeError,
    TaxonSetMismatchError,
    UnrootedTree,
    RootedTree,
    ValidatedPair,
    root_at_taxon,
    validate_pair,
)
from .newick import NewickParseError, parse_newick, write_newick
from .oracle import (
    Lcg,
    random_binary_tree,
    all_pairs_path_lengths,
    delta_bruteforce,
    squared_paths_bruteforce,
    inner_product_bruteforce,
    chi_tilde_bruteforce,
)
from .squared_paths import EdgeStats, compute_edge_stats, sum_squared_paths
from .segments import (
    SegDecTree,
    build_segment_decomposition,
    verify_decomposition,
)
from .inner_product import (
    BLACK,
    WHITE,
    Colouring,
    DecoratedTD,
    SumStats,
    compute_inner_product,
    decorate,
    inner_product_sum,
)
from .distance import DistanceResult, distance_between, path_length_distance

__version__ = "0.1.0"

__all__ = [
    "TreeError",
    "TaxonSetMismatchError",
    "UnrootedTree",
    "RootedTree",
    "ValidatedPair",
    "root_at_taxon",
    "validate_pair",
    "NewickParseError",
    "parse_newick",
    "write_newick",
    "Lcg",
    "random_binary_tree",
    "all_pairs_path_lengths",
    "delta_bruteforce",
    "squared_paths_bruteforce",
    "inner_product_bruteforce",
    "chi_tilde_bruteforce",
    "EdgeStats",
    "compute_edge_stats",
    "sum_squared_paths",
    "SegDecTree",
    "build_segment_decomposition",
    "verify_decomposition",
    "BLACK",
    "WHITE",
    "Colouring",
    "DecoratedTD",
    "SumStats",
    "compute_inner_product",
    "decorate",
    "inner_product_sum",
    "DistanceResult",
    "distance_between",
    "path_length_distance",
    "__version__",
]
