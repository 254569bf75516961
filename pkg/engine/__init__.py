"""
pfrechet engine package
Preprocessing and (1+ε)-approximate discrete Fréchet and Hausdorff queries over packed curves.
"""

from engine.metric_oracles import (
    DistanceOracle,
    EuclideanOracle,
    GraphOracle,
    PerturbedOracle,
    CountingOracle,
    WeightedGraph,
    euclidean_oracle,
    graph_oracle,
    perturbed_oracle,
)

from engine.curve_model import (
    Curve,
    build_curve,
    subcurve_length,
    estimate_packedness,
)

from engine.curve_simplification import (
    DynamicCurve,
    SimplificationTree,
    LazySimplification,
    build_tree,
    iter_simplification,
    simplify,
    extend,
    truncate,
)

from engine.tadd import (
    TaddIntervals,
    PrefixSplitTree,
    ScaledIntervalSet,
    build_1tadd,
    build_2d_tadd,
    rebuild_after_update,
    verify_tadd,
    scale_for_frechet,
    scale_for_hausdorff,
)

from engine.curve_index import CurveIndex

from engine.frechet_engine import (
    exact_discrete_frechet,
    decide,
    value,
    zero_bound,
    audit_zero_bound,
)

from engine.hausdorff_engine import (
    NnDecomposition,
    build_nn_decomposition,
    nearest_in_range,
    exact_hausdorff,
    hausdorff_decide,
    hausdorff_value,
)

__all__ = [
    # Oracles
    "DistanceOracle",
    "EuclideanOracle",
    "GraphOracle",
    "PerturbedOracle",
    "CountingOracle",
    "WeightedGraph",
    "euclidean_oracle",
    "graph_oracle",
    "perturbed_oracle",
    # Curves
    "Curve",
    "build_curve",
    "subcurve_length",
    "estimate_packedness",
    # Simplification
    "DynamicCurve",
    "SimplificationTree",
    "LazySimplification",
    "build_tree",
    "iter_simplification",
    "simplify",
    "extend",
    "truncate",
    # TADD
    "TaddIntervals",
    "ScaledIntervalSet",
    "PrefixSplitTree",
    "build_1tadd",
    "build_2d_tadd",
    "rebuild_after_update",
    "verify_tadd",
    "scale_for_frechet",
    "scale_for_hausdorff",
    # Queries
    "CurveIndex",
    "exact_discrete_frechet",
    "decide",
    "value",
    "zero_bound",
    "audit_zero_bound",
    "NnDecomposition",
    "build_nn_decomposition",
    "nearest_in_range",
    "exact_hausdorff",
    "hausdorff_decide",
    "hausdorff_value",
]
