"""Multilayer spectral graph clustering via convex layer aggregation.

A numpy/scipy library for clustering the shared node set of a multilayer
graph: layers are collapsed through a convex combination, the aggregated
Laplacian's smallest eigenvectors embed the nodes, and K-means groups the
rows. Alongside the pipeline, the package evaluates the closed-form
phase-transition theory of the aggregated noise level (critical-value
bounds, predicted eigenvalue-sum lines, subspace perturbation bounds,
critical layer weights) and ships generators plus sweep tooling for the
synthetic experiments.
"""

from .cluster import KMeansResult, detectability, kmeans, multilayer_sgc
from .generate import (
    CorrelatedTwoLayerParams,
    RIMParams,
    WeightSampler,
    generate_correlated_two_layer,
    generate_rim,
    identical_noise_twin,
)
from .graph import (
    ClusterAssignment,
    GraphError,
    LayerWeights,
    MultilayerGraph,
    aggregate,
    as_layer_weights,
    is_connected,
    laplacian,
    within_cluster_laplacian,
)
from .io import (
    GraphFormatError,
    read_graph,
    read_labels,
    write_graph,
    write_labels,
    write_sidecar,
)
from .phase import (
    CriticalWeight,
    DegenerateDeltaError,
    NoiseSpec,
    PhaseReport,
    SeparabilityDiagnostic,
    aggregated_noise,
    c_star,
    classify_regime,
    critical_bounds,
    critical_weight,
    layerwise_c_star_gap,
    min_within_partial_sum,
    phase_report,
    predicted_partial_sum,
    separability_diagnostic,
    sin_theta_min_bound,
    sin_theta_upper_bound,
    universal_lower_bound,
)
from .spectral import (
    EigensolverError,
    SpectralEmbedding,
    SubspaceDistance,
    embedding,
    partial_eigenvalue_sum,
    principal_angles,
    smallest_eigenpairs,
)
from .sweep import (
    GEOMEAN_CSV_FIELDS,
    NOISE_CSV_FIELDS,
    WEIGHT_CSV_FIELDS,
    SweepSpec,
    cell_seeds,
    float_range,
    geometric_mean_rows,
    read_sweep_csv,
    render_from_csv,
    resolve_workers,
    run_noise_sweep,
    run_weight_sweep,
    write_geomean_outputs,
    write_sweep_csv,
)

__version__ = "0.1.0"

__all__ = [
    "GEOMEAN_CSV_FIELDS",
    "NOISE_CSV_FIELDS",
    "WEIGHT_CSV_FIELDS",
    "ClusterAssignment",
    "CorrelatedTwoLayerParams",
    "CriticalWeight",
    "DegenerateDeltaError",
    "EigensolverError",
    "GraphError",
    "GraphFormatError",
    "KMeansResult",
    "LayerWeights",
    "MultilayerGraph",
    "NoiseSpec",
    "PhaseReport",
    "RIMParams",
    "SeparabilityDiagnostic",
    "SpectralEmbedding",
    "SubspaceDistance",
    "SweepSpec",
    "WeightSampler",
    "aggregate",
    "aggregated_noise",
    "as_layer_weights",
    "c_star",
    "cell_seeds",
    "classify_regime",
    "critical_bounds",
    "critical_weight",
    "detectability",
    "embedding",
    "float_range",
    "generate_correlated_two_layer",
    "generate_rim",
    "geometric_mean_rows",
    "identical_noise_twin",
    "is_connected",
    "kmeans",
    "laplacian",
    "layerwise_c_star_gap",
    "min_within_partial_sum",
    "multilayer_sgc",
    "partial_eigenvalue_sum",
    "phase_report",
    "predicted_partial_sum",
    "principal_angles",
    "read_graph",
    "read_labels",
    "read_sweep_csv",
    "render_from_csv",
    "resolve_workers",
    "run_noise_sweep",
    "run_weight_sweep",
    "separability_diagnostic",
    "sin_theta_min_bound",
    "sin_theta_upper_bound",
    "smallest_eigenpairs",
    "universal_lower_bound",
    "within_cluster_laplacian",
    "write_geomean_outputs",
    "write_graph",
    "write_labels",
    "write_sidecar",
    "write_sweep_csv",
]
