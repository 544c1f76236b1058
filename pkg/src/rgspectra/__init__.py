"""Spectral concentration experiments for edge-independent random graphs."""

from .models import (
    DegreeProfile,
    GraphSample,
    ProbabilityMatrix,
    chung_lu,
    degrees,
    erdos_renyi,
    percolation,
    probability_matrix,
    sample,
)
from .graphmatrices import (
    Decomposition,
    IsolatedVertexError,
    LaplacianPair,
    SpectralSplit,
    decompose,
    default_tau,
    laplacians,
    spectral_split,
)
from .linalg import SpectralSummary, eigen_symmetric, spectral_norm, weyl_deviation
from .walks import (
    ClosedWalk,
    WalkCensus,
    count_full,
    enumerate_canonical,
    exact_trace_moment,
    fk_bound,
    s_term,
    trace_bound,
    vu_bound,
    walk_weight_bound,
)
from .concentration import (
    ExperimentSummary,
    TrialReport,
    XStatistics,
    adjacency_trial,
    chernoff_tails,
    degree_concentration_trial,
    laplacian_trial,
    percolation_adjacency_trial,
    percolation_laplacian_trial,
    run_experiment,
    weighted_x_tail,
    x_statistics,
)
from .config import ExperimentConfig, load_config, parse_config

__version__ = "0.1.0"
