"""Genuine multipartite nonlocality witnesses from bipartite chained games on networks."""

from .boxworld import (
    Box,
    NetworkDistribution,
    anti_pr_box,
    box_from_quantum,
    chsh_score,
    is_local_2222,
    pr_box,
    pr_mix,
    tensor_line,
    tensor_network,
    tsirelson_box,
    verify_paper_decomposition,
)
from .chained import (
    ChainedGameSpec,
    GameBounds,
    chained_bounds,
    chained_coefficients,
    chained_score,
    optimal_settings,
)
from .experiment import (
    ExperimentConfig,
    RunReport,
    critical_homogeneous_visibility,
    fit_visibilities,
    reproduce,
    simulate,
)
from .network import (
    NetworkGraph,
    critical_visibility,
    cycle,
    fully_multipartite_visibility,
    line3,
    min_degree,
    named_graph,
    optimize_k,
    quantum_total,
    regular_visibility,
    svetlichny_bound,
    triangle,
)
from .oracle import ExpressionTable, local_max, oracle_max, score_distribution
from .quantum import (
    DensityMatrix,
    NoisyStateParams,
    Observable,
    Plane,
    bell_state,
    correlator,
    noisy_state,
    tensor,
)

__version__ = "0.1.0"
