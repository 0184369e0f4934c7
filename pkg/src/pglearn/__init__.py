"""pglearn: learning the factor graphs of a Cartesian product graph from
smooth multidomain signals, with a water-filling KKT solver and a joint
matrix-completion extension for incomplete data."""

from .completion import (
    CompletionConfig,
    JointResult,
    alternate_joint,
    complete_signals,
    svt,
)
from .errors import (
    DataError,
    GenerationError,
    NotConvergedError,
    PGLearnError,
    UnboundedLevelError,
    ZeroCurvatureError,
)
from .graphs import (
    DEFAULT_EDGE_THRESHOLD,
    DEFAULT_TOL,
    LaplacianDiagnostics,
    cartesian_sum,
    edge_set,
    laplacian_from_weights,
    trace_normalized,
    validate_laplacian,
    weights_from_laplacian,
)
from .learn import (
    GridSearchResult,
    LearnConfig,
    default_grid,
    grid_search,
    learn_product_graph,
    learn_two_step,
)
from .metrics import EdgeScore, ObjectiveBreakdown, f_measure, nuclear_norm, objective_value
from .projgrad import PGOptions, PGResult, solve_projected_gradient
from .qp import (
    StandardQP,
    build_factor_qp,
    build_factorization_qp,
    build_single_qp,
    signed_vecl,
    unvecl,
)
from .signals import (
    MaskedData,
    MultidomainData,
    reshape_signal,
    smoothness_factored,
    smoothness_full,
    vec_signal,
)
from .synthetic import (
    CommunityGraphConfig,
    apply_mask,
    community_graph,
    default_noise_sigma,
    sample_smooth_signals,
)
from .waterfill import (
    WaterfillOptions,
    WaterfillResult,
    scalar_water_level,
    solve_waterfill,
)

__version__ = "0.1.0"
