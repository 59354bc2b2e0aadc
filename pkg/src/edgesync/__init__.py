"""Edge-level synchronization toolkit for weighted agent networks.

Builds the edge-space lift of a weighted undirected graph, derives the
critical diffusive coupling gain from a quadratic contraction
certificate, and simulates the closed-loop network with fixed-step
integration. The cli module exposes the same pipeline as a command line
tool driven by scenario files.
"""

from .analysis import (
    DecayFit,
    SyncMetrics,
    check_monotone,
    edge_energy,
    fit_decay_rate,
    make_monitors,
    sync_error,
)
from .controller import (
    ControllerConfig,
    accumulate_coupling,
    coupling_inputs,
    critical_gain,
    edge_index_arrays,
    make_controller,
)
from .edge_lift import (
    EdgeLift,
    build_edge_lift,
    endpoint_correction_matrix,
    verify_endpoint_identities,
)
from .errors import (
    DimensionMismatchError,
    DisconnectedGraphError,
    DivergedError,
    EdgeSyncError,
    EmptyWindowError,
    LiftSearchError,
    NoConvergenceError,
    NonSymmetricError,
    NotPositiveDefiniteError,
    NotStabilizableError,
    ParseError,
    SingularMatrixError,
)
from .graphs import (
    GraphMatrices,
    SpectralReport,
    WeightedGraph,
    build_matrices,
    components,
    parse_graph_text,
    random_connected_graph,
    read_graph_file,
    spectral_report,
)
from .linalg import lyapunov_solve, nullspace_sym_psd, solve_linear, sym_eig
from .metric import (
    MetricCertificate,
    verify_ari_sampled,
    verify_killing_integrability,
)
from .models import (
    AgentModel,
    LinearFeedback,
    convective_linearization,
    default_lorenz_alpha,
    linear_model,
    lorenz_model,
    tanh_perturbed_model,
)
from .riccati import LinearDesign, bass_initial_gain, solve_ari
from .scenario import RunSetup, Scenario, parse_scenario, parse_scenario_text, realize
from .simulate import (
    NetworkState,
    Trajectory,
    perturbed_initial_conditions,
    rk4_step,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "AgentModel",
    "ControllerConfig",
    "DecayFit",
    "DimensionMismatchError",
    "DisconnectedGraphError",
    "DivergedError",
    "EdgeLift",
    "EdgeSyncError",
    "EmptyWindowError",
    "GraphMatrices",
    "LiftSearchError",
    "LinearDesign",
    "LinearFeedback",
    "MetricCertificate",
    "NetworkState",
    "NoConvergenceError",
    "NonSymmetricError",
    "NotPositiveDefiniteError",
    "NotStabilizableError",
    "ParseError",
    "RunSetup",
    "Scenario",
    "SingularMatrixError",
    "SpectralReport",
    "SyncMetrics",
    "Trajectory",
    "WeightedGraph",
    "accumulate_coupling",
    "bass_initial_gain",
    "build_edge_lift",
    "build_matrices",
    "check_monotone",
    "components",
    "convective_linearization",
    "coupling_inputs",
    "critical_gain",
    "default_lorenz_alpha",
    "edge_energy",
    "edge_index_arrays",
    "endpoint_correction_matrix",
    "fit_decay_rate",
    "linear_model",
    "lorenz_model",
    "lyapunov_solve",
    "make_controller",
    "make_monitors",
    "nullspace_sym_psd",
    "parse_graph_text",
    "parse_scenario",
    "parse_scenario_text",
    "perturbed_initial_conditions",
    "random_connected_graph",
    "read_graph_file",
    "realize",
    "rk4_step",
    "simulate",
    "solve_ari",
    "solve_linear",
    "spectral_report",
    "sym_eig",
    "sync_error",
    "tanh_perturbed_model",
    "verify_ari_sampled",
    "verify_endpoint_identities",
    "verify_killing_integrability",
]
