"""Correlation structure of finite-dimensional multipartite quantum states.

Reconstruct states from subsystem coincidence probabilities, quantify the
correlations seen by strings of cluster events, compute the unique finest
uncorrelated cluster decomposition, and simulate projective measurement
with its distant effects.
"""

from .correlations import (
    CorrelationInformation,
    CorrelationReport,
    EventString,
    Projector,
    check_zero_probability_blindness,
    coincidence_probability,
    correlation_information,
    seen_correlation,
    von_neumann_entropy,
)
from .factorization import (
    FactorizationResult,
    SeevinckCheck,
    classify_homogeneity,
    find_correlation_witness,
    finest_ucd,
    finest_ucd_exhaustive,
    is_correlationally_isolated,
    is_ucd,
    seevinck_condition,
    seevinck_violation_search,
)
from .fixtures import bell_basis, fixture, fixture_names
from .linalg import (
    HermitianEigenSystem,
    ValidationError,
    adjoint,
    embed_operator,
    frobenius_distance,
    hermitian_eig,
    kron,
    kron_all,
    matrix_sqrt_psd,
    partial_trace,
    trace_of,
)
from .measurement import (
    DistantDecomposition,
    ProjectiveDecomposition,
    conditional_probability_identity,
    conditional_state,
    distant_decomposition,
    local_unitary_no_signaling,
    luders_nonselective,
    luders_selective,
)
from .partitions import (
    ClusterDecomposition,
    coarsen,
    enumerate_partitions,
    intersect,
    intersect_all,
    is_coarsening,
)
from .schmidt import (
    CorrelationOperator,
    SchmidtForm,
    correlation_operator,
    partners_in_basis,
    schmidt_decompose,
    seen_correlation_pure,
)
from .states import DensityOperator, StateVector, permute_subsystems, reduced_state
from .tomography import (
    DyadDecomposition,
    ProbeBasis,
    Reconstruction,
    build_probe_basis,
    dyad_as_projectors,
    gram_linear_independence_check,
    probe_probabilities,
    product_probe_set,
    reconstruct,
    required_probe_count,
)

__version__ = "0.1.0"

__all__ = [
    "CorrelationInformation",
    "CorrelationOperator",
    "CorrelationReport",
    "ClusterDecomposition",
    "DensityOperator",
    "DistantDecomposition",
    "DyadDecomposition",
    "EventString",
    "FactorizationResult",
    "HermitianEigenSystem",
    "ProbeBasis",
    "ProjectiveDecomposition",
    "Projector",
    "Reconstruction",
    "SchmidtForm",
    "SeevinckCheck",
    "StateVector",
    "ValidationError",
    "adjoint",
    "bell_basis",
    "build_probe_basis",
    "check_zero_probability_blindness",
    "classify_homogeneity",
    "coarsen",
    "coincidence_probability",
    "conditional_probability_identity",
    "conditional_state",
    "correlation_information",
    "correlation_operator",
    "distant_decomposition",
    "dyad_as_projectors",
    "embed_operator",
    "enumerate_partitions",
    "find_correlation_witness",
    "finest_ucd",
    "finest_ucd_exhaustive",
    "fixture",
    "fixture_names",
    "frobenius_distance",
    "gram_linear_independence_check",
    "hermitian_eig",
    "intersect",
    "intersect_all",
    "is_coarsening",
    "is_correlationally_isolated",
    "is_ucd",
    "kron",
    "kron_all",
    "local_unitary_no_signaling",
    "luders_nonselective",
    "luders_selective",
    "matrix_sqrt_psd",
    "partial_trace",
    "partners_in_basis",
    "permute_subsystems",
    "probe_probabilities",
    "product_probe_set",
    "reconstruct",
    "reduced_state",
    "required_probe_count",
    "schmidt_decompose",
    "seen_correlation",
    "seen_correlation_pure",
    "seevinck_condition",
    "seevinck_violation_search",
    "trace_of",
    "von_neumann_entropy",
]
