"""Synthesis and verification of dissipative pure-Gaussian-state preparation
with a diagonal passive Hamiltonian and a single engineered channel."""

from .errors import (
    DegenerateCovarianceError,
    DerogatoryMatrixError,
    DimensionError,
    GsynthError,
    InfeasibleStateError,
    InvalidCovarianceError,
    InvalidRError,
    MatrixFileError,
    NotHurwitzError,
    NotPureStateError,
    SingularMatrixError,
    UnsupportedBipartitionError,
)
from .gaussian import (
    CovarianceMatrix,
    GraphMatrix,
    factor_covariance,
    graph_to_covariance,
    log_negativity,
    purity,
    reduced_state,
    symplectic_eigenvalues,
    symplectic_form,
)
from .numerics import (
    DEFAULT_TOL,
    Permutation,
    eig,
    expm,
    is_hurwitz,
    rank_tol,
    solve_lyapunov,
    spectral_abscissa,
)
from .structure import (
    BlockClass,
    BlockDecomposition,
    Certificate,
    assemble_graph,
    decompose,
    find_cyclic_vector,
    is_controllable,
    non_derogatory,
    phi_membership,
    xi_membership,
)
from .synthesis import (
    ConstraintReport,
    Realization,
    assemble_realization,
    build_C,
    build_G,
    build_Gamma,
    build_R,
    synthesize,
    verify_constraints,
)
from .dynamics import (
    GenerationReport,
    MomentSystem,
    Trajectory,
    build_moment_system,
    evolve,
    steady_state,
    verify_generation,
)
from .noise import (
    NoiseChannel,
    RobustnessReport,
    SteadyMetrics,
    augment,
    bath_channels,
    channel_row,
    robustness_report,
)
from . import states

__version__ = "0.1.0"

__all__ = [
    "CovarianceMatrix",
    "GraphMatrix",
    "Permutation",
    "BlockClass",
    "BlockDecomposition",
    "Certificate",
    "Realization",
    "ConstraintReport",
    "MomentSystem",
    "Trajectory",
    "GenerationReport",
    "NoiseChannel",
    "SteadyMetrics",
    "RobustnessReport",
    "DEFAULT_TOL",
    "eig",
    "rank_tol",
    "solve_lyapunov",
    "expm",
    "is_hurwitz",
    "spectral_abscissa",
    "symplectic_form",
    "factor_covariance",
    "graph_to_covariance",
    "purity",
    "symplectic_eigenvalues",
    "log_negativity",
    "reduced_state",
    "phi_membership",
    "xi_membership",
    "non_derogatory",
    "find_cyclic_vector",
    "is_controllable",
    "decompose",
    "assemble_graph",
    "build_R",
    "build_Gamma",
    "build_G",
    "build_C",
    "assemble_realization",
    "synthesize",
    "verify_constraints",
    "build_moment_system",
    "steady_state",
    "evolve",
    "verify_generation",
    "channel_row",
    "bath_channels",
    "augment",
    "robustness_report",
    "states",
    "GsynthError",
    "DimensionError",
    "SingularMatrixError",
    "NotHurwitzError",
    "NotPureStateError",
    "DegenerateCovarianceError",
    "InvalidCovarianceError",
    "UnsupportedBipartitionError",
    "DerogatoryMatrixError",
    "InvalidRError",
    "InfeasibleStateError",
    "MatrixFileError",
    "__version__",
]
