"""Minimum-error discrimination of qubit states.

Solves for the Lagrangian operator of the optimal strategy first and
derives every optimal measurement from it: closed-form constructions for
equiprobable pure ensembles (plus arbitrary two-state ensembles), an
independent dual oracle, optimality certificates, family enumeration and a
Born-rule Monte Carlo simulator.
"""

from .certify import (
    Certificate,
    Povm,
    check_det_condition,
    check_dual_feasible,
    check_global,
    check_stationarity,
    compute_lagrangian,
    error_probability,
    load_povm,
    load_povm_file,
)
from .dual import (
    DualResult,
    primal_random_search,
    recover_povm_from_dual,
    solve_dual,
)
from .ensembles import Ensemble, load_ensemble, load_ensemble_file, pairwise_overlap
from .errors import (
    DegenerateConfigurationError,
    NumericFailureError,
    QdiscError,
    SolverExhaustedError,
    UnsupportedRegimeError,
    ValidationError,
)
from .montecarlo import SimulationReport, simulate
from .operators import (
    BlochDirection,
    GeneralOp2,
    HermitianOp2,
    eigen_decompose,
    min_eigenvalue,
    op_mul,
    projector_from_direction,
)
from .solve import (
    LatitudeBasis,
    OptimalFamily,
    OptimalSolution,
    check_yuen_case,
    construct_candidate_povm,
    enumerate_optimal_family,
    find_common_latitude_basis,
    helstrom_two_state,
    min_error_common_latitude,
    solve_equiprobable_pure,
)

__version__ = "0.1.0"

__all__ = [
    "BlochDirection",
    "Certificate",
    "DegenerateConfigurationError",
    "DualResult",
    "Ensemble",
    "GeneralOp2",
    "HermitianOp2",
    "LatitudeBasis",
    "NumericFailureError",
    "OptimalFamily",
    "OptimalSolution",
    "Povm",
    "QdiscError",
    "SimulationReport",
    "SolverExhaustedError",
    "UnsupportedRegimeError",
    "ValidationError",
    "check_det_condition",
    "check_dual_feasible",
    "check_global",
    "check_stationarity",
    "check_yuen_case",
    "compute_lagrangian",
    "construct_candidate_povm",
    "eigen_decompose",
    "enumerate_optimal_family",
    "error_probability",
    "find_common_latitude_basis",
    "helstrom_two_state",
    "load_ensemble",
    "load_ensemble_file",
    "load_povm",
    "load_povm_file",
    "min_eigenvalue",
    "min_error_common_latitude",
    "op_mul",
    "pairwise_overlap",
    "primal_random_search",
    "projector_from_direction",
    "recover_povm_from_dual",
    "simulate",
    "solve_dual",
    "solve_equiprobable_pure",
]
