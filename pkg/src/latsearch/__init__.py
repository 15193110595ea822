"""Quantum spatial search on a 2D periodic lattice via the Dirac walk.

A state-vector simulator for discrete-time spatial search built from the
staggered-fermion discretisation of the massless Dirac operator, with an
optional ancilla-controlled variant that traps amplitude at the marked
vertex, plus the scaling-analysis tooling to fit the peak probability and
oracle-call laws.
"""

from .ancilla import (
    AncillaParams,
    apply_controlled_oracle,
    apply_controlled_walk_power,
    apply_oracle,
    apply_x_delta,
    apply_zbar,
    tulsi_iteration,
)
from .dense import DenseOperator, dense_search, dense_walk_matrix, unitarity_check
from .lattice import (
    LatticeConfig,
    Mode,
    StateVector,
    WalkParams,
    marked_probability,
    norm,
    projected_probability,
    site_index,
    uniform_state,
)
from .scaling import (
    BEstimate,
    ConsistencyReport,
    FitForm,
    FitResult,
    ScalingPoint,
    b_from_p,
    b_from_q,
    consistency_report,
    fit_complexity,
    fit_p_ancilla,
    fit_p_noancilla,
    fit_t2,
    linear_fit,
    optimal_cos_delta,
)
from .search import (
    ScanRow,
    SearchResult,
    cos_delta_rule,
    default_t2_max,
    effective_complexity,
    find_first_peak,
    find_peak,
    run_plain_search,
    run_search,
    run_tulsi_search,
    scan_parameters,
)
from .walk import (
    GENERATOR,
    Parity,
    PlaquetteBlock,
    apply_half_step,
    apply_walk,
    apply_walk_power,
    build_block,
)

__version__ = "0.1.0"

__all__ = [
    "AncillaParams",
    "BEstimate",
    "ConsistencyReport",
    "DenseOperator",
    "FitForm",
    "FitResult",
    "GENERATOR",
    "LatticeConfig",
    "Mode",
    "Parity",
    "PlaquetteBlock",
    "ScalingPoint",
    "ScanRow",
    "SearchResult",
    "StateVector",
    "WalkParams",
    "apply_controlled_oracle",
    "apply_controlled_walk_power",
    "apply_half_step",
    "apply_oracle",
    "apply_walk",
    "apply_walk_power",
    "apply_x_delta",
    "apply_zbar",
    "b_from_p",
    "b_from_q",
    "build_block",
    "consistency_report",
    "cos_delta_rule",
    "default_t2_max",
    "dense_search",
    "dense_walk_matrix",
    "effective_complexity",
    "find_first_peak",
    "find_peak",
    "fit_complexity",
    "fit_p_ancilla",
    "fit_p_noancilla",
    "fit_t2",
    "linear_fit",
    "marked_probability",
    "norm",
    "optimal_cos_delta",
    "projected_probability",
    "run_plain_search",
    "run_search",
    "run_tulsi_search",
    "scan_parameters",
    "site_index",
    "tulsi_iteration",
    "uniform_state",
    "unitarity_check",
]
