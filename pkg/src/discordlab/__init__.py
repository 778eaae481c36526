"""discordlab: quantum discord and open-system classicality at desk scale.

Dense multipartite density operators, one-way/two-way discord with
measurement-basis optimization, tensor-factor regrouping ("structures"),
unitary + GKSL dynamics, and scenario bundles with machine-checkable
verdicts. Entropies are in nats throughout.
"""
from .correlations import (
    DiscordReport,
    LiiFlowResult,
    MeasurementBasis,
    c_classicality_check,
    c_classicality_check_joint,
    classical_correlations,
    conditional_entropy,
    discord,
    discord_oracle_qubit,
    full_report,
    is_lazy,
    lii_flow,
    mutual_information,
)
from .dynamics import (
    DisdScenario,
    HamiltonianSpec,
    LindbladSpec,
    MarkovianScenario,
    StateTrajectory,
    TimeSeries,
    assemble,
    choi_matrix,
    evolve_lindblad,
    evolve_unitary,
    kraus_from_choi,
    lindblad_superoperator,
    rk4_step_matrix,
    robustness_check,
    run_disd,
    run_markovian_classicality,
    time_grid,
)
from .states import (
    DensityOperator,
    HilbertFactorization,
    InvalidStateError,
    PureState,
    ValidationReport,
    apply_unitary,
    partial_trace,
    purify,
    tensor_product,
    unitary_propagator,
    validate_density,
    von_neumann_entropy,
)
from .structures import (
    Grouping,
    StructureReport,
    regroup,
    structure_report,
    transform,
    ungroup,
)

__version__ = "0.1.0"

__all__ = [
    # states
    "DensityOperator", "HilbertFactorization", "InvalidStateError", "PureState",
    "ValidationReport", "apply_unitary", "partial_trace", "purify",
    "tensor_product", "unitary_propagator", "validate_density",
    "von_neumann_entropy",
    # correlations
    "DiscordReport", "LiiFlowResult", "MeasurementBasis",
    "c_classicality_check", "c_classicality_check_joint",
    "classical_correlations", "conditional_entropy", "discord",
    "discord_oracle_qubit", "full_report", "is_lazy", "lii_flow",
    "mutual_information",
    # structures
    "Grouping", "StructureReport", "regroup", "structure_report", "transform",
    "ungroup",
    # dynamics
    "DisdScenario", "HamiltonianSpec", "LindbladSpec", "MarkovianScenario",
    "StateTrajectory", "TimeSeries", "assemble", "choi_matrix",
    "evolve_lindblad", "evolve_unitary", "kraus_from_choi",
    "lindblad_superoperator", "rk4_step_matrix", "robustness_check", "run_disd",
    "run_markovian_classicality", "time_grid",
    "__version__",
]
