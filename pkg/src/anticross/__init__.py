"""Quantum estimation of the parameter of a two-level Hamiltonian with a level anti-crossing."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateBundleError,
    DeterministicOutcomeError,
    DomainError,
    NonIdentifiableError,
    ZeroInformationError,
)
from .hamiltonian import (
    BlochState,
    CoefficientBundle,
    DerivativeBundle,
    SpectralData,
    TwoLevelModel,
    eigenprojectors,
    eigenvalues,
    finite_difference_derivatives,
    function_model,
    hamiltonian_matrix,
    purity,
    table_model,
    thermal_state,
    validate_model,
)
from .metrology import (
    FisherBreakdown,
    MeasurementDirection,
    PauliOperator,
    fisher_projective,
    g_function,
    optimal_direction_highT,
    outcome_probability,
    qfi_fidelity_oracle,
    qfi_ground,
    sld_ground,
    thermal_fisher,
    thermal_outcome_probability,
    thermal_qfi,
)
from .dynamics import SuperpositionSpec, evolution_operator, evolve_superposition, qfi_evolved, qfi_evolved_analytic
from .estimation import EstimatorConfig, EstimationReport, OutcomeRecord, bayes_estimate, mle_estimate, run_experiment, sample_outcomes
from .config import load_model, model_from_config
