"""wqpe: windowed quantum phase estimation and projective ground-state
preparation, simulated exactly on dense state vectors."""

__version__ = "0.1.0"

from .errors import WqpeError
from .statevector import (
    EigenDecomposition,
    HermitianOperator,
    QuantumState,
    UnitaryOperator,
    apply_unitary,
    centered_qft,
    eig_hermitian,
    eig_unitary,
    expi_hermitian,
    principal_log_unitary,
)
from .windows import (
    WindowKind,
    WindowSpec,
    bound_cosine_plus_tail,
    bound_rect_tail,
    filter_cosine,
    filter_cosine_plus,
    filter_rect,
    window_amplitudes,
)
from .qpe import (
    OutcomeDistribution,
    QpeConfig,
    analytic_distribution,
    cbar_metric,
    error_rate,
    min_extra_qubits,
    run_qpe_circuit,
    verify_tail_bound,
)
from .stateprep import (
    FilterCoefficients,
    PrepConfig,
    PrepReport,
    apply_filter_circuit,
    apply_filter_eigen,
    filter_coefficients,
    ground_energy_scan,
    ground_state_distance,
    iteration_bound,
    lambda_shift_policy,
    perturbation_error_bound,
    precision_bound,
    residual_norm,
    run_preparation,
    success_rate_relations_check,
)
from .thirring import (
    AnsatzParams,
    ThirringParams,
    ThirringTerms,
    TrotterConfig,
    build_hamiltonian,
    chiral_condensate,
    diagonal_ground_reference,
    effective_hamiltonian,
    optimize_overlap,
    sigma_chi,
    suzuki2_step,
    variational_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
