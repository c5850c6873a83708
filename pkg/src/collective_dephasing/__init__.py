"""Exact ensemble-averaged collective dephasing of qubit registers."""

from collective_dephasing.dephasing import (
    KrausSet,
    ThetaSet,
    ToeplitzMatrix,
    asymptotic_state,
    evolve,
    kraus_operators,
    lambda_projectors,
    theta_operators,
    toeplitz_matrix,
    trajectory,
)
from collective_dephasing.entanglement import (
    ANY_DIRECTION,
    FULLY_SEPARABLE_COMPATIBLE,
    CriticalAngles,
    SeparabilityReport,
    concurrence,
    concurrence_bell_diagonal,
    critical_angle_scan,
    critical_angles,
    keff_bound,
    predicted_final_concurrence,
    preserving_directions,
)
from collective_dephasing.linalg import (
    eig_hermitian,
    kron,
    pauli_dot,
    trace_distance,
)
from collective_dephasing.spectra import (
    Box,
    Gaussian,
    Lorentzian,
    Tabulated,
    characteristic_function,
    pdf,
    quadrature_cf,
)
from collective_dephasing.states import (
    bell_diagonal_from_d,
    bell_state,
    beta_matrix,
    d_vector,
    permutation_operator,
    phased_w_state,
    w_state,
    werner_state,
)

__all__ = [
    "KrausSet",
    "ThetaSet",
    "ToeplitzMatrix",
    "asymptotic_state",
    "evolve",
    "kraus_operators",
    "lambda_projectors",
    "theta_operators",
    "toeplitz_matrix",
    "trajectory",
    "ANY_DIRECTION",
    "FULLY_SEPARABLE_COMPATIBLE",
    "CriticalAngles",
    "SeparabilityReport",
    "concurrence",
    "concurrence_bell_diagonal",
    "critical_angle_scan",
    "critical_angles",
    "keff_bound",
    "predicted_final_concurrence",
    "preserving_directions",
    "eig_hermitian",
    "kron",
    "pauli_dot",
    "trace_distance",
    "Box",
    "Gaussian",
    "Lorentzian",
    "Tabulated",
    "characteristic_function",
    "pdf",
    "quadrature_cf",
    "bell_diagonal_from_d",
    "bell_state",
    "beta_matrix",
    "d_vector",
    "permutation_operator",
    "phased_w_state",
    "w_state",
    "werner_state",
]

__version__ = "0.1.0"
