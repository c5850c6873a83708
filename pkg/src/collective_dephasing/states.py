"""Bell, Bell-diagonal, W, phased W and multipartite Werner states.

Permutations are 0-based tuples ``s`` of ``range(N)``; qubit 0 is the most
significant bit of the computational index.
"""

from __future__ import annotations

from itertools import permutations
from typing import Mapping, Sequence

import numpy as np

from collective_dephasing.linalg import (
    HERMITIAN_ATOL,
    PAULIS,
    DimensionError,
    InvalidStateError,
    check_density_matrix,
    ket_to_dm,
)

D_DIAGONAL_ATOL = 1e-8

_S2 = 1 / np.sqrt(2)
_BELL_KETS = {
    "phi+": np.array([_S2, 0, 0, _S2], dtype=complex),
    "phi-": np.array([_S2, 0, 0, -_S2], dtype=complex),
    "psi+": np.array([0, _S2, _S2, 0], dtype=complex),
    "psi-": np.array([0, _S2, -_S2, 0], dtype=complex),
}
_LABEL_ALIASES = {"Φ": "phi", "Ψ": "psi", "φ": "phi", "ψ": "psi"}

# Tetrahedron vertex (<sx sx>, <sy sy>, <sz sz>) of each Bell state.
BELL_VERTICES = {
    "psi-": np.array([-1.0, -1.0, -1.0]),
    "phi-": np.array([-1.0, 1.0, 1.0]),
    "phi+": np.array([1.0, -1.0, 1.0]),
    "psi+": np.array([1.0, 1.0, -1.0]),
}


class UnsupportedStateError(ValueError):
    """The input is a valid state this routine deliberately does not handle."""


def _normalize_label(label: str) -> str:
    key = label.strip()
    for k, v in _LABEL_ALIASES.items():
        key = key.replace(k, v)
    key = key.lower().replace("_", "").replace("^", "")
    if key not in _BELL_KETS:
        raise ValueError(f"unknown Bell state {label!r}; expected one of {sorted(_BELL_KETS)}")
    return key


def bell_state(label: str) -> np.ndarray:
    """Projector onto a Bell state: ``'phi+'``, ``'phi-'``, ``'psi+'`` or ``'psi-'``."""
    return ket_to_dm(_BELL_KETS[_normalize_label(label)])


def bell_diagonal_from_d(d) -> np.ndarray:
    """``(I + sum_i d_i sigma_i (x) sigma_i) / 4``.

    Raises:
        InvalidStateError: if ``d`` lies outside the Bell tetrahedron.
    """
    d = np.asarray(d, dtype=float)
    if d.shape != (3,):
        raise ValueError(f"d must have 3 components, got shape {d.shape}")
    rho = np.eye(4, dtype=complex)
    for di, s in zip(d, PAULIS):
        rho = rho + di * np.kron(s, s)
    rho /= 4
    wmin = np.linalg.eigvalsh(rho)[0]
    if wmin < -HERMITIAN_ATOL:
        raise InvalidStateError(f"d={d.tolist()} lies outside the Bell tetrahedron (min eigenvalue {wmin:.3e})")
    return rho


def _check_two_qubit(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionError(f"expected a two-qubit (4x4) state, got shape {rho.shape}")
    return rho


def beta_matrix(rho) -> np.ndarray:
    """Correlation matrix ``beta_ij = tr(rho sigma_i (x) sigma_j)``."""
    rho = _check_two_qubit(rho)
    beta = np.array([[np.trace(rho @ np.kron(si, sj)) for sj in PAULIS] for si in PAULIS])
    residue = np.max(np.abs(beta.imag))
    if residue > HERMITIAN_ATOL:
        raise InvalidStateError(f"beta matrix has imaginary residue {residue:.3e}; input is not Hermitian")
    return beta.real


def d_vector(rho) -> np.ndarray:
    """Diagonal of the beta matrix of an already Bell-diagonal state.

    General states would first need local unitaries that diagonalize beta;
    that is not implemented.

    Raises:
        UnsupportedStateError: if beta has off-diagonal entries above 1e-8.
    """
    beta = beta_matrix(rho)
    off = np.max(np.abs(beta - np.diag(np.diag(beta))))
    if off > D_DIAGONAL_ATOL:
        raise UnsupportedStateError(
            f"beta matrix is not diagonal (max off-diagonal {off:.3e}); "
            "local-unitary diagonalization is not supported"
        )
    return np.diag(beta).copy()


def _single_excitation_ket(amplitudes: Sequence[complex]) -> np.ndarray:
    n = len(amplitudes)
    psi = np.zeros(2**n, dtype=complex)
    for q, a in enumerate(amplitudes):
        psi[1 << (n - 1 - q)] = a
    return psi


def w_state(n_qubits: int) -> np.ndarray:
    if n_qubits < 2:
        raise ValueError(f"W state needs at least 2 qubits, got {n_qubits}")
    return ket_to_dm(_single_excitation_ket(np.full(n_qubits, 1 / np.sqrt(n_qubits))))


def _check_permutation(s, n_qubits: int) -> tuple[int, ...]:
    s = tuple(int(x) for x in s)
    if sorted(s) != list(range(n_qubits)):
        raise ValueError(f"{s} is not a permutation of range({n_qubits})")
    return s


def phased_w_state(n_qubits: int, phase_order: Sequence[int] | None = None) -> np.ndarray:
    """W state whose excitation on qubit ``q`` carries ``exp(2 pi i (order[q] + 1) / N)``.

    The default order gives qubit 0 the phase ``exp(2 pi i / N)``, qubit 1
    ``exp(4 pi i / N)`` and so on, ending with phase 1 on the last qubit. For
    two qubits this is the singlet up to a global phase.
    """
    if n_qubits < 2:
        raise ValueError(f"phased W state needs at least 2 qubits, got {n_qubits}")
    order = range(n_qubits) if phase_order is None else _check_permutation(phase_order, n_qubits)
    k = np.array(order) + 1
    amps = np.exp(2j * np.pi * k / n_qubits) / np.sqrt(n_qubits)
    return ket_to_dm(_single_excitation_ket(amps))


def permutation_operator(s: Sequence[int], n_qubits: int) -> np.ndarray:
    """``V_s |i_0 ... i_{N-1}> = |i_{s[0]} ... i_{s[N-1]}>``.

    With this definition ``V_s @ V_r == V_{compose_permutations(s, r)}``.
    """
    s = _check_permutation(s, n_qubits)
    dim = 2**n_qubits
    idx = np.arange(dim)
    bits = (idx[:, None] >> (n_qubits - 1 - np.arange(n_qubits))) & 1
    out_bits = bits[:, s]
    out_idx = out_bits @ (1 << (n_qubits - 1 - np.arange(n_qubits)))
    v = np.zeros((dim, dim), dtype=complex)
    v[out_idx, idx] = 1
    return v


def compose_permutations(s: Sequence[int], r: Sequence[int]) -> tuple[int, ...]:
    """The permutation ``p`` with ``V_s V_r = V_p``, namely ``p[k] = r[s[k]]``."""
    return tuple(r[k] for k in s)


def werner_state(n_qubits: int, coefficients: Mapping[Sequence[int], float]) -> np.ndarray:
    """``sum_s c_s V_s``, validated as a density matrix.

    Raises:
        InvalidStateError: if the combination is not Hermitian, unit-trace and PSD.
    """
    dim = 2**n_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    for s, c in coefficients.items():
        rho += c * permutation_operator(s, n_qubits)
    try:
        return check_density_matrix(rho)
    except InvalidStateError as exc:
        raise InvalidStateError(f"Werner coefficients do not give a valid state: {exc}") from None


def sample_werner_state(n_qubits: int, rng: np.random.Generator, min_eigenvalue: float = 1e-6) -> np.ndarray:
    """Random state in the span of the permutation operators.

    Draws real coefficients, Hermitizes, mixes in just enough identity to lift
    the lowest eigenvalue to ``min_eigenvalue`` and renormalizes. All three
    steps stay inside the span of ``{V_s}``.
    """
    perms = list(permutations(range(n_qubits)))
    coeffs = rng.normal(size=len(perms))
    rho = sum(c * permutation_operator(s, n_qubits) for c, s in zip(coeffs, perms))
    rho = 0.5 * (rho + rho.conj().T)
    shift = max(0.0, min_eigenvalue - np.linalg.eigvalsh(rho)[0])
    rho = rho + shift * np.eye(2**n_qubits)
    return rho / np.trace(rho).real


def random_tetrahedron_point(rng: np.random.Generator) -> np.ndarray:
    """Uniform point in the Bell tetrahedron (Dirichlet weights on the vertices)."""
    weights = rng.dirichlet(np.ones(4))
    return weights @ np.array(list(BELL_VERTICES.values()))


def random_psi_minus_corner_point(rng: np.random.Generator) -> np.ndarray:
    """Uniform entangled point with all components <= 0 (the singlet corner)."""
    while True:
        d = random_tetrahedron_point(rng)
        if np.all(d <= 0) and np.sum(np.abs(d)) > 1:
            return d
