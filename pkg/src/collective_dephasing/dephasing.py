"""The collective dephasing channel for N qubits in a fluctuating homogeneous field.

Every qubit sees the same random splitting ``omega`` along the unit axis
``n``. Averaging the product unitaries over ``p(omega)`` gives

    rho(t) = sum_{j,k} M_jk(t) Theta_j rho(0) Theta_k,    M_jk(t) = phi((j - k) t)

where ``Theta_j`` projects onto the states with exactly ``j`` qubits in the
``-1`` eigenstate of ``n . sigma``. Diagonalizing the Toeplitz matrix ``M``
gives the same map in Kraus form with ``N + 1`` operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from collective_dephasing.linalg import (
    DEFAULT_N_CAP,
    HERMITIAN_ATOL,
    IDENTITY_2,
    PSD_ATOL,
    DimensionError,
    as_direction,
    check_density_matrix,
    clamp_spectrum,
    eig_hermitian,
    n_qubits_of,
    pauli_dot,
)
from collective_dephasing.spectra import SpectralModel

MODES = ("double_sum", "kraus")


class NotPositiveSemidefiniteError(ValueError):
    """A Toeplitz matrix has an eigenvalue below ``-1e-9``.

    By Bochner's theorem this cannot happen for a genuine probability
    density, so it points at a defective (usually tabulated) noise model.
    """


def lambda_projectors(n) -> tuple[np.ndarray, np.ndarray]:
    """Eigenprojectors ``(I + n.sigma)/2`` and ``(I - n.sigma)/2``."""
    ns = pauli_dot(n)
    return 0.5 * (IDENTITY_2 + ns), 0.5 * (IDENTITY_2 - ns)


@dataclass(frozen=True, eq=False)
class ThetaSet:
    n_qubits: int
    direction: np.ndarray
    thetas: tuple[np.ndarray, ...]

    def __len__(self):
        return len(self.thetas)

    def __getitem__(self, j):
        return self.thetas[j]

    def __iter__(self):
        return iter(self.thetas)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def stacked(self) -> np.ndarray:
        return np.stack(self.thetas)


def theta_operators(n, n_qubits: int, n_cap: int = DEFAULT_N_CAP) -> ThetaSet:
    """Projectors ``Theta_0 .. Theta_N`` for field axis ``n``.

    ``Theta_j`` is the sum, over all ``binomial(N, j)`` subsets ``S`` of qubit
    positions, of the product operator with ``Lambda_-`` on ``S`` and
    ``Lambda_+`` elsewhere. The subset sum is accumulated one qubit at a time:
    appending qubit ``m`` either adds it to ``S`` or not, so

        Theta_j^(m) = Theta_j^(m-1) (x) Lambda_+  +  Theta_{j-1}^(m-1) (x) Lambda_-

    which enumerates exactly the same product terms as the explicit sum.
    """
    n = as_direction(n)
    if not 1 <= n_qubits <= n_cap:
        raise DimensionError(f"n_qubits must be in [1, {n_cap}], got {n_qubits}")
    plus, minus = lambda_projectors(n)
    layer = [plus, minus]
    for _ in range(1, n_qubits):
        nxt = [np.kron(layer[0], plus)]
        for j in range(1, len(layer)):
            nxt.append(np.kron(layer[j], plus) + np.kron(layer[j - 1], minus))
        nxt.append(np.kron(layer[-1], minus))
        layer = nxt
    for op in layer:
        op.setflags(write=False)
    return ThetaSet(n_qubits=n_qubits, direction=n, thetas=tuple(layer))


@dataclass(frozen=True, eq=False)
class ToeplitzMatrix:
    """Hermitian PSD Toeplitz matrix ``M_jk = phi((j - k) t)`` of order ``N + 1``.

    Construction checks the structure and positive semidefiniteness and keeps
    the eigendecomposition (eigenvalues in ``[-1e-9, 0)`` clamped to 0) for
    the Kraus form.
    """

    entries: np.ndarray
    time: float | None = None
    eigenvalues: np.ndarray = field(init=False, repr=False)
    eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"Toeplitz matrix must be square, got {m.shape}")
        if np.max(np.abs(np.diag(m) - 1)) > HERMITIAN_ATOL:
            raise ValueError("Toeplitz matrix must have a unit main diagonal")
        for d in range(1, m.shape[0]):
            diag = np.diagonal(m, -d)
            if np.max(np.abs(diag - diag[0])) > HERMITIAN_ATOL:
                raise ValueError(f"matrix is not constant along diagonal {-d}")
        w, v = eig_hermitian(m)
        if w[0] < -PSD_ATOL:
            raise NotPositiveSemidefiniteError(
                f"Toeplitz matrix at t={self.time!r} has eigenvalue {w[0]:.3e} < "
                f"-{PSD_ATOL:.0e}; the noise model or its quadrature is defective"
            )
        w = clamp_spectrum(w)
        # Fix each eigenvector's phase: largest component real and positive.
        idx = np.argmax(np.abs(v), axis=0)
        pivots = v[idx, np.arange(v.shape[1])]
        v = v * (np.abs(pivots) / pivots)
        for arr in (m, w, v):
            arr.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


def toeplitz_entries(model: SpectralModel, t: float, n_qubits: int) -> np.ndarray:
    lags = np.arange(n_qubits + 1)
    phi = np.asarray(model.characteristic_function(lags * float(t)), dtype=complex)
    phi[0] = 1.0
    diff = lags[:, None] - lags[None, :]
    # phi(-s) = conj(phi(s)) for any real density.
    return np.where(diff >= 0, phi[np.abs(diff)], np.conj(phi[np.abs(diff)]))


def toeplitz_matrix(model: SpectralModel, t: float, n_qubits: int) -> ToeplitzMatrix:
    if not t >= 0:
        raise ValueError(f"time must be non-negative, got {t!r}")
    return ToeplitzMatrix(toeplitz_entries(model, t, n_qubits), time=float(t))


@dataclass(frozen=True, eq=False)
class KrausSet:
    operators: tuple[np.ndarray, ...]
    weights: np.ndarray

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = sum(a @ rho @ a.conj().T for a in self.operators)
        return 0.5 * (out + out.conj().T)

    def completeness_residual(self) -> float:
        total = sum(a.conj().T @ a for a in self.operators)
        return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def kraus_operators(m: ToeplitzMatrix, thetas: ThetaSet) -> KrausSet:
    """Kraus operators ``A_i = sum_j sqrt(lambda_i) v_i[j] Theta_j``.

    ``(lambda_i, v_i)`` are the eigenpairs of ``m``; eigenvectors have their
    largest component made real positive, so at ``t = 0`` the one surviving
    operator is exactly the identity.
    """
    if m.order != len(thetas):
        raise DimensionError(
            f"Toeplitz order {m.order} does not match {len(thetas)} Theta operators"
        )
    amplitudes = m.eigenvectors * np.sqrt(m.eigenvalues)[None, :]
    stack = thetas.stacked()
    ops = np.tensordot(amplitudes.T, stack, axes=(1, 0))
    ops.setflags(write=False)
    return KrausSet(operators=tuple(ops), weights=m.eigenvalues)


def _check_state_for(rho0, thetas: ThetaSet) -> np.ndarray:
    rho0 = check_density_matrix(rho0)
    if rho0.shape[0] != thetas.dim:
        raise DimensionError(
            f"state has dimension {rho0.shape[0]}, channel acts on {thetas.dim}"
        )
    return rho0


def _double_sum(left_blocks: np.ndarray, thetas: ThetaSet, m: np.ndarray) -> np.ndarray:
    """``sum_j (Theta_j rho) (sum_k M_jk Theta_k)`` as one block matmul."""
    right = np.tensordot(m, thetas.stacked(), axes=(1, 0))
    d = thetas.dim
    out = np.concatenate(left_blocks, axis=1) @ right.reshape(-1, d)
    return 0.5 * (out + out.conj().T)


def _evolve_prepared(rho0, left_blocks, thetas, model, t, mode) -> np.ndarray:
    if t == 0:
        return rho0.copy()
    tm = toeplitz_matrix(model, t, thetas.n_qubits)
    if mode == "double_sum":
        return _double_sum(left_blocks, thetas, tm.entries)
    return kraus_operators(tm, thetas).apply(rho0)


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def evolve(
    rho0,
    n,
    model: SpectralModel,
    t: float,
    mode: str = "double_sum",
    *,
    thetas: ThetaSet | None = None,
    n_cap: int = DEFAULT_N_CAP,
) -> np.ndarray:
    """Ensemble-averaged state at time ``t``.

    ``mode="double_sum"`` sums ``M_jk Theta_j rho Theta_k`` directly;
    ``mode="kraus"`` applies the canonical Kraus operators. Both agree to
    rounding. The map is evaluated at any ``t``; whether the field really is
    static over that window is the caller's physics, not checked here.

    Args:
        thetas: optional precomputed projectors for ``n``, to share across calls.
    """
    _check_mode(mode)
    if not t >= 0:
        raise ValueError(f"time must be non-negative, got {t!r}")
    if thetas is None:
        rho_arr = np.asarray(rho0)
        thetas = theta_operators(n, n_qubits_of(rho_arr), n_cap=n_cap)
    rho0 = _check_state_for(rho0, thetas)
    left = thetas.stacked() @ rho0 if mode == "double_sum" else None
    return _evolve_prepared(rho0, left, thetas, model, t, mode)


def trajectory(
    rho0,
    n,
    model: SpectralModel,
    time_grid,
    mode: str = "double_sum",
    *,
    n_cap: int = DEFAULT_N_CAP,
) -> list[np.ndarray]:
    """``evolve`` at every time in an ascending, non-negative grid.

    Each point is computed independently by the same arithmetic as
    :func:`evolve`, so results match it bit for bit.
    """
    _check_mode(mode)
    times = np.asarray(time_grid, dtype=float).reshape(-1)
    if times.size == 0:
        raise ValueError("time grid is empty")
    if np.any(times < 0) or not np.all(np.isfinite(times)):
        raise ValueError("time grid must be finite and non-negative")
    if np.any(np.diff(times) < 0):
        raise ValueError("time grid must be ascending")
    thetas = theta_operators(n, n_qubits_of(np.asarray(rho0)), n_cap=n_cap)
    rho0 = _check_state_for(rho0, thetas)
    left = thetas.stacked() @ rho0 if mode == "double_sum" else None
    return [_evolve_prepared(rho0, left, thetas, model, float(t), mode) for t in times]


def asymptotic_state(
    rho0, n, *, thetas: ThetaSet | None = None, n_cap: int = DEFAULT_N_CAP
) -> np.ndarray:
    """Long-time limit ``sum_i Theta_i rho Theta_i``.

    Valid for any absolutely continuous noise density, since then
    ``phi(t) -> 0`` and ``M(t) -> I``. Depends on the field axis only.
    """
    if thetas is None:
        thetas = theta_operators(n, n_qubits_of(np.asarray(rho0)), n_cap=n_cap)
    rho0 = _check_state_for(rho0, thetas)
    out = sum(th @ rho0 @ th for th in thetas)
    return 0.5 * (out + out.conj().T)


def theta_ranks(n_qubits: int) -> list[int]:
    return [comb(n_qubits, j) for j in range(n_qubits + 1)]
