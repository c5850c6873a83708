"""Entanglement diagnostics for the dephased states.

Two-qubit states are scored by Wootters' concurrence, with closed forms for
Bell-diagonal states. N-qubit states get an upper bound ``k_eff`` on their
k-separability class from an inequality on single- and double-excitation
matrix elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from collective_dephasing.dephasing import asymptotic_state, theta_operators
from collective_dephasing.linalg import (
    DEFAULT_N_CAP,
    PAULI_Y,
    DimensionError,
    as_direction,
    clamp_spectrum,
    direction_from_angles,
    n_qubits_of,
)
from collective_dephasing.states import w_state

FULLY_SEPARABLE_COMPATIBLE = math.inf
ANY_DIRECTION = "any"

_YY = np.kron(PAULI_Y, PAULI_Y)
_DEGENERATE_S2 = 1e-12
# Guards floor() against rounding just below an integer bound.
_FLOOR_SLACK = 1e-9


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    w = np.sqrt(np.clip(clamp_spectrum(w), 0, None))
    return (v * w) @ v.conj().T


def concurrence(rho) -> float:
    """Wootters' concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the decreasing square roots of the eigenvalues of
    ``rho (sy sy) rho* (sy sy)``, obtained here as the singular values of
    ``sqrt(rho) sqrt(rho~)`` which is better conditioned than a
    non-Hermitian eigensolve.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionError(f"concurrence needs a 4x4 state, got shape {rho.shape}")
    root = _psd_sqrt(rho)
    root_flipped = _YY @ root.conj() @ _YY
    lam = np.linalg.svd(root @ root_flipped, compute_uv=False)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def concurrence_bell_diagonal(d) -> float:
    d = np.asarray(d, dtype=float)
    return float(0.5 * max(0.0, np.sum(np.abs(d)) - 1.0))


def predicted_final_concurrence(d, n) -> float:
    """Concurrence of the long-time state reached from Bell-diagonal ``d`` under axis ``n``.

    Outside the singlet corner this is ``max(0, sum_i (1 - 2 n_i^2) d_i - 1) / 2``.
    Inside it (all ``d_i <= 0``) the concurrence never changes, which the
    second term ``-sum_i d_i - 1`` covers; it can only dominate there.
    """
    d = np.asarray(d, dtype=float)
    n = as_direction(n)
    rotated = np.sum((1 - 2 * n**2) * d) - 1.0
    singlet = -np.sum(d) - 1.0
    return float(0.5 * max(0.0, rotated, singlet))


def preserving_directions(d):
    """Field axes along which the concurrence of Bell-diagonal ``d`` never changes.

    Returns ``ANY_DIRECTION`` in the singlet corner (all ``d_i <= 0``), otherwise
    the pair ``(e_j, -e_j)`` for the single negative component ``d_j``.

    Raises:
        ValueError: for separable ``d``, or if no unique negative component exists.
    """
    d = np.asarray(d, dtype=float)
    if concurrence_bell_diagonal(d) <= 0:
        raise ValueError(f"d={d.tolist()} is separable; every direction trivially preserves C=0")
    if np.all(d <= 0):
        return ANY_DIRECTION
    negative = np.flatnonzero(d < 0)
    if negative.size != 1:
        raise ValueError(f"d={d.tolist()} has no unique negative component")
    e = np.zeros(3)
    e[negative[0]] = 1.0
    return (e, -e)


@dataclass(frozen=True)
class SeparabilityReport:
    """Terms of ``lhs <= s1 + (N - k)/2 * s2`` and the largest ``k`` satisfying it.

    ``k_eff`` is an int, or ``FULLY_SEPARABLE_COMPATIBLE`` (infinity) when the
    inequality holds for every ``k``.
    """

    n_qubits: int
    lhs: float
    s1: float
    s2: float
    k_eff: float

    @property
    def genuinely_multipartite(self) -> bool:
        return self.k_eff < 2

    @property
    def separable_compatible(self) -> bool:
        return self.k_eff >= self.n_qubits


def keff_bound(rho) -> SeparabilityReport:
    """Upper bound ``k_eff`` on the k-separability class of an N-qubit state.

    With 0-based indices ``a_i = 2**i`` (single excitations) and
    ``a_ij = 2**i + 2**j``:

        lhs = sum_{i<j} |rho[a_i, a_j]|
        s1  = sum_{i<j} sqrt(rho[0, 0] rho[a_ij, a_ij])
        s2  = sum_i rho[a_i, a_i]

    and ``k_eff = floor(N - 2 (lhs - s1) / s2)`` when ``lhs > s1``.
    """
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho)
    if n < 2:
        raise DimensionError("k-separability bound needs at least 2 qubits")
    single = 1 << np.arange(n)
    i, j = np.triu_indices(n, k=1)
    ai, aj = single[i], single[j]
    lhs = float(np.sum(np.abs(rho[ai, aj])))
    doubles = np.clip(rho[ai + aj, ai + aj].real, 0, None)
    s1 = float(np.sum(np.sqrt(max(rho[0, 0].real, 0.0) * doubles)))
    s2 = float(np.sum(rho[single, single].real))
    if s2 > _DEGENERATE_S2:
        if lhs > s1:
            k_eff = max(1, math.floor(n - 2 * (lhs - s1) / s2 + _FLOOR_SLACK))
        else:
            k_eff = FULLY_SEPARABLE_COMPATIBLE
    else:
        k_eff = FULLY_SEPARABLE_COMPATIBLE if lhs <= s1 + _DEGENERATE_S2 else 1
    return SeparabilityReport(n_qubits=n, lhs=lhs, s1=s1, s2=s2, k_eff=k_eff)


@dataclass(frozen=True)
class CriticalAngles:
    n_qubits: int
    theta_E: float
    theta_NPE: float


def critical_angles(n_qubits: int) -> CriticalAngles:
    """Polar angles below which the dephased W state stays entangled (``theta_E``)
    and genuinely N-partite entangled (``theta_NPE``)."""
    if n_qubits < 2:
        raise ValueError(f"critical angles need N >= 2, got {n_qubits}")
    return CriticalAngles(
        n_qubits=n_qubits,
        theta_E=math.atan(1 / math.sqrt(n_qubits)),
        theta_NPE=math.atan(1 / math.sqrt(n_qubits * (n_qubits - 1))),
    )


class ScanError(RuntimeError):
    def __init__(self, message: str, thetas, k_eff):
        self.thetas = np.asarray(thetas)
        self.k_eff = list(k_eff)
        table = "\n".join(f"  {th:.6f}  {k}" for th, k in zip(self.thetas, self.k_eff))
        super().__init__(f"{message}\ntheta  k_eff\n{table}")


@dataclass(frozen=True, eq=False)
class AngleScan:
    n_qubits: int
    resolution: float
    thetas: np.ndarray
    k_eff: tuple
    theta_E: float
    theta_NPE: float


def keff_vs_angle(n_qubits: int, thetas, n_cap: int = DEFAULT_N_CAP) -> list:
    """``k_eff`` of the asymptotic W state for axes ``(sin t, 0, cos t)``."""
    w = w_state(n_qubits)
    out = []
    for theta in np.asarray(thetas, dtype=float):
        n = direction_from_angles(theta)
        rho_s = asymptotic_state(w, n, thetas=theta_operators(n, n_qubits, n_cap=n_cap))
        out.append(keff_bound(rho_s).k_eff)
    return out


def _first_crossing(thetas, k_eff, threshold):
    for idx in range(1, len(k_eff)):
        if k_eff[idx - 1] < threshold <= k_eff[idx]:
            return 0.5 * (thetas[idx - 1] + thetas[idx])
    return None


def critical_angle_scan(n_qubits: int, resolution: float, n_cap: int = DEFAULT_N_CAP) -> AngleScan:
    """Locate the critical angles numerically on a grid over ``[0, pi/2]``.

    The azimuth is fixed at 0; W states are symmetric about z. ``theta_NPE``
    is the first angle where ``k_eff`` reaches 2 and ``theta_E`` the first where
    it reaches ``N``, each reported as the midpoint of the bracketing grid pair.

    Raises:
        ScanError: if either threshold is never crossed; carries the full table.
    """
    if n_qubits < 2:
        raise ValueError(f"angle scan needs N >= 2, got {n_qubits}")
    if not resolution > 0:
        raise ValueError(f"resolution must be positive, got {resolution!r}")
    steps = int(math.floor((math.pi / 2) / resolution + 1e-9))
    thetas = resolution * np.arange(steps + 1)
    k_eff = keff_vs_angle(n_qubits, thetas, n_cap=n_cap)
    theta_npe = _first_crossing(thetas, k_eff, 2)
    theta_e = _first_crossing(thetas, k_eff, n_qubits)
    if theta_npe is None or theta_e is None:
        missing = "k_eff >= 2" if theta_npe is None else f"k_eff >= {n_qubits}"
        raise ScanError(f"no transition to {missing} found on the grid", thetas, k_eff)
    return AngleScan(
        n_qubits=n_qubits,
        resolution=float(resolution),
        thetas=thetas,
        k_eff=tuple(k_eff),
        theta_E=float(theta_e),
        theta_NPE=float(theta_npe),
    )
