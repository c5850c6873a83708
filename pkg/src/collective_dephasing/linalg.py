"""Dense complex matrix primitives shared across the package.

Density matrices and operators are plain ``numpy`` arrays of dtype
``complex128``. Field directions are real arrays of shape ``(3,)``. The
helpers here validate those conventions and raise ``ValueError`` subclasses
that name the violated invariant.

Basis convention: computational index ``b = sum_k i_k 2**(N-k)`` with qubit 1
as the most significant bit.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-9
UNIT_ATOL = 1e-12

# Dense matrices only; N = 10 is a 1024 x 1024 operator.
DEFAULT_N_CAP = 10

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


class DimensionError(ValueError):
    """Operands have incompatible or unsupported dimensions."""


class NotHermitianError(ValueError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""

    def __init__(self, asymmetry: float, atol: float = HERMITIAN_ATOL):
        self.asymmetry = asymmetry
        super().__init__(
            f"matrix is not Hermitian: max |m - m^dagger| = {asymmetry:.3e} "
            f"exceeds {atol:.1e}"
        )


class InvalidStateError(ValueError):
    """A matrix fails one of the density-matrix invariants."""


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in ops))


def hermitian_residual(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def eig_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues in ascending
    order and orthonormal eigenvectors as columns, so that
    ``m == v @ diag(w) @ v.conj().T``.

    Raises:
        NotHermitianError: if ``max |m - m^dagger|`` exceeds ``atol``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    asym = hermitian_residual(m)
    if asym > atol:
        raise NotHermitianError(asym, atol)
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def clamp_spectrum(w: np.ndarray, lower: float = 0.0, tol: float = PSD_ATOL) -> np.ndarray:
    """Clamp eigenvalues lying within ``tol`` below ``lower`` onto ``lower``.

    Values further below are left untouched; callers decide whether that is
    an error.
    """
    w = np.array(w, dtype=float)
    near = (w < lower) & (w >= lower - tol)
    w[near] = lower
    return w


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of ``rho - sigma``."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch: {rho.shape} vs {sigma.shape}")
    diff = rho - sigma
    w = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(min(1.0, 0.5 * np.sum(np.abs(w))))


def as_direction(n, atol: float = UNIT_ATOL) -> np.ndarray:
    """Validate a field direction and return it as a float array."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or not np.all(np.isfinite(n)):
        raise ValueError(f"field direction must be 3 finite reals, got {n!r}")
    norm = float(np.linalg.norm(n))
    if abs(norm - 1.0) > atol:
        raise ValueError(f"field direction is not a unit vector (|n| = {norm!r})")
    return n


def direction_from_angles(theta: float, phi: float = 0.0) -> np.ndarray:
    """Unit vector with polar angle ``theta`` from z and azimuth ``phi``."""
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )


def pauli_dot(n) -> np.ndarray:
    """``n_x sx + n_y sy + n_z sz`` for a unit vector ``n``."""
    n = as_direction(n)
    return n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z


def n_qubits_of(m: np.ndarray) -> int:
    """Number of qubits for a square ``2**N`` matrix."""
    shape = np.shape(m)
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {shape}")
    dim = shape[0]
    if dim < 2 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} is not a power of 2")
    return dim.bit_length() - 1


def check_density_matrix(
    rho,
    herm_atol: float = HERMITIAN_ATOL,
    trace_atol: float = TRACE_ATOL,
    psd_atol: float = PSD_ATOL,
) -> np.ndarray:
    """Return ``rho`` as a complex array after checking it is a valid state.

    Raises:
        InvalidStateError: naming the first violated invariant.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density matrix has non-finite entries")
    asym = hermitian_residual(rho)
    if asym > herm_atol:
        raise InvalidStateError(f"not Hermitian: max |rho - rho^dagger| = {asym:.3e}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_atol:
        raise InvalidStateError(f"trace is {tr!r}, expected 1")
    wmin = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if wmin < -psd_atol:
        raise InvalidStateError(f"not positive semidefinite: min eigenvalue {wmin:.3e}")
    return rho


def ket_to_dm(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_density_matrix(n_qubits: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-distributed mixed state of the given rank (full rank by default)."""
    dim = 2**n_qubits
    g = rng.normal(size=(dim, rank or dim)) + 1j * rng.normal(size=(dim, rank or dim))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
