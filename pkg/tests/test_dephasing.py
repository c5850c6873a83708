import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collective_dephasing.dephasing import (
    NotPositiveSemidefiniteError,
    ToeplitzMatrix,
    asymptotic_state,
    evolve,
    kraus_operators,
    lambda_projectors,
    theta_operators,
    theta_ranks,
    toeplitz_matrix,
    trajectory,
)
from collective_dephasing.linalg import (
    DimensionError,
    InvalidStateError,
    ket_to_dm,
    kron,
    pauli_dot,
    random_density_matrix,
    random_direction,
)
from collective_dephasing.spectra import Box, Gaussian, Lorentzian
from collective_dephasing.states import (
    bell_diagonal_from_d,
    bell_state,
    beta_matrix,
    random_tetrahedron_point,
)
from oracles import ensemble_average, theta_by_permutation_sum, theta_by_rotated_basis

Z = np.array([0.0, 0.0, 1.0])
X = np.array([1.0, 0.0, 0.0])
PLUS = ket_to_dm(np.array([1, 1]) / np.sqrt(2))


@pytest.mark.parametrize(
    "n, plus, minus",
    [
        (Z, np.diag([1, 0]), np.diag([0, 1])),
        (X, 0.5 * np.array([[1, 1], [1, 1]]), 0.5 * np.array([[1, -1], [-1, 1]])),
    ],
)
def test_lambda_projector_examples(n, plus, minus):
    lp, lm = lambda_projectors(n)
    np.testing.assert_allclose(lp, plus, atol=1e-15)
    np.testing.assert_allclose(lm, minus, atol=1e-15)


def test_lambda_projectors_algebra():
    rng = np.random.default_rng(1)
    for _ in range(200):
        lp, lm = lambda_projectors(random_direction(rng))
        assert np.max(np.abs(lp @ lm)) <= 1e-12
        assert np.max(np.abs(lp @ lp - lp)) <= 1e-12
        assert np.max(np.abs(lp + lm - np.eye(2))) <= 1e-12


def test_lambda_projectors_reject_non_unit():
    with pytest.raises(ValueError):
        lambda_projectors([0, 0, 2])


def test_theta_examples():
    th = theta_operators(Z, 1)
    np.testing.assert_array_equal(th[0], np.diag([1, 0]))
    np.testing.assert_array_equal(th[1], np.diag([0, 1]))
    th = theta_operators(Z, 2)
    np.testing.assert_array_equal(th[1], np.diag([0, 1, 1, 0]))


@pytest.mark.parametrize("nq", [1, 2, 3, 4, 5])
def test_theta_set_invariants(nq):
    rng = np.random.default_rng(nq)
    th = theta_operators(random_direction(rng), nq)
    dim = 2**nq
    assert len(th) == nq + 1
    assert np.max(np.abs(sum(th) - np.eye(dim))) <= 1e-10
    for j, a in enumerate(th):
        assert np.max(np.abs(a - a.conj().T)) <= 1e-10
        assert np.max(np.abs(a @ a - a)) <= 1e-10
        assert np.linalg.matrix_rank(a, tol=1e-8) == theta_ranks(nq)[j]
        for k in range(j + 1, nq + 1):
            assert np.max(np.abs(a @ th[k])) <= 1e-10


@pytest.mark.parametrize("nq", [1, 2, 3, 4])
def test_theta_matches_permutation_sum_and_rotated_basis(nq):
    rng = np.random.default_rng(10 + nq)
    for _ in range(3):
        n = random_direction(rng)
        th = theta_operators(n, nq)
        for j, (a, b) in enumerate(zip(theta_by_permutation_sum(n, nq), theta_by_rotated_basis(n, nq))):
            assert np.max(np.abs(th[j] - a)) <= 1e-12
            assert np.max(np.abs(th[j] - b)) <= 1e-12


def test_theta_cap():
    with pytest.raises(DimensionError):
        theta_operators(Z, 11)
    with pytest.raises(DimensionError):
        theta_operators(Z, 0)
    assert len(theta_operators(Z, 3, n_cap=3)) == 4


def test_theta_operators_are_read_only():
    th = theta_operators(Z, 2)
    with pytest.raises(ValueError):
        th[0][0, 0] = 2


def test_toeplitz_at_zero_is_all_ones():
    m = toeplitz_matrix(Lorentzian(0.3, 1.0), 0.0, 3)
    np.testing.assert_allclose(m.entries, np.ones((4, 4)), atol=1e-15)
    assert np.sum(m.eigenvalues > 1e-12) == 1


def test_toeplitz_lorentzian_limit_is_identity():
    m = toeplitz_matrix(Lorentzian(0.0, 1.0), 50.0, 4)
    np.testing.assert_allclose(m.entries, np.eye(5), atol=1e-21)


def test_toeplitz_two_by_two_lorentzian():
    m = toeplitz_matrix(Lorentzian(0.0, 1.0), 1.0, 1)
    e = np.exp(-1)
    np.testing.assert_allclose(m.entries, [[1, e], [e, 1]], atol=1e-16)


def test_toeplitz_structure():
    m = toeplitz_matrix(Gaussian(0.7, 0.5), 1.3, 4).entries
    assert np.max(np.abs(m - m.conj().T)) <= 1e-15
    for d in range(-4, 5):
        diag = np.diagonal(m, d)
        assert np.max(np.abs(diag - diag[0])) == 0


def test_toeplitz_psd_violation_is_reported():
    with pytest.raises(NotPositiveSemidefiniteError, match="defective"):
        ToeplitzMatrix(np.array([[1, 1.5], [1.5, 1]]), time=2.0)


def test_toeplitz_rejects_negative_time():
    with pytest.raises(ValueError):
        toeplitz_matrix(Box(1.0), -1.0, 2)


class _DefectiveModel:
    """Not a characteristic function: |phi| exceeds one."""

    def characteristic_function(self, t):
        return np.where(np.asarray(t) == 0, 1.0, 1.2 + 0j)


def test_evolve_surfaces_defective_model():
    with pytest.raises(NotPositiveSemidefiniteError):
        evolve(bell_state("psi+"), X, _DefectiveModel(), 1.0)


def test_kraus_at_zero_is_identity():
    th = theta_operators(random_direction(np.random.default_rng(3)), 3)
    ks = kraus_operators(toeplitz_matrix(Box(1.0), 0.0, 3), th)
    norms = sorted(np.linalg.norm(a) for a in ks)
    assert max(norms[:-1]) <= 1e-7
    big = max(ks, key=np.linalg.norm)
    assert np.max(np.abs(big - np.eye(8))) <= 1e-12


def test_kraus_at_identity_toeplitz_are_thetas():
    th = theta_operators(random_direction(np.random.default_rng(4)), 3)
    ks = kraus_operators(ToeplitzMatrix(np.eye(4)), th)
    # Degenerate eigenvectors of I: eigh returns the standard basis in order.
    for a, b in zip(ks, th):
        assert np.max(np.abs(a - b)) <= 1e-15


@pytest.mark.parametrize("phi", [0.0, 0.3, 0.9, -0.5])
def test_kraus_weights_for_one_qubit(phi):
    m = ToeplitzMatrix(np.array([[1, phi], [phi, 1]]))
    ks = kraus_operators(m, theta_operators(Z, 1))
    np.testing.assert_allclose(sorted(ks.weights), sorted([1 - phi, 1 + phi]), atol=1e-15)
    assert ks.completeness_residual() <= 1e-12


def test_kraus_order_mismatch():
    with pytest.raises(DimensionError):
        kraus_operators(toeplitz_matrix(Box(1.0), 1.0, 2), theta_operators(Z, 3))


@pytest.mark.parametrize("gamma, t", [(1.0, 0.5), (0.3, 2.0), (2.0, 1.7)])
def test_single_qubit_coherence_decay(gamma, t):
    rho = evolve(PLUS, Z, Lorentzian(0.8, gamma), t)
    assert abs(rho[0, 1]) == pytest.approx(np.exp(-gamma * t) / 2, abs=1e-15)
    assert rho[0, 0].real == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("mode", ["double_sum", "kraus"])
def test_singlet_is_invariant(mode):
    rng = np.random.default_rng(5)
    psi = bell_state("psi-")
    for model in (Lorentzian(0.2, 1.0), Gaussian(-0.4, 0.7), Box(1.3)):
        for _ in range(5):
            rho = evolve(psi, random_direction(rng), model, rng.uniform(0, 30), mode=mode)
            assert np.max(np.abs(rho - psi)) <= 1e-12


def test_states_diagonal_in_field_basis_are_fixed():
    rng = np.random.default_rng(6)
    for nq in (1, 2, 3):
        n = random_direction(rng)
        _, v = np.linalg.eigh(pauli_dot(n))
        basis = kron(*([v] * nq))
        rho0 = basis @ np.diag(rng.dirichlet(np.ones(2**nq))) @ basis.conj().T
        for t in (0.5, 3.0, 40.0):
            assert np.max(np.abs(evolve(rho0, n, Gaussian(0.1, 1.0), t) - rho0)) <= 1e-12


def test_evolve_at_zero_returns_input():
    rho0 = random_density_matrix(3, np.random.default_rng(7))
    out = evolve(rho0, X, Box(1.0), 0.0)
    assert np.array_equal(out, rho0)
    assert out is not rho0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_modes_agree(seed, nq):
    rng = np.random.default_rng(seed)
    rho0 = random_density_matrix(nq, rng, rank=int(rng.integers(1, 2**nq + 1)))
    n = random_direction(rng)
    model = [Lorentzian(rng.uniform(-1, 1), rng.uniform(0.1, 2)), Gaussian(rng.uniform(-1, 1), rng.uniform(0.1, 2)), Box(rng.uniform(0.3, 3))][seed % 3]
    t = rng.uniform(0, 15)
    a = evolve(rho0, n, model, t, mode="double_sum")
    b = evolve(rho0, n, model, t, mode="kraus")
    assert np.max(np.abs(a - b)) <= 1e-10


def test_unknown_mode():
    with pytest.raises(ValueError, match="mode"):
        evolve(PLUS, Z, Box(1.0), 1.0, mode="lindblad")


def test_direction_parity():
    # n -> -n swaps Theta_j with Theta_{N-j}, which conjugates phi. Symmetric
    # densities (real phi) are therefore blind to the sign of n; in general
    # the flip is the same as mirroring the density, omega -> -omega.
    rng = np.random.default_rng(8)
    for nq in (1, 2, 3, 4):
        for _ in range(5):
            rho0 = random_density_matrix(nq, rng)
            n, t = random_direction(rng), rng.uniform(0, 10)
            g = rng.uniform(0.2, 2)
            for sym in (Lorentzian(0.0, g), Gaussian(0.0, g)):
                assert np.max(np.abs(evolve(rho0, n, sym, t) - evolve(rho0, -n, sym, t))) <= 1e-10
            w0 = rng.uniform(-1, 1)
            for model, mirror in ((Lorentzian(w0, g), Lorentzian(-w0, g)), (Gaussian(w0, g), Gaussian(-w0, g))):
                assert np.max(np.abs(evolve(rho0, -n, model, t) - evolve(rho0, n, mirror, t))) <= 1e-10
            assert np.max(np.abs(asymptotic_state(rho0, n) - asymptotic_state(rho0, -n))) <= 1e-12


def test_evolve_dimension_mismatch():
    with pytest.raises(DimensionError):
        evolve(PLUS, Z, Box(1.0), 1.0, thetas=theta_operators(Z, 2))


def test_evolve_rejects_invalid_state():
    with pytest.raises(InvalidStateError):
        evolve(np.eye(2), Z, Box(1.0), 1.0)
    with pytest.raises(ValueError):
        evolve(PLUS, Z, Box(1.0), -0.1)


def test_asymptotic_examples():
    np.testing.assert_allclose(asymptotic_state(PLUS, Z), np.eye(2) / 2, atol=1e-15)
    rng = np.random.default_rng(9)
    n = random_direction(rng)
    th = theta_operators(n, 3)
    rho0 = random_density_matrix(3, rng)
    block = sum(a @ rho0 @ a for a in th)
    rho_s = asymptotic_state(block, n)
    assert np.max(np.abs(rho_s - block)) <= 1e-12
    assert np.max(np.abs(asymptotic_state(rho_s, n) - rho_s)) <= 1e-12


def test_asymptote_matches_long_time_gaussian():
    rng = np.random.default_rng(10)
    for nq in (1, 2, 3, 4):
        rho0 = random_density_matrix(nq, rng)
        n = random_direction(rng)
        rho_t = evolve(rho0, n, Gaussian(0.3, 1.0), 1e3)
        assert np.max(np.abs(rho_t - asymptotic_state(rho0, n))) <= 1e-6


def test_trajectory_matches_evolve_bitwise():
    rng = np.random.default_rng(11)
    rho0 = random_density_matrix(3, rng)
    n = random_direction(rng)
    grid = np.concatenate([[0.0], np.geomspace(1e-2, 1e2, 25)])
    for mode in ("double_sum", "kraus"):
        traj = trajectory(rho0, n, Box(1.0), grid, mode=mode)
        for t, rho in zip(grid, traj):
            assert np.array_equal(rho, evolve(rho0, n, Box(1.0), t, mode=mode))
        # Reversed evaluation order gives the same numbers.
        again = [trajectory(rho0, n, Box(1.0), [t], mode=mode)[0] for t in grid[::-1]][::-1]
        assert all(np.array_equal(a, b) for a, b in zip(traj, again))


def test_trajectory_edge_cases():
    psi = bell_state("psi-")
    assert np.array_equal(trajectory(PLUS, Z, Box(1.0), [0.0])[0], PLUS)
    for rho in trajectory(psi, X, Lorentzian(0, 1), np.linspace(0, 5, 11)):
        assert np.max(np.abs(rho - psi)) <= 1e-12
    with pytest.raises(ValueError, match="ascending"):
        trajectory(PLUS, Z, Box(1.0), [0.0, 2.0, 1.0])
    with pytest.raises(ValueError, match="empty"):
        trajectory(PLUS, Z, Box(1.0), [])
    with pytest.raises(ValueError):
        trajectory(PLUS, Z, Box(1.0), [-1.0, 0.0])


ORACLE_CASES = [
    ("lorentzian", (0.0, 1.0), Lorentzian(0.0, 1.0)),
    ("lorentzian", (0.6, 0.4), Lorentzian(0.6, 0.4)),
    ("gaussian", (0.0, 1.0), Gaussian(0.0, 1.0)),
    ("gaussian", (-0.5, 0.8), Gaussian(-0.5, 0.8)),
    ("box", (1.0,), Box(1.0)),
    ("box", (2.5,), Box(2.5)),
]


@pytest.mark.parametrize("kind, params, model", ORACLE_CASES, ids=lambda x: x if isinstance(x, str) else None)
def test_evolve_matches_ensemble_quadrature(kind, params, model):
    rng = np.random.default_rng(ORACLE_CASES.index((kind, params, model)))
    for nq in (1, 2, 3):
        rho0 = random_density_matrix(nq, rng)
        n = random_direction(rng)
        t = rng.uniform(0.05, 6)
        oracle, nodes = ensemble_average(kind, params, rho0, t, n, nq)
        assert nodes >= 10_000
        assert np.max(np.abs(evolve(rho0, n, model, t) - oracle)) <= 1e-6


def test_trace_beta_is_conserved():
    rng = np.random.default_rng(12)
    for _ in range(20):
        rho0 = bell_diagonal_from_d(random_tetrahedron_point(rng))
        n = random_direction(rng)
        tr0 = np.trace(beta_matrix(rho0))
        for rho in trajectory(rho0, n, Box(1.0), np.linspace(0, 20, 21)):
            assert abs(np.trace(beta_matrix(rho)) - tr0) <= 1e-10
