"""Randomized invariant suites shared by ``check-invariants`` and the tests.

Each suite draws its inputs from a ``numpy`` generator and returns a
:class:`SuiteResult` holding the largest residual seen and the inputs that
produced it, so a failure can be reproduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from collective_dephasing.dephasing import (
    evolve,
    kraus_operators,
    theta_operators,
    toeplitz_matrix,
)
from collective_dephasing.entanglement import concurrence
from collective_dephasing.linalg import (
    hermitian_residual,
    kron,
    random_density_matrix,
    random_direction,
    random_unitary,
    trace_distance,
)
from collective_dephasing.spectra import Box, Gaussian, Lorentzian
from collective_dephasing.states import (
    bell_diagonal_from_d,
    beta_matrix,
    random_psi_minus_corner_point,
    random_tetrahedron_point,
    sample_werner_state,
)

DEFAULT_TOLERANCE = 1e-9


def random_model(rng: np.random.Generator):
    kind = rng.integers(3)
    if kind == 0:
        return Lorentzian(omega0=rng.uniform(-1, 1), gamma=rng.uniform(0.2, 2))
    if kind == 1:
        return Gaussian(omega0=rng.uniform(-1, 1), sigma=rng.uniform(0.2, 2))
    return Box(omega0=rng.uniform(0.5, 2))


@dataclass
class SuiteResult:
    name: str
    tolerance: float
    max_residual: float = 0.0
    trials: int = 0
    worst_inputs: dict = field(default_factory=dict)

    def record(self, residual: float, **inputs):
        self.trials += 1
        if residual > self.max_residual or not self.worst_inputs:
            self.max_residual = max(self.max_residual, float(residual))
            self.worst_inputs = inputs

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def _describe(n, model, t, **extra):
    return {"n": np.round(n, 15).tolist(), "model": repr(model), "t": float(t), **extra}


def suite_cptp(rng, trials, max_qubits=5, tolerance=DEFAULT_TOLERANCE) -> SuiteResult:
    """Trace, Hermiticity, positivity and Kraus completeness of the channel."""
    res = SuiteResult("cptp", tolerance)
    for i in range(trials):
        nq = int(rng.integers(1, max_qubits + 1))
        rho0 = random_density_matrix(nq, rng, rank=int(rng.integers(1, 2**nq + 1)))
        n, model, t = random_direction(rng), random_model(rng), rng.uniform(0, 20)
        thetas = theta_operators(n, nq)
        rho = evolve(rho0, n, model, t, thetas=thetas)
        kraus = kraus_operators(toeplitz_matrix(model, t, nq), thetas)
        residual = max(
            abs(np.trace(rho).real - 1),
            hermitian_residual(rho),
            max(0.0, -np.linalg.eigvalsh(rho)[0]),
            kraus.completeness_residual(),
        )
        res.record(residual, trial=i, **_describe(n, model, t, n_qubits=nq))
    return res


def suite_mode_equivalence(rng, trials, max_qubits=5, tolerance=DEFAULT_TOLERANCE) -> SuiteResult:
    res = SuiteResult("mode_equivalence", tolerance)
    for i in range(trials):
        nq = int(rng.integers(1, max_qubits + 1))
        rho0 = random_density_matrix(nq, rng)
        n, model, t = random_direction(rng), random_model(rng), rng.uniform(0, 20)
        thetas = theta_operators(n, nq)
        a = evolve(rho0, n, model, t, mode="double_sum", thetas=thetas)
        b = evolve(rho0, n, model, t, mode="kraus", thetas=thetas)
        res.record(np.max(np.abs(a - b)), trial=i, **_describe(n, model, t, n_qubits=nq))
    return res


def suite_trace_beta(rng, trials, points=8, tolerance=DEFAULT_TOLERANCE) -> SuiteResult:
    """``tr beta`` stays fixed along two-qubit trajectories from Bell-diagonal states."""
    res = SuiteResult("trace_beta", tolerance)
    for i in range(trials):
        d = random_tetrahedron_point(rng)
        rho0 = bell_diagonal_from_d(d)
        n, model = random_direction(rng), random_model(rng)
        thetas = theta_operators(n, 2)
        ref = np.trace(beta_matrix(rho0))
        times = np.sort(rng.uniform(0, 20, size=points))
        worst = max(abs(np.trace(beta_matrix(evolve(rho0, n, model, t, thetas=thetas))) - ref) for t in times)
        res.record(worst, trial=i, d=d.tolist(), **_describe(n, model, times[-1]))
    return res


def suite_psi_minus_corner(rng, trials, tolerance=DEFAULT_TOLERANCE) -> SuiteResult:
    """Concurrence is frozen for Bell-diagonal states in the singlet corner.

    ``worst_inputs`` also reports how many states actually moved
    (trace distance to the initial state above 1e-6).
    """
    res = SuiteResult("psi_minus_corner", tolerance)
    moved = 0
    for i in range(trials):
        d = random_psi_minus_corner_point(rng)
        rho0 = bell_diagonal_from_d(d)
        n, model, t = random_direction(rng), random_model(rng), rng.uniform(0, 20)
        rho = evolve(rho0, n, model, t)
        moved += trace_distance(rho, rho0) > 1e-6
        res.record(abs(concurrence(rho) - concurrence(rho0)), trial=i, d=d.tolist(), **_describe(n, model, t))
    res.worst_inputs["moved_fraction"] = moved / max(trials, 1)
    return res


def suite_werner(rng, trials, qubit_counts=(2, 3, 4), tolerance=DEFAULT_TOLERANCE) -> SuiteResult:
    """Werner states are fixed points of the channel and of ``U^(x)N``."""
    res = SuiteResult("werner", tolerance)
    for i in range(trials):
        nq = int(qubit_counts[i % len(qubit_counts)])
        rho_w = sample_werner_state(nq, rng)
        n, model, t = random_direction(rng), random_model(rng), rng.uniform(0, 20)
        u = kron(*[random_unitary(2, rng)] * nq)
        residual = max(
            trace_distance(evolve(rho_w, n, model, t), rho_w),
            float(np.max(np.abs(u @ rho_w @ u.conj().T - rho_w))),
        )
        res.record(residual, trial=i, **_describe(n, model, t, n_qubits=nq))
    return res


SUITES = {
    "cptp": suite_cptp,
    "mode_equivalence": suite_mode_equivalence,
    "trace_beta": suite_trace_beta,
    "psi_minus_corner": suite_psi_minus_corner,
    "werner": suite_werner,
}


def run_all(seed: int, trials: int, tolerance: float = DEFAULT_TOLERANCE) -> list[SuiteResult]:
    """Run every suite with its own generator spawned from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    return [
        suite(np.random.default_rng(child), trials, tolerance=tolerance)
        for child, suite in zip(children, SUITES.values())
    ]
