"""Frequency-noise models p(omega) and their characteristic functions.

The dephasing channel only needs ``phi(t) = integral p(omega) exp(i omega t)``.
Closed forms are used for the Lorentzian, Gaussian and box models; tabulated
densities are integrated with the trapezoidal rule on their own grid.

Units are natural (hbar = 1). Every tabulated density is assumed absolutely
continuous, i.e. ``phi(t) -> 0`` as ``t -> infinity``; that is what makes the
asymptotic state of the channel well defined, and nothing here can check it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

_BOX_SERIES_CUTOFF = 1e-6
TABULATED_MASS_ATOL = 1e-6


def _trapezoid(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Trapezoidal rule along the last axis of ``y``."""
    dx = np.diff(x)
    return 0.5 * np.sum((y[..., 1:] + y[..., :-1]) * dx, axis=-1)


def quadrature_cf(omega, density, t):
    """Trapezoidal estimate of ``integral density(omega) exp(i omega t) d omega``.

    No normalization is applied, so ``quadrature_cf(omega, density, 0)`` is
    the trapezoidal mass of the samples.

    Raises:
        ValueError: fewer than two grid points, or a grid that is not strictly
            ascending.
    """
    omega = np.asarray(omega, dtype=float)
    density = np.asarray(density, dtype=float)
    if omega.ndim != 1 or omega.size < 2:
        raise ValueError("quadrature grid needs at least 2 points")
    if density.shape != omega.shape:
        raise ValueError(
            f"density has shape {density.shape}, grid has shape {omega.shape}"
        )
    if np.any(np.diff(omega) <= 0):
        raise ValueError("quadrature grid must be strictly ascending")
    t_arr = np.asarray(t, dtype=float)
    phase = np.exp(1j * np.multiply.outer(t_arr, omega))
    return _trapezoid(phase * density, omega)


@dataclass(frozen=True)
class Lorentzian:
    """Cauchy distribution centred at ``omega0`` with half-width ``gamma``."""

    omega0: float
    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"Lorentzian width must be positive, got {self.gamma!r}")

    def characteristic_function(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * self.omega0 * t - self.gamma * np.abs(t))

    def pdf(self, omega):
        omega = np.asarray(omega, dtype=float)
        return (self.gamma / np.pi) / ((omega - self.omega0) ** 2 + self.gamma**2)


@dataclass(frozen=True)
class Gaussian:
    omega0: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"Gaussian width must be positive, got {self.sigma!r}")

    def characteristic_function(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * self.omega0 * t - 0.5 * (self.sigma * t) ** 2)

    def pdf(self, omega):
        omega = np.asarray(omega, dtype=float)
        z = (omega - self.omega0) / self.sigma
        return np.exp(-0.5 * z**2) / np.sqrt(2 * np.pi * self.sigma**2)


@dataclass(frozen=True)
class Box:
    """Uniform density on ``[0, omega0]``."""

    omega0: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"box width must be positive, got {self.omega0!r}")

    def characteristic_function(self, t):
        x = self.omega0 * np.asarray(t, dtype=float)
        small = np.abs(x) < _BOX_SERIES_CUTOFF
        safe = np.where(small, 1.0, x)
        exact = np.sin(safe) / safe + 2j * np.sin(safe / 2) ** 2 / safe
        series = 1 + 0.5j * x - x**2 / 6
        return np.where(small, series, exact)

    def pdf(self, omega):
        omega = np.asarray(omega, dtype=float)
        inside = (omega >= 0) & (omega < self.omega0)
        return np.where(inside, 1.0 / self.omega0, 0.0)


@dataclass(frozen=True, eq=False)
class Tabulated:
    """Density sampled on a finite ascending grid.

    The samples must be non-negative and integrate to one within ``1e-6``
    under the trapezoidal rule. They are then rescaled by that trapezoidal
    mass so the discrete measure is exactly normalized, which keeps
    ``|phi(t)| <= 1`` and the Toeplitz matrices positive semidefinite.
    """

    omega: np.ndarray
    density: np.ndarray
    source: str | None = None
    _mass: float = field(init=False, repr=False)

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float)
        density = np.array(self.density, dtype=float)
        if omega.ndim != 1 or omega.size < 2 or density.shape != omega.shape:
            raise ValueError("tabulated density needs two equal-length columns of >= 2 samples")
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(density))):
            raise ValueError("tabulated density has non-finite samples")
        if np.any(np.diff(omega) <= 0):
            raise ValueError("tabulated grid must be strictly ascending")
        if np.any(density < 0):
            i = int(np.argmax(density < 0))
            raise ValueError(f"tabulated density is negative at omega={omega[i]!r}")
        mass = float(_trapezoid(density, omega))
        if abs(mass - 1.0) > TABULATED_MASS_ATOL:
            raise ValueError(f"tabulated density integrates to {mass!r}, expected 1")
        omega.setflags(write=False)
        density.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "density", density)
        object.__setattr__(self, "_mass", mass)

    def characteristic_function(self, t):
        return quadrature_cf(self.omega, self.density, t) / self._mass

    def pdf(self, omega):
        omega = np.asarray(omega, dtype=float)
        inside = (omega >= self.omega[0]) & (omega <= self.omega[-1])
        values = np.interp(omega, self.omega, self.density) / self._mass
        return np.where(inside, values, 0.0)


SpectralModel = Lorentzian | Gaussian | Box | Tabulated


def characteristic_function(model: SpectralModel, t):
    """``phi(t)`` for ``model``; scalar in, complex scalar out, arrays broadcast."""
    out = model.characteristic_function(t)
    return complex(out) if np.ndim(out) == 0 else out


def pdf(model: SpectralModel, omega):
    out = model.pdf(omega)
    return float(out) if np.ndim(out) == 0 else out


class TableFormatError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


def load_tabulated(path) -> Tabulated:
    """Read a two-column ``omega density`` text file.

    Blank lines and lines starting with ``#`` are skipped. Columns may be
    separated by whitespace or commas.
    """
    path = Path(path)
    omega, density = [], []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            cols = text.replace(",", " ").split()
            if len(cols) != 2:
                raise TableFormatError(path, lineno, f"expected 2 columns, found {len(cols)}")
            try:
                w, p = float(cols[0]), float(cols[1])
            except ValueError:
                raise TableFormatError(path, lineno, f"cannot parse numbers from {text!r}") from None
            if omega and w <= omega[-1]:
                raise TableFormatError(path, lineno, "omega values must be strictly ascending")
            if p < 0:
                raise TableFormatError(path, lineno, f"negative density {p!r}")
            omega.append(w)
            density.append(p)
    if len(omega) < 2:
        raise TableFormatError(path, 0, "need at least 2 samples")
    return Tabulated(np.array(omega), np.array(density), source=str(path))
