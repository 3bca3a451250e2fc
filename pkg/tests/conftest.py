from __future__ import annotations

import numpy as np
import pytest

from pulsecontrol.reservoir.coupling import CouplingFunction, CouplingShape, ModeSet, discretize

TWO_PI = 2.0 * np.pi


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density_matrix(rng: np.random.Generator, rank: int = 4) -> np.ndarray:
    """Mixture of ``rank`` random pure states with Dirichlet weights."""
    vectors = random_unitary(rng, 4)[:, :rank]
    weights = rng.dirichlet(np.ones(rank))
    rho = (vectors * weights) @ vectors.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.real(np.trace(rho))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def gaussian_coupling() -> CouplingFunction:
    return CouplingFunction(CouplingShape.GAUSSIAN, s=5.0, omega_p=1.0, gamma_p=0.1)


@pytest.fixture(scope="session")
def gaussian_modes(gaussian_coupling: CouplingFunction) -> ModeSet:
    return discretize(gaussian_coupling, K=2000, support_halfwidth_in_gammas=6.0)


@pytest.fixture(scope="session")
def single_cell_modes() -> ModeSet:
    """One Gaussian cell at omega_p with s = 0.02 (h^2 ~ 0.135)."""
    return discretize(CouplingFunction(CouplingShape.GAUSSIAN, s=0.02), K=1)
