"""Two-qubit entanglement measures on 4x4 density matrices.

Basis order is |11>, |10>, |01>, |00> (indices 0..3), so a pure-dephasing
evolution from the Bell state keeps its weight on the corners (0, 0), (0, 3),
(3, 0) and (3, 3).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
import re
from typing import Any, Dict, List, Sequence, Union

import numpy as np
import yaml

from pulsecontrol.errors import ConfigError, DomainError, InvalidState, NumericalFailure

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
INTERMEDIATE_PSD_TOL = 1e-8
# Eigenvalues of unit-trace 4x4 matrices below this are rounding noise.
ZERO_SNAP = 1e-14

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

ArrayLike = Union["DensityMatrix", np.ndarray, Sequence[Sequence[complex]]]


@dataclass(frozen=True, slots=True, eq=False)
class DensityMatrix:
    """Immutable 4x4 complex two-qubit density matrix."""

    elements: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.elements, dtype=complex, copy=True)
        if matrix.shape != (4, 4):
            raise InvalidState(f"Two-qubit density matrix must be 4x4, got shape {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "elements", matrix)

    @classmethod
    def from_ket(cls, psi: Sequence[complex]) -> "DensityMatrix":
        """Build the projector onto a (normalized) two-qubit ket."""
        vec = np.asarray(psi, dtype=complex).reshape(4)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise InvalidState("Cannot build a density matrix from the zero vector")
        vec = vec / norm
        return cls(np.outer(vec, vec.conj()))

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.elements - self.elements.conj().T)))

    def trace_residual(self) -> float:
        return float(abs(np.trace(self.elements) - 1.0))

    def min_eigenvalue(self) -> float:
        hermitian = 0.5 * (self.elements + self.elements.conj().T)
        return float(np.linalg.eigvalsh(hermitian)[0])

    def validate(self) -> "DensityMatrix":
        """Raise InvalidState unless Hermitian, unit-trace and PSD within tolerance."""
        residual = self.hermiticity_residual()
        if residual > HERMITIAN_TOL:
            raise InvalidState(f"Density matrix is not Hermitian (residual {residual:.3e})")
        trace_residual = self.trace_residual()
        if trace_residual > TRACE_TOL:
            raise InvalidState(f"Density matrix trace deviates from 1 by {trace_residual:.3e}")
        min_eig = self.min_eigenvalue()
        if min_eig < -PSD_TOL:
            raise InvalidState(f"Density matrix has negative eigenvalue {min_eig:.3e}")
        return self

    def offdiag_corner(self) -> complex:
        """Return rho_{03} = <11|rho|00>."""
        return complex(self.elements[0, 3])


@dataclass(slots=True)
class MeasureReport:
    """Aggregated measures for a single density matrix."""

    concurrence: float
    entropy_log4: float
    purity: float
    eigenvalues: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _as_density(rho: ArrayLike) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho.validate()
    return DensityMatrix(np.asarray(rho, dtype=complex)).validate()


def _clip_spectrum(eigenvalues: np.ndarray, tolerance: float, what: str) -> np.ndarray:
    """Clip rounding-level negative eigenvalues to zero; fail on anything worse."""
    lowest = float(np.min(eigenvalues))
    if lowest < -tolerance:
        raise NumericalFailure(f"{what} has eigenvalue {lowest:.3e} below -{tolerance:g}")
    clipped = np.where(eigenvalues < ZERO_SNAP, 0.0, eigenvalues)
    return clipped


def _psd_sqrt(matrix: np.ndarray, tolerance: float, what: str) -> np.ndarray:
    hermitian = 0.5 * (matrix + matrix.conj().T)
    eigenvalues, vectors = np.linalg.eigh(hermitian)
    roots = np.sqrt(_clip_spectrum(eigenvalues, tolerance, what))
    return (vectors * roots) @ vectors.conj().T


def spin_flip(rho: ArrayLike) -> DensityMatrix:
    """Return the spin-flipped state (sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    state = _as_density(rho)
    flipped = SIGMA_YY @ state.elements.conj() @ SIGMA_YY
    return DensityMatrix(flipped)


def concurrence_via_R(rho: ArrayLike) -> float:
    """Concurrence as max(0, 2 lambda_max - Tr R) with R = sqrt(sqrt(rho) rho~ sqrt(rho)).

    Both matrix square roots are taken through Hermitian eigendecompositions.

    Raises:
        InvalidState: If ``rho`` is not a valid density matrix.
        NumericalFailure: If an intermediate matrix is not PSD beyond tolerance.
    """
    state = _as_density(rho)
    flipped = spin_flip(state).elements
    sqrt_rho = _psd_sqrt(state.elements, PSD_TOL, "rho")
    inner = sqrt_rho @ flipped @ sqrt_rho
    r_matrix = _psd_sqrt(inner, INTERMEDIATE_PSD_TOL, "sqrt(rho) rho~ sqrt(rho)")
    r_eigenvalues = np.linalg.eigvalsh(0.5 * (r_matrix + r_matrix.conj().T))
    r_eigenvalues = _clip_spectrum(r_eigenvalues, INTERMEDIATE_PSD_TOL, "R")
    value = 2.0 * float(r_eigenvalues[-1]) - float(np.sum(r_eigenvalues))
    return float(min(max(value, 0.0), 1.0))


def _rho_tilde_roots(state: DensityMatrix) -> np.ndarray:
    """Descending square roots of the eigenvalues of rho rho~.

    With rho = W W^dagger (W = V sqrt(p)), the eigenvalues of rho rho~ are the
    squared singular values of the symmetric matrix W^T (sigma_y x sigma_y) W,
    so the roots come straight out of an SVD without squaring round-off.
    """
    eigenvalues, vectors = np.linalg.eigh(0.5 * (state.elements + state.elements.conj().T))
    weights = _clip_spectrum(eigenvalues, PSD_TOL, "rho")
    subnormalized = vectors * np.sqrt(weights)
    overlap = subnormalized.T @ SIGMA_YY @ subnormalized
    return np.linalg.svd(overlap, compute_uv=False)


def concurrence(rho: ArrayLike) -> float:
    """Wootters concurrence max(0, mu1 - mu2 - mu3 - mu4).

    The mu_i are the descending square roots of the eigenvalues of rho rho~.
    This is the default route; it agrees with :func:`concurrence_via_R`.
    """
    state = _as_density(rho)
    roots = _rho_tilde_roots(state)
    value = float(roots[0] - np.sum(roots[1:]))
    return float(min(max(value, 0.0), 1.0))


def _entropy_of(eigenvalues: np.ndarray) -> float:
    positive = eigenvalues[eigenvalues > 0.0]
    value = float(-np.sum(positive * np.log(positive)) / math.log(4.0))
    return value


def entropy_log4(rho: ArrayLike) -> float:
    """Base-4 von Neumann entropy, 0 for pure states and 1 for I/4."""
    state = _as_density(rho)
    eigenvalues = np.linalg.eigvalsh(0.5 * (state.elements + state.elements.conj().T))
    eigenvalues = _clip_spectrum(eigenvalues, PSD_TOL, "rho")
    return float(min(max(_entropy_of(eigenvalues), 0.0), 1.0))


def entropy_from_concurrence(c: float, literal: bool = False) -> float:
    """Entropy of the dephased Bell state whose concurrence is ``c``.

    The dephased Bell state has the two nonzero eigenvalues (1 + C)/2 and
    (1 - C)/2, which gives 0 at C = 1 and 0.5 at C = 0. ``literal=True``
    uses the squared-argument form, with both eigenvalues squared; those
    do not sum to one for 0 < C < 1.

    Raises:
        DomainError: If ``c`` is outside [0, 1].
    """
    if not (0.0 <= c <= 1.0) or math.isnan(c):
        raise DomainError(f"Concurrence must lie in [0, 1], got {c}")
    lam_plus = (1.0 + c) / 2.0
    lam_minus = (1.0 - c) / 2.0
    if literal:
        lam_plus, lam_minus = lam_plus**2, lam_minus**2
    return _entropy_of(np.array([lam_plus, lam_minus, 0.0, 0.0]))


def purity(rho: ArrayLike) -> float:
    """Tr(rho^2)."""
    state = _as_density(rho)
    value = float(np.real(np.sum(state.elements * state.elements.T)))
    return float(min(max(value, 0.25), 1.0))


def measure_report(rho: ArrayLike) -> MeasureReport:
    state = _as_density(rho)
    eigenvalues = np.linalg.eigvalsh(0.5 * (state.elements + state.elements.conj().T))
    eigenvalues = _clip_spectrum(eigenvalues, PSD_TOL, "rho")
    return MeasureReport(
        concurrence=concurrence(state),
        entropy_log4=entropy_log4(state),
        purity=purity(state),
        eigenvalues=[float(v) for v in eigenvalues[::-1]],
    )


def bell_state() -> DensityMatrix:
    """|Phi+><Phi+| with Phi+ = (|11> + |00>)/sqrt(2)."""
    return DensityMatrix.from_ket([1.0, 0.0, 0.0, 1.0])


def werner_state(p: float) -> DensityMatrix:
    """p |Phi+><Phi+| + (1 - p) I/4."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Werner weight must lie in [0, 1], got {p}")
    return DensityMatrix(p * bell_state().elements + (1.0 - p) * np.eye(4) / 4.0)


def dephased_bell(x: complex) -> DensityMatrix:
    """diag(1/2, 0, 0, 1/2) with corner coherence rho_03 = x, rho_30 = conj(x)."""
    if abs(x) > 0.5:
        raise DomainError(f"Corner coherence magnitude must be <= 1/2, got {abs(x)}")
    matrix = np.zeros((4, 4), dtype=complex)
    matrix[0, 0] = matrix[3, 3] = 0.5
    matrix[0, 3] = x
    matrix[3, 0] = np.conj(x)
    return DensityMatrix(matrix)


_NUMBER_SPLIT = re.compile(r"[\s,;]+")


def load_density_matrix(path: Path) -> DensityMatrix:
    """Read a density matrix from text or YAML/JSON.

    Text files hold 16 complex entries row-major as 32 numbers (real, imag
    pairs); ``#`` starts a comment. Structured files hold ``real`` and
    ``imag`` 4x4 nested lists (``imag`` optional).
    """
    path = Path(path)
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read density matrix file {path}: {exc}") from exc

    if path.suffix.lower() in {".json", ".yaml", ".yml"}:
        data = yaml.safe_load(content) or {}
        if not isinstance(data, dict) or "real" not in data:
            raise ConfigError(f"{path}: structured density matrix needs a 'real' key")
        unknown = set(data) - {"real", "imag"}
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        real = np.asarray(data["real"], dtype=float)
        imag = np.asarray(data.get("imag", np.zeros((4, 4))), dtype=float)
        if real.shape != (4, 4) or imag.shape != (4, 4):
            raise ConfigError(f"{path}: 'real' and 'imag' must both be 4x4")
        return DensityMatrix(real + 1j * imag).validate()

    tokens: List[float] = []
    for line in content.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        try:
            tokens.extend(float(tok) for tok in _NUMBER_SPLIT.split(stripped) if tok)
        except ValueError as exc:
            raise ConfigError(f"{path}: non-numeric entry in line '{line.strip()}'") from exc
    if len(tokens) != 32:
        raise ConfigError(f"{path}: expected 32 numbers (16 real/imag pairs), found {len(tokens)}")
    pairs = np.asarray(tokens).reshape(16, 2)
    return DensityMatrix((pairs[:, 0] + 1j * pairs[:, 1]).reshape(4, 4)).validate()


__all__ = [
    "DensityMatrix",
    "MeasureReport",
    "spin_flip",
    "concurrence_via_R",
    "concurrence",
    "entropy_log4",
    "entropy_from_concurrence",
    "purity",
    "measure_report",
    "bell_state",
    "werner_state",
    "dephased_bell",
    "load_density_matrix",
]
