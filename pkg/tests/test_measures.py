"""Tests for two-qubit entanglement measures."""
from __future__ import annotations

import json

import numpy as np
import pytest

from pulsecontrol.analytics.measures import (
    DensityMatrix,
    bell_state,
    concurrence,
    concurrence_via_R,
    dephased_bell,
    entropy_from_concurrence,
    entropy_log4,
    load_density_matrix,
    measure_report,
    purity,
    spin_flip,
    werner_state,
)
from pulsecontrol.errors import ConfigError, DomainError, InvalidState

from tests.conftest import random_density_matrix, random_unitary

PRODUCT_00 = DensityMatrix.from_ket([0.0, 0.0, 0.0, 1.0])


class TestConcurrence:
    """Wootters concurrence on standard and random states."""

    def test_bell_state_is_maximally_entangled(self) -> None:
        """Phi+ has concurrence one on both routes."""
        assert concurrence(bell_state()) == pytest.approx(1.0, abs=1e-12)
        assert concurrence_via_R(bell_state()) == pytest.approx(1.0, abs=1e-9)

    def test_product_state_has_zero_concurrence(self) -> None:
        """|00> has concurrence zero on both routes."""
        assert concurrence(PRODUCT_00) == pytest.approx(0.0, abs=1e-12)
        assert concurrence_via_R(PRODUCT_00) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("p", [0.2, 1.0 / 3.0, 0.5, 1.0])
    def test_werner_closed_form(self, p: float) -> None:
        """Werner states follow max(0, (3p - 1) / 2)."""
        expected = max(0.0, (3.0 * p - 1.0) / 2.0)
        assert concurrence(werner_state(p)) == pytest.approx(expected, abs=1e-10)

    def test_routes_agree_on_random_states(self, rng: np.random.Generator) -> None:
        """The singular-value and square-root routes agree on random mixed states."""
        worst = 0.0
        for _ in range(1000):
            rho = random_density_matrix(rng, rank=int(rng.integers(1, 5)))
            worst = max(worst, abs(concurrence(rho) - concurrence_via_R(rho)))
        assert worst < 1e-9

    def test_local_unitary_invariance(self, rng: np.random.Generator) -> None:
        """Local unitaries leave the concurrence unchanged."""
        for _ in range(50):
            rho = random_density_matrix(rng, rank=2)
            local = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
            rotated = local @ rho @ local.conj().T
            assert concurrence(rotated) == pytest.approx(concurrence(rho), abs=1e-9)

    def test_dephased_bell_concurrence_is_twice_the_corner(self) -> None:
        """For the dephased Bell family C = 2 |rho_03|."""
        for x in (0.0, 0.1, 0.25j, 0.49):
            assert concurrence(dephased_bell(x)) == pytest.approx(2.0 * abs(x), abs=1e-12)

    def test_values_stay_in_unit_interval(self, rng: np.random.Generator) -> None:
        """Random states give concurrences in [0, 1]."""
        values = [concurrence(random_density_matrix(rng)) for _ in range(200)]
        assert min(values) >= 0.0
        assert max(values) <= 1.0


class TestSpinFlip:
    def test_involution(self, rng: np.random.Generator) -> None:
        """Applying the spin flip twice gives the original matrix back."""
        rho = random_density_matrix(rng)
        twice = spin_flip(spin_flip(rho)).elements
        assert np.max(np.abs(twice - rho)) < 1e-12

    def test_bell_state_is_invariant(self) -> None:
        """Phi+ is a fixed point of the spin flip."""
        flipped = spin_flip(bell_state()).elements
        assert np.max(np.abs(flipped - bell_state().elements)) < 1e-12


class TestEntropyAndPurity:
    """Entropy (base 4) and purity."""

    def test_pure_and_maximally_mixed(self) -> None:
        """Entropy is 0 for a pure state and 1 for I/4, whose purity is 1/4."""
        assert entropy_log4(bell_state()) == pytest.approx(0.0, abs=1e-12)
        assert entropy_log4(np.eye(4) / 4.0) == pytest.approx(1.0, abs=1e-12)
        assert purity(np.eye(4) / 4.0) == pytest.approx(0.25, abs=1e-12)

    def test_entropy_from_concurrence_endpoints(self) -> None:
        """The entropy relation gives 0 at C = 1 and 1/2 at C = 0."""
        assert entropy_from_concurrence(1.0) == pytest.approx(0.0, abs=1e-12)
        assert entropy_from_concurrence(0.0) == pytest.approx(0.5, abs=1e-12)

    def test_dephased_family_range_and_consistency(self) -> None:
        """The entropy relation matches the spectrum and stays within [0, 1/2]."""
        for c in np.linspace(0.0, 1.0, 41):
            s = entropy_from_concurrence(float(c))
            assert 0.0 <= s <= 0.5 + 1e-12
            assert s == pytest.approx(entropy_log4(dephased_bell(c / 2.0)), abs=1e-12)

    def test_literal_form_differs_inside_the_interval(self) -> None:
        """The literal entropy form only agrees with the spectral one at the endpoints."""
        assert entropy_from_concurrence(0.5, literal=True) != pytest.approx(entropy_from_concurrence(0.5))
        assert entropy_from_concurrence(1.0, literal=True) == pytest.approx(0.0, abs=1e-12)

    def test_entropy_from_concurrence_rejects_out_of_range(self) -> None:
        """Concurrences outside [0, 1] are a domain error."""
        with pytest.raises(DomainError):
            entropy_from_concurrence(1.5)
        with pytest.raises(DomainError):
            entropy_from_concurrence(-0.1)

    def test_purity_relation_on_dephased_family(self) -> None:
        """Purity equals (1 + C^2) / 2 along the dephased family."""
        for c in np.linspace(0.0, 1.0, 21):
            assert purity(dephased_bell(c / 2.0)) == pytest.approx((1.0 + c**2) / 2.0, abs=1e-12)

    def test_measure_report_orders_eigenvalues(self) -> None:
        """The report lists eigenvalues in descending order, summing to one."""
        report = measure_report(werner_state(0.5))
        assert report.concurrence == pytest.approx(0.25, abs=1e-10)
        assert report.eigenvalues == sorted(report.eigenvalues, reverse=True)
        assert sum(report.eigenvalues) == pytest.approx(1.0, abs=1e-12)


class TestValidation:
    def test_rejects_wrong_shape(self) -> None:
        """Only 4x4 matrices are accepted."""
        with pytest.raises(InvalidState):
            DensityMatrix(np.eye(3) / 3.0)

    def test_rejects_non_hermitian(self) -> None:
        """Non-Hermitian input is an invalid state."""
        matrix = np.eye(4, dtype=complex) / 4.0
        matrix[0, 1] = 0.1
        with pytest.raises(InvalidState):
            concurrence(matrix)

    def test_rejects_wrong_trace(self) -> None:
        """A trace other than one is an invalid state."""
        with pytest.raises(InvalidState):
            concurrence(np.eye(4) / 2.0)

    def test_rejects_negative_eigenvalue(self) -> None:
        """Negative eigenvalues make the state invalid."""
        with pytest.raises(InvalidState):
            concurrence(np.diag([0.6, 0.5, 0.1, -0.2]))

    def test_elements_are_read_only(self) -> None:
        """The stored matrix cannot be mutated in place."""
        with pytest.raises(ValueError):
            bell_state().elements[0, 0] = 0.0


class TestLoadDensityMatrix:
    def test_text_file(self, tmp_path) -> None:
        """A whitespace text file with a comment header loads as Phi+."""
        path = tmp_path / "bell.txt"
        rows = bell_state().elements
        lines = ["# Phi+ in the |11>, |10>, |01>, |00> basis"]
        lines += [" ".join(f"{v.real} {v.imag}" for v in row) for row in rows]
        path.write_text("\n".join(lines), encoding="utf-8")
        assert concurrence(load_density_matrix(path)) == pytest.approx(1.0, abs=1e-12)

    def test_structured_file(self, tmp_path) -> None:
        """JSON with real and imag parts loads."""
        path = tmp_path / "werner.json"
        rho = werner_state(0.5).elements
        path.write_text(json.dumps({"real": rho.real.tolist(), "imag": rho.imag.tolist()}), encoding="utf-8")
        assert concurrence(load_density_matrix(path)) == pytest.approx(0.25, abs=1e-10)

    def test_wrong_number_count(self, tmp_path) -> None:
        """A text file without 32 numbers is rejected."""
        path = tmp_path / "short.txt"
        path.write_text("1 0 0 0", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_density_matrix(path)

    def test_unknown_structured_key(self, tmp_path) -> None:
        """Structured files with unexpected keys are rejected."""
        path = tmp_path / "bad.yaml"
        path.write_text("real: [[1]]\nphase: 0\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_density_matrix(path)
