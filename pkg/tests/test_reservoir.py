"""Tests for coupling functions and their discretization."""
from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad

from pulsecontrol.errors import BadSupport, DomainError
from pulsecontrol.reservoir.coupling import CouplingFunction, CouplingShape, ModeSet, discretize, evaluate

ALL_SHAPES = list(CouplingShape)


class TestCouplingFunction:
    """Normalization and closed-form masses."""

    @pytest.mark.parametrize("shape", ALL_SHAPES)
    def test_integrates_to_s(self, shape: CouplingShape) -> None:
        """Each shape integrates to s over its untruncated support."""
        cf = CouplingFunction(shape, s=2.5, omega_p=1.0, gamma_p=0.1)
        pieces = [(-np.inf, 0.0), (0.0, 2.0), (2.0, np.inf)]
        if shape is CouplingShape.SEMI_ELLIPTIC:
            pieces = [(0.9, 1.1)]
        value = sum(
            quad(lambda w: cf.evaluate(w), lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400)[0] for lo, hi in pieces
        )
        assert value == pytest.approx(cf.total_mass(), rel=1e-8)

    @pytest.mark.parametrize("shape", ALL_SHAPES)
    def test_mass_between_matches_quadrature(self, shape: CouplingShape) -> None:
        """Closed-form cell masses agree with numerical quadrature."""
        cf = CouplingFunction(shape, s=1.0, omega_p=1.0, gamma_p=0.2)
        expected, _ = quad(lambda w: cf.evaluate(w), 0.85, 1.05, epsabs=1e-13, epsrel=1e-12, limit=200)
        assert cf.mass_between(0.85, 1.05) == pytest.approx(expected, rel=1e-9)

    def test_evaluate_is_vectorized(self) -> None:
        """evaluate maps arrays to arrays and scalars to floats."""
        cf = CouplingFunction(CouplingShape.LORENTZIAN, s=1.0)
        grid = np.linspace(0.5, 1.5, 11)
        values = evaluate(cf, grid)
        assert values.shape == grid.shape
        assert isinstance(evaluate(cf, 1.0), float)
        assert evaluate(cf, 1.0) == pytest.approx(1.0 / (math.pi * 0.1))

    def test_semi_elliptic_vanishes_outside_support(self) -> None:
        """The semi-ellipse is zero beyond omega_p +/- gamma_p."""
        cf = CouplingFunction(CouplingShape.SEMI_ELLIPTIC, s=1.0, omega_p=1.0, gamma_p=0.1)
        assert cf.evaluate(1.2) == 0.0
        assert cf.evaluate(0.85) == 0.0

    def test_semi_elliptic_edges_are_exact_zeros(self) -> None:
        """Both support edges evaluate to zero despite rounding in the scaled offset."""
        cf = CouplingFunction(CouplingShape.SEMI_ELLIPTIC, s=1.0, omega_p=1.0, gamma_p=0.1)
        assert cf.evaluate(0.9) == 0.0
        assert cf.evaluate(1.1) == 0.0
        assert np.all(cf.evaluate(np.array([0.9, 1.1])) == 0.0)

    @pytest.mark.parametrize("shape", ALL_SHAPES)
    def test_symmetric_about_the_peak(self, shape: CouplingShape) -> None:
        """h(omega_p + delta) equals h(omega_p - delta) across and beyond the width."""
        cf = CouplingFunction(shape, s=1.0, omega_p=1.0, gamma_p=0.1)
        deltas = np.linspace(0.0, 0.3, 31)
        above = cf.evaluate(1.0 + deltas)
        below = cf.evaluate(1.0 - deltas)
        assert above == pytest.approx(below, rel=1e-10, abs=1e-9)

    @pytest.mark.parametrize("shape", ALL_SHAPES)
    def test_nonnegative(self, shape: CouplingShape) -> None:
        """No shape goes negative anywhere on a wide frequency grid."""
        cf = CouplingFunction(shape, s=2.0, omega_p=1.0, gamma_p=0.1)
        assert np.all(cf.evaluate(np.linspace(0.0, 3.0, 3001)) >= 0.0)

    def test_gaussian_peak_value(self) -> None:
        """The Gaussian peaks at s / (sqrt(pi) gamma_p)."""
        cf = CouplingFunction(CouplingShape.GAUSSIAN, s=5.0, omega_p=1.0, gamma_p=0.1)
        assert cf.evaluate(1.0) == pytest.approx(5.0 / (math.sqrt(math.pi) * 0.1), rel=1e-12)

    @pytest.mark.parametrize("field_name", ["s", "omega_p", "gamma_p"])
    def test_rejects_non_positive_parameters(self, field_name: str) -> None:
        """s, omega_p and gamma_p must all be positive."""
        kwargs = {"s": 1.0, "omega_p": 1.0, "gamma_p": 0.1, field_name: 0.0}
        with pytest.raises(DomainError):
            CouplingFunction(CouplingShape.GAUSSIAN, **kwargs)

    def test_semi_elliptic_reaching_negative_frequencies(self) -> None:
        """A semi-ellipse wider than omega_p is a support error."""
        with pytest.raises(BadSupport):
            CouplingFunction(CouplingShape.SEMI_ELLIPTIC, s=1.0, omega_p=1.0, gamma_p=1.5)

    def test_shape_accepts_plain_strings(self) -> None:
        """Shapes can be given by their config spelling."""
        cf = CouplingFunction("SemiElliptic", s=1.0)
        assert cf.shape is CouplingShape.SEMI_ELLIPTIC


class TestDiscretize:
    """Midpoint-rule mode sets."""

    def test_gaussian_mass_is_recovered(self, gaussian_modes: ModeSet) -> None:
        """K = 2000 Gaussian cells recover s and report the truncated mass."""
        assert gaussian_modes.count == 2000
        assert gaussian_modes.total_coupling == pytest.approx(5.0, rel=1e-9)
        assert gaussian_modes.truncated_mass == pytest.approx(5.0 * math.erf(6.0), rel=1e-12)
        assert gaussian_modes.clipped_mass == 0.0

    def test_frequencies_are_scaled_by_omega_p(self) -> None:
        """Mode frequencies are stored in units of omega_p."""
        cf = CouplingFunction(CouplingShape.GAUSSIAN, s=1.0, omega_p=2.0, gamma_p=0.2)
        modes = discretize(cf, K=101)
        assert modes.omegas[50] == pytest.approx(1.0, abs=1e-12)
        assert modes.physical_omegas[50] == pytest.approx(2.0, abs=1e-12)
        assert modes.omega_p == 2.0

    def test_midpoints_are_strictly_increasing(self) -> None:
        """Midpoint frequencies are positive and strictly increasing."""
        modes = discretize(CouplingFunction(CouplingShape.LORENTZIAN, s=1.0), K=500)
        assert np.all(np.diff(modes.omegas) > 0.0)
        assert np.all(modes.omegas > 0.0)

    @pytest.mark.parametrize("shape", [CouplingShape.SEMI_ELLIPTIC, CouplingShape.LORENTZIAN])
    def test_error_shrinks_when_doubling_modes(self, shape: CouplingShape) -> None:
        """Doubling K never increases the quadrature error."""
        cf = CouplingFunction(shape, s=1.0, omega_p=1.0, gamma_p=0.1)
        errors = []
        for K in (500, 1000, 2000, 4000):
            modes = discretize(cf, K=K)
            errors.append(abs(modes.total_coupling - modes.truncated_mass))
        for coarse, fine in zip(errors, errors[1:]):
            assert fine <= coarse + 1e-14

    def test_semi_elliptic_window_is_its_support(self) -> None:
        """The semi-elliptic window is the support itself."""
        cf = CouplingFunction(CouplingShape.SEMI_ELLIPTIC, s=1.0, omega_p=1.0, gamma_p=0.1)
        modes = discretize(cf, K=2000)
        assert modes.omegas.min() > 0.9
        assert modes.omegas.max() < 1.1
        assert modes.truncated_mass == pytest.approx(1.0, rel=1e-12)
        assert modes.total_coupling == pytest.approx(1.0, rel=1e-4)

    def test_low_edge_is_clipped_at_positive_frequencies(self) -> None:
        """Wide Lorentzians are clipped above zero and the lost mass is reported."""
        cf = CouplingFunction(CouplingShape.LORENTZIAN, s=1.0, omega_p=1.0, gamma_p=0.5)
        modes = discretize(cf, K=400, support_halfwidth_in_gammas=6.0)
        assert modes.omegas.min() > 0.0
        assert modes.clipped_mass == pytest.approx(cf.mass_between(-math.inf, 1e-9), rel=1e-9)
        assert modes.clipped_mass > 0.0

    def test_single_cell(self, single_cell_modes: ModeSet) -> None:
        """One cell carries the midpoint value times the window width."""
        assert single_cell_modes.count == 1
        assert single_cell_modes.omegas[0] == pytest.approx(1.0)
        expected = 0.02 * 1.2 / (math.sqrt(math.pi) * 0.1)
        assert single_cell_modes.h_sq[0] == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("K", [0, -3, 2.5])
    def test_rejects_bad_mode_count(self, K) -> None:
        """K must be a positive integer."""
        with pytest.raises(DomainError):
            discretize(CouplingFunction(CouplingShape.GAUSSIAN, s=1.0), K=K)


class TestModeSet:
    def test_single_and_frame(self) -> None:
        """A single mode exports as one omega_k, h_k_sq row."""
        modes = ModeSet.single(1.0, 0.25)
        frame = modes.to_frame()
        assert list(frame.columns) == ["omega_k", "h_k_sq"]
        assert frame.iloc[0].tolist() == [1.0, 0.25]

    def test_from_pairs_sorts(self) -> None:
        """from_pairs orders modes by frequency."""
        modes = ModeSet.from_pairs([(1.1, 0.1), (0.9, 0.2)])
        assert modes.omegas.tolist() == [0.9, 1.1]
        assert modes.h_sq.tolist() == [0.2, 0.1]

    def test_rejects_unsorted_frequencies(self) -> None:
        """Unsorted frequencies are rejected."""
        with pytest.raises(DomainError):
            ModeSet(np.array([1.0, 0.9]), np.array([0.1, 0.1]))

    def test_rejects_negative_coupling(self) -> None:
        """Negative squared couplings are rejected."""
        with pytest.raises(DomainError):
            ModeSet(np.array([1.0]), np.array([-0.1]))

    def test_rejects_empty(self) -> None:
        """A mode set needs at least one mode."""
        with pytest.raises(DomainError):
            ModeSet(np.array([]), np.array([]))
