"""Tests for the discretized clock sector."""

import numpy as np
import pytest

from clockens.clock import (
    auto_clock_for_spectrum,
    build_clock,
    check_aliasing,
    clock_energy_basis,
)
from clockens.errors import AliasingError, InvalidGrid
from clockens.linalg import HermitianOperator, operator_function


class TestGrid:
    def test_two_site_momenta(self):
        grid, _ = build_clock(2, 2 * np.pi)
        # centered window for N=2 is j in {0, -1}
        assert np.allclose(grid.p_values, [0.0, -1.0], atol=0)

    def test_spacing_product(self):
        grid, _ = build_clock(8, 20.0)
        assert grid.spacing * grid.momentum_spacing == pytest.approx(2 * np.pi / 8, rel=1e-15)

    def test_momenta_symmetric_for_odd(self):
        grid, _ = build_clock(7, 5.0)
        assert np.allclose(np.sort(grid.p_values), -np.sort(grid.p_values)[::-1], atol=1e-15)

    def test_invalid_params(self):
        with pytest.raises(InvalidGrid):
            build_clock(1, 10.0)
        with pytest.raises(InvalidGrid):
            build_clock(8, 0.0)


class TestShift:
    def test_periodicity(self):
        grid, ops = build_clock(4, 2 * np.pi)
        s = ops.shift(grid.spacing)
        assert np.array_equal(np.linalg.matrix_power(s, 4), np.eye(4, dtype=complex))

    def test_shift_moves_basis_vector_down(self):
        grid, ops = build_clock(5, 3.0)
        s = ops.shift(grid.spacing)
        e2 = np.zeros(5)
        e2[2] = 1.0
        assert np.array_equal(s @ e2, np.eye(5, dtype=complex)[:, 1])

    def test_spectral_exponential_equals_circulant(self):
        grid, ops = build_clock(8, 20.0)
        for m in (1, 3, 7):
            alpha = m * grid.spacing
            spectral = operator_function(HermitianOperator(ops.p_op), lambda x: np.exp(1j * alpha * x))
            assert np.max(np.abs(spectral - ops.shift(alpha))) < 1e-10

    def test_non_lattice_displacement_rejected(self):
        grid, ops = build_clock(8, 20.0)
        with pytest.raises(InvalidGrid):
            ops.shift(0.37 * grid.spacing)

    def test_weyl_shift_relation(self):
        # S exp(i theta T) S^dag = exp(i theta (T + dT)) for theta = 2 pi / period,
        # where the wrap-around site agrees because exp is periodic at that theta.
        grid, ops = build_clock(16, 11.0)
        theta = 2 * np.pi / grid.period
        s = ops.shift(grid.spacing)
        left = s @ np.diag(np.exp(1j * theta * grid.t_values)) @ s.conj().T
        right = np.diag(np.exp(1j * theta * (grid.t_values + grid.spacing)))
        assert np.max(np.abs(left - right)) < 1e-12


class TestEnergyBasis:
    def test_columns_are_eigenvectors(self):
        grid, ops = build_clock(8, 20.0)
        u = clock_energy_basis(ops)
        for j in range(8):
            residual = ops.p_op @ u[:, j] - grid.p_values[j] * u[:, j]
            assert np.max(np.abs(residual)) < 1e-10

    def test_unitary(self):
        _, ops = build_clock(6, 7.0)
        u = clock_energy_basis(ops)
        assert np.max(np.abs(u.conj().T @ u - np.eye(6))) < 1e-10

    def test_flat_overlap_with_position(self):
        grid, ops = build_clock(9, 4.0)
        u = clock_energy_basis(ops)
        assert np.max(np.abs(np.abs(u) - 1.0 / np.sqrt(9))) < 1e-12

    def test_time_zero_component_real_positive(self):
        _, ops = build_clock(12, 30.0)
        u = clock_energy_basis(ops)
        assert np.all(np.abs(u[0].imag) < 1e-15)
        assert np.all(u[0].real > 0)

    def test_energy_labels_negate_momenta(self):
        grid, _ = build_clock(8, 20.0)
        assert np.array_equal(grid.energy_values, -grid.p_values)


class TestAliasing:
    def test_fitting_spectrum_passes(self):
        grid, _ = build_clock(16, 10.0)
        check_aliasing(grid, np.array([-1.0, 0.0, 2.0]))

    def test_overflowing_spectrum_raises(self):
        grid, _ = build_clock(4, 100.0)  # tiny momentum window
        with pytest.raises(AliasingError):
            check_aliasing(grid, np.array([0.0, 5.0]))

    def test_auto_clock_covers_tails(self):
        eigs = np.array([0.0, 1.0])
        grid, _ = auto_clock_for_spectrum(eigs, n_sites=64)
        sigma = 4.0 * grid.momentum_spacing
        e_max = (64 // 2) * grid.momentum_spacing
        e_min = -((64 + 1) // 2 - 1) * grid.momentum_spacing
        assert e_max >= 1.0 + 6.0 * sigma - 1e-12
        assert e_min <= 0.0 - 6.0 * sigma + 1e-12
        check_aliasing(grid, eigs)

    def test_commutes_with_system_factor(self):
        # [p (x) 1, 1 (x) H] = 0 exactly: different tensor factors.
        _, ops = build_clock(4, 9.0)
        rng = np.random.default_rng(1)
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        h = (m + m.conj().T) / 2
        a = np.kron(ops.p_op, np.eye(3))
        b = np.kron(np.eye(4), h)
        assert np.max(np.abs(a @ b - b @ a)) < 1e-12
