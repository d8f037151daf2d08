"""Tests for the model catalog."""

import numpy as np
import pytest

from clockens.errors import DimensionMismatch, InvalidSpec
from clockens.models import (
    CLASSICAL_CATALOG,
    build_quantum,
    check_gradient,
    double_well_system,
    explicit_diagonal,
    hamiltonian_value,
    harmonic_system,
    morse_system,
    particle_in_box,
    random_hermitian,
    truncated_oscillator,
    two_level,
)


class TestQuantumCatalog:
    def test_oscillator_levels(self):
        h = build_quantum(truncated_oscillator(1.0, 3))
        assert np.allclose(np.diag(h.entries).real, [0.5, 1.5, 2.5], atol=0)

    def test_oscillator_equal_spacing(self):
        h = build_quantum(truncated_oscillator(0.7, 40))
        gaps = np.diff(np.diag(h.entries).real)
        assert np.max(np.abs(gaps - 0.7)) < 1e-12

    def test_two_level(self):
        h = build_quantum(two_level(0.0, 1.0))
        assert np.allclose(h.entries, np.diag([0.0, 1.0]), atol=0)

    def test_box_scaling(self):
        lam1 = np.diag(build_quantum(particle_in_box(1.0, 5)).entries).real
        lam2 = np.diag(build_quantum(particle_in_box(2.0, 5)).entries).real
        assert np.allclose(lam2, lam1 / 4.0, rtol=1e-14)

    def test_box_formula(self):
        lam = np.diag(build_quantum(particle_in_box(3.0, 4, mass=2.0)).entries).real
        want = np.array([n**2 * np.pi**2 / (2 * 2.0 * 9.0) for n in range(1, 5)])
        assert np.allclose(lam, want, rtol=1e-14)

    def test_random_hermitian_deterministic(self):
        a = build_quantum(random_hermitian(4, seed=42)).entries
        b = build_quantum(random_hermitian(4, seed=42)).entries
        assert a.tobytes() == b.tobytes()

    def test_random_hermitian_seed_changes_draw(self):
        a = build_quantum(random_hermitian(4, seed=42)).entries
        b = build_quantum(random_hermitian(4, seed=43)).entries
        assert not np.array_equal(a, b)

    def test_explicit_diagonal(self):
        h = build_quantum(explicit_diagonal([0.3, -1.0]))
        assert np.allclose(h.entries, np.diag([0.3, -1.0]), atol=0)

    @pytest.mark.parametrize(
        "bad",
        [
            lambda: truncated_oscillator(-1.0, 3),
            lambda: truncated_oscillator(1.0, 0),
            lambda: particle_in_box(-2.0, 3),
            lambda: random_hermitian(0, seed=1),
            lambda: explicit_diagonal([]),
        ],
    )
    def test_invalid_specs(self, bad):
        with pytest.raises(InvalidSpec):
            build_quantum(bad())


class TestClassicalSystems:
    def test_harmonic_rest_point(self):
        sys = harmonic_system()
        assert hamiltonian_value(sys, np.array([0.0]), np.array([0.0])) == 0.0

    def test_harmonic_unit_point(self):
        sys = harmonic_system()
        assert hamiltonian_value(sys, np.array([1.0]), np.array([1.0])) == pytest.approx(1.0, abs=1e-15)

    def test_double_well_value(self):
        sys = double_well_system()
        q, p = np.array([0.3]), np.array([0.4])
        oracle = 0.4**2 / 2.0 + (0.3**2 - 1.0) ** 2
        assert hamiltonian_value(sys, q, p) == pytest.approx(oracle, rel=1e-14)

    def test_dimension_mismatch(self):
        sys = harmonic_system(dof=2)
        with pytest.raises(DimensionMismatch):
            hamiltonian_value(sys, np.array([1.0]), np.array([1.0, 0.0]))

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(2024)
        for sys in CLASSICAL_CATALOG:
            points = rng.uniform(-1.5, 1.5, size=(20, sys.dof))
            worst = check_gradient(sys, points)
            assert worst < 1e-6

    def test_morse_bounded_below(self):
        sys = morse_system(depth=2.0, width=0.8)
        qs = np.linspace(-1.0, 6.0, 200)
        vals = [sys.potential(np.array([q])) for q in qs]
        assert min(vals) >= 0.0

    def test_invalid_classical_params(self):
        with pytest.raises(InvalidSpec):
            harmonic_system(omega=-1.0)
        with pytest.raises(InvalidSpec):
            double_well_system(height=0.0)
