"""Tests for the parametrized integrator, actions, and shooting solver."""

import numpy as np
import pytest

from clockens.dynamics import (
    ExtendedPhasePoint,
    Trajectory,
    default_step_count,
    evaluate_actions,
    gauge_fix_hamilton,
    integrate_hamilton,
    integrate_parametrized,
    maupertuis_shoot,
    reparametrization_invariance_check,
    sinusoidal_lapse,
    unit_lapse,
)
from clockens.errors import (
    EnergyBelowBarrier,
    NonMonotoneTime,
    ShootingDiverged,
    StepSizeTooLarge,
)
from clockens.models import (
    double_well_system,
    free_particle_system,
    harmonic_system,
    hamiltonian_value,
    morse_system,
)

TWO_PI = 2.0 * np.pi


def start_point(sys, q0, p0, t0=0.0):
    q0 = np.atleast_1d(np.asarray(q0, dtype=float))
    p0 = np.atleast_1d(np.asarray(p0, dtype=float))
    return ExtendedPhasePoint(q=q0, p=p0, t=t0, pi_t=-hamiltonian_value(sys, q0, p0))


class TestIntegrateParametrized:
    def test_free_particle_exactly_linear(self):
        sys = free_particle_system()
        x0 = start_point(sys, [0.2], [0.7])
        traj = integrate_parametrized(sys, x0, unit_lapse(), (0.0, 5.0), 2048)
        expected = 0.2 + 0.7 * traj.sigma_values
        assert np.max(np.abs(traj.qs[:, 0] - expected)) < 1e-12

    def test_pi_t_never_updated(self):
        sys = morse_system()
        x0 = start_point(sys, [0.5], [0.3])
        traj = integrate_parametrized(sys, x0, sinusoidal_lapse(0.3), (0.0, 4.0), 2048)
        assert np.all(traj.pi_ts == traj.pi_ts[0])

    def test_harmonic_period_return(self):
        sys = harmonic_system()
        x0 = start_point(sys, [1.0], [0.0])
        traj = integrate_parametrized(sys, x0, unit_lapse(), (0.0, TWO_PI), default_step_count(TWO_PI))
        assert abs(traj.qs[-1, 0] - 1.0) < 1e-8
        assert abs(traj.ps[-1, 0]) < 1e-8

    def test_time_advance_matches_lapse_quadrature(self):
        sys = harmonic_system()
        x0 = start_point(sys, [1.0], [0.0])
        lapse = sinusoidal_lapse(0.4, frequency=2.0)
        traj = integrate_parametrized(sys, x0, lapse, (0.0, 3.0), 4096)
        # composite Simpson quadrature of N over the span
        nodes = np.linspace(0.0, 3.0, 8193)
        vals = np.array([lapse.n_of_sigma(s) for s in nodes])
        w = np.ones_like(nodes)
        w[1:-1:2], w[2:-1:2] = 4.0, 2.0
        integral = np.dot(w, vals) * (nodes[1] - nodes[0]) / 3.0
        assert traj.ts[-1] - traj.ts[0] == pytest.approx(integral, abs=1e-8)

    def test_constraint_violating_start_rejected(self):
        sys = harmonic_system()
        bad = ExtendedPhasePoint(q=[1.0], p=[0.0], t=0.0, pi_t=0.25)
        with pytest.raises(ValueError):
            integrate_parametrized(sys, bad, unit_lapse(), (0.0, 1.0), 64)

    def test_coarse_step_raises_drift_error(self):
        sys = double_well_system()
        x0 = start_point(sys, [0.0], [1.2])
        with pytest.raises(StepSizeTooLarge):
            integrate_parametrized(sys, x0, unit_lapse(), (0.0, 10.0), 16)

    def test_nonpositive_lapse_rejected(self):
        sys = harmonic_system()
        x0 = start_point(sys, [1.0], [0.0])
        from clockens.dynamics import LapseProfile

        bad = LapseProfile(lambda s: -1.0, description="negative")
        with pytest.raises(ValueError):
            integrate_parametrized(sys, x0, bad, (0.0, 1.0), 64)

    def test_constraint_preserved_on_catalog(self):
        cases = [
            (harmonic_system(), [1.0], [0.0], (0.0, TWO_PI)),
            (double_well_system(), [0.0], [1.2], (0.0, 10.0)),
            (morse_system(), [0.5], [0.3], (0.0, 10.0)),
        ]
        for sys, q0, p0, span in cases:
            x0 = start_point(sys, q0, p0)
            n = default_step_count(span[1] - span[0])
            traj = integrate_parametrized(sys, x0, unit_lapse(), span, n)
            assert traj.energy_drift < 1e-8, sys.label
            assert np.all(traj.pi_ts == traj.pi_ts[0])


class TestGaugeReduction:
    def test_bit_for_bit_harmonic(self):
        sys = harmonic_system()
        a = gauge_fix_hamilton(sys, [1.0], [0.0], (0.0, TWO_PI), 2048)
        b = integrate_hamilton(sys, [1.0], [0.0], (0.0, TWO_PI), 2048)
        assert np.array_equal(a.qs, b.qs)
        assert np.array_equal(a.ps, b.ps)
        assert np.array_equal(a.ts, b.ts)

    def test_bit_for_bit_double_well(self):
        sys = double_well_system()
        a = gauge_fix_hamilton(sys, [0.0], [1.2], (0.0, 10.0), 4096)
        b = integrate_hamilton(sys, [0.0], [1.2], (0.0, 10.0), 4096)
        assert np.array_equal(a.qs, b.qs)
        assert np.array_equal(a.ps, b.ps)

    def test_energy_conservation_one_period(self):
        sys = harmonic_system()
        traj = gauge_fix_hamilton(sys, [1.0], [0.0], (0.0, TWO_PI), 2048)
        assert np.max(np.abs(traj.h_values - traj.h_values[0])) < 1e-8

    def test_integrator_order_by_step_halving(self):
        # endpoint error vs the closed-form orbit shrinks at least 2nd order
        sys = harmonic_system()

        def endpoint_error(n):
            traj = gauge_fix_hamilton(sys, [1.0], [0.0], (0.0, TWO_PI), n)
            return np.hypot(traj.qs[-1, 0] - 1.0, traj.ps[-1, 0])

        e1, e2 = endpoint_error(128), endpoint_error(256)
        assert e1 / e2 > 3.5


class TestActions:
    def test_free_particle_hamilton_action(self):
        sys = free_particle_system()
        span = 3.0
        traj = gauge_fix_hamilton(sys, [0.0], [0.8], (0.0, span), 2048)
        acts = evaluate_actions(traj, sys)
        assert acts.hamilton == pytest.approx(0.8**2 * span / 2.0, rel=1e-12)

    def test_param_equals_hamilton_in_unit_gauge(self):
        sys = double_well_system()
        traj = gauge_fix_hamilton(sys, [0.0], [1.2], (0.0, 10.0), 4096)
        acts = evaluate_actions(traj, sys)
        assert abs(acts.parametrized - acts.hamilton) < 1e-8

    def test_routh_identity_on_many_trajectories(self):
        cases = [
            (harmonic_system(), [1.0], [0.0], (0.0, TWO_PI), unit_lapse()),
            (double_well_system(), [0.0], [1.2], (0.0, 10.0), unit_lapse()),
            (morse_system(), [0.5], [0.3], (0.0, 10.0), sinusoidal_lapse(0.3)),
            (harmonic_system(dof=2), [1.0, 0.2], [0.0, 0.4], (0.0, 5.0), sinusoidal_lapse(0.2, 2.0)),
        ]
        for sys, q0, p0, span, lapse in cases:
            x0 = start_point(sys, q0, p0)
            traj = integrate_parametrized(sys, x0, lapse, span, 2048)
            acts = evaluate_actions(traj, sys, e=-float(traj.pi_ts[0]))
            assert acts.routh_residual < 1e-10, sys.label

    def test_mj_action_is_loop_area_for_harmonic(self):
        # closed orbit at energy E: the abbreviated action equals pi * q_max * p_max
        sys = harmonic_system()
        traj = gauge_fix_hamilton(sys, [1.0], [0.0], (0.0, TWO_PI), 4096)
        acts = evaluate_actions(traj, sys, e=0.5)
        assert acts.maupertuis_jacobi == pytest.approx(np.pi, rel=1e-6)

    def test_non_monotone_time_raises(self):
        sys = harmonic_system()
        base = gauge_fix_hamilton(sys, [1.0], [0.0], (0.0, 1.0), 64)
        broken = Trajectory(
            sigma_values=base.sigma_values,
            qs=base.qs,
            ps=base.ps,
            ts=base.ts[::-1],
            pi_ts=base.pi_ts,
            h_values=base.h_values,
            lapse_values=base.lapse_values,
            energy_drift=base.energy_drift,
            action_parametrized=base.action_parametrized,
        )
        with pytest.raises(NonMonotoneTime):
            evaluate_actions(broken, sys)


class TestReparametrizationInvariance:
    def test_identical_lapses_give_zero(self):
        sys = harmonic_system()
        x0 = start_point(sys, [1.0], [0.0])
        d = reparametrization_invariance_check(
            sys, x0, unit_lapse(), unit_lapse(), (0.0, TWO_PI), 512
        )
        assert d == 0.0

    def test_harmonic_equal_integral_pair(self):
        sys = harmonic_system()
        x0 = start_point(sys, [1.0], [0.0])
        d = reparametrization_invariance_check(
            sys, x0, unit_lapse(), sinusoidal_lapse(0.5), (0.0, TWO_PI),
            default_step_count(TWO_PI),
        )
        assert d < 1e-6

    def test_convergence_order_at_least_two(self):
        sys = harmonic_system()
        x0 = start_point(sys, [1.0], [0.0])

        def diff(n):
            return reparametrization_invariance_check(
                sys, x0, unit_lapse(), sinusoidal_lapse(0.5), (0.0, TWO_PI), n
            )

        d1, d2 = diff(256), diff(512)
        assert d1 / d2 > 3.5

    def test_free_particle_depends_only_on_elapsed_time(self):
        sys = free_particle_system()
        x0 = start_point(sys, [0.0], [1.0])
        d = reparametrization_invariance_check(
            sys, x0, unit_lapse(), sinusoidal_lapse(0.4), (0.0, TWO_PI), 2048
        )
        assert d < 1e-10

    def test_unequal_integral_pair_rejected(self):
        sys = harmonic_system()
        x0 = start_point(sys, [1.0], [0.0])
        from clockens.dynamics import LapseProfile

        bigger = LapseProfile(lambda s: 1.1, description="N=1.1")
        with pytest.raises(ValueError):
            reparametrization_invariance_check(
                sys, x0, unit_lapse(), bigger, (0.0, TWO_PI), 256
            )


class TestMaupertuisShooting:
    def test_harmonic_closed_form(self):
        sys = harmonic_system()
        p_a, tof, traj = maupertuis_shoot(sys, [0.0], [1.0], 1.0, [1.0])
        assert abs(p_a[0] - np.sqrt(2.0)) < 1e-8
        assert abs(tof - np.pi / 4.0) < 1e-6
        assert traj.energy_drift < 1e-8

    def test_free_particle_closed_form(self):
        sys = free_particle_system()
        length, energy = 2.0, 1.0
        p_a, tof, _ = maupertuis_shoot(sys, [0.0], [length], energy, [1.0])
        assert abs(p_a[0] - np.sqrt(2.0 * energy)) < 1e-10
        assert abs(tof - length * np.sqrt(1.0 / (2.0 * energy))) < 1e-10

    def test_double_well_above_barrier(self):
        sys = double_well_system()
        p_a, tof, traj = maupertuis_shoot(sys, [-1.0], [1.0], 1.5, [1.0])
        assert abs(np.max(np.abs(traj.qs[-1] - 1.0))) < 1e-8
        assert traj.energy_drift < 1e-8
        assert p_a[0] == pytest.approx(np.sqrt(2.0 * 1.5), rel=1e-12)
        # step-halving self-consistency: the flight time is stable in the grid
        _, tof_fine, _ = maupertuis_shoot(sys, [-1.0], [1.0], 1.5, [1.0], steps_per_unit=4096)
        assert abs(tof - tof_fine) < 1e-8

    def test_negative_direction_basin(self):
        sys = harmonic_system()
        p_a, tof, _ = maupertuis_shoot(sys, [0.0], [1.0], 1.0, [-1.0])
        assert p_a[0] == pytest.approx(-np.sqrt(2.0), rel=1e-12)
        assert abs(tof - (np.pi + np.pi / 4.0)) < 1e-6

    def test_two_dof_direction_solve(self):
        sys = harmonic_system(dof=2)
        p_a, tof, traj = maupertuis_shoot(sys, [0.0, 0.0], [0.8, 0.8], 1.0, [1.0, 0.5])
        assert np.max(np.abs(p_a - np.array([1.0, 1.0]))) < 1e-6
        assert abs(tof - np.arcsin(0.8)) < 1e-6
        assert np.max(np.abs(traj.qs[-1] - np.array([0.8, 0.8]))) < 1e-8

    def test_time_is_output_pi_t_is_minus_e(self):
        sys = harmonic_system()
        _, _, traj = maupertuis_shoot(sys, [0.0], [1.0], 1.0, [1.0])
        assert np.all(traj.pi_ts == -1.0)

    def test_energy_below_barrier(self):
        sys = double_well_system()
        with pytest.raises(EnergyBelowBarrier):
            maupertuis_shoot(sys, [0.0], [1.0], 0.5, [1.0])  # V(0) = 1 > E

    def test_unreachable_target_diverges(self):
        sys = harmonic_system()
        # E = 0.5 caps |q| at 1; q_b = 3 is outside the shell's reach
        with pytest.raises(ShootingDiverged):
            maupertuis_shoot(sys, [0.0], [3.0], 0.5, [1.0], sigma_cap=16.0)

    def test_degenerate_endpoints(self):
        sys = harmonic_system()
        p_a, tof, _ = maupertuis_shoot(sys, [0.5], [0.5], 1.0, [1.0])
        assert tof == 0.0
        assert p_a[0] == pytest.approx(np.sqrt(2.0 * (1.0 - 0.125)), rel=1e-12)
