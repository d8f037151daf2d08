"""Experiment implementations behind the service endpoints.

Each runner translates a validated RunConfig into core-module calls and
packs the result into a response model, echoing the fully resolved
configuration (auto clock, auto widths, auto step counts) so every output
is self-describing.
"""

from __future__ import annotations

import numpy as np

from .. import dynamics as dyn
from ..clock import auto_clock_for_spectrum, build_clock
from ..ensembles import (
    canonical_direct,
    canonical_from_kernel,
    default_beta_grid,
    full_report,
    lattice_energy_grid,
    microcanonical_direct,
    microcanonical_from_kernel,
)
from ..errors import InvalidGrid
from ..linalg import eig_hermitian
from ..models import (
    ClassicalSystem,
    QuantumModelSpec,
    build_quantum,
    double_well_system,
    free_particle_system,
    hamiltonian_value,
    harmonic_system,
    morse_system,
)
from ..projector import (
    DeltaRegularization,
    build_constraint,
    projector_quadrature,
    projector_spectral,
)
from .schemas import (
    ActionsRecord,
    CanonicalResponse,
    ClassicalModel,
    CompareResponse,
    HamiltonResponse,
    MaupertuisResponse,
    MicrocanonicalResponse,
    OmegaTable,
    ProjectorXcheckResponse,
    ReparCheckResponse,
    ResolvedClock,
    ResolvedRegularization,
    ResolvedRun,
    RunConfig,
    TrajectoryTable,
    ZTable,
    floats,
)


def quantum_spec_from_config(config: RunConfig) -> QuantumModelSpec:
    m = config.model
    params = m.model_dump()
    kind = params.pop("kind")
    if kind == "random_hermitian" and params.get("seed") is None:
        params["seed"] = config.seed
    return QuantumModelSpec(kind, params)


def classical_system_from_config(model: ClassicalModel) -> ClassicalSystem:
    if model.potential == "harmonic":
        return harmonic_system(omega=model.omega, mass=model.mass, dof=model.dof)
    if model.potential == "double_well":
        return double_well_system(mass=model.mass, height=model.height, half_width=model.half_width)
    if model.potential == "morse":
        return morse_system(depth=model.depth, width=model.width, center=model.center, mass=model.mass)
    return free_particle_system(mass=model.mass, dof=model.dof)


def lapse_from_config(cfg) -> dyn.LapseProfile:
    if cfg.kind == "unit":
        return dyn.unit_lapse()
    return dyn.sinusoidal_lapse(amplitude=cfg.amplitude, frequency=cfg.frequency)


def _resolve_clock(config: RunConfig, eigenvalues: np.ndarray):
    if config.clock == "auto":
        return auto_clock_for_spectrum(eigenvalues, n_sites=64)
    return build_clock(config.clock.n_sites, config.clock.period)


def _resolve_regularization(config: RunConfig, grid) -> DeltaRegularization:
    r = config.regularization
    sigma = 4.0 * grid.momentum_spacing if r.sigma_e == "auto" else float(r.sigma_e)
    alpha = 0.5 * grid.period if r.alpha_max == "auto" else float(r.alpha_max)
    if r.scheme == "alpha_quadrature":
        return DeltaRegularization(
            scheme="alpha_quadrature",
            sigma_e=sigma,
            alpha_max=alpha,
            n_nodes=r.n_nodes,
            window=r.window,
        )
    return DeltaRegularization(scheme="gaussian_broadening", sigma_e=sigma)


def _resolve_beta(config: RunConfig) -> np.ndarray:
    b = config.grids.beta
    if isinstance(b, list):
        grid = np.asarray(b, dtype=float)
        if grid.size == 0:
            raise InvalidGrid("beta grid must be non-empty")
        return grid
    if b.spacing == "log":
        return default_beta_grid(b.start, b.stop, b.num)
    return np.linspace(b.start, b.stop, b.num)


def _resolve_steps(config: RunConfig) -> int:
    span = config.grids.sigma_span[1] - config.grids.sigma_span[0]
    if config.grids.n_steps == "auto":
        return dyn.default_step_count(span)
    return int(config.grids.n_steps)


def _resolved(config: RunConfig, *, grid=None, reg=None, n_steps=None) -> ResolvedRun:
    return ResolvedRun(
        experiment=config.experiment,
        seed=config.seed,
        model=config.model.model_dump(),
        clock=ResolvedClock(n_sites=grid.n_sites, period=float(grid.period)) if grid else None,
        regularization=ResolvedRegularization(
            scheme=reg.scheme,
            sigma_e=reg.sigma_e,
            alpha_max=reg.alpha_max,
            n_nodes=reg.n_nodes,
            window=reg.window,
        )
        if reg
        else None,
        n_steps=n_steps,
        sigma_span=config.grids.sigma_span if n_steps is not None else None,
    )


def _z_table(beta, z_kernel, z_direct) -> ZTable:
    rel = np.abs(np.asarray(z_kernel) - np.asarray(z_direct)) / np.abs(np.asarray(z_direct))
    return ZTable(
        beta=floats(beta), z_kernel=floats(z_kernel), z_direct=floats(z_direct), rel_err=floats(rel)
    )


def _omega_table(energy, omega_kernel, omega_direct) -> OmegaTable:
    err = np.abs(np.asarray(omega_kernel) - np.asarray(omega_direct))
    return OmegaTable(
        energy=floats(energy),
        omega_kernel=floats(omega_kernel),
        omega_direct=floats(omega_direct),
        abs_err=floats(err),
    )


def run_canonical(config: RunConfig) -> CanonicalResponse:
    spec = quantum_spec_from_config(config)
    h = build_quantum(spec)
    eigs = eig_hermitian(h).eigenvalues
    grid, _ = _resolve_clock(config, eigs)
    reg = _resolve_regularization(config, grid)
    beta = _resolve_beta(config)
    z_kernel = np.array([canonical_from_kernel(h, b) for b in beta])
    z_direct = np.array([canonical_direct(eigs, b) for b in beta])
    table = _z_table(beta, z_kernel, z_direct)
    return CanonicalResponse(
        resolved=_resolved(config, grid=grid, reg=reg),
        eigenvalues=floats(eigs),
        z=table,
        max_rel_error_z=float(np.max(table.rel_err)),
    )


def run_microcanonical(config: RunConfig) -> MicrocanonicalResponse:
    spec = quantum_spec_from_config(config)
    h = build_quantum(spec)
    eigs = eig_hermitian(h).eigenvalues
    grid, _ = _resolve_clock(config, eigs)
    reg = _resolve_regularization(config, grid)
    if config.grids.energy == "auto":
        energy = lattice_energy_grid(grid, eigs, reg.sigma_e)
    else:
        energy = np.asarray(config.grids.energy, dtype=float)
        if energy.size == 0:
            raise InvalidGrid("energy grid must be non-empty")
    omega_kernel = np.array([microcanonical_from_kernel(h, e, reg) for e in energy])
    omega_direct = np.array([microcanonical_direct(eigs, e, reg.sigma_e) for e in energy])
    table = _omega_table(energy, omega_kernel, omega_direct)
    return MicrocanonicalResponse(
        resolved=_resolved(config, grid=grid, reg=reg),
        eigenvalues=floats(eigs),
        sigma_used=reg.sigma_e,
        omega=table,
        max_abs_error_omega=float(np.max(table.abs_err)),
    )


def run_compare(config: RunConfig) -> CompareResponse:
    spec = quantum_spec_from_config(config)
    h = build_quantum(spec)
    eigs = eig_hermitian(h).eigenvalues
    grid, _ = _resolve_clock(config, eigs)
    reg = _resolve_regularization(config, grid)
    beta = _resolve_beta(config)
    energy = None if config.grids.energy == "auto" else np.asarray(config.grids.energy, dtype=float)
    report = full_report(
        spec,
        clock=(grid.n_sites, grid.period),
        reg=reg,
        beta_grid=beta,
        energy_grid=energy,
    )
    return CompareResponse(
        resolved=_resolved(config, grid=grid, reg=reg),
        eigenvalues=floats(eigs),
        sigma_used=report.sigma_used,
        z=_z_table(report.beta_grid, report.z_kernel, report.z_direct),
        omega=_omega_table(report.energy_grid, report.omega_kernel, report.omega_direct),
        max_rel_error_z=report.max_rel_error_z,
        max_abs_error_omega=report.max_abs_error_omega,
    )


def run_projector_xcheck(config: RunConfig) -> ProjectorXcheckResponse:
    spec = quantum_spec_from_config(config)
    h = build_quantum(spec)
    eigs = eig_hermitian(h).eigenvalues
    grid, ops = _resolve_clock(config, eigs)
    base = _resolve_regularization(config, grid)
    reg_spectral = DeltaRegularization(scheme="gaussian_broadening", sigma_e=base.sigma_e)
    alpha = 0.5 * grid.period if config.regularization.alpha_max == "auto" else float(config.regularization.alpha_max)
    reg_quad = DeltaRegularization(
        scheme="alpha_quadrature",
        sigma_e=base.sigma_e,
        alpha_max=alpha,
        n_nodes=config.regularization.n_nodes,
    )
    constraint = build_constraint(ops, h)
    g_spectral = projector_spectral(constraint, reg_spectral)
    g_quad = projector_quadrature(constraint, reg_quad)
    diff = float(np.max(np.abs(g_spectral.entries - g_quad.entries)))
    return ProjectorXcheckResponse(
        resolved=_resolved(config, grid=grid, reg=reg_quad),
        max_abs_difference=diff,
        extended_dim=constraint.clock_dim * constraint.system_dim,
    )


def _trajectory_table(traj: dyn.Trajectory) -> TrajectoryTable:
    return TrajectoryTable(
        sigma=floats(traj.sigma_values),
        q=[floats(row) for row in traj.qs],
        p=[floats(row) for row in traj.ps],
        t=floats(traj.ts),
        pi_t=floats(traj.pi_ts),
        h_value=floats(traj.h_values),
    )


def run_classical_hamilton(config: RunConfig) -> HamiltonResponse:
    system = classical_system_from_config(config.model)
    n_steps = _resolve_steps(config)
    span = config.grids.sigma_span
    traj = dyn.gauge_fix_hamilton(system, config.boundary.q0, config.boundary.p0, span, n_steps)
    acts = dyn.evaluate_actions(traj, system, e=-float(traj.pi_ts[0]))
    return HamiltonResponse(
        resolved=_resolved(config, n_steps=n_steps),
        trajectory=_trajectory_table(traj),
        actions=ActionsRecord(
            parametrized=acts.parametrized,
            hamilton=acts.hamilton,
            maupertuis_jacobi=acts.maupertuis_jacobi,
            routh_residual=acts.routh_residual,
        ),
        energy_drift=traj.energy_drift,
        pi_t_exactly_constant=bool(np.all(traj.pi_ts == traj.pi_ts[0])),
    )


def run_classical_maupertuis(config: RunConfig) -> MaupertuisResponse:
    system = classical_system_from_config(config.model)
    b = config.boundary
    p_a, tof, traj = dyn.maupertuis_shoot(system, b.q_a, b.q_b, b.energy, b.init_guess)
    residual = float(np.max(np.abs(traj.qs[-1] - np.asarray(b.q_b, dtype=float))))
    return MaupertuisResponse(
        resolved=_resolved(config),
        p_a=floats(p_a),
        time_of_flight=tof,
        endpoint_residual=residual,
        energy_drift=traj.energy_drift,
        trajectory=_trajectory_table(traj),
    )


def run_repar_check(config: RunConfig) -> ReparCheckResponse:
    system = classical_system_from_config(config.model)
    n_steps = _resolve_steps(config)
    lapse1 = lapse_from_config(config.lapse)
    lapse2 = lapse_from_config(config.lapse2)
    q0 = np.asarray(config.boundary.q0, dtype=float)
    p0 = np.asarray(config.boundary.p0, dtype=float)
    x0 = dyn.ExtendedPhasePoint(q=q0, p=p0, t=0.0, pi_t=-hamiltonian_value(system, q0, p0))
    diff = dyn.reparametrization_invariance_check(
        system, x0, lapse1, lapse2, config.grids.sigma_span, n_steps
    )
    return ReparCheckResponse(
        resolved=_resolved(config, n_steps=n_steps),
        lapse1=lapse1.description,
        lapse2=lapse2.description,
        final_state_difference=diff,
    )


RUNNERS = {
    "canonical": (run_canonical, CanonicalResponse),
    "microcanonical": (run_microcanonical, MicrocanonicalResponse),
    "compare": (run_compare, CompareResponse),
    "classical-hamilton": (run_classical_hamilton, HamiltonResponse),
    "classical-maupertuis": (run_classical_maupertuis, MaupertuisResponse),
    "repar-check": (run_repar_check, ReparCheckResponse),
    "projector-xcheck": (run_projector_xcheck, ProjectorXcheckResponse),
}
