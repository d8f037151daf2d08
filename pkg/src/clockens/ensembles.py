"""Canonical and microcanonical ensembles from the constrained kernel.

Both statistical descriptions are read off the same regularized projector:
the partition function from the clock-position contraction continued to
imaginary separation, the density of states from the clock-energy blocks.
Each kernel-route column is paired with a direct spectral sum so the
agreement between the two can be quantified rather than assumed.

Normalization conventions (fixed here, since only proportionalities are
forced by the construction): Z(beta) is the plain trace of the Euclidean
kernel, and Omega_sigma(E_j) is the trace of the energy block, i.e. the
discrete delta(E_f - E_i) is a Kronecker block selector with the lattice
weight 1/(momentum spacing) absorbed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clock import (
    ClockGrid,
    ClockOperators,
    auto_clock_for_spectrum,
    build_clock,
    clock_energy_basis,
    DEFAULT_SIGMA_FACTOR,
    DEFAULT_TAIL_SIGMAS,
)
from .errors import GridTooCoarse, InvalidGrid
from .linalg import HermitianOperator, _frozen, eig_hermitian, tensor_product
from .models import QuantumModelSpec, build_quantum
from .projector import (
    DeltaRegularization,
    ExtendedOperator,
    build_constraint,
    clock_position_state,
    contract_clock,
    gaussian_delta,
    kernel_clock_energy,
    kernel_clock_time,
    projector_quadrature,
    projector_spectral,
)

DEFAULT_BETA_MIN = 0.1
DEFAULT_BETA_MAX = 10.0
DEFAULT_BETA_POINTS = 16


def default_beta_grid(
    low: float = DEFAULT_BETA_MIN,
    high: float = DEFAULT_BETA_MAX,
    num: int = DEFAULT_BETA_POINTS,
) -> np.ndarray:
    """Log-spaced inverse temperatures covering the quantum-classical crossover."""
    return np.geomspace(low, high, num)


def canonical_from_kernel(h: HermitianOperator, beta: float) -> float:
    """Z(beta) as the trace of the Euclidean kernel at clock separation -i beta."""
    if not (beta > 0):
        raise InvalidGrid("beta must be positive")
    kernel = kernel_clock_time(h, -1j * beta)
    return float(np.real(np.trace(kernel)))


def canonical_direct(eigenvalues: np.ndarray, beta: float) -> float:
    """Spectral-sum shortcut Tr exp(-beta H) = sum_n exp(-beta lambda_n)."""
    return float(np.sum(np.exp(-beta * np.asarray(eigenvalues, dtype=float))))


def microcanonical_from_kernel(
    h: HermitianOperator, e: float, reg: DeltaRegularization
) -> float:
    """Omega_sigma(E) as the trace of the fixed-energy kernel g_sigma(H - E)."""
    return float(np.real(np.trace(kernel_clock_energy(h, e, reg))))


def microcanonical_direct(eigenvalues: np.ndarray, e: float, sigma: float) -> float:
    """Spectral-sum shortcut sum_n g_sigma(lambda_n - E)."""
    return float(np.sum(gaussian_delta(np.asarray(eigenvalues, dtype=float) - e, sigma)))


def laplace_consistency(
    h: HermitianOperator,
    reg: DeltaRegularization,
    beta: float,
    e_grid: np.ndarray,
) -> float:
    """Trapezoid of Omega_sigma(E) exp(-beta E) over the energy grid.

    For Gaussian broadening the exact identity is
        integral dE Omega_sigma(E) exp(-beta E) = Z(beta) exp(beta^2 sigma^2 / 2),
    so the return value must reproduce the right-hand side within 1e-4
    relative once the grid spans the spectrum +- 6 sigma at spacing <= sigma/4.
    """
    e_grid = np.asarray(e_grid, dtype=float)
    if e_grid.size < 2:
        raise GridTooCoarse("energy grid needs at least two points")
    sigma = reg.sigma_e
    if beta * sigma > 2.0 + 1e-12:
        raise GridTooCoarse(f"beta * sigma = {beta * sigma:.3g} exceeds 2")
    spacing = float(np.max(np.diff(e_grid)))
    if spacing > sigma / 4.0 + 1e-12:
        raise GridTooCoarse(
            f"grid spacing {spacing:.3g} exceeds sigma/4 = {sigma / 4.0:.3g}"
        )
    eigs = eig_hermitian(h).eigenvalues
    lo_needed = float(np.min(eigs)) - 6.0 * sigma
    hi_needed = float(np.max(eigs)) + 6.0 * sigma
    if e_grid[0] > lo_needed + 1e-12 or e_grid[-1] < hi_needed - 1e-12:
        raise GridTooCoarse(
            f"grid [{e_grid[0]:.3g}, {e_grid[-1]:.3g}] does not span the spectrum "
            f"+- 6 sigma [{lo_needed:.3g}, {hi_needed:.3g}]"
        )
    omega = np.array([microcanonical_from_kernel(h, e, reg) for e in e_grid])
    return float(np.trapezoid(omega * np.exp(-beta * e_grid), e_grid))


@dataclass(frozen=True)
class EnsembleReport:
    """Kernel-route vs direct-route ensembles on shared grids."""

    beta_grid: np.ndarray
    z_kernel: np.ndarray
    z_direct: np.ndarray
    energy_grid: np.ndarray
    omega_kernel: np.ndarray
    omega_direct: np.ndarray
    sigma_used: float
    max_rel_error_z: float
    max_abs_error_omega: float

    def __post_init__(self) -> None:
        for name in (
            "beta_grid",
            "z_kernel",
            "z_direct",
            "energy_grid",
            "omega_kernel",
            "omega_direct",
        ):
            object.__setattr__(self, name, _frozen(np.asarray(getattr(self, name), dtype=float)))
        if np.any(self.z_direct <= 0):
            raise InvalidGrid("z_direct must be strictly positive")
        if np.any(self.omega_direct < 0):
            raise InvalidGrid("omega_direct must be nonnegative")


def default_regularization(grid: ClockGrid, *, sigma_factor: float = DEFAULT_SIGMA_FACTOR) -> DeltaRegularization:
    """Gaussian broadening at sigma = sigma_factor * momentum spacing.

    Wide enough to hide the clock lattice discreteness, narrow enough to
    track the spectrum.
    """
    return DeltaRegularization(
        scheme="gaussian_broadening", sigma_e=sigma_factor * grid.momentum_spacing
    )


def lattice_energy_grid(
    grid: ClockGrid, eigenvalues: np.ndarray, sigma: float, *, tail_sigmas: float = DEFAULT_TAIL_SIGMAS
) -> np.ndarray:
    """Clock-energy lattice points within the spectrum +- tail_sigmas * sigma.

    The kernel route only produces Omega on the lattice E_j = -p_j; with the
    default sigma = 4 * momentum spacing this grid has spacing sigma / 4.
    """
    energies = np.sort(grid.energy_values)
    lo = float(np.min(eigenvalues)) - tail_sigmas * sigma
    hi = float(np.max(eigenvalues)) + tail_sigmas * sigma
    selected = energies[(energies >= lo - 1e-12) & (energies <= hi + 1e-12)]
    if selected.size == 0:
        raise InvalidGrid("no clock lattice energies fall inside the requested window")
    return selected


def _energy_block_traces(
    projector: ExtendedOperator, ops: ClockOperators
) -> tuple[np.ndarray, np.ndarray, float]:
    """Traces of the clock-energy diagonal blocks, plus the off-block maximum.

    Returns (energies ascending, block traces, max off-diagonal block entry).
    The off-block maximum is the discrete image of the delta(E_f - E_i)
    prefactor and must vanish to roundoff.
    """
    u_e = clock_energy_basis(ops)
    n_t, n_s = projector.clock_dim, projector.system_dim
    v = tensor_product(u_e, np.eye(n_s))
    w = v.conj().T @ projector.entries @ v
    blocks = w.reshape(n_t, n_s, n_t, n_s)
    traces = np.real(np.einsum("ikik->i", blocks))
    off = blocks.copy()
    for j in range(n_t):
        off[j, :, j, :] = 0.0
    off_max = float(np.max(np.abs(off)))
    energies = ops.grid.energy_values
    order = np.argsort(energies)
    return energies[order], traces[order], off_max


def _verify_collapse_structure(projector: ExtendedOperator, tol: float = 1e-9) -> None:
    """Clock-position contractions must depend on site separation only.

    This is the discrete form of the projector collapsing onto a function
    of the clock separation alone, checked on two distinct equal-separation
    pairs before the report trusts the kernel route.  One-site separation
    keeps the Gaussian window factor near unity so the comparison is not
    noise-dominated.
    """
    n_t = projector.clock_dim
    sep = 1
    first = contract_clock(
        projector,
        clock_position_state(n_t, 0),
        clock_position_state(n_t, sep),
    )
    base = max(1, n_t // 3)
    second = contract_clock(
        projector,
        clock_position_state(n_t, base),
        clock_position_state(n_t, base + sep),
    )
    scale = max(float(np.max(np.abs(first))), 1e-300)
    deviation = float(np.max(np.abs(first - second))) / scale
    if deviation > tol:
        raise InvalidGrid(
            f"clock-position contraction is not translation invariant: {deviation:.3e}"
        )


def full_report(
    spec: QuantumModelSpec,
    clock: tuple[int, float] | None = None,
    reg: DeltaRegularization | None = None,
    beta_grid: np.ndarray | None = None,
    energy_grid: np.ndarray | None = None,
    *,
    n_sites: int = 64,
) -> EnsembleReport:
    """Run the full two-projection pipeline for one catalog model.

    The kernel columns are produced through the extended-space projector:
    Omega from the clock-energy block traces of g_sigma(C), Z from the
    collapsed clock-position kernel continued to imaginary separation (the
    translation-invariance of the collapse is verified on the projector
    first).  The direct columns are the spectral-sum shortcuts.
    """
    h = build_quantum(spec)
    eigs = eig_hermitian(h).eigenvalues

    if clock is None:
        grid, ops = auto_clock_for_spectrum(eigs, n_sites=n_sites)
    else:
        grid, ops = build_clock(clock[0], clock[1])
    if reg is None:
        reg = default_regularization(grid)
    sigma = reg.sigma_e

    if beta_grid is None:
        beta_grid = default_beta_grid()
    beta_grid = np.asarray(beta_grid, dtype=float)
    if beta_grid.size == 0:
        raise InvalidGrid("beta grid must be non-empty")
    if np.any(beta_grid <= 0):
        raise InvalidGrid("beta grid must be strictly positive")

    constraint = build_constraint(ops, h)
    if reg.scheme == "alpha_quadrature":
        projector = projector_quadrature(constraint, reg)
    else:
        projector = projector_spectral(constraint, reg)
    _verify_collapse_structure(projector)

    lattice, block_traces, _ = _energy_block_traces(projector, ops)
    if energy_grid is None:
        energy_grid = lattice_energy_grid(grid, eigs, sigma)
    else:
        energy_grid = np.asarray(energy_grid, dtype=float)
        if energy_grid.size == 0:
            raise InvalidGrid("energy grid must be non-empty")
    # The kernel route exists only on the clock-energy lattice.
    positions = np.searchsorted(lattice, energy_grid)
    positions = np.clip(positions, 0, lattice.size - 1)
    left = np.clip(positions - 1, 0, lattice.size - 1)
    nearest = np.where(
        np.abs(lattice[left] - energy_grid) < np.abs(lattice[positions] - energy_grid),
        left,
        positions,
    )
    if np.max(np.abs(lattice[nearest] - energy_grid)) > 1e-9 * max(grid.momentum_spacing, 1e-30):
        raise InvalidGrid("energy grid points must lie on the clock-energy lattice")
    omega_kernel = block_traces[nearest]
    omega_direct = np.array([microcanonical_direct(eigs, e, sigma) for e in energy_grid])

    z_kernel = np.array([canonical_from_kernel(h, b) for b in beta_grid])
    z_direct = np.array([canonical_direct(eigs, b) for b in beta_grid])

    # Z is strictly decreasing in beta exactly when the whole spectrum is
    # positive; a negative ground state makes exp(-beta*lam_min) grow.
    if float(np.min(eigs)) > 0 and np.any(np.diff(z_direct) >= 0):
        raise InvalidGrid("z_direct must decrease in beta for a positive spectrum")

    max_rel_z = float(np.max(np.abs(z_kernel - z_direct) / z_direct))
    max_abs_omega = float(np.max(np.abs(omega_kernel - omega_direct)))
    return EnsembleReport(
        beta_grid=beta_grid,
        z_kernel=z_kernel,
        z_direct=z_direct,
        energy_grid=energy_grid,
        omega_kernel=omega_kernel,
        omega_direct=omega_direct,
        sigma_used=sigma,
        max_rel_error_z=max_rel_z,
        max_abs_error_omega=max_abs_omega,
    )
