"""Discretized auxiliary clock sector.

The clock lives on a periodic grid of N_T sites spanning a total extent
Theta.  Its momentum operator is diagonal in the discrete Fourier basis
with eigenvalues (2 pi / Theta) * j for j in the centered integer window,
so exp(i alpha P) is an exact circulant shift whenever alpha is an integer
multiple of the grid spacing.  Clock energies are E_j = -p_j: the sign is
fixed so the constraint (clock momentum + system energy) vanishes when the
clock energy equals the physical energy.

A finite-dimensional clock cannot satisfy the canonical commutator
[T, P] = i; what it does satisfy exactly are the shift (Weyl) relations,
which is what the tests pin down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, InvalidGrid
from .linalg import _frozen

ALIASING_MARGIN = 1.25
DEFAULT_SIGMA_FACTOR = 4.0
DEFAULT_TAIL_SIGMAS = 6.0


def _fft_integers(n: int) -> np.ndarray:
    """Momentum integers in FFT order: 0, 1, ..., ceil(n/2)-1, -floor(n/2), ..., -1."""
    j = np.arange(n)
    j = np.where(j < (n + 1) // 2, j, j - n)
    return j


@dataclass(frozen=True)
class ClockGrid:
    n_sites: int
    period: float

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise InvalidGrid("clock needs at least 2 sites")
        if not (self.period > 0):
            raise InvalidGrid("clock period must be positive")

    @property
    def spacing(self) -> float:
        return self.period / self.n_sites

    @property
    def momentum_spacing(self) -> float:
        return 2.0 * np.pi / self.period

    @property
    def t_values(self) -> np.ndarray:
        return np.arange(self.n_sites) * self.spacing

    @property
    def p_values(self) -> np.ndarray:
        return self.momentum_spacing * _fft_integers(self.n_sites)

    @property
    def energy_values(self) -> np.ndarray:
        """Clock energies E_j = -p_j, in the same column order as p_values."""
        return -self.p_values


@dataclass(frozen=True)
class ClockOperators:
    """Position, momentum and shift operators on the clock grid."""

    grid: ClockGrid
    t_op: np.ndarray
    p_op: np.ndarray

    def shift(self, alpha: float) -> np.ndarray:
        """Circulant translation by alpha / spacing sites.

        Only defined for alpha an integer multiple of the grid spacing;
        exp(i alpha p_op) |T_k> = |T_{k-m}> with m = alpha / spacing.
        """
        ratio = alpha / self.grid.spacing
        m = int(round(ratio))
        if abs(ratio - m) > 1e-9:
            raise InvalidGrid(
                f"shift displacement {alpha} is not an integer multiple of spacing"
            )
        return np.roll(np.eye(self.grid.n_sites, dtype=complex), -m, axis=0)


def _dft_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def build_clock(n_sites: int, period: float) -> tuple[ClockGrid, ClockOperators]:
    """Build the grid plus its position/momentum operators.

    p_op = F^dag diag(p_values) F with F the unitary DFT, symmetrized to
    remove roundoff-level asymmetry.
    """
    grid = ClockGrid(n_sites=n_sites, period=period)
    f = _dft_matrix(n_sites)
    p_op = f.conj().T @ (grid.p_values[:, None] * f)
    p_op = 0.5 * (p_op + p_op.conj().T)
    t_op = np.diag(grid.t_values).astype(complex)
    ops = ClockOperators(grid=grid, t_op=_frozen(t_op), p_op=_frozen(p_op))
    return grid, ops


def clock_energy_basis(ops: ClockOperators) -> np.ndarray:
    """Unitary whose column j is the p_op eigenvector with eigenvalue p_j.

    Columns are ordered to match grid.p_values (clock energy E_j = -p_j)
    and phased so the T = 0 component of every column is real positive:
    <T_k|E_j> = exp(2 pi i j k / N) / sqrt(N).
    """
    n = ops.grid.n_sites
    k = np.arange(n)
    j = _fft_integers(n)
    return np.exp(2j * np.pi * np.outer(k, j) / n) / np.sqrt(n)


def check_aliasing(grid: ClockGrid, eigenvalues: np.ndarray, margin: float = ALIASING_MARGIN) -> None:
    """Hard error unless the spectrum fits the clock energy window with margin.

    Positive system energies are absorbed by negative clock momenta and vice
    versa, so the two window edges are checked independently.  Aliased
    energies would silently corrupt the fixed-energy projection, hence an
    error rather than a warning.
    """
    e = np.asarray(eigenvalues, dtype=float)
    dp = grid.momentum_spacing
    e_window_max = (grid.n_sites // 2) * dp
    e_window_min = -((grid.n_sites + 1) // 2 - 1) * dp
    top = margin * max(float(np.max(e)), 0.0)
    bottom = margin * min(float(np.min(e)), 0.0)
    if top > e_window_max or bottom < e_window_min:
        raise AliasingError(
            f"spectrum (scaled by {margin}) spans [{bottom:.6g}, {top:.6g}] "
            f"but the clock energy window is [{e_window_min:.6g}, {e_window_max:.6g}] "
            f"(n_sites={grid.n_sites}, period={grid.period:.6g})"
        )


def auto_clock_for_spectrum(
    eigenvalues: np.ndarray,
    n_sites: int = 64,
    *,
    margin: float = ALIASING_MARGIN,
    sigma_factor: float = DEFAULT_SIGMA_FACTOR,
    tail_sigmas: float = DEFAULT_TAIL_SIGMAS,
) -> tuple[ClockGrid, ClockOperators]:
    """Choose a clock period so the spectrum and its Gaussian tails fit.

    With the default broadening sigma = sigma_factor * momentum spacing, the
    energy lattice must reach tail_sigmas * sigma beyond both spectral edges
    (so the default energy grid exists) and the aliasing margin must hold.
    """
    e = np.asarray(eigenvalues, dtype=float)
    lam_pos = max(float(np.max(e)), 0.0)
    lam_neg = max(-float(np.min(e)), 0.0)
    scale = max(lam_pos, lam_neg, 1e-6)
    j_pos = n_sites // 2
    j_neg = (n_sites + 1) // 2 - 1
    tail = tail_sigmas * sigma_factor
    if j_pos <= tail or j_neg <= tail:
        raise InvalidGrid(
            f"n_sites={n_sites} leaves no room for {tail_sigmas} sigma tails"
        )
    dp = max(
        lam_pos / (j_pos - tail),
        lam_neg / (j_neg - tail),
        margin * lam_pos / j_pos,
        margin * lam_neg / j_neg,
        1e-3 * scale / j_pos,
    )
    if dp <= 0:
        dp = 1.0 / j_pos
    dp *= 1.0 + 1e-9  # keep the aliasing check strictly satisfied under rounding
    period = 2.0 * np.pi / dp
    grid, ops = build_clock(n_sites, period)
    check_aliasing(grid, e, margin)
    return grid, ops
