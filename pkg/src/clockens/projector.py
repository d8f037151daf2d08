"""Constraint operator and regularized delta projector on the extended space.

The extended space is clock tensor system (clock index slow).  The single
first-class constraint is

    C = P_clock (x) 1  +  1 (x) H,

and the central object is its regularized delta projector, built by two
independent routes that must agree:

* spectral broadening: g_sigma(C) with g_sigma a normalized Gaussian;
* alpha quadrature: (1/2pi) * integral of a Gaussian-windowed exp(i alpha C)
  over a finite window, the literal Fourier representation of the delta.

The Gaussian window in alpha with scale 1/sigma is the exact Fourier dual
of Gaussian broadening, so the two constructions converge to the same
operator; a hard alpha-cutoff would instead ring at any practical node
count.

Resolving the clock factor of the projector in position states collapses
it onto the time-evolution kernel of the system; resolving it in momentum
(clock-energy) states makes it block-diagonal with blocks g_sigma(H - E_j).
Those two contractions are the canonical and microcanonical kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clock import ClockOperators, check_aliasing
from .errors import DimensionMismatch, InvalidSpec, QuadratureUnderresolved
from .linalg import (
    HermitianOperator,
    _frozen,
    eig_hermitian,
    operator_function,
    tensor_product,
)

SCHEMES = ("gaussian_broadening", "alpha_quadrature")


def gaussian_delta(x: np.ndarray, sigma: float) -> np.ndarray:
    """Normalized Gaussian g_sigma(x) = exp(-x^2 / 2 sigma^2) / (sigma sqrt(2 pi))."""
    x = np.asarray(x, dtype=float)
    return np.exp(-(x**2) / (2.0 * sigma**2)) / (sigma * np.sqrt(2.0 * np.pi))


@dataclass(frozen=True)
class DeltaRegularization:
    """Choice and width of the delta smoothing.

    sigma_e is the energy-space width.  For the alpha_quadrature scheme,
    alpha_max is the half-window A and n_nodes the trapezoid node count M;
    the only supported window shape is the Gaussian dual of g_sigma.
    """

    scheme: str
    sigma_e: float
    alpha_max: float | None = None
    n_nodes: int | None = None
    window: str = "gaussian"

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise InvalidSpec(f"unknown regularization scheme {self.scheme!r}")
        if not (self.sigma_e > 0):
            raise InvalidSpec("sigma_e must be positive")
        if self.scheme == "alpha_quadrature":
            if self.alpha_max is None or self.n_nodes is None:
                raise InvalidSpec("alpha_quadrature needs alpha_max and n_nodes")
            if not (self.alpha_max > 0):
                raise InvalidSpec("alpha_max must be positive")
            if self.n_nodes < 8:
                raise InvalidSpec("alpha_quadrature needs at least 8 nodes")
        if self.window != "gaussian":
            raise InvalidSpec(f"unsupported window {self.window!r}")


@dataclass(frozen=True)
class ExtendedOperator:
    """Hermitian operator on the clock (x) system space, clock index slow."""

    clock_dim: int
    system_dim: int
    entries: np.ndarray
    clock_period: float | None = None

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        expected = self.clock_dim * self.system_dim
        if m.shape != (expected, expected):
            raise DimensionMismatch(
                f"expected shape ({expected}, {expected}), got {m.shape}"
            )
        deviation = np.max(np.abs(m - m.conj().T))
        if deviation > 1e-12:
            raise InvalidSpec(f"extended operator not Hermitian: {deviation:.3e}")
        object.__setattr__(self, "entries", _frozen(m))

    def as_hermitian(self) -> HermitianOperator:
        return HermitianOperator(self.entries)


def build_constraint(clock: ClockOperators, h: HermitianOperator) -> ExtendedOperator:
    """C = p_clock (x) 1 + 1 (x) H, after checking the aliasing rule."""
    system_eigs = eig_hermitian(h).eigenvalues
    check_aliasing(clock.grid, system_eigs)
    n_t = clock.grid.n_sites
    n_s = h.dim
    entries = tensor_product(clock.p_op, np.eye(n_s)) + tensor_product(np.eye(n_t), h.entries)
    return ExtendedOperator(
        clock_dim=n_t, system_dim=n_s, entries=entries, clock_period=clock.grid.period
    )


def projector_spectral(c: ExtendedOperator, reg: DeltaRegularization) -> ExtendedOperator:
    """g_sigma(C) through the spectral decomposition; positive semidefinite."""
    if reg.scheme != "gaussian_broadening":
        raise InvalidSpec("projector_spectral requires the gaussian_broadening scheme")
    entries = operator_function(
        c.as_hermitian(), lambda lam: gaussian_delta(lam, reg.sigma_e)
    )
    entries = 0.5 * (entries + entries.conj().T)
    return ExtendedOperator(
        clock_dim=c.clock_dim,
        system_dim=c.system_dim,
        entries=entries,
        clock_period=c.clock_period,
    )


def projector_quadrature(c: ExtendedOperator, reg: DeltaRegularization) -> ExtendedOperator:
    """Windowed Fourier quadrature for the delta projector.

    (1/2pi) * sum_m w_m exp(-alpha_m^2 sigma^2 / 2) exp(i alpha_m C) on an
    M-node trapezoid over [-A, A].  Every exp(i alpha_m C) shares the one
    spectral basis of C (single code path for operator functions), so the
    node sum collapses to a scalar quadrature per eigenvalue, accumulated
    in fixed node order.
    """
    if reg.scheme != "alpha_quadrature":
        raise InvalidSpec("projector_quadrature requires the alpha_quadrature scheme")
    a = float(reg.alpha_max)
    m_nodes = int(reg.n_nodes)
    if c.clock_period is not None and a > 0.5 * c.clock_period + 1e-12:
        raise InvalidSpec(
            f"alpha_max {a:.6g} exceeds half the clock period {0.5 * c.clock_period:.6g}"
        )
    dec = eig_hermitian(c.as_hermitian())
    spectral_radius = float(np.max(np.abs(dec.eigenvalues))) if dec.eigenvalues.size else 0.0
    nodes = np.linspace(-a, a, m_nodes)
    spacing = nodes[1] - nodes[0]
    if spectral_radius > 0 and spacing > np.pi / spectral_radius:
        raise QuadratureUnderresolved(
            f"node spacing {spacing:.3e} exceeds pi / max|spec(C)| = "
            f"{np.pi / spectral_radius:.3e}; increase n_nodes"
        )
    weights = np.full(m_nodes, spacing)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    window = np.exp(-(nodes**2) * reg.sigma_e**2 / 2.0)
    phases = np.exp(1j * np.outer(nodes, dec.eigenvalues))
    values = (weights * window) @ phases / (2.0 * np.pi)
    u = dec.eigenvectors
    entries = (u * values) @ u.conj().T
    entries = 0.5 * (entries + entries.conj().T)
    return ExtendedOperator(
        clock_dim=c.clock_dim,
        system_dim=c.system_dim,
        entries=entries,
        clock_period=c.clock_period,
    )


def kernel_clock_time(h: HermitianOperator, dt: complex) -> np.ndarray:
    """Evolution kernel exp(-i dt H) for clock separation dt = T_f - T_i.

    The clock-position contraction of the delta projector collapses onto
    this kernel; a purely imaginary separation dt = -i beta gives the
    Euclidean kernel exp(-beta H).  The continuation is applied here, on
    the collapsed kernel, because the discrete circulant shift admits no
    canonical imaginary displacement.
    """
    return operator_function(h, lambda lam: np.exp(-1j * dt * lam))


def kernel_clock_energy(h: HermitianOperator, e: float, reg: DeltaRegularization) -> np.ndarray:
    """Fixed-energy kernel g_sigma(H - E) on the system space.

    This is the diagonal-in-energy block of the extended projector; the
    distributional delta(E_f - E_i) prefactor becomes discrete block
    selection and is not part of the returned matrix.
    """
    return operator_function(h, lambda lam: gaussian_delta(lam - e, reg.sigma_e))


def contract_clock(
    projector: ExtendedOperator, bra_clock: np.ndarray, ket_clock: np.ndarray
) -> np.ndarray:
    """Partial contraction <bra| . |ket> over the clock factor only."""
    bra = np.asarray(bra_clock, dtype=complex)
    ket = np.asarray(ket_clock, dtype=complex)
    if bra.shape != (projector.clock_dim,) or ket.shape != (projector.clock_dim,):
        raise DimensionMismatch(
            f"clock vectors must have length {projector.clock_dim}"
        )
    n_t, n_s = projector.clock_dim, projector.system_dim
    blocks = projector.entries.reshape(n_t, n_s, n_t, n_s)
    return np.einsum("i,ikjl,j->kl", bra.conj(), blocks, ket)


def clock_position_state(n_sites: int, site: int) -> np.ndarray:
    state = np.zeros(n_sites, dtype=complex)
    state[site % n_sites] = 1.0
    return state
