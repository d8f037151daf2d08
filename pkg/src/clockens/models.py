"""Catalog of quantum Hamiltonians and classical mechanical systems.

Units: hbar = 1 and k_B = 1 throughout, so energies, inverse temperatures
and times are mutually dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, InvalidSpec
from .linalg import HermitianOperator

QUANTUM_KINDS = (
    "truncated_oscillator",
    "two_level",
    "particle_in_box",
    "random_hermitian",
    "explicit_diagonal",
)


@dataclass(frozen=True)
class QuantumModelSpec:
    """A named Hamiltonian constructor plus its parameters."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in QUANTUM_KINDS:
            raise InvalidSpec(f"unknown quantum model kind {self.kind!r}")


def truncated_oscillator(omega: float, n_levels: int) -> QuantumModelSpec:
    return QuantumModelSpec("truncated_oscillator", {"omega": omega, "n_levels": n_levels})


def two_level(e0: float, e1: float) -> QuantumModelSpec:
    return QuantumModelSpec("two_level", {"e0": e0, "e1": e1})


def particle_in_box(length: float, n_levels: int, mass: float = 1.0) -> QuantumModelSpec:
    return QuantumModelSpec(
        "particle_in_box", {"length": length, "n_levels": n_levels, "mass": mass}
    )


def random_hermitian(dim: int, seed: int) -> QuantumModelSpec:
    return QuantumModelSpec("random_hermitian", {"dim": dim, "seed": seed})


def explicit_diagonal(levels) -> QuantumModelSpec:
    return QuantumModelSpec("explicit_diagonal", {"levels": list(levels)})


def _random_hermitian_matrix(dim: int, seed: int) -> np.ndarray:
    """GUE-style draw with a fixed, documented sampling order.

    PCG64 generator seeded with ``seed``; draws are, in order: the real
    diagonal (``dim`` standard normals), then a full (dim, dim) block of
    standard normals for the real parts, then one for the imaginary parts.
    Off-diagonal entries are (re + i*im)/sqrt(2) from the upper triangle,
    mirrored by conjugation.  Identical seeds give identical bytes.
    """
    rng = np.random.default_rng(seed)
    diag = rng.standard_normal(dim)
    re = rng.standard_normal((dim, dim))
    im = rng.standard_normal((dim, dim))
    h = np.diag(diag).astype(complex)
    iu = np.triu_indices(dim, k=1)
    upper = (re[iu] + 1j * im[iu]) / np.sqrt(2.0)
    h[iu] = upper
    h[(iu[1], iu[0])] = np.conj(upper)
    return h


def build_quantum(spec: QuantumModelSpec) -> HermitianOperator:
    """Construct the Hamiltonian matrix for a catalog model."""
    p = spec.params
    if spec.kind == "truncated_oscillator":
        omega, n = float(p["omega"]), int(p["n_levels"])
        if omega <= 0 or n < 1:
            raise InvalidSpec("truncated_oscillator requires omega > 0 and n_levels >= 1")
        levels = omega * (np.arange(n) + 0.5)
    elif spec.kind == "two_level":
        levels = np.array([float(p["e0"]), float(p["e1"])])
    elif spec.kind == "particle_in_box":
        length, n = float(p["length"]), int(p["n_levels"])
        mass = float(p.get("mass", 1.0))
        if length <= 0 or n < 1 or mass <= 0:
            raise InvalidSpec("particle_in_box requires length > 0, mass > 0, n_levels >= 1")
        modes = np.arange(1, n + 1)
        levels = modes**2 * np.pi**2 / (2.0 * mass * length**2)
    elif spec.kind == "random_hermitian":
        dim, seed = int(p["dim"]), int(p["seed"])
        if dim < 1:
            raise InvalidSpec("random_hermitian requires dim >= 1")
        return HermitianOperator(_random_hermitian_matrix(dim, seed))
    elif spec.kind == "explicit_diagonal":
        levels = np.asarray(p["levels"], dtype=float)
        if levels.size < 1:
            raise InvalidSpec("explicit_diagonal requires at least one level")
    else:  # pragma: no cover - guarded by QuantumModelSpec
        raise InvalidSpec(f"unknown quantum model kind {spec.kind!r}")
    return HermitianOperator(np.diag(levels).astype(complex))


# Catalog instances used by the comparison experiments and the acceptance
# suite; all system dimensions are kept at or below 8.
QUANTUM_CATALOG: tuple[QuantumModelSpec, ...] = (
    two_level(0.0, 1.0),
    truncated_oscillator(1.0, 8),
    particle_in_box(3.0, 8),
    random_hermitian(6, seed=42),
    explicit_diagonal([0.0, 0.3, 1.1, 2.7]),
)


@dataclass(frozen=True)
class ClassicalSystem:
    """Point particle(s) with kinetic energy p^2/2m and a smooth potential."""

    dof: int
    mass: float
    potential: Callable[[np.ndarray], float]
    grad_potential: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def __post_init__(self) -> None:
        if self.dof < 1:
            raise InvalidSpec("dof must be >= 1")
        if self.mass <= 0:
            raise InvalidSpec("mass must be positive")


def hamiltonian_value(sys: ClassicalSystem, q: np.ndarray, p: np.ndarray) -> float:
    """H(p, q) = sum_i p_i^2 / 2m + V(q)."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if q.shape != (sys.dof,) or p.shape != (sys.dof,):
        raise DimensionMismatch(
            f"expected q and p of shape ({sys.dof},), got {q.shape} and {p.shape}"
        )
    return float(np.dot(p, p) / (2.0 * sys.mass) + sys.potential(q))


def harmonic_system(omega: float = 1.0, mass: float = 1.0, dof: int = 1) -> ClassicalSystem:
    if omega <= 0:
        raise InvalidSpec("omega must be positive")
    k = mass * omega**2

    def v(q: np.ndarray) -> float:
        return float(0.5 * k * np.dot(q, q))

    def dv(q: np.ndarray) -> np.ndarray:
        return k * np.asarray(q, dtype=float)

    return ClassicalSystem(dof, mass, v, dv, label=f"harmonic(omega={omega})")


def double_well_system(mass: float = 1.0, height: float = 1.0, half_width: float = 1.0) -> ClassicalSystem:
    """Bistable quartic V(q) = height * (q^2 - half_width^2)^2, one dof."""
    if height <= 0 or half_width <= 0:
        raise InvalidSpec("height and half_width must be positive")

    def v(q: np.ndarray) -> float:
        return float(height * (q[0] ** 2 - half_width**2) ** 2)

    def dv(q: np.ndarray) -> np.ndarray:
        return np.array([4.0 * height * q[0] * (q[0] ** 2 - half_width**2)])

    return ClassicalSystem(1, mass, v, dv, label="double_well")


def morse_system(depth: float = 1.0, width: float = 1.0, center: float = 0.0, mass: float = 1.0) -> ClassicalSystem:
    """Anharmonic bounded well V(q) = depth * (1 - exp(-width (q - center)))^2."""
    if depth <= 0 or width <= 0:
        raise InvalidSpec("depth and width must be positive")

    def v(q: np.ndarray) -> float:
        u = 1.0 - np.exp(-width * (q[0] - center))
        return float(depth * u * u)

    def dv(q: np.ndarray) -> np.ndarray:
        e = np.exp(-width * (q[0] - center))
        return np.array([2.0 * depth * (1.0 - e) * width * e])

    return ClassicalSystem(1, mass, v, dv, label="morse")


def free_particle_system(mass: float = 1.0, dof: int = 1) -> ClassicalSystem:
    def v(q: np.ndarray) -> float:
        return 0.0

    def dv(q: np.ndarray) -> np.ndarray:
        return np.zeros(dof)

    return ClassicalSystem(dof, mass, v, dv, label="free_particle")


CLASSICAL_CATALOG: tuple[ClassicalSystem, ...] = (
    harmonic_system(),
    double_well_system(),
    morse_system(),
)


def check_gradient(sys: ClassicalSystem, points: np.ndarray, *, step: float = 1e-6, rtol: float = 1e-6) -> float:
    """Max relative mismatch between grad_potential and central differences."""
    worst = 0.0
    for q in np.atleast_2d(points):
        q = np.asarray(q, dtype=float)
        g = np.asarray(sys.grad_potential(q), dtype=float)
        fd = np.empty_like(g)
        for i in range(sys.dof):
            dq = np.zeros(sys.dof)
            dq[i] = step
            fd[i] = (sys.potential(q + dq) - sys.potential(q - dq)) / (2.0 * step)
        scale = max(1.0, float(np.max(np.abs(g))))
        worst = max(worst, float(np.max(np.abs(g - fd))) / scale)
    if worst > rtol:
        raise InvalidSpec(
            f"grad_potential disagrees with finite differences: rel err {worst:.3e}"
        )
    return worst
