"""Dense complex Hermitian linear algebra.

Everything downstream (thermal kernels, broadened deltas, unitary clock
shifts) is produced by applying scalar functions to one spectral
decomposition, so this module is the single numerical kernel of the
package.  All operator functions go through ``eig_hermitian``; there is no
separate scaling-and-squaring path for exponentials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionOverflow, NonHermitianInput

HERMITICITY_TOL = 1e-12
DENSE_DIM_CAP = 16384


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class HermitianOperator:
    """A dense Hermitian matrix on a finite Hilbert space (hbar = 1)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NonHermitianInput(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise NonHermitianInput("dimension must be at least 1")
        deviation = np.max(np.abs(m - m.conj().T))
        if deviation > HERMITICITY_TOL:
            raise NonHermitianInput(
                f"matrix is not Hermitian: max |H - H^dag| = {deviation:.3e}"
            )
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and a unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "eigenvalues", _frozen(np.asarray(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "eigenvectors", _frozen(np.asarray(self.eigenvectors, dtype=complex)))


def eig_hermitian(h: HermitianOperator) -> SpectralDecomposition:
    """Full spectral decomposition of a Hermitian operator.

    Eigenvalues come back sorted ascending; the eigenvector basis inside a
    degenerate block is solver-dependent and not contractual, since every
    consumer only ever applies functions of the eigenvalues.
    """
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(h.entries)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise ConvergenceFailure(f"eigensolver did not converge: {exc}") from exc
    return SpectralDecomposition(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def operator_function(h: HermitianOperator, f) -> np.ndarray:
    """Apply a scalar map to an operator through its spectral decomposition.

    Returns ``U diag(f(lambda_n)) U^dag``.  Real-valued ``f`` yields a
    Hermitian result up to roundoff; ``f = exp(i a .)`` yields a unitary.
    """
    dec = eig_hermitian(h)
    values = np.asarray([f(lam) for lam in dec.eigenvalues], dtype=complex)
    u = dec.eigenvectors
    return (u * values) @ u.conj().T


def tensor_product(a: np.ndarray, b: np.ndarray, *, cap: int = DENSE_DIM_CAP) -> np.ndarray:
    """Kronecker product with the first factor as the slow (outer) index.

    ``(A tensor B)[i*n + k, j*n + l] = A[i, j] * B[k, l]``.  The dimension of
    the product is checked against ``cap`` before any allocation happens.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    product_dim = a.shape[0] * b.shape[0]
    if product_dim > cap:
        raise DimensionOverflow(
            f"tensor product dimension {product_dim} exceeds the dense cap {cap}"
        )
    return np.kron(a, b)
