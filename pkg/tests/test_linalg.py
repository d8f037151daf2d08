"""Tests for the dense Hermitian linear algebra kernel."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clockens.errors import DimensionOverflow, NonHermitianInput
from clockens.linalg import (
    HermitianOperator,
    eig_hermitian,
    operator_function,
    tensor_product,
)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator((m + m.conj().T) / 2.0)


def expm_series(a, terms=30):
    """Power-series oracle for the matrix exponential."""
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms + 1):
        term = term @ a / k
        out = out + term
    return out


class TestEig:
    def test_diagonal_input_sorted(self):
        dec = eig_hermitian(HermitianOperator(np.diag([3.0, 1.0, 2.0])))
        assert np.allclose(dec.eigenvalues, [1.0, 2.0, 3.0], atol=1e-14)
        # permutation eigenvectors: one unit entry per column
        assert np.allclose(np.abs(dec.eigenvectors), np.eye(3)[:, [1, 2, 0]], atol=1e-12)

    def test_one_by_one(self):
        dec = eig_hermitian(HermitianOperator(np.array([[5.0]])))
        assert dec.eigenvalues[0] == pytest.approx(5.0, abs=1e-15)
        assert abs(abs(dec.eigenvectors[0, 0]) - 1.0) < 1e-15

    def test_reconstruction_fixed_seed(self):
        h = random_hermitian(6, seed=123)
        dec = eig_hermitian(h)
        u, lam = dec.eigenvectors, dec.eigenvalues
        rebuilt = (u * lam) @ u.conj().T
        rel = np.linalg.norm(rebuilt - h.entries) / np.linalg.norm(h.entries)
        assert rel < 1e-10
        assert np.max(np.abs(u.conj().T @ u - np.eye(6))) < 1e-10
        assert np.all(np.diff(lam) >= 0)

    def test_non_hermitian_rejected(self):
        with pytest.raises(NonHermitianInput):
            HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_non_square_rejected(self):
        with pytest.raises(NonHermitianInput):
            HermitianOperator(np.zeros((2, 3)))


class TestOperatorFunction:
    def test_identity_map(self):
        h = HermitianOperator(np.diag([1.0, 2.0]))
        assert np.allclose(operator_function(h, lambda x: x), np.diag([1.0, 2.0]), atol=1e-14)

    def test_beta_zero_gives_identity(self):
        h = random_hermitian(5, seed=5)
        out = operator_function(h, lambda x: np.exp(-0.0 * x))
        assert np.max(np.abs(out - np.eye(5))) < 1e-12

    def test_unitary_exponential_vs_power_series(self):
        h = random_hermitian(4, seed=77)
        alpha = 0.7
        g = operator_function(h, lambda x: np.exp(1j * alpha * x))
        assert np.max(np.abs(g.conj().T @ g - np.eye(4))) < 1e-10
        oracle = expm_series(1j * alpha * h.entries, terms=30)
        assert np.max(np.abs(g - oracle)) < 1e-8

    def test_real_function_gives_hermitian(self):
        h = random_hermitian(5, seed=9)
        out = operator_function(h, lambda x: np.exp(-0.3 * x))
        assert np.max(np.abs(out - out.conj().T)) < 1e-10

    def test_thermal_trace_matches_eigenvalue_sum(self):
        h = random_hermitian(6, seed=11)
        beta = 1.3
        lam = np.linalg.eigvalsh(h.entries)
        oracle = np.sum(np.exp(-beta * lam))
        out = np.real(np.trace(operator_function(h, lambda x: np.exp(-beta * x))))
        assert out == pytest.approx(oracle, rel=1e-10)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000), st.floats(min_value=0.05, max_value=3.0))
    def test_exp_spectrum_property(self, seed, beta):
        h = random_hermitian(4, seed=seed)
        out = operator_function(h, lambda x: np.exp(-beta * x))
        got = np.sort(np.linalg.eigvalsh(0.5 * (out + out.conj().T)))
        want = np.sort(np.exp(-beta * np.linalg.eigvalsh(h.entries)))
        assert np.max(np.abs(got - want)) < 1e-10 * max(1.0, np.max(want))


class TestTensorProduct:
    def test_identity_factor(self):
        b = np.arange(9.0).reshape(3, 3) + 1j
        assert np.array_equal(tensor_product(np.eye(1), b), b.astype(complex))

    def test_diagonal_example(self):
        out = tensor_product(np.diag([1.0, 2.0]), np.diag([1.0, 1.0]))
        assert np.allclose(out, np.diag([1.0, 1.0, 2.0, 2.0]), atol=0)

    def test_trace_factorizes(self):
        rng = np.random.default_rng(314)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.trace(tensor_product(a, b)) == pytest.approx(np.trace(a) * np.trace(b), rel=1e-12)

    def test_index_convention_slow_first(self):
        a = np.array([[0.0, 1.0], [2.0, 3.0]])
        b = np.array([[4.0, 5.0], [6.0, 7.0]])
        out = tensor_product(a, b)
        n = 2
        for i, j, k, l in [(0, 1, 0, 1), (1, 0, 1, 1), (1, 1, 0, 0)]:
            assert out[i * n + k, j * n + l] == a[i, j] * b[k, l]

    def test_associative_on_diagonals(self):
        a, b, c = np.diag([1.0, 2.0]), np.diag([3.0, 4.0]), np.diag([5.0, 6.0])
        left = tensor_product(tensor_product(a, b), c)
        right = tensor_product(a, tensor_product(b, c))
        assert np.array_equal(left, right)

    def test_dimension_cap(self):
        with pytest.raises(DimensionOverflow):
            tensor_product(np.eye(8), np.eye(8), cap=63)
