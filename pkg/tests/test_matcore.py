"""Matrix-core primitives: flat adjoint, doubling, kernels, Schur reordering."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qlsr import (DEFAULT, ShapeError, SubspaceBasis, delta, flat, intersect,
                  jmat, kernel_basis, numerical_rank, projector_distance,
                  schur_lower)

cdim = st.integers(min_value=1, max_value=4)


def cmats(rows, cols):
    re = arrays(np.float64, (rows, cols),
                elements=st.floats(-5, 5, allow_nan=False))
    return st.tuples(re, re).map(lambda p: p[0] + 1j * p[1])


def test_jmat_square_is_identity():
    for p in range(1, 5):
        J = jmat(p)
        assert np.array_equal(J @ J, np.eye(2 * p))
        assert np.array_equal(J, J.conj().T)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_flat_is_involutive_and_antimultiplicative(j, k, data):
    X = data.draw(cmats(2 * j, 2 * k))
    Y = data.draw(cmats(2 * k, 2 * j))
    assert np.allclose(flat(flat(X)), X)
    assert np.allclose(flat(X @ Y), flat(Y) @ flat(X))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_delta_block_structure(m, n, data):
    U = data.draw(cmats(m, n))
    V = data.draw(cmats(m, n))
    D = delta(U, V)
    assert D.shape == (2 * m, 2 * n)
    assert np.array_equal(D[:m, :n], U)
    assert np.array_equal(D[:m, n:], V)
    assert np.array_equal(D[m:, :n], V.conj())
    assert np.array_equal(D[m:, n:], U.conj())


def test_flat_rejects_odd_shapes():
    with pytest.raises(ShapeError):
        flat(np.zeros((3, 4)))


def test_numerical_rank_known_cases(rng):
    A = rng.normal(size=(6, 4))
    assert numerical_rank(A, DEFAULT) == 4
    A[:, 3] = A[:, 0] + A[:, 1]
    assert numerical_rank(A, DEFAULT) == 3
    assert numerical_rank(np.zeros((5, 5)), DEFAULT) == 0


def test_kernel_basis_annihilates_and_is_orthonormal(rng):
    for _ in range(20):
        m, n, r = 5, 7, 3
        A = (rng.normal(size=(m, r)) + 1j * rng.normal(size=(m, r))) @ \
            (rng.normal(size=(r, n)) + 1j * rng.normal(size=(r, n)))
        K = kernel_basis(A, DEFAULT)
        assert K.dim == n - r
        assert np.linalg.norm(A @ K.basis) < 1e-10 * np.linalg.norm(A)
        assert K.orthonormality_defect() < 1e-12


def test_kernel_of_zero_matrix_is_everything():
    K = kernel_basis(np.zeros((3, 4)), DEFAULT)
    assert K.dim == 4


def test_intersect_of_coordinate_subspaces():
    e = np.eye(5, dtype=complex)
    B1 = SubspaceBasis(5, e[:, :3])
    B2 = SubspaceBasis(5, e[:, 2:])
    I = intersect(B1, B2, DEFAULT)
    assert I.dim == 1
    assert abs(abs(I.basis[2, 0]) - 1.0) < 1e-12


def test_projector_distance_detects_equality_and_gap(rng):
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    B1 = SubspaceBasis(6, q[:, :3])
    # same span, different basis
    mix, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    B2 = SubspaceBasis(6, q[:, :3] @ mix)
    assert projector_distance(B1, B2) < 1e-12
    B3 = SubspaceBasis(6, q[:, 3:])
    assert projector_distance(B1, B3) > 0.9


def test_schur_lower_reconstructs_and_orders(rng):
    for _ in range(20):
        n = int(rng.integers(2, 8))
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        U, T = schur_lower(A)
        assert np.linalg.norm(U @ U.conj().T - np.eye(n)) < 1e-12
        assert np.linalg.norm(np.triu(T, 1)) < 1e-10 * np.linalg.norm(A)
        assert np.linalg.norm(U.conj().T @ T @ U - A) < 1e-10 * np.linalg.norm(A)
        assert np.allclose(np.sort(np.linalg.eigvals(A)),
                           np.sort(np.diag(T)), atol=1e-8)
