import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from eigencurves import pencil
from eigencurves.errors import AsymmetricInput, DependentBasis, NotPositiveDefinite


def random_pencil(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n))
    S = X + X.T
    Q = rng.standard_normal((n, n))
    M = Q.T @ Q + np.eye(n)
    return np.triu(S) + np.triu(S, 1).T, np.triu(M) + np.triu(M, 1).T


def test_cholesky_identity():
    assert np.array_equal(pencil.cholesky(np.eye(3)), np.eye(3))


def test_cholesky_small():
    L = pencil.cholesky([[4.0, 2.0], [2.0, 5.0]])
    assert np.allclose(L, [[2.0, 0.0], [1.0, 2.0]], atol=1e-15)
    assert np.allclose(L @ L.T, [[4.0, 2.0], [2.0, 5.0]], atol=1e-12 * 5)


def test_cholesky_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        pencil.cholesky([[1.0, 2.0], [2.0, 1.0]])


def test_asymmetric_input_rejected():
    with pytest.raises(AsymmetricInput):
        pencil.solve_pencil([[1.0, 2.0], [2.000001, 1.0]], np.eye(2))


def test_identity_pencil():
    values, vectors = pencil.solve_pencil(np.eye(3), np.eye(3))
    assert np.array_equal(values, [1.0, 1.0, 1.0])
    assert np.array_equal(vectors, np.eye(3))


def test_laplacian_closed_form():
    A = np.diag([2.0] * 3) + np.diag([-1.0] * 2, 1) + np.diag([-1.0] * 2, -1)
    values, _ = pencil.solve_pencil(A, np.eye(3))
    assert np.allclose(values, oracles.tridiagonal_laplacian_eigenvalues(3), atol=1e-13)
    assert np.allclose(values, [2 - np.sqrt(2), 2, 2 + np.sqrt(2)], atol=1e-13)


def test_tridiag_b_against_cubic():
    B = np.array([[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 0.0]])
    values, _ = pencil.solve_pencil(B, np.eye(3))
    assert np.allclose(values, oracles.tridiag_b_eigenvalues(), atol=1e-12)
    assert np.allclose(values, [-0.481, 1.311, 3.170], atol=1e-3)


@pytest.mark.parametrize("n", [2, 3, 5, 8, 12])
def test_round_trip_and_orthonormality(n):
    S, M = random_pencil(n, n)
    values, V = pencil.solve_pencil(S, M)
    scale = max(np.abs(S).max(), np.abs(M).max(), 1.0)
    assert np.all(np.diff(values) >= 0)
    assert np.abs(V.T @ M @ V - np.eye(n)).max() <= 1e-10
    rebuilt = M @ V @ np.diag(values) @ V.T @ M
    assert np.abs(rebuilt - S).max() <= 1e-8 * scale


def test_deterministic():
    S, M = random_pencil(7, 3)
    a = pencil.solve_pencil(S, M)
    b = pencil.solve_pencil(S.copy(), M.copy())
    assert np.array_equal(a.values, b.values) and np.array_equal(a.vectors, b.vectors)


@pytest.mark.parametrize("c", [-3.0, 0.5, 10.0])
def test_shift_consistency(c):
    S, M = random_pencil(6, 11)
    scale = max(np.abs(S).max(), np.abs(M).max(), 1.0)
    shifted = pencil.solve_pencil(S + c * M, M).values
    assert np.abs(shifted - (pencil.solve_pencil(S, M).values + c)).max() <= 1e-10 * scale


def test_restricted_full_basis_matches():
    S, M = random_pencil(4, 5)
    full = pencil.solve_pencil(S, M)
    restricted = pencil.restricted_pencil(S, M, list(np.eye(4)))
    assert np.allclose(full.values, restricted.values, atol=1e-12)


def test_restricted_diagonal():
    values, vectors = pencil.restricted_pencil(np.diag([5.0, 7.0, 9.0]), np.eye(3),
                                               [np.eye(3)[0], np.eye(3)[2]])
    assert np.allclose(values, [5.0, 9.0])
    assert np.allclose(np.abs(vectors), np.eye(3)[:, [0, 2]])


def test_restricted_dependent_basis():
    e = np.array([1.0, 0.0, 0.0])
    with pytest.raises(DependentBasis):
        pencil.restricted_pencil(np.eye(3), np.eye(3), [e, 2 * e])


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 4), seed=st.integers(0, 10**6))
def test_determinant_oracle(n, seed):
    S, M = random_pencil(n, seed)
    ref = oracles.pencil_eigenvalues_by_determinant(S, M)
    assert np.abs(pencil.solve_pencil(S, M).values - ref).max() <= 1e-8


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 10**6))
def test_residuals(n, seed):
    S, M = random_pencil(n, seed)
    values, V = pencil.solve_pencil(S, M)
    smax, mmax = np.abs(S).max(), np.abs(M).max()
    for j in range(n):
        v = V[:, j]
        res = np.linalg.norm(S @ v - values[j] * (M @ v))
        assert res <= 1e-9 * (smax + abs(values[j]) * mmax) * np.linalg.norm(v)
