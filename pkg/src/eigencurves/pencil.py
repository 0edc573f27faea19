"""
Dense symmetric-definite generalized eigensolver.

Every spectral quantity in the package is computed here: the pencil
``S v = mu M v`` is reduced to standard form through the Cholesky factor of
``M`` and diagonalized with cyclic Jacobi rotations.
"""

from typing import NamedTuple

import numba
import numpy as np
from scipy.linalg import solve_triangular

from .errors import AsymmetricInput, DependentBasis, NoConvergence, NotPositiveDefinite

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 64
PIVOT_TOL = 1e-14


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues and M-orthonormal eigenvectors (columns)."""
    values: np.ndarray
    vectors: np.ndarray


def as_symmetric(x, name="matrix"):
    """Return ``x`` as a float array after checking it is square, finite and
    exactly symmetric."""
    a = np.array(x, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    if not np.array_equal(a, a.T):
        raise AsymmetricInput(f"{name} is not symmetric")
    return a


@numba.njit(cache=True, nogil=True)
def _cholesky_kernel(a, tol):
    n = a.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        d = a[j, j]
        for k in range(j):
            d -= L[j, k] * L[j, k]
        if d <= tol:
            return L, j
        L[j, j] = np.sqrt(d)
        for i in range(j + 1, n):
            s = a[i, j]
            for k in range(j):
                s -= L[i, k] * L[j, k]
            L[i, j] = s / L[j, j]
    return L, -1


@numba.njit(cache=True, nogil=True)
def _jacobi_kernel(a, tol, max_sweeps):
    # cyclic row-by-row Jacobi on a symmetric array, overwritten in place;
    # only rows p, q are rotated and mirrored, eigenvectors kept as rows of vt
    n = a.shape[0]
    vt = np.eye(n)
    fro = np.sqrt(np.sum(a * a))
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        if np.sqrt(off) <= tol * fro:
            return np.diag(a).copy(), vt.T.copy(), sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(1.0 + theta * theta))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    apk = a[p, k]
                    aqk = a[q, k]
                    x = c * apk - s * aqk
                    y = s * apk + c * aqk
                    a[p, k] = x
                    a[k, p] = x
                    a[q, k] = y
                    a[k, q] = y
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vp = vt[p, k]
                    vq = vt[q, k]
                    vt[p, k] = c * vp - s * vq
                    vt[q, k] = s * vp + c * vq
    return np.diag(a).copy(), vt.T.copy(), -1


def cholesky(M):
    """Lower-triangular ``L`` with ``L @ L.T == M``.

    Raises NotPositiveDefinite when a pivot falls below
    ``n * 1e-14 * max|M_ij|``.
    """
    M = as_symmetric(M, "M")
    n = M.shape[0]
    tol = n * PIVOT_TOL * np.max(np.abs(M))
    L, failed = _cholesky_kernel(M, tol)
    if failed >= 0:
        raise NotPositiveDefinite(f"matrix is not positive definite (pivot {failed})")
    return L


def _jacobi(S):
    values, vectors, sweeps = _jacobi_kernel(S.copy(), JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


def solve_pencil(S, M, _factor=None):
    """All eigenpairs of ``S v = mu M v`` with ascending values and
    M-orthonormal eigenvectors."""
    S = as_symmetric(S, "S")
    L = cholesky(M) if _factor is None else _factor
    if S.shape != L.shape:
        raise ValueError(f"order mismatch: S is {S.shape}, M is {L.shape}")
    X = solve_triangular(L, S, lower=True)
    Shat = solve_triangular(L, X.T, lower=True)
    Shat = 0.5 * (Shat + Shat.T)
    values, W = _jacobi(Shat)
    vectors = solve_triangular(L, W, lower=True, trans="T")
    return EigenDecomposition(values, vectors)


def restricted_pencil(S, M, basis):
    """Eigendecomposition of the pencil compressed to ``span(basis)``.

    ``basis`` is a sequence of n-vectors (or an n-by-k array of columns).
    Returned vectors live in the full space and are M-orthonormal.
    """
    S = as_symmetric(S, "S")
    M = as_symmetric(M, "M")
    Z = np.array(basis, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    elif not isinstance(basis, np.ndarray):
        Z = Z.T
    if Z.shape[0] != S.shape[0]:
        raise ValueError("basis vectors have the wrong length")
    Sr = Z.T @ S @ Z
    Mr = Z.T @ M @ Z
    Sr = 0.5 * (Sr + Sr.T)
    Mr = 0.5 * (Mr + Mr.T)
    try:
        L = cholesky(Mr)
    except NotPositiveDefinite:
        raise DependentBasis("restricted Gram matrix is not positive definite") from None
    values, C = solve_pencil(Sr, Mr, _factor=L)
    return EigenDecomposition(values, Z @ C)
