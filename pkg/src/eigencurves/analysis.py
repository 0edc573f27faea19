"""
Pointwise and asymptotic spectral analysis of a form triple.

Covers eigenspace clustering at an eigenpoint, one-sided derivatives of the
curves through it, orthogonality residuals between eigenpairs, asymptotic
slopes, horizontal lines produced by the null space of b, and linear
independence of eigenvectors sharing a level.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .curves import slice as spectrum_slice
from .errors import DependentBasis, NotAnEigenpoint
from .pencil import restricted_pencil

CLUSTER_TOL = 1e-7
RESIDUAL_TOL = 1e-8
NULL_TOL = 1e-10
SLOPE_TOL = 1e-10


@dataclass(frozen=True)
class EigenpointAnalysis:
    lambda_star: float
    mu_star: float
    multiplicity: int
    first_curve: int            # 1-based index n0 + 1 of the lowest curve through the point
    eigenspace_basis: np.ndarray  # columns, M-orthonormal
    b_values: np.ndarray
    left_derivatives: np.ndarray
    right_derivatives: np.ndarray
    cluster_tol: float


@dataclass(frozen=True)
class AsymptoticReport:
    eta: np.ndarray
    num_down_plus: int


@dataclass(frozen=True)
class HorizontalLine:
    mu_star: float
    witness: np.ndarray


@dataclass(frozen=True)
class LineReport:
    horizontal_lines: tuple
    b_nullity: int


def eigen_residual(triple, lam, mu, e):
    """``||(A - lam B) e - mu M e|| / ||e||``."""
    e = np.asarray(e, dtype=float)
    r = triple.pencil_at(lam) @ e - mu * (triple.M @ e)
    return float(np.linalg.norm(r) / np.linalg.norm(e))


def _check_eigenpair(triple, lam, mu, e):
    res = eigen_residual(triple, lam, mu, e)
    if not res <= RESIDUAL_TOL * triple.scale:
        raise NotAnEigenpoint(f"({lam}, {mu}) with the given vector has residual {res:.3g}")


def eigenpoint(triple, lambda_star, mu_star, cluster_tol=None):
    """Analyse the eigenpoint ``(lambda_star, mu_star)``.

    Eigenvalues of the slice within ``cluster_tol`` (default ``1e-7 * scale``)
    of ``mu_star`` span the eigenspace.  ``-B`` is diagonalized against ``M``
    on it; curve ``n0 + k`` then has right derivative ``b_k`` and left
    derivative ``b_{k0-k+1}``.
    """
    tol = CLUSTER_TOL * triple.scale if cluster_tol is None else float(cluster_tol)
    sl = spectrum_slice(triple, lambda_star)
    idx = np.flatnonzero(np.abs(sl.mu - mu_star) <= tol)
    if idx.size == 0:
        nearest = sl.mu[np.argmin(np.abs(sl.mu - mu_star))]
        raise NotAnEigenpoint(
            f"no eigenvalue within {tol:.3g} of {mu_star} at lambda={lambda_star} "
            f"(nearest {float(nearest)!r})")
    basis = sl.vectors[:, idx]
    values, vectors = restricted_pencil(-triple.B, triple.M, basis)
    return EigenpointAnalysis(
        lambda_star=float(lambda_star),
        mu_star=float(mu_star),
        multiplicity=int(idx.size),
        first_curve=int(idx[0]) + 1,
        eigenspace_basis=vectors,
        b_values=values,
        left_derivatives=values[::-1].copy(),
        right_derivatives=values.copy(),
        cluster_tol=tol,
    )


def orthogonality_residual(triple, point1, point2):
    """Normalized ``|(l2 - l1) b(e1, e2) + (m2 - m1) m(e1, e2)|``.

    Each point is a tuple ``(lam, mu, e)``; both must be eigenpairs.
    """
    l1, m1, e1 = point1
    l2, m2, e2 = point2
    e1 = np.asarray(e1, dtype=float)
    e2 = np.asarray(e2, dtype=float)
    _check_eigenpair(triple, l1, m1, e1)
    _check_eigenpair(triple, l2, m2, e2)
    val = (l2 - l1) * (e1 @ triple.B @ e2) + (m2 - m1) * (e1 @ triple.M @ e2)
    return float(abs(val) / (triple.scale * np.linalg.norm(e1) * np.linalg.norm(e2)))


def asymptotics(triple):
    """Asymptotic slopes ``eta_k = lim mu_k(lam) / lam`` as ``lam -> +inf``.

    In finite dimension these are the ascending eigenvalues of ``(-B, M)``.
    """
    eta = triple.solve(-triple.B).values
    down = int(np.sum(eta < -SLOPE_TOL * triple.scale))
    return AsymptoticReport(eta, down)


def left_slopes(triple):
    """Slopes of ``mu_n(lam) / |lam|`` as ``lam -> -inf``: ascending eigenvalues of ``(B, M)``."""
    return triple.solve(triple.B).values


def _clusters(values, tol):
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def detect_lines(triple, cluster_tol=None):
    """Horizontal straight lines ``mu = mu*`` contained in the spectrum.

    For each (a, m)-eigenspace ``E0`` the intersection with the null space
    of ``B`` is the null space of ``B Z0`` (``Z0`` an orthonormal basis of
    ``E0``).
    """
    tol = CLUSTER_TOL * triple.scale if cluster_tol is None else float(cluster_tol)
    beta = triple.solve(triple.B).values
    top = np.abs(beta).max()
    nullity = int(np.sum(np.abs(beta) <= NULL_TOL * top)) if top > 0 else triple.order
    bmax = np.abs(triple.B).max()
    null_tol = NULL_TOL * bmax
    base = spectrum_slice(triple, 0.0)
    lines = []
    for group in _clusters(base.mu, tol):
        Z0, _ = np.linalg.qr(base.vectors[:, group])
        _, sv, vt = np.linalg.svd(triple.B @ Z0)
        sv = np.concatenate([sv, np.zeros(len(group) - sv.size)])
        null = vt[sv <= null_tol]
        if null.shape[0] == 0:
            continue
        W = Z0 @ null.T
        # M-orthonormalize the witnesses
        L = np.linalg.cholesky(W.T @ triple.M @ W)
        W = scipy.linalg.solve_triangular(L, W.T, lower=True).T
        for j in range(W.shape[1]):
            w = W[:, j]
            mu = float(w @ triple.A @ w)
            lines.append(HorizontalLine(mu, w))
    return LineReport(tuple(lines), nullity)


def independence_check(triple, mu_star, points, cluster_tol=None):
    """Classify eigenvectors ``e_i`` of eigenpoints ``(lam_i, mu_star)``.

    Returns ``'excluded'`` when ``mu_star`` lies in the (a, m) spectrum (the
    independence statement does not apply there), otherwise
    ``'independent'`` or ``'dependent'`` from a Cholesky test of the M-Gram
    matrix of the normalized vectors.
    """
    tol = CLUSTER_TOL * triple.scale if cluster_tol is None else float(cluster_tol)
    lams = [float(p[0]) for p in points]
    if len(set(lams)) != len(lams):
        raise ValueError("eigenpoints must have distinct lambda values")
    base = spectrum_slice(triple, 0.0).mu
    if np.any(np.abs(base - mu_star) <= tol):
        return "excluded"
    vecs = []
    for lam, e in points:
        e = np.asarray(e, dtype=float)
        _check_eigenpair(triple, lam, mu_star, e)
        vecs.append(e / np.sqrt(e @ triple.M @ e))
    try:
        restricted_pencil(triple.M, triple.M, vecs)
    except DependentBasis:
        return "dependent"
    return "independent"


def level_crossings(triple, mu_star, newton_steps=4):
    """All points where some curve meets the level ``mu_star``.

    The crossings are the real eigenvalues ``lam`` of ``(A - mu* M) v = lam B v``;
    each is polished by Newton steps on ``mu_n(lam) - mu*``.  Returns a list of
    ``(lam, n, e)`` with 1-based curve index ``n``.
    """
    S = triple.A - mu_star * triple.M
    w = scipy.linalg.eigvals(S, triple.B)
    scale = triple.scale
    lams = sorted({float(x.real) for x in w
                   if np.isfinite(x) and abs(x.imag) <= 1e-9 * max(1.0, abs(x))})
    out = []
    for lam in lams:
        for _ in range(newton_steps):
            sl = spectrum_slice(triple, lam)
            n = int(np.argmin(np.abs(sl.mu - mu_star)))
            e = sl.vectors[:, n]
            slope = -(e @ triple.B @ e)
            if abs(slope) < 1e-12 * scale:
                break
            lam = lam - (sl.mu[n] - mu_star) / slope
        sl = spectrum_slice(triple, lam)
        n = int(np.argmin(np.abs(sl.mu - mu_star)))
        if abs(sl.mu[n] - mu_star) <= RESIDUAL_TOL * scale:
            out.append((lam, n + 1, sl.vectors[:, n]))
    return out
