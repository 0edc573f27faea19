"""
Generators for form triples: the 3x3 matrix example, finite-difference
Sturm-Liouville, 1-D Robin-Steklov finite elements, the straight-line
synthetic families and random fuzz inputs.
"""

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .errors import InvalidCoefficient
from .forms import FormTriple

Coefficient = Union[float, Callable[[np.ndarray], np.ndarray]]


def _sample(coef, x):
    if callable(coef):
        return np.broadcast_to(np.asarray(coef(x), dtype=float), x.shape).copy()
    return np.full(x.shape, float(coef))


def _sym(X):
    # mirror the upper triangle so the result is exactly symmetric
    U = np.triu(X)
    return U + np.triu(X, 1).T


def paper_matrix_example():
    """The 3x3 triple ``A x = lam B x + mu x``."""
    A = np.array([[2.0, -1.0, 0.0],
                  [-1.0, 2.0, -1.0],
                  [0.0, -1.0, 2.0]])
    B = np.array([[2.0, -1.0, 0.0],
                  [-1.0, 2.0, -1.0],
                  [0.0, -1.0, 0.0]])
    return FormTriple(A, B, np.eye(3), name="paper-matrix",
                      provenance={"generator": "paper-matrix"})


@dataclass
class SturmLiouvilleSpec:
    """``-(p y')' + q y = (lam r + mu) y`` on ``[t0, t1]`` with Dirichlet ends."""
    t0: float = 0.0
    t1: float = np.pi
    p: Coefficient = 1.0
    q: Coefficient = 0.0
    r: Coefficient = 1.0
    n_interior: int = 31


def sturm_liouville(spec, name="sturm-liouville"):
    """Central finite differences on ``n_interior`` interior nodes.

    ``p`` is evaluated at cell midpoints, ``q`` and ``r`` at nodes; the mass
    is ``h I``.
    """
    if not spec.t0 < spec.t1:
        raise ValueError("need t0 < t1")
    n = int(spec.n_interior)
    if n < 2:
        raise ValueError("n_interior must be at least 2")
    h = (spec.t1 - spec.t0) / (n + 1)
    nodes = spec.t0 + h * np.arange(1, n + 1)
    mids = spec.t0 + h * (np.arange(n + 1) + 0.5)
    p = _sample(spec.p, mids)
    if np.any(p <= 0.0) or np.any(_sample(spec.p, nodes) <= 0.0):
        raise InvalidCoefficient("p must be positive on the grid")
    q = _sample(spec.q, nodes)
    r = _sample(spec.r, nodes)
    A = np.diag((p[:-1] + p[1:]) / h + q * h)
    off = -p[1:-1] / h
    A += np.diag(off, 1) + np.diag(off, -1)
    B = np.diag(r * h)
    M = h * np.eye(n)
    prov = {"generator": name, "t0": spec.t0, "t1": spec.t1, "n_interior": n}
    return FormTriple(_sym(A), B, M, name=name, provenance=prov)


def richardson(n_interior=31):
    """Richardson's equation: ``p = 1, q = 0, r = sgn(x)`` on ``[-1, 1]``."""
    spec = SturmLiouvilleSpec(t0=-1.0, t1=1.0, p=1.0, q=0.0, r=np.sign, n_interior=n_interior)
    return sturm_liouville(spec, name="richardson")


@dataclass
class RobinSteklovSpec1D:
    """1-D Robin-Steklov problem on ``[0, length]``.

    ``c0, c1`` are the Robin coefficients at the two ends, ``b00, b01`` the
    boundary weights of the form b, ``m0`` the interior weight of m.
    """
    length: float = 1.0
    c0: float = 1.0
    c1: float = 1.0
    b00: float = 1.0
    b01: float = 0.0
    m0: Coefficient = 1.0
    n_elements: int = 32


_GAUSS = np.array([-1.0, 1.0]) / np.sqrt(3.0)


def robin_steklov_1d(spec):
    """Linear hat-function FEM with all nodes kept and a consistent mass
    matrix (two-point Gauss rule per element)."""
    if spec.c0 < 0 or spec.c1 < 0 or spec.c0 + spec.c1 <= 0:
        raise InvalidCoefficient("need c0, c1 >= 0 and c0 + c1 > 0")
    if not spec.length > 0:
        raise ValueError("length must be positive")
    ne = int(spec.n_elements)
    if ne < 1:
        raise ValueError("n_elements must be at least 1")
    h = spec.length / ne
    n = ne + 1
    left = h * np.arange(ne)
    xg = left[:, None] + 0.5 * h * (1.0 + _GAUSS[None, :])
    w = _sample(spec.m0, xg)
    if np.any(w <= 0.0):
        raise InvalidCoefficient("m0 must be positive at every quadrature point")
    phi0 = 0.5 * (1.0 - _GAUSS)
    phi1 = 0.5 * (1.0 + _GAUSS)
    # element mass entries, weights 1 per Gauss point times jacobian h/2
    m00 = 0.5 * h * (w * phi0**2).sum(axis=1)
    m01 = 0.5 * h * (w * phi0 * phi1).sum(axis=1)
    m11 = 0.5 * h * (w * phi1**2).sum(axis=1)
    A = np.zeros((n, n))
    M = np.zeros((n, n))
    idx = np.arange(ne)
    np.add.at(A, (idx, idx), 1.0 / h)
    np.add.at(A, (idx + 1, idx + 1), 1.0 / h)
    np.add.at(A, (idx, idx + 1), -1.0 / h)
    np.add.at(M, (idx, idx), m00)
    np.add.at(M, (idx + 1, idx + 1), m11)
    np.add.at(M, (idx, idx + 1), m01)
    A[0, 0] += spec.c0
    A[-1, -1] += spec.c1
    B = np.zeros((n, n))
    B[0, 0] = spec.b00
    B[-1, -1] = spec.b01
    prov = {"generator": "robin-steklov-1d", "length": spec.length, "c0": spec.c0,
            "c1": spec.c1, "b00": spec.b00, "b01": spec.b01, "n_elements": ne}
    return FormTriple(_sym(A), B, _sym(M), name="robin-steklov-1d", provenance=prov)


@dataclass
class SyntheticSpec:
    """Diagonal triple with known straight-line spectrum.

    ``perturbation`` is either a scalar ``eps`` (``B = eps M``) or a mapping
    ``{k: eps_k}`` over 1-based indices (``B = sum eps_k e_k e_k^T``).
    """
    base_values: Sequence[float]
    perturbation: Union[float, Mapping[int, float]] = 0.0

    def __post_init__(self):
        base = np.asarray(self.base_values, dtype=float)
        if base.ndim != 1 or base.size == 0 or np.any(base <= 0) or np.any(np.diff(base) < 0):
            raise ValueError("base_values must be positive and ascending")
        if isinstance(self.perturbation, Mapping):
            for k, eps in self.perturbation.items():
                if not 1 <= int(k) <= base.size:
                    raise ValueError(f"index {k} outside 1..{base.size}")
                if eps == 0:
                    raise ValueError("eps_k must be nonzero for k in K")


def synthetic(spec):
    base = np.asarray(spec.base_values, dtype=float)
    n = base.size
    if isinstance(spec.perturbation, Mapping):
        b = np.zeros(n)
        for k, eps in spec.perturbation.items():
            b[int(k) - 1] = float(eps)
        gen = "synthetic-epsk"
        params = {"K": {str(int(k)): float(e) for k, e in sorted(spec.perturbation.items())}}
    else:
        b = np.full(n, float(spec.perturbation))
        gen = "synthetic-eps"
        params = {"eps": float(spec.perturbation)}
    prov = {"generator": gen, "base": [float(x) for x in base], **params}
    return FormTriple(np.diag(base), np.diag(b), np.eye(n), name=gen, provenance=prov)


def two_line_crossing():
    """Lines ``1 + lam`` and ``2 - lam`` crossing at ``(0.5, 1.5)``."""
    return synthetic(SyntheticSpec([1.0, 2.0], {1: -1.0, 2: 1.0}))


B_PROFILES = ("indefinite", "psd", "degenerate")


def random_triple(order, seed, b_profile="indefinite", b_rank=None):
    """Seeded random triple; ``A`` and ``M`` are ``X^T X + I``.

    ``degenerate`` plants a B of rank ``b_rank`` (default ``order - 2``) with
    both signs when the rank allows it.
    """
    n = int(order)
    if not 2 <= n <= 64:
        raise ValueError("order must lie in 2..64")
    if b_profile not in B_PROFILES:
        raise ValueError(f"unknown b_profile {b_profile!r}")
    rng = np.random.default_rng(seed)
    R = rng.standard_normal((n, n)) / np.sqrt(n)
    Q = rng.standard_normal((n, n)) / np.sqrt(n)
    A = R.T @ R + np.eye(n)
    M = Q.T @ Q + np.eye(n)
    if b_profile == "indefinite":
        X = rng.standard_normal((n, n))
        B = 0.5 * (X + X.T)
    elif b_profile == "psd":
        X = rng.standard_normal((n, n)) / np.sqrt(n)
        B = X.T @ X
    else:
        r = n - 2 if b_rank is None else int(b_rank)
        if not 0 <= r <= n:
            raise ValueError("b_rank out of range")
        W = rng.standard_normal((n, r))
        signs = np.where(np.arange(r) % 2 == 0, 1.0, -1.0)
        B = (W * signs) @ W.T
    prov = {"generator": "random", "order": n, "seed": int(seed), "b_profile": b_profile}
    if b_profile == "degenerate":
        prov["b_rank"] = n - 2 if b_rank is None else int(b_rank)
    return FormTriple(_sym(A), _sym(B), _sym(M), name="random", provenance=prov)
