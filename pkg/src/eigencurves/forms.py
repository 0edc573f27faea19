"""
The validated form triple ``(a, b, m)`` and its coercivity shift.

``a`` and ``m`` must be positive definite; ``b`` carries no sign constraint
and may be degenerate.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NotPositiveDefinite
from .pencil import as_symmetric, cholesky, solve_pencil

RANK_TOL = 1e-10
SHIFT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class FormTriple:
    """Galerkin matrices of the forms a, b, m.

    Construction checks shapes, exact symmetry and positive definiteness of
    ``A`` and ``M``.  Arrays are stored read-only.
    """
    A: np.ndarray
    B: np.ndarray
    M: np.ndarray
    name: str = ""
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        mats = {}
        for key in ("A", "B", "M"):
            a = as_symmetric(getattr(self, key), key)
            a.setflags(write=False)
            mats[key] = a
        shapes = {a.shape for a in mats.values()}
        if len(shapes) != 1:
            raise ValueError(f"A, B, M must have the same order, got {sorted(shapes)}")
        for key, a in mats.items():
            object.__setattr__(self, key, a)
        try:
            cholesky(self.A)
        except NotPositiveDefinite:
            raise NotPositiveDefinite("A is not positive definite (a is not coercive)", which="A") from None
        try:
            object.__setattr__(self, "_M_factor", cholesky(self.M))
        except NotPositiveDefinite:
            raise NotPositiveDefinite("M is not positive definite (m is not an inner product)", which="M") from None

    @property
    def order(self):
        return self.A.shape[0]

    @cached_property
    def scale(self):
        """Tolerance scale ``max(|A|_max, |B|_max, |M|_max, 1)``."""
        return float(max(np.abs(self.A).max(), np.abs(self.B).max(), np.abs(self.M).max(), 1.0))

    def solve(self, S):
        """Solve the pencil ``(S, M)`` reusing the cached factor of ``M``."""
        return solve_pencil(S, self.M, _factor=self._M_factor)

    def pencil_at(self, lam):
        return self.A - lam * self.B

    def quadratic(self, which, u):
        """Quadratic form value ``u^T X u`` for ``which`` in 'a', 'b', 'm'."""
        X = {"a": self.A, "b": self.B, "m": self.M}[which.lower()]
        u = np.asarray(u, dtype=float)
        return float(u @ X @ u)

    def __eq__(self, other):
        if not isinstance(other, FormTriple):
            return NotImplemented
        return all(np.array_equal(getattr(self, k), getattr(other, k)) for k in "ABM")

    __hash__ = None


@dataclass(frozen=True)
class ValidationReport:
    coercivity_lower: float
    coercivity_upper: float
    b_definiteness: str
    b_rank: int
    b_eigenvalues: tuple


@dataclass(frozen=True)
class CoercivityShift:
    r0: float
    tau: float


def classify_b(beta):
    """Sign class and numerical rank of the (B, M) eigenvalues ``beta``."""
    beta = np.asarray(beta)
    top = np.abs(beta).max() if beta.size else 0.0
    if top == 0.0:
        return "zero", 0
    tol = RANK_TOL * top
    pos = int(np.sum(beta > tol))
    neg = int(np.sum(beta < -tol))
    rank = pos + neg
    if pos and neg:
        kind = "indefinite"
    elif rank < beta.size:
        kind = "degenerate-mixed"
    else:
        kind = "positive" if pos else "negative"
    return kind, rank


def validate(A, B, M):
    """Build a FormTriple and report its coercivity constants and b's shape."""
    if isinstance(A, FormTriple):
        triple = A
    else:
        triple = FormTriple(A, B, M)
    kappa = np.linalg.eigvalsh(triple.A)
    beta = triple.solve(triple.B).values
    kind, rank = classify_b(beta)
    report = ValidationReport(
        coercivity_lower=float(kappa[0]),
        coercivity_upper=float(kappa[-1]),
        b_definiteness=kind,
        b_rank=rank,
        b_eigenvalues=tuple(float(x) for x in beta),
    )
    return triple, report


def shift_margin(triple, r0, tau):
    """Smallest eigenvalue of ``(A/2 - lam B + tau M, M)`` over ``lam = +-r0``."""
    return min(triple.solve(0.5 * triple.A - lam * triple.B + tau * triple.M).values[0]
               for lam in (-r0, r0))


def coercivity_shift(triple, r0):
    """Smallest ``tau >= 0`` with ``A - lam B + tau M >= A/2`` for all ``|lam| <= r0``.

    The condition is affine in ``lam`` so only the endpoints are checked.
    ``tau`` is bracketed and bisected to ``1e-8``; the upper end of the final
    bracket is returned so the inequality always holds.
    """
    if not r0 > 0:
        raise ValueError("r0 must be positive")
    base = shift_margin(triple, r0, 0.0)
    if base >= 0.0:
        return CoercivityShift(float(r0), 0.0)
    lo, hi = 0.0, -base + 1.0
    while hi - lo > SHIFT_TOL:
        mid = 0.5 * (lo + hi)
        if shift_margin(triple, r0, mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return CoercivityShift(float(r0), hi)
