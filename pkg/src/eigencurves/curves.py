"""
Variational eigencurves ``lam -> mu_n(lam)``.

A curve is identified by its sorted index: ``mu_n(lam)`` is the n-th
smallest eigenvalue of the pencil ``(A - lam B, M)``.  No branch matching is
attempted across crossings.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

REFINE_TOL = 1e-6
REFINE_DEPTH = 20
DEFAULT_LO, DEFAULT_HI, DEFAULT_POINTS = -10.0, 10.0, 401


@dataclass(frozen=True)
class LambdaGrid:
    lo: float
    hi: float
    base_points: int
    refined_points: np.ndarray

    @classmethod
    def uniform(cls, lo=DEFAULT_LO, hi=DEFAULT_HI, points=DEFAULT_POINTS):
        lo, hi, points = float(lo), float(hi), int(points)
        if not lo < hi:
            raise ValueError("need lo < hi")
        if points < 2:
            raise ValueError("a grid needs at least 2 points")
        return cls(lo, hi, points, np.linspace(lo, hi, points))

    @property
    def base(self):
        return np.linspace(self.lo, self.hi, self.base_points)

    def dense(self, factor):
        """The base grid subdivided ``factor`` times."""
        return np.linspace(self.lo, self.hi, factor * (self.base_points - 1) + 1)


@dataclass(frozen=True)
class SpectrumSlice:
    lam: float
    mu: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class EigencurveTable:
    grid: LambdaGrid
    slices: tuple
    lipschitz_bound: float

    @property
    def lambdas(self):
        return self.grid.refined_points

    @property
    def mu(self):
        """Array of shape ``(points, n)``; column ``n-1`` is curve ``mu_n``."""
        return np.array([s.mu for s in self.slices])


def slice(triple, lam):
    """Full ascending spectrum of ``(A - lam B, M)`` at one ``lam``."""
    lam = float(lam)
    values, vectors = triple.solve(triple.pencil_at(lam))
    return SpectrumSlice(lam, values, vectors)


def slices(triple, lams, workers=None):
    """Slices at every ``lam``, optionally evaluated on a thread pool.

    Results do not depend on ``workers``.
    """
    lams = [float(x) for x in lams]
    if workers and workers > 1 and len(lams) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda x: slice(triple, x), lams))
    return [slice(triple, x) for x in lams]


def lipschitz_bound(triple):
    """Global slope bound ``max |eig(B, M)|`` valid for every curve."""
    beta = triple.solve(triple.B).values
    return float(max(abs(beta[0]), abs(beta[-1])))


def _flag_intervals(lams, mu, tol):
    P, n = mu.shape
    flags = np.zeros(P - 1, dtype=bool)
    if n > 1:
        small = np.diff(mu, axis=1).min(axis=1) < tol
        flags |= small[:-1] | small[1:]
    if P >= 4:
        slopes = np.diff(mu, axis=0) / np.diff(lams)[:, None]
        jumps = np.diff(slopes, axis=0)          # slope change at nodes 1..P-2
        irregular = np.abs(np.diff(jumps, axis=0)).max(axis=1) > tol   # between nodes k+1, k+2
        flags[1:-1] |= irregular
    return flags


def _kink_strength(mu_a, mu_c, mu_b, a, c, b):
    left = (mu_c - mu_a) / (c - a)
    right = (mu_b - mu_c) / (b - c)
    return left, right, np.abs(right - left)


def _refine_interval(triple, a, b, sa, sb, slope_in, slope_out, tol):
    """Bisect toward a slope discontinuity inside ``[a, b]``.

    ``slope_in``/``slope_out`` are the per-curve slopes of the neighbouring
    intervals (or ``None`` at the grid ends).  Returns the new slices.
    """
    out = []
    prev = None
    for _ in range(REFINE_DEPTH):
        c = 0.5 * (a + b)
        if not a < c < b:
            break
        sc = slice(triple, c)
        out.append(sc)
        left, right, kink = _kink_strength(sa.mu, sc.mu, sb.mu, a, c, b)
        strength = kink.max()
        if strength <= tol or (prev is not None and strength < 0.6 * prev):
            break
        prev = strength
        # the smooth half keeps the slope of its outer neighbour
        dev_left = np.abs(left - slope_in).max() if slope_in is not None else np.inf
        dev_right = np.abs(right - slope_out).max() if slope_out is not None else np.inf
        if dev_right <= dev_left:
            b, sb, slope_out = c, sc, right
        else:
            a, sa, slope_in = c, sc, left
    return out


def trace(triple, grid, refine=True, workers=None):
    """Sample every eigencurve on ``grid`` and refine near suspected crossings.

    The returned table carries a grid whose ``refined_points`` hold every
    ``lam`` actually evaluated, sorted.
    """
    base = grid.base
    scale = triple.scale
    found = {float(s.lam): s for s in slices(triple, base, workers)}
    if refine:
        mu = np.array([found[float(x)].mu for x in base])
        flags = _flag_intervals(base, mu, REFINE_TOL * scale)
        slopes = np.diff(mu, axis=0) / np.diff(base)[:, None]
        for i in np.flatnonzero(flags):
            a, b = float(base[i]), float(base[i + 1])
            s_in = slopes[i - 1] if i > 0 else None
            s_out = slopes[i + 1] if i + 1 < len(slopes) else None
            for s in _refine_interval(triple, a, b, found[a], found[b], s_in, s_out,
                                      REFINE_TOL * scale):
                found.setdefault(float(s.lam), s)
    points = np.array(sorted(found))
    new_grid = LambdaGrid(grid.lo, grid.hi, grid.base_points, points)
    return EigencurveTable(new_grid, tuple(found[float(x)] for x in points),
                           lipschitz_bound(triple))
