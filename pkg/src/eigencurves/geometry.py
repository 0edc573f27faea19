"""
Components of the superlevel sets ``{mu_n > mu*}`` and the counting bounds
they obey, plus the change of variables that turns a slanted line
``mu = alpha lam + beta`` into a horizontal one.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import analysis
from .curves import slice as spectrum_slice
from .curves import trace
from .errors import GridTooNarrow, LevelTooCloseToSpectrum
from .forms import FormTriple
from .pencil import restricted_pencil

ENDPOINT_TOL = 1e-10
SIGN_TOL = 1e-8
ORACLE_FACTOR = 10


@dataclass(frozen=True)
class Component:
    start: float   # -inf allowed
    stop: float    # +inf allowed
    no_touch: bool = False

    @property
    def bounded(self):
        return math.isfinite(self.start) and math.isfinite(self.stop)

    def contains(self, other, slack=0.0):
        return self.start <= other.start + slack and other.stop <= self.stop + slack


@dataclass(frozen=True)
class CurveComponents:
    n: int
    components: tuple

    @property
    def count(self):
        return sum(1 for c in self.components if not c.no_touch)


@dataclass(frozen=True)
class ComponentReport:
    mu_star: float
    curves: tuple
    partial_sums: np.ndarray
    lo: float = -math.inf
    hi: float = math.inf

    @property
    def counts(self):
        return [c.count for c in self.curves]


@dataclass(frozen=True)
class LineSpec:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("line coefficients must be finite")


@dataclass
class CountingResult:
    ok: bool
    reports: list = field(default_factory=list)
    violation: str = ""
    level: float = math.nan
    curve: int = 0
    worst_sign: float = 0.0


def check_level(triple, mu_star, cluster_tol=None):
    tol = analysis.CLUSTER_TOL * triple.scale if cluster_tol is None else cluster_tol
    base = spectrum_slice(triple, 0.0).mu
    dist = np.abs(base - mu_star).min()
    if dist <= tol:
        raise LevelTooCloseToSpectrum(
            f"level {mu_star!r} is within {dist:.3g} of the (a, m) spectrum", level=mu_star)


def _tail_slopes(triple):
    # per-curve asymptotic slope of mu_n at +inf (eta_n) and of mu_n / |lam| at -inf
    return analysis.asymptotics(triple).eta, analysis.left_slopes(triple)


def _runs(above):
    """Index pairs ``(i, j)`` of maximal runs of True in ``above``."""
    runs = []
    i = 0
    P = len(above)
    while i < P:
        if above[i]:
            j = i
            while j + 1 < P and above[j + 1]:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    return runs


def _classify_tails(triple, n, f_lo, f_hi, eta, beta, mu_star):
    tol = analysis.SLOPE_TOL * triple.scale
    if f_hi > 0 and eta[n] < -tol:
        raise GridTooNarrow(f"curve {n + 1} is above {mu_star} at the right end of the grid "
                            f"but must descend (slope {eta[n]:.4g})", level=mu_star, curve=n + 1)
    if f_hi <= 0 and eta[n] > tol:
        raise GridTooNarrow(f"curve {n + 1} is below {mu_star} at the right end of the grid "
                            f"but must rise (slope {eta[n]:.4g})", level=mu_star, curve=n + 1)
    if f_lo > 0 and beta[n] < -tol:
        raise GridTooNarrow(f"curve {n + 1} is above {mu_star} at the left end of the grid "
                            f"but must descend", level=mu_star, curve=n + 1)
    if f_lo <= 0 and beta[n] > tol:
        raise GridTooNarrow(f"curve {n + 1} is below {mu_star} at the left end of the grid "
                            f"but must rise", level=mu_star, curve=n + 1)


def _assemble(runs, P, lams, left_edge, right_edge):
    comps = []
    for i, j in runs:
        start = -math.inf if i == 0 else left_edge(i)
        stop = math.inf if j == P - 1 else right_edge(j)
        no_touch = math.isinf(start) and math.isinf(stop)
        comps.append(Component(start, stop, no_touch))
    return tuple(comps)


def _bisect(triple, n, mu_star, a, b):
    """Root of ``mu_n(lam) - mu*`` in ``[a, b]`` with the curve below at ``a``
    and above at ``b`` (or the reverse); re-solves a full slice per step."""
    fa = spectrum_slice(triple, a).mu[n] - mu_star
    while b - a > ENDPOINT_TOL:
        c = 0.5 * (a + b)
        if not a < c < b:
            break
        fc = spectrum_slice(triple, c).mu[n] - mu_star
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
    return 0.5 * (a + b)


def _crossing_midpoints(triple, mu_star, lo, hi):
    """Midpoints between consecutive candidate crossings of the level.

    Candidates are the near-real eigenvalues of ``(A - mu* M, B)``; sampling
    one point between each pair guarantees that a component narrower than
    the grid spacing still shows up as a sign run.
    """
    w = scipy.linalg.eigvals(triple.A - mu_star * triple.M, triple.B)
    cand = sorted({float(x.real) for x in w
                   if np.isfinite(x) and abs(x.imag) <= 1e-6 * max(1.0, abs(x))})
    mids = [0.5 * (a + b) for a, b in zip(cand, cand[1:]) if b > a]
    return [x for x in mids if lo < x < hi]


def components(triple, grid, mu_star, cluster_tol=None, table=None):
    """Components of ``{mu_n > mu*}`` for every curve, endpoints by bisection.

    Sign runs are read off the traced grid plus one sample between each pair
    of consecutive level crossings, so narrow components are not skipped.
    Unbounded ends are accepted only when the asymptotic slope at that end
    agrees with the sign seen at the last grid point; otherwise GridTooNarrow
    is raised.  A curve above the level on the whole line is reported as one
    ``no_touch`` pseudo-component that does not count toward ``K_n``.
    """
    mu_star = float(mu_star)
    check_level(triple, mu_star, cluster_tol)
    if table is None:
        table = trace(triple, grid)
    lams = table.lambdas
    mu = table.mu
    extra = [x for x in _crossing_midpoints(triple, mu_star, lams[0], lams[-1])
             if x not in set(lams.tolist())]
    if extra:
        lams = np.concatenate([lams, extra])
        mu = np.vstack([mu, [spectrum_slice(triple, x).mu for x in extra]])
        order = np.argsort(lams, kind="stable")
        lams, mu = lams[order], mu[order]
    F = mu - mu_star
    eta, beta = _tail_slopes(triple)
    P, N = F.shape
    curves = []
    for n in range(N):
        f = F[:, n]
        _classify_tails(triple, n, f[0], f[-1], eta, beta, mu_star)
        above = f > 0
        comps = _assemble(
            _runs(above), P, lams,
            lambda i: _bisect(triple, n, mu_star, float(lams[i - 1]), float(lams[i])),
            lambda j: _bisect(triple, n, mu_star, float(lams[j]), float(lams[j + 1])),
        )
        curves.append(CurveComponents(n + 1, comps))
    counts = np.array([c.count for c in curves])
    return ComponentReport(mu_star, tuple(curves), np.cumsum(counts),
                           float(grid.lo), float(grid.hi))


def dense_scan(triple, grid, factor=ORACLE_FACTOR):
    """Curve values on the base grid subdivided ``factor`` times."""
    return np.array([spectrum_slice(triple, x).mu for x in grid.dense(factor)])


def scan_counts(triple, grid, mu_star, factor=ORACLE_FACTOR, dense=None):
    """Brute-force ``K_n`` from sign runs on a ``factor``-times finer grid.

    No refinement and no bisection; serves as an independent check of
    ``components``.  ``dense`` may carry a precomputed ``dense_scan``.
    """
    mu_star = float(mu_star)
    if dense is None:
        dense = dense_scan(triple, grid, factor)
    F = dense - mu_star
    eta, beta = _tail_slopes(triple)
    counts = []
    for n in range(F.shape[1]):
        f = F[:, n]
        _classify_tails(triple, n, f[0], f[-1], eta, beta, mu_star)
        runs = _runs(f > 0)
        k = sum(1 for i, j in runs if not (i == 0 and j == len(f) - 1))
        counts.append(k)
    return counts


def _endpoint_sign(triple, lam, n, mu_star, side):
    """Signed violation of the endpoint condition at a component end.

    ``side`` is 'left' (need some eigenvector with b(e,e) <= 0) or 'right'
    (need b(e,e) >= 0).  Vectors are M-normalized; returns the amount by
    which the best vector misses, 0 or negative when satisfied.
    """
    sl = spectrum_slice(triple, lam)
    tol = analysis.CLUSTER_TOL * triple.scale
    idx = np.flatnonzero(np.abs(sl.mu - sl.mu[n]) <= tol)
    bvals = restricted_pencil(triple.B, triple.M, sl.vectors[:, idx]).values
    if side == "left":
        return float(bvals[0])
    return float(-bvals[-1])


def report_violations(triple, report):
    """First violated invariant of a ComponentReport as ``(message, curve, sign)``,
    or ``None``.  ``sign`` is the worst endpoint-sign value seen."""
    tol = SIGN_TOL * triple.scale
    worst = -math.inf
    slack = 10 * ENDPOINT_TOL
    counts = report.counts
    if counts and counts[0] > 1:
        return "K_1 > 1", 1, worst
    for c in report.curves:
        if c.count > c.n:
            return f"K_{c.n} = {c.count} > {c.n}", c.n, worst
        comps = c.components
        for a, b in zip(comps, comps[1:]):
            if not a.stop < b.start:
                return f"components of curve {c.n} overlap or are unsorted", c.n, worst
    for i, s in enumerate(report.partial_sums, start=1):
        if s > i:
            return f"S_{i} = {s} > {i}", i, worst
    # nesting: a component of a lower curve lies inside one of every higher curve
    # that has a component; finite components are nested or disjoint
    all_comps = [(c.n, x) for c in report.curves for x in c.components if not x.no_touch]
    for n1, c1 in all_comps:
        for n2, c2 in all_comps:
            if n2 <= n1:
                continue
            disjoint = c1.stop <= c2.start + slack or c2.stop <= c1.start + slack
            if not (disjoint or c2.contains(c1, slack) or c1.contains(c2, slack)):
                return f"components of curves {n1} and {n2} cross", n2, worst
        for c in report.curves:
            if c.n > n1 and c.count > 0 and not any(
                    x.contains(c1, slack) for x in c.components if not x.no_touch):
                return f"component of curve {n1} not nested in curve {c.n}", c.n, worst
    for c in report.curves:
        for comp in c.components:
            if comp.no_touch:
                continue
            if math.isfinite(comp.start):
                v = _endpoint_sign(triple, comp.start, c.n - 1, report.mu_star, "left")
                worst = max(worst, v)
                if v > tol:
                    return f"b(e, e) = {v:.3g} > 0 at left end {comp.start} of curve {c.n}", c.n, worst
            if math.isfinite(comp.stop):
                v = _endpoint_sign(triple, comp.stop, c.n - 1, report.mu_star, "right")
                worst = max(worst, v)
                if v > tol:
                    return f"b(e, e) = {-v:.3g} < 0 at right end {comp.stop} of curve {c.n}", c.n, worst
    return None


def verify_counting(triple, grid, levels, oracle=True):
    """Run ``components`` at every level and check all counting invariants,
    optionally against the brute-force scan.  Stops at the first violation."""
    result = CountingResult(ok=True)
    for level in levels:
        check_level(triple, level)
    table = trace(triple, grid)
    dense = dense_scan(triple, grid) if oracle else None
    for level in levels:
        report = components(triple, grid, level, table=table)
        result.reports.append(report)
        found = report_violations(triple, report)
        if found is not None:
            msg, curve, worst = found
            result.ok, result.violation, result.level, result.curve = False, msg, level, curve
            result.worst_sign = max(result.worst_sign, worst)
            return result
        if oracle:
            expected = scan_counts(triple, grid, level, dense=dense)
            if expected != report.counts:
                bad = next(i for i, (a, b) in enumerate(zip(expected, report.counts)) if a != b)
                result.ok = False
                result.violation = (f"counts {report.counts} disagree with the dense scan "
                                    f"{expected}")
                result.level, result.curve = level, bad + 1
                return result
    return result


def transform_line(triple, line):
    """Triple ``(A, B + alpha M, M)``: its curves are ``mu_n(lam) - alpha lam``,
    so the line ``mu = alpha lam + beta`` becomes the level ``beta``."""
    alpha = float(line.alpha) if isinstance(line, LineSpec) else float(line)
    if alpha == 0.0:
        return triple
    Bt = triple.B + alpha * triple.M
    Bt = np.triu(Bt) + np.triu(Bt, 1).T
    prov = dict(triple.provenance, transform_alpha=alpha)
    return FormTriple(triple.A, Bt, triple.M, name=triple.name, provenance=prov)
