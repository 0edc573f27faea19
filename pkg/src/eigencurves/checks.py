"""
Invariant families run by ``verify``.

Each family takes a triple and a seeded generator and returns a
FamilyResult: pass/fail, the worst observed value of its residual (already
divided by the tolerance scale where one applies) and how many individual
checks went into it.  All randomness is drawn from the generator, so a run
is reproducible from its seed.
"""

import zlib
from dataclasses import dataclass

import numpy as np

from . import analysis, curves, fixtures, forms, geometry
from .curves import LambdaGrid
from .curves import slice as spectrum_slice
from .errors import EigencurveError

ASYMPTOTIC_PROBES = (1e5, 2e5)
ASYMPTOTIC_TOL = 1e-3
FD_STEPS = (1e-4, 1e-5)
TRANSFORM_ALPHAS = (-2.0, -0.5, 1.0, 3.0)
COERCIVITY_R0 = 10.0


@dataclass
class FamilyResult:
    ok: bool
    worst: float = 0.0
    checked: int = 0
    note: str = ""


def _default_grid():
    return LambdaGrid.uniform()


class Context:
    """Per-triple cache shared by the families of one run."""

    def __init__(self, triple):
        self.triple = triple
        self._table = None

    @property
    def table(self):
        if self._table is None:
            self._table = curves.trace(self.triple, _default_grid())
        return self._table


def _table(triple, ctx):
    return ctx.table if ctx is not None else curves.trace(triple, _default_grid())


def check_eigensolver(triple, rng, ctx=None):
    worst, ok, count = 0.0, True, 0
    for lam in np.concatenate([[0.0], rng.uniform(-10, 10, 6)]):
        S = triple.pencil_at(lam)
        dec = triple.solve(S)
        V = dec.vectors
        ortho = np.abs(V.T @ triple.M @ V - np.eye(triple.order)).max()
        smax, mmax = np.abs(S).max(), np.abs(triple.M).max()
        for j, mu in enumerate(dec.values):
            v = V[:, j]
            res = np.linalg.norm(S @ v - mu * (triple.M @ v))
            rel = res / ((smax + abs(mu) * mmax) * np.linalg.norm(v))
            worst = max(worst, rel)
            ok &= rel <= 1e-9
            count += 1
        ok &= bool(ortho <= 1e-10) and bool(np.all(np.diff(dec.values) >= 0))
        worst = max(worst, ortho)
    return FamilyResult(bool(ok), float(worst), count)


def check_forms(triple, rng, ctx=None):
    _, report = forms.validate(triple, None, None)
    worst = 0.0
    for _ in range(100):
        u = rng.standard_normal(triple.order)
        q = triple.quadratic("a", u) / (u @ u)
        worst = max(worst, report.coercivity_lower - q, q - report.coercivity_upper)
    worst = max(worst, 0.0) / triple.scale
    ok = worst <= 1e-12 and 0 < report.coercivity_lower <= report.coercivity_upper
    return FamilyResult(bool(ok), float(worst), 100)


def check_coercivity(triple, rng, ctx=None):
    shift = forms.coercivity_shift(triple, COERCIVITY_R0)
    margin = forms.shift_margin(triple, shift.r0, shift.tau)
    ok = margin >= -1e-10
    if shift.tau > 0:
        ok &= forms.shift_margin(triple, shift.r0, shift.tau - 1e-6) < 0
    return FamilyResult(bool(ok), float(max(0.0, -margin)), 2 if shift.tau > 0 else 1)


def concavity_defect(lams, mu1):
    """Largest second difference of ``mu1`` on a possibly non-uniform grid.

    Measured as twice the excess of the chord over the curve, which equals
    the ordinary second difference on a uniform grid.
    """
    lams, mu1 = np.asarray(lams), np.asarray(mu1)
    if lams.size < 3:
        return 0.0
    w = (lams[2:] - lams[1:-1]) / (lams[2:] - lams[:-2])
    chord = w * mu1[:-2] + (1 - w) * mu1[2:]
    return float((2.0 * (chord - mu1[1:-1])).max())


def lipschitz_excess(table):
    """Largest ``|d mu_n| / |d lam| - L`` over all traced increments."""
    lams = table.lambdas
    slopes = np.abs(np.diff(table.mu, axis=0)) / np.diff(lams)[:, None]
    return float((slopes - table.lipschitz_bound).max())


def check_concavity(triple, rng, ctx=None):
    table = _table(triple, ctx)
    worst = concavity_defect(table.lambdas, table.mu[:, 0]) / triple.scale
    return FamilyResult(worst <= 1e-8, max(worst, 0.0), len(table.slices))


def check_lipschitz(triple, rng, ctx=None):
    table = _table(triple, ctx)
    worst = lipschitz_excess(table) / triple.scale
    return FamilyResult(worst <= 1e-8, max(worst, 0.0), len(table.slices) - 1)


def eigenpair_pairs(triple, rng, count):
    """Random eigenpair pairs: same lam, distinct lam, and same mu on a level."""
    pairs = []
    n = triple.order
    for i in range(count):
        kind = i % 3
        if kind == 0:
            lam = rng.uniform(-10, 10)
            sl = spectrum_slice(triple, lam)
            j, k = rng.integers(n), rng.integers(n)
            pairs.append(((lam, sl.mu[j], sl.vectors[:, j]), (lam, sl.mu[k], sl.vectors[:, k])))
        elif kind == 1:
            l1, l2 = rng.uniform(-10, 10, 2)
            s1, s2 = spectrum_slice(triple, l1), spectrum_slice(triple, l2)
            j, k = rng.integers(n), rng.integers(n)
            pairs.append(((l1, s1.mu[j], s1.vectors[:, j]), (l2, s2.mu[k], s2.vectors[:, k])))
        else:
            level = float(rng.uniform(*_spectrum_window(triple)))
            hits = analysis.level_crossings(triple, level)
            if len(hits) >= 2:
                a, b = rng.choice(len(hits), 2, replace=False)
                (l1, _, e1), (l2, _, e2) = hits[a], hits[b]
                pairs.append(((l1, level, e1), (l2, level, e2)))
    return pairs


def _spectrum_window(triple):
    mu0 = spectrum_slice(triple, 0.0).mu
    pad = 0.5 * (mu0[-1] - mu0[0]) + 1.0
    return mu0[0] - pad, mu0[-1] + pad


def check_orthogonality(triple, rng, ctx=None, count=30):
    worst = 0.0
    pairs = eigenpair_pairs(triple, rng, count)
    for p1, p2 in pairs:
        worst = max(worst, analysis.orthogonality_residual(triple, p1, p2))
    return FamilyResult(worst <= 1e-9, worst, len(pairs))


def finite_difference_errors(triple, lam, mu, h):
    """Errors of one-sided difference quotients at the eigenpoint against the
    predicted one-sided derivatives, one entry per curve through the point."""
    info = analysis.eigenpoint(triple, lam, mu)
    n0 = info.first_curve - 1
    k0 = info.multiplicity
    right = spectrum_slice(triple, lam + h).mu[n0:n0 + k0]
    left = spectrum_slice(triple, lam - h).mu[n0:n0 + k0]
    err_r = np.abs((right - mu) / h - info.right_derivatives)
    err_l = np.abs((mu - left) / h - info.left_derivatives)
    return np.maximum(err_r, err_l)


def _derivative_points(triple, rng, ctx=None):
    """Sample eigenpoints whose cluster is isolated well beyond the
    difference steps, plus any multiple points met on the default trace."""
    tol = analysis.CLUSTER_TOL * triple.scale
    L = curves.lipschitz_bound(triple)
    lams = list(rng.uniform(-5, 5, 4))
    table = _table(triple, ctx)
    multi = [s.lam for s in table.slices if s.mu.size > 1 and np.diff(s.mu).min() <= tol]
    lams += multi[:4]
    points = []
    for lam in lams:
        sl = spectrum_slice(triple, lam)
        groups = analysis._clusters(sl.mu, tol)
        for g, members in enumerate(groups):
            lo = sl.mu[members[0]] - sl.mu[groups[g - 1][-1]] if g > 0 else np.inf
            hi = sl.mu[groups[g + 1][0]] - sl.mu[members[-1]] if g + 1 < len(groups) else np.inf
            if min(lo, hi) > 100 * L * FD_STEPS[0] + tol:
                points.append((float(lam), float(sl.mu[members[0]])))
    return points


def check_derivatives(triple, rng, ctx=None):
    worst, ok, count = 0.0, True, 0
    floor = 1e-6 * triple.scale
    for lam, mu in _derivative_points(triple, rng, ctx):
        coarse = finite_difference_errors(triple, lam, mu, FD_STEPS[0]).max()
        fine = finite_difference_errors(triple, lam, mu, FD_STEPS[1]).max()
        # first-order convergence: a decade in h buys roughly a decade in error
        ok &= fine <= max(0.2 * coarse, floor)
        worst = max(worst, fine / triple.scale)
        count += 1
    return FamilyResult(bool(ok), float(worst), count)


def asymptotic_errors(triple, big):
    eta = analysis.asymptotics(triple).eta
    return np.abs(spectrum_slice(triple, big).mu / big - eta)


def check_asymptotics(triple, rng, ctx=None):
    e1 = asymptotic_errors(triple, ASYMPTOTIC_PROBES[0])
    e2 = asymptotic_errors(triple, ASYMPTOTIC_PROBES[1])
    ok = bool(np.all(e1 <= ASYMPTOTIC_TOL)) and bool(np.all(e2 < e1))
    note = ""
    if not ok:
        note = f"max error {e1.max():.3g} at {ASYMPTOTIC_PROBES[0]:g}"
    # descending tails: eta_k < 0 forces mu_k below its value at 0
    report = analysis.asymptotics(triple)
    far = spectrum_slice(triple, ASYMPTOTIC_PROBES[0]).mu
    near = spectrum_slice(triple, 0.0).mu
    down = report.eta < -analysis.SLOPE_TOL * triple.scale
    ok &= bool(np.all(far[down] < near[down]))
    return FamilyResult(ok, float(e1.max()), 2 * triple.order, note)


def check_lines(triple, rng, ctx=None):
    report = analysis.detect_lines(triple)
    worst = 0.0
    for line in report.horizontal_lines:
        w = line.witness
        r1 = np.linalg.norm(triple.B @ w)
        r2 = np.linalg.norm(triple.A @ w - line.mu_star * (triple.M @ w))
        worst = max(worst, r1, r2)
    worst /= triple.scale
    return FamilyResult(worst <= 1e-8, float(worst), len(report.horizontal_lines))


def check_independence(triple, rng, ctx=None):
    dependent, count = 0, 0
    for level in fixtures.default_levels(triple):
        hits = analysis.level_crossings(triple, level)
        seen, points = set(), []
        for lam, _, e in hits:
            if lam not in seen:
                seen.add(lam)
                points.append((lam, e))
        if len(points) < 2:
            continue
        verdict = analysis.independence_check(triple, level, points)
        if verdict == "dependent":
            dependent += 1
        count += 1
    return FamilyResult(dependent == 0, float(dependent), count)


def check_counting(triple, rng, ctx=None):
    levels = fixtures.default_levels(triple)
    grid = fixtures.covering_grid(triple, levels)
    result = geometry.verify_counting(triple, grid, levels)
    worst = max([0.0, result.worst_sign] + [
        _worst_sign(triple, r) for r in result.reports]) / triple.scale
    note = "" if result.ok else f"{result.violation} (level {result.level:.6g}, curve {result.curve})"
    return FamilyResult(result.ok, float(worst), len(levels), note)


def _worst_sign(triple, report):
    found = geometry.report_violations(triple, report)
    if found is not None:
        return max(found[2], 0.0)
    worst = 0.0
    for c in report.curves:
        for comp in c.components:
            if comp.no_touch:
                continue
            if np.isfinite(comp.start):
                worst = max(worst, geometry._endpoint_sign(triple, comp.start, c.n - 1,
                                                           report.mu_star, "left"))
            if np.isfinite(comp.stop):
                worst = max(worst, geometry._endpoint_sign(triple, comp.stop, c.n - 1,
                                                           report.mu_star, "right"))
    return worst


def transform_error(triple, alpha, table):
    """Largest deviation of the transformed triple's curves from
    ``mu_n(lam) - alpha lam`` at the points of ``table``."""
    moved = geometry.transform_line(triple, alpha)
    got = np.array([spectrum_slice(moved, s.lam).mu for s in table.slices])
    expected = table.mu - alpha * table.lambdas[:, None]
    return float(np.abs(got - expected).max())


def check_transform(triple, rng, ctx=None):
    table = curves.trace(triple, _default_grid(), refine=False) if ctx is None else ctx.table
    worst = max(transform_error(triple, a, table) for a in TRANSFORM_ALPHAS) / triple.scale
    return FamilyResult(worst <= 1e-9, worst, len(TRANSFORM_ALPHAS))


FAMILIES = {
    "eigensolver": check_eigensolver,
    "forms": check_forms,
    "coercivity": check_coercivity,
    "concavity": check_concavity,
    "lipschitz": check_lipschitz,
    "orthogonality": check_orthogonality,
    "derivatives": check_derivatives,
    "asymptotics": check_asymptotics,
    "lines": check_lines,
    "independence": check_independence,
    "counting": check_counting,
    "transform": check_transform,
}


def _seed_for(name, seed):
    return zlib.crc32(f"{name}:{seed}".encode())


def run_family(name, triple, seed=0, ctx=None):
    rng = np.random.default_rng(_seed_for(f"{triple.name}/{name}", seed))
    try:
        return FAMILIES[name](triple, rng, ctx)
    except EigencurveError as exc:
        return FamilyResult(False, float("nan"), 0, f"{type(exc).__name__}: {exc}")


def run_suite(triples, seed=0):
    """Run every family over ``triples`` (a mapping ``label -> FormTriple``).

    Returns ``{family: (ok, worst, checked, failures)}`` where ``failures``
    lists ``(label, note)`` for each failing triple.
    """
    summary = {}
    contexts = {label: Context(t) for label, t in triples.items()}
    for name in FAMILIES:
        ok, worst, checked, failures = True, 0.0, 0, []
        for label, triple in triples.items():
            r = run_family(name, triple, seed, contexts[label])
            checked += r.checked
            if np.isfinite(r.worst):
                worst = max(worst, r.worst)
            if not r.ok:
                ok = False
                failures.append((label, r.note))
        summary[name] = (ok, worst, checked, failures)
    return summary


def format_summary(summary):
    lines = []
    for name, (ok, worst, checked, failures) in summary.items():
        line = f"{name:<14} {'PASS' if ok else 'FAIL'}  worst={worst:.3e}  checks={checked}"
        if failures:
            line += "  failing: " + "; ".join(
                f"{label}" + (f" ({note})" if note else "") for label, note in failures)
        lines.append(line)
    return "\n".join(lines) + "\n"
