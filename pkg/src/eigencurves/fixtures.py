"""Built-in fixture set used by ``verify --suite builtin`` and the test suite."""

import numpy as np

from . import problems
from .analysis import level_crossings
from .curves import LambdaGrid
from .curves import slice as spectrum_slice

# fraction of the gap between consecutive (a, m) eigenvalues; avoids exact midpoints,
# where constructed examples tend to have tangential crossings
LEVEL_FRACTION = 0.37


def builtin_fixtures():
    """Ordered mapping ``name -> FormTriple``."""
    return {
        "paper-matrix": problems.paper_matrix_example(),
        "synthetic-eps": problems.synthetic(problems.SyntheticSpec([1.0, 2.0, 3.0], 1.0)),
        "synthetic-eps0": problems.synthetic(problems.SyntheticSpec([1.0, 2.0, 3.0], 0.0)),
        "synthetic-epsk": problems.synthetic(problems.SyntheticSpec([1.0, 2.0, 3.0], {1: 1.0})),
        "two-line": problems.two_line_crossing(),
        "richardson": problems.richardson(31),
        "robin-steklov-1d": problems.robin_steklov_1d(
            problems.RobinSteklovSpec1D(b00=1.0, b01=-1.0, n_elements=32)),
    }


def random_fixtures(count=20, max_order=6, seed=0, profile="degenerate"):
    """``count`` seeded random triples of order ``2..max_order``."""
    rng = np.random.default_rng(seed)
    out = {}
    for i in range(count):
        n = int(rng.integers(2, max_order + 1))
        kind = profile if profile != "mixed" else ("indefinite", "psd", "degenerate")[i % 3]
        rank = int(rng.integers(0, n)) if kind == "degenerate" else None
        out[f"random-{i}"] = problems.random_triple(n, int(rng.integers(2**31)), kind, b_rank=rank)
    return out


def default_levels(triple, count=5):
    """``count`` levels avoiding the (a, m) spectrum: one below it, the rest
    inside gaps spread over the spectrum, the last one above it."""
    mu0 = spectrum_slice(triple, 0.0).mu
    distinct = [mu0[0]]
    for x in mu0[1:]:
        if x - distinct[-1] > 1e-6 * triple.scale:
            distinct.append(x)
    distinct = np.array(distinct)
    levels = [distinct[0] - abs(distinct[0]) * (1 - LEVEL_FRACTION) - LEVEL_FRACTION]
    levels.append(distinct[-1] + LEVEL_FRACTION * max(1.0, abs(distinct[-1]) * 0.1))
    gaps = len(distinct) - 1
    if gaps > 0:
        picks = np.unique(np.linspace(0, gaps - 1, max(1, count - 2)).round().astype(int))
        for i in picks:
            levels.append(distinct[i] + LEVEL_FRACTION * (distinct[i + 1] - distinct[i]))
    # below-spectrum levels far down add variety for curves that descend
    while len(levels) < count:
        levels.append(levels[0] - (len(levels) - 1) * (abs(levels[0]) + 1.0))
    return sorted(float(x) for x in levels)


def covering_grid(triple, levels, points=401, minimum=10.0):
    """Symmetric grid ``[-R, R]`` containing every crossing of every level
    with some curve, with a 25 percent margin."""
    reach = minimum
    for level in levels:
        for lam, _, _ in level_crossings(triple, level):
            reach = max(reach, 1.25 * abs(lam) + 1.0)
    reach = float(np.ceil(reach))
    return LambdaGrid.uniform(-reach, reach, points)
