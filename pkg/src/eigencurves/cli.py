"""
Command-line interface: ``gen``, ``trace``, ``analyze``, ``geometry``, ``verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 solver failure, 4 not an eigenpoint, 5 level too close to the (a, m)
spectrum, 6 grid too narrow.  Output files are written atomically and only
when the command succeeds.
"""

import argparse
import sys

import numpy as np

from . import analysis, checks, curves, fixtures, formats, geometry, problems
from .curves import LambdaGrid
from .errors import (DependentBasis, GridTooNarrow, InvalidCoefficient,
                     LevelTooCloseToSpectrum, NoConvergence, NotAnEigenpoint,
                     NotPositiveDefinite)

EXIT_VERIFY, EXIT_USAGE, EXIT_SOLVER, EXIT_EIGENPOINT, EXIT_LEVEL, EXIT_GRID = 1, 2, 3, 4, 5, 6

GENERATORS = ("paper-matrix", "sturm-liouville", "richardson", "robin-steklov-1d",
              "synthetic-eps", "synthetic-epsk", "random")


class UsageError(Exception):
    pass


def floats(values):
    """Flatten ``['1,2', '3']`` into ``[1.0, 2.0, 3.0]``."""
    out = []
    for chunk in values:
        for item in str(chunk).split(","):
            item = item.strip()
            if item:
                try:
                    out.append(float(item))
                except ValueError:
                    raise UsageError(f"not a number: {item!r}") from None
    return out


def parse_eps_k(text):
    """``'1:0.5,3:-2'`` -> ``{1: 0.5, 3: -2.0}``."""
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        try:
            k, eps = item.split(":")
            out[int(k)] = float(eps)
        except ValueError:
            raise UsageError(f"--eps-k entries look like k:eps, got {item!r}") from None
    if not out:
        raise UsageError("--eps-k needs at least one k:eps entry")
    return out


def emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        formats.write_atomic(path, text)


# -- gen -------------------------------------------------------------------

def build_problem(args):
    g = args.generator
    if g == "paper-matrix":
        return problems.paper_matrix_example()
    if g == "sturm-liouville":
        spec = problems.SturmLiouvilleSpec(t0=args.t0, t1=args.t1, p=args.p, q=args.q,
                                           r=args.r, n_interior=args.n_interior)
        return problems.sturm_liouville(spec)
    if g == "richardson":
        return problems.richardson(args.n_interior)
    if g == "robin-steklov-1d":
        spec = problems.RobinSteklovSpec1D(length=args.length, c0=args.c0, c1=args.c1,
                                           b00=args.b00, b01=args.b01, m0=args.m0,
                                           n_elements=args.n_elements)
        return problems.robin_steklov_1d(spec)
    if g == "synthetic-eps":
        return problems.synthetic(problems.SyntheticSpec(floats([args.base]), args.eps))
    if g == "synthetic-epsk":
        if args.eps_k is None:
            raise UsageError("synthetic-epsk needs --eps-k")
        return problems.synthetic(problems.SyntheticSpec(floats([args.base]),
                                                         parse_eps_k(args.eps_k)))
    if args.order is None:
        raise UsageError("random needs --order")
    return problems.random_triple(args.order, args.seed, args.b_profile, args.b_rank)


def cmd_gen(args):
    try:
        triple = build_problem(args)
    except ValueError as exc:
        # bad generator parameters, including ones that break definiteness
        raise UsageError(str(exc)) from None
    emit(formats.problem_to_json(triple), args.out)
    return 0


# -- trace -----------------------------------------------------------------

def make_grid(args):
    return LambdaGrid.uniform(args.lo, args.hi, args.points)


def cmd_trace(args):
    triple = formats.read_problem(args.problem)
    grid = make_grid(args)
    table = curves.trace(triple, grid, refine=not args.no_refine, workers=args.workers)
    csv_text = formats.trace_to_csv(table)
    svg_text = formats.trace_to_svg(table, title=triple.name) if args.out_svg else None
    emit(csv_text, args.out_csv)
    if svg_text is not None:
        formats.write_atomic(args.out_svg, svg_text)
    return 0


# -- analyze ---------------------------------------------------------------

def eigenpoint_doc(info):
    return {
        "lambda_star": info.lambda_star,
        "mu_star": info.mu_star,
        "multiplicity": info.multiplicity,
        "first_curve": info.first_curve,
        "eigenspace_basis": info.eigenspace_basis.T,
        "b_values": info.b_values,
        "left_derivatives": info.left_derivatives,
        "right_derivatives": info.right_derivatives,
        "cluster_tol": info.cluster_tol,
    }


def cmd_analyze(args):
    triple = formats.read_problem(args.problem)
    if args.what == "derivatives":
        if args.point is None:
            raise UsageError("derivatives needs --point LAMBDA,MU")
        point = floats(args.point)
        if len(point) != 2:
            raise UsageError("--point takes exactly two numbers")
        doc = eigenpoint_doc(analysis.eigenpoint(triple, *point, cluster_tol=args.cluster_tol))
    elif args.what == "asymptotics":
        doc = analysis.asymptotics(triple)
    else:
        doc = analysis.detect_lines(triple, cluster_tol=args.cluster_tol)
    emit(formats.dumps(doc), args.out)
    return 0


# -- geometry --------------------------------------------------------------

def component_doc(report):
    return {
        "mu_star": report.mu_star,
        "curves": [{
            "n": c.n,
            "count": c.count,
            "components": [{"start": x.start, "stop": x.stop, "no_touch": x.no_touch}
                           for x in c.components],
        } for c in report.curves],
        "counts": report.counts,
        "partial_sums": report.partial_sums,
        "lo": report.lo,
        "hi": report.hi,
    }


def cmd_geometry(args):
    triple = formats.read_problem(args.problem)
    levels = floats(args.levels)
    if not levels:
        raise UsageError("--levels needs at least one value")
    if args.alpha:
        triple = geometry.transform_line(triple, args.alpha)
    for level in levels:
        geometry.check_level(triple, level, args.cluster_tol)
    grid = make_grid(args)
    table = curves.trace(triple, grid)
    reports = [component_doc(geometry.components(triple, grid, level, args.cluster_tol, table))
               for level in levels]
    emit(formats.dumps(reports), args.out)
    return 0


# -- verify ----------------------------------------------------------------

def cmd_verify(args):
    triples = {}
    if args.problem:
        triple = formats.read_problem(args.problem)
        triples[triple.name or args.problem] = triple
    if args.suite == "builtin":
        triples.update(fixtures.builtin_fixtures())
    if args.fuzz:
        for i in range(args.fuzz):
            seed = args.seed + i
            rng = np.random.default_rng(seed)
            order = int(rng.integers(2, 7))
            profile = problems.B_PROFILES[i % len(problems.B_PROFILES)]
            triples[f"fuzz-{seed}"] = problems.random_triple(order, seed, profile)
    if not triples:
        raise UsageError("verify needs a problem file, --suite builtin or --fuzz N")
    summary = checks.run_suite(triples, seed=args.seed)
    sys.stdout.write(checks.format_summary(summary))
    return 0 if all(v[0] for v in summary.values()) else EXIT_VERIFY


# -- parser ----------------------------------------------------------------

def grid_flags(p):
    p.add_argument("--lo", type=float, default=curves.DEFAULT_LO)
    p.add_argument("--hi", type=float, default=curves.DEFAULT_HI)
    p.add_argument("--points", type=int, default=curves.DEFAULT_POINTS)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="eigencurves",
        description="Eigencurves of the two-parameter problem A x = lam B x + mu M x.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a problem file from a generator")
    p.add_argument("generator", choices=GENERATORS)
    p.add_argument("--out", "-o", help="output path (default: standard output)")
    p.add_argument("--base", default="1,2,3", help="comma-separated base values")
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--eps-k", help="sparse perturbation as k:eps pairs, e.g. 1:1.0,3:-0.5")
    p.add_argument("--order", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--b-profile", choices=problems.B_PROFILES, default="indefinite")
    p.add_argument("--b-rank", type=int)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=float(np.pi))
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=0.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--n-interior", type=int, default=31)
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--c0", type=float, default=1.0)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--b00", type=float, default=1.0)
    p.add_argument("--b01", type=float, default=0.0)
    p.add_argument("--m0", type=float, default=1.0)
    p.add_argument("--n-elements", type=int, default=32)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("trace", help="sample the eigencurves on a grid")
    p.add_argument("problem")
    grid_flags(p)
    p.add_argument("--out-csv", help="CSV path (default: standard output)")
    p.add_argument("--out-svg", help="optional SVG plot path")
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("analyze", help="eigenpoint, asymptotic or straight-line analysis")
    p.add_argument("problem")
    p.add_argument("what", choices=("derivatives", "asymptotics", "lines"))
    p.add_argument("--point", nargs="+", help="lambda,mu of the eigenpoint")
    p.add_argument("--cluster-tol", type=float, default=None)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("geometry", help="components of the superlevel sets")
    p.add_argument("problem")
    p.add_argument("--levels", nargs="+", required=True)
    p.add_argument("--alpha", type=float, default=0.0,
                   help="slope of a slanted line mu = alpha lam + level")
    grid_flags(p)
    p.add_argument("--cluster-tol", type=float, default=None)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("verify", help="run every invariant family")
    p.add_argument("problem", nargs="?")
    p.add_argument("--suite", choices=("builtin",))
    p.add_argument("--fuzz", type=int, default=0, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def fail(code, message):
    sys.stderr.write(f"eigencurves: {message}\n")
    return code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotAnEigenpoint as exc:
        return fail(EXIT_EIGENPOINT, exc)
    except LevelTooCloseToSpectrum as exc:
        return fail(EXIT_LEVEL, f"level {exc.level!r} rejected: {exc}")
    except GridTooNarrow as exc:
        return fail(EXIT_GRID, exc)
    except (NoConvergence, DependentBasis) as exc:
        return fail(EXIT_SOLVER, exc)
    except formats.ProblemFileError as exc:
        return fail(EXIT_USAGE, exc)
    except NotPositiveDefinite as exc:
        # inside a command this is a solver failure; on input it is caught above
        return fail(EXIT_SOLVER, exc)
    except (UsageError, InvalidCoefficient, ValueError) as exc:
        return fail(EXIT_USAGE, exc)
    except OSError as exc:
        return fail(EXIT_USAGE, exc)


if __name__ == "__main__":
    sys.exit(main())
