"""
Flat-file formats: problem JSON, trace CSV, SVG plots and JSON reports.

Every float is written as decimal text with 17 significant digits, which
round-trips binary64 exactly.  Nothing here depends on the clock or on dict
ordering beyond insertion order, so identical inputs give identical bytes.
"""

import csv
import dataclasses
import io
import json
import math
import os
import tempfile

import numpy as np

from .forms import FormTriple

SCHEMA_VERSION = "1"


class ProblemFileError(ValueError):
    """A problem file that cannot be turned into a FormTriple."""


def fmt(x):
    """17-significant-digit text for a float; infinities become strings."""
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def plain(obj):
    """Convert dataclasses, arrays and numpy scalars to JSON-ready values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [plain(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        # numeric rows stay on one line
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent=2):
    """Deterministic JSON text with 17-digit floats."""
    return _encode(plain(obj), indent, 0) + "\n"


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- problem files ---------------------------------------------------------

def problem_to_json(triple):
    def rows(X):
        # mirror the upper triangle so the file is exactly symmetric
        U = np.triu(X) + np.triu(X, 1).T
        return [[float(v) for v in row] for row in U]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": triple.name,
        "order": triple.order,
        "a": rows(triple.A),
        "b": rows(triple.B),
        "m": rows(triple.M),
    }
    if triple.provenance:
        doc["provenance"] = triple.provenance
    return dumps(doc)


def problem_from_json(text):
    """Parse a problem file; raises ProblemFileError on any defect,
    including asymmetric or non-definite matrices."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ProblemFileError("top level must be an object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ProblemFileError(f"unsupported schema_version {doc.get('schema_version')!r}")
    missing = [k for k in ("name", "order", "a", "b", "m") if k not in doc]
    if missing:
        raise ProblemFileError(f"missing fields: {', '.join(missing)}")
    n = doc["order"]
    if not isinstance(n, int) or n < 1:
        raise ProblemFileError("order must be a positive integer")
    mats = []
    for key in "abm":
        try:
            X = np.array(doc[key], dtype=float)
        except (TypeError, ValueError):
            raise ProblemFileError(f"matrix {key} is not numeric") from None
        if X.shape != (n, n):
            raise ProblemFileError(f"matrix {key} has shape {X.shape}, expected ({n}, {n})")
        mats.append(X)
    prov = doc.get("provenance", {})
    if not isinstance(prov, dict):
        raise ProblemFileError("provenance must be an object")
    try:
        return FormTriple(*mats, name=str(doc["name"]), provenance=prov)
    except ValueError as exc:
        raise ProblemFileError(f"invalid problem: {exc}") from None


def read_problem(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror}") from None
    return problem_from_json(text)


# -- trace CSV -------------------------------------------------------------

def trace_to_csv(table):
    """``lambda,n,mu`` rows sorted by ``(lambda, n)``; ``n`` is 1-based."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "n", "mu"])
    for s in sorted(table.slices, key=lambda s: s.lam):
        lam = format(s.lam, ".17g")
        for n, mu in enumerate(s.mu, start=1):
            w.writerow([lam, n, format(float(mu), ".17g")])
    return buf.getvalue()


def trace_from_csv(text):
    """Inverse of ``trace_to_csv``: returns ``(lambdas, mu)`` with ``mu`` of
    shape ``(points, n)``."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["lambda", "n", "mu"]:
        raise ValueError("missing lambda,n,mu header")
    data = {}
    for row in rows[1:]:
        lam, n, mu = float(row[0]), int(row[1]), float(row[2])
        data.setdefault(lam, {})[n] = mu
    lams = np.array(sorted(data))
    width = max(len(v) for v in data.values())
    mu = np.array([[data[x][n] for n in range(1, width + 1)] for x in lams])
    return lams, mu


# -- SVG -------------------------------------------------------------------

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
          "#9467bd", "#8c564b", "#e377c2", "#17becf")
WIDTH, HEIGHT = 800, 600


def nice_ticks(lo, hi, target=6):
    """Round-number tick positions covering ``[lo, hi]``."""
    span = hi - lo
    if not span > 0:
        return [lo]
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [k * step for k in range(first, last + 1)]


def _label(v):
    text = format(v, ".6g")
    return "0" if text in ("-0", "0") else text


def trace_to_svg(table, title=""):
    """Static SVG with one polyline per curve index."""
    lams = np.asarray(table.lambdas, dtype=float)
    mu = table.mu
    x0, x1 = float(lams.min()), float(lams.max())
    finite = mu[np.isfinite(mu)]
    y0, y1 = float(finite.min()), float(finite.max())
    if y1 <= y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    # 5 percent margin around the data
    mx, my = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    x0, x1, y0, y1 = x0 - mx, x1 + mx, y0 - my, y1 + my

    def px(x):
        return (x - x0) / (x1 - x0) * WIDTH

    def py(y):
        return HEIGHT - (y - y0) / (y1 - y0) * HEIGHT

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append('<g stroke="#cccccc" stroke-width="0.5" font-family="sans-serif" '
               'font-size="11" fill="#444444">')
    for t in nice_ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="0" x2="{X:.2f}" y2="{HEIGHT}"/>')
        out.append(f'<text x="{X + 2:.2f}" y="{HEIGHT - 4}" stroke="none">{_label(t)}</text>')
    for t in nice_ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="0" y1="{Y:.2f}" x2="{WIDTH}" y2="{Y:.2f}"/>')
        out.append(f'<text x="4" y="{Y - 2:.2f}" stroke="none">{_label(t)}</text>')
    out.append("</g>")
    # axes through the origin when it is visible
    if x0 < 0 < x1:
        out.append(f'<line x1="{px(0):.2f}" y1="0" x2="{px(0):.2f}" y2="{HEIGHT}" '
                   'stroke="black" stroke-width="1"/>')
    if y0 < 0 < y1:
        out.append(f'<line x1="0" y1="{py(0):.2f}" x2="{WIDTH}" y2="{py(0):.2f}" '
                   'stroke="black" stroke-width="1"/>')
    for n in range(mu.shape[1]):
        pts = " ".join(f"{px(x):.3f},{py(y):.3f}" for x, y in zip(lams, mu[:, n]))
        color = COLORS[n % len(COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                   f'data-curve="{n + 1}" points="{pts}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
