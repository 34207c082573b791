"""Polytope JSON files and deterministic CSV/JSON emission."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .polytope import VPolytope, Zonotope
from .shadow import as_vpolytope


class InputError(ValueError):
    """Bad user input; the CLI maps this to exit code 2."""


def fmt_float(x) -> str:
    """17 significant digits, '.' decimal point, independent of locale."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def polytope_to_dict(p) -> dict:
    if isinstance(p, Zonotope):
        vp = as_vpolytope(p)
        return {
            "label": p.label,
            "n": p.dim,
            "vertices": vp.vertices.tolist(),
            "edges": [list(e) for e in vp.edges],
            "generators": p.generators.tolist(),
            "base": p.base.tolist(),
        }
    d = {"label": p.label, "n": p.dim, "vertices": p.vertices.tolist()}
    if p.has_edges:
        d["edges"] = [list(e) for e in p.edges]
    return d


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def write_text(path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def save_polytope(p, path):
    write_text(path, dumps_json(polytope_to_dict(p)))


def _matrix(d, key, n, required):
    if key not in d:
        if required:
            raise InputError(f"missing required key {key!r}")
        return None
    try:
        M = np.asarray(d[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{key!r} must be a list of numeric rows") from exc
    if M.ndim != 2 or M.shape[0] == 0 or M.shape[1] != n:
        raise InputError(f"{key!r} must be a non-empty list of length-{n} rows")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{key!r} has non-finite entries")
    return M


def polytope_from_dict(d):
    if not isinstance(d, dict):
        raise InputError("polytope JSON must be an object")
    n = d.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("'n' must be a positive integer")
    label = str(d.get("label", ""))
    if "generators" in d:
        G = _matrix(d, "generators", n, True)
        base = d.get("base")
        if base is not None:
            base = np.asarray(base, dtype=float)
            if base.shape != (n,):
                raise InputError(f"'base' must have length {n}")
        return Zonotope(G, base, label)
    V = _matrix(d, "vertices", n, True)
    edges = d.get("edges")
    if edges is not None:
        try:
            edges = [(int(i), int(j)) for i, j in edges]
        except (TypeError, ValueError) as exc:
            raise InputError("'edges' must be a list of index pairs") from exc
        if any(not (0 <= i < len(V) and 0 <= j < len(V)) or i == j for i, j in edges):
            raise InputError("edge index out of range")
    return VPolytope(V, label, edges=edges)


def loads_polytope(text: str, source: str = "<string>"):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from exc
    return polytope_from_dict(d)


def load_polytope(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return loads_polytope(text, str(path))


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt_float(x) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()
