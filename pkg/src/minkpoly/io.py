"""File formats: Polygon JSON, GT JSON, Polytope JSON and flow-trace CSV.

Floats are written with 17 significant digits so that a parse/serialize
round trip reproduces every double exactly and repeated runs are
byte-identical.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable

import numpy as np

from .polygon import Polygon, PolygonSpec, validate

__all__ = [
    "format_float",
    "dumps",
    "polygon_to_dict",
    "polygon_from_dict",
    "load_polygons",
    "trace_header",
    "trace_rows",
]


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj: Any, indent: int | None = 1, _level: int = 0) -> str:
    """json.dumps with fixed 17-significant-digit floats."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + ",".join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # keep short numeric rows (vectors) on one line
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v, None) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[" + ",".join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def polygon_to_dict(P: Polygon) -> dict:
    return {
        "p": P.spec.p,
        "q": P.spec.q,
        "r": [float(x) for x in P.spec.r],
        "edges": [[float(c) for c in e] for e in P.edges],
    }


def polygon_from_dict(d: dict, check: bool = True) -> Polygon:
    try:
        spec = PolygonSpec(int(d["p"]), int(d["q"]), tuple(float(x) for x in d["r"]))
        edges = np.array(d["edges"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed polygon record: {exc}") from exc
    if check:
        return validate(spec, edges)
    return Polygon(spec, edges)


def load_polygons(text: str) -> list[Polygon]:
    """Polygons from a single Polygon JSON object, a list of them, or a
    sample file ({"header": ..., "polygons": [...]})."""
    data = json.loads(text)
    if isinstance(data, dict) and "polygons" in data:
        data = data["polygons"]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ValueError("expected a polygon object or a list of polygons")
    return [polygon_from_dict(d) for d in data]


def trace_header(n: int) -> list[str]:
    idx = range(2, n - 1)
    return ["step", "time"] + [f"phi_{i}" for i in idx] + [f"d_{i}" for i in idx] + ["closure_residual"]


def trace_rows(rows: Iterable[tuple[int, float, np.ndarray, np.ndarray, float]]) -> list[str]:
    """CSV lines (without the header) for (step, time, phi, d, residual) rows."""
    out = []
    for step, t, phi, d, res in rows:
        cells = [str(int(step)), format_float(t)]
        cells += ["nan" if not np.isfinite(x) else format_float(x) for x in phi]
        cells += [format_float(x) for x in d]
        cells.append(format_float(res))
        out.append(",".join(cells))
    return out
