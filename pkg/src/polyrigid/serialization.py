"""JSON input/output. Rationals are written as "p/q" strings, floats as JSON numbers."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .errors import ParseError, ValidationError
from .framework import Framework, Graph
from .gallery import parse_gallery_name
from .polytope import Polytope, validate_polytope, with_backend

SCHEMA_VERSION = 1
FRAMEWORK_SCHEMA = "polyrigid/framework"
REPORT_SCHEMA = "polyrigid/report"


def encode_scalar(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    return x


def encode_point(p) -> list:
    return [encode_scalar(c) for c in p]


def decode_scalar(x, field: str):
    if isinstance(x, bool) or x is None:
        raise ValidationError(f"field {field}: expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"field {field}: cannot read {x!r} as a number") from exc
    raise ValidationError(f"field {field}: expected a number, got {type(x).__name__}")


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def read_json(path: str) -> tuple[Any, str]:
    """Parsed document plus the sha256 digest of the raw bytes."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8") from exc
    return loads(text, path), hashlib.sha256(raw).hexdigest()


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


# -- polytopes ---------------------------------------------------------------


def _exactify(x, field):
    v = decode_scalar(x, field)
    if isinstance(v, float):
        return v
    return Fraction(v)


def polytope_from_json(obj, backend: str | None = None, tolerance: float | None = None) -> Polytope:
    """A gallery name ("linf:2", "ngon:8", ...) or {"vertices": [...], "polar_override": [...]}."""
    if isinstance(obj, str):
        P = parse_gallery_name(obj)
    elif isinstance(obj, dict):
        if "gallery" in obj:
            P = parse_gallery_name(obj["gallery"])
        else:
            if "vertices" not in obj:
                raise ValidationError("field polytope: needs 'vertices' or 'gallery'")
            verts = [[_exactify(c, f"polytope.vertices[{i}]") for c in v]
                     for i, v in enumerate(_list(obj["vertices"], "polytope.vertices"))]
            polar = obj.get("polar_override")
            if polar is not None:
                polar = [[_exactify(c, f"polytope.polar_override[{i}]") for c in f]
                         for i, f in enumerate(_list(polar, "polytope.polar_override"))]
            if "dim" in obj and any(len(v) != obj["dim"] for v in verts):
                raise ValidationError(f"field polytope.vertices: expected {obj['dim']} coordinates each")
            P = validate_polytope(verts, polar_override=polar, name=obj.get("name"),
                                  backend=obj.get("backend"), tolerance=obj.get("tolerance", obj.get("tol")))
    else:
        raise ValidationError("field polytope: expected a gallery name or an object")
    return with_backend(P, backend, tolerance)


def polytope_to_json(P: Polytope) -> dict:
    out = {"dim": P.dim, "backend": P.backend, "vertices": [encode_point(v) for v in P.vertices]}
    if P.name:
        out["name"] = P.name
    if P.polar_override is not None:
        out["polar_override"] = [encode_point(f) for f in P.polar_override]
    if not P.exact:
        out["tolerance"] = P.tol
    return out


# -- graphs and frameworks ---------------------------------------------------------


def _list(x, field) -> list:
    if not isinstance(x, list):
        raise ValidationError(f"field {field}: expected a list")
    return x


def _labels(obj) -> list[str]:
    if "vertices" in obj:
        vs = obj["vertices"]
        if isinstance(vs, int):
            return [str(i) for i in range(vs)]
        return [str(v) for v in _list(vs, "vertices")]
    if "placement" in obj and isinstance(obj["placement"], list):
        return [str(i) for i in range(len(obj["placement"]))]
    if "n" in obj:
        return [str(i) for i in range(int(obj["n"]))]
    raise ValidationError("field vertices: missing (give a count or a list of labels)")


def graph_from_json(obj) -> tuple[Graph, list[str]]:
    """Vertices and edges at top level, or nested as {"graph": {"n": .., "edges": ..}}."""
    if not isinstance(obj, dict):
        raise ValidationError("graph document must be a JSON object")
    if isinstance(obj.get("graph"), dict):
        obj = {**obj, **obj["graph"]}
    labels = _labels(obj)
    if len(set(labels)) != len(labels):
        raise ValidationError("field vertices: duplicate labels")
    index = {lab: i for i, lab in enumerate(labels)}
    edges = []
    for i, e in enumerate(_list(obj.get("edges", []), "edges")):
        if not isinstance(e, list) or len(e) != 2:
            raise ValidationError(f"field edges[{i}]: expected a pair")
        try:
            edges.append((index[str(e[0])], index[str(e[1])]))
        except KeyError as exc:
            raise ValidationError(f"field edges[{i}]: unknown vertex {exc.args[0]}") from exc
        if edges[-1][0] == edges[-1][1]:
            raise ValidationError(f"field edges[{i}]: loop")
    return Graph(len(labels), edges), labels


def framework_from_json(obj, backend: str | None = None, tolerance: float | None = None):
    """Returns (framework, vertex labels)."""
    if not isinstance(obj, dict):
        raise ValidationError("framework document must be a JSON object")
    if "polytope" not in obj:
        raise ValidationError("field polytope: missing")
    P = polytope_from_json(obj["polytope"], backend, tolerance)
    G, labels = graph_from_json(obj)
    raw = obj.get("placement")
    if raw is None:
        raise ValidationError("field placement: missing")
    if isinstance(raw, dict):
        try:
            raw = [raw[lab] for lab in labels]
        except KeyError as exc:
            raise ValidationError(f"field placement: no point for vertex {exc.args[0]}") from exc
    raw = _list(raw, "placement")
    if len(raw) != G.n:
        raise ValidationError(f"field placement: {len(raw)} points for {G.n} vertices")
    pts = []
    for i, p in enumerate(raw):
        coords = [decode_scalar(c, f"placement[{i}]") for c in _list(p, f"placement[{i}]")]
        if P.exact:
            if any(isinstance(c, float) for c in coords):
                coords = [Fraction(repr(c)) if isinstance(c, float) else c for c in coords]
        else:
            coords = [float(c) for c in coords]
        if len(coords) != P.dim:
            raise ValidationError(f"field placement[{i}]: expected {P.dim} coordinates")
        pts.append(coords)
    return Framework(G, pts, P), labels


def framework_to_json(fw: Framework, labels=None, polytope_name: str | None = None) -> dict:
    labels = list(labels) if labels is not None else [str(i) for i in range(fw.n)]
    P = fw.polytope
    return {
        "schema": f"{FRAMEWORK_SCHEMA}@{SCHEMA_VERSION}",
        "polytope": polytope_name or P.name or polytope_to_json(P),
        "vertices": labels,
        "edges": [[labels[a], labels[b]] for a, b in fw.graph.edges],
        "placement": [encode_point(p) for p in fw.placement],
    }
