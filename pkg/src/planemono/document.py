"""Graph documents and machine-readable reports.

A graph document is a JSON object::

    {
      "schema_version": "1",
      "vertices": [{"id": "D1", "self_intersection": -3, "genus": 0}, ...],
      "edges": [["D1", "D3"], ...],
      "arrows": [{"attached_to": "D3", "branch_multiplicity": 1}],
      "ample": {"D1": "-13/3", ...},          (optional)
      "tags": {"first_blowup": "D1"}          (optional)
    }

Rationals are written as ``"p/q"`` strings so that exact values survive a
round trip.  Unknown keys are rejected.
"""

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from planemono.exceptions import SchemaError
from planemono.graph import Arrow, DualGraph, Vertex, validate_graph

__all__ = [
    "SCHEMA_VERSION",
    "GraphDocument",
    "parse_graph",
    "serialize_graph",
    "document_hash",
    "to_jsonable",
    "dumps",
    "parse_rational",
]

SCHEMA_VERSION = "1"

_TOP_KEYS = {"schema_version", "vertices", "edges", "arrows", "ample", "tags"}
_VERTEX_KEYS = {"id", "self_intersection", "genus"}
_ARROW_KEYS = {"attached_to", "branch_multiplicity"}
_TAG_KEYS = {"first_blowup"}


@dataclass
class GraphDocument:
    graph: DualGraph
    ample: dict = None
    schema_version: str = SCHEMA_VERSION
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tags:
            self.tags = dict(self.graph.tags)


def parse_rational(text, where="value"):
    if isinstance(text, bool):
        raise SchemaError(f"{where}: expected a rational, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(f"{where}: expected an integer or a 'p/q' string, got {text!r}")


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    return value


def _str(value, where):
    if not isinstance(value, str) or not value:
        raise SchemaError(f"{where}: expected a non-empty string, got {value!r}")
    return value


def _keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise SchemaError(f"{where}: unknown field(s) {unknown}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise SchemaError(f"{where}: missing field(s) {missing}")


def parse_graph(text, validate=True):
    """Parse and (by default) validate a graph document.

    Raises :class:`SchemaError` for malformed input, with the JSON line and
    column or the offending field path, and
    :class:`~planemono.exceptions.GraphValidationError` when the graph
    itself is invalid.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    _keys(raw, _TOP_KEYS, {"schema_version", "vertices", "edges", "arrows"}, "document")
    if raw["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"schema_version: unsupported version {raw['schema_version']!r}")

    if not isinstance(raw["vertices"], list):
        raise SchemaError("vertices: expected a list")
    vertices = []
    for k, v in enumerate(raw["vertices"]):
        where = f"vertices[{k}]"
        _keys(v, _VERTEX_KEYS, {"id", "self_intersection"}, where)
        vertices.append(Vertex(_str(v["id"], f"{where}.id"),
                               _int(v["self_intersection"], f"{where}.self_intersection"),
                               _int(v.get("genus", 0), f"{where}.genus")))

    if not isinstance(raw["edges"], list):
        raise SchemaError("edges: expected a list")
    edges = []
    for k, e in enumerate(raw["edges"]):
        if not (isinstance(e, list) and len(e) == 2):
            raise SchemaError(f"edges[{k}]: expected a pair of vertex ids")
        edges.append((_str(e[0], f"edges[{k}][0]"), _str(e[1], f"edges[{k}][1]")))

    if not isinstance(raw["arrows"], list):
        raise SchemaError("arrows: expected a list")
    arrows = []
    for k, a in enumerate(raw["arrows"]):
        where = f"arrows[{k}]"
        _keys(a, _ARROW_KEYS, {"attached_to"}, where)
        arrows.append(Arrow(_str(a["attached_to"], f"{where}.attached_to"),
                            _int(a.get("branch_multiplicity", 1),
                                 f"{where}.branch_multiplicity")))

    tags = raw.get("tags", {})
    _keys(tags, _TAG_KEYS, (), "tags")
    for key, value in tags.items():
        _str(value, f"tags.{key}")

    ample = None
    if "ample" in raw:
        if not isinstance(raw["ample"], dict):
            raise SchemaError("ample: expected an object")
        ample = {_str(k, "ample key"): parse_rational(v, f"ample.{k}")
                 for k, v in raw["ample"].items()}

    graph = DualGraph(vertices, edges, arrows, tags)
    if validate:
        validate_graph(graph).raise_for_problems()
        if ample is not None and set(ample) != set(graph.ids):
            raise SchemaError("ample: must give a coefficient for every vertex")
        if "first_blowup" in tags and tags["first_blowup"] not in graph.ids:
            raise SchemaError(f"tags.first_blowup: unknown vertex {tags['first_blowup']!r}")
    return GraphDocument(graph, ample, raw["schema_version"], dict(tags))


def _document_dict(doc):
    g = doc.graph
    out = {
        "schema_version": doc.schema_version,
        "vertices": [
            {"id": v.id, "self_intersection": v.self_intersection, "genus": v.genus}
            for v in g.vertices],
        "edges": [list(e) for e in g.edges],
        "arrows": [{"attached_to": a.attached_to, "branch_multiplicity": a.branch_multiplicity}
                   for a in g.arrows],
    }
    if doc.ample is not None:
        out["ample"] = {k: str(Fraction(v)) for k, v in doc.ample.items()}
    if doc.tags:
        out["tags"] = dict(doc.tags)
    return out


def serialize_graph(doc):
    if isinstance(doc, DualGraph):
        doc = GraphDocument(doc)
    return json.dumps(_document_dict(doc), indent=2) + "\n"


def document_hash(doc):
    canonical = json.dumps(_document_dict(doc), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def to_jsonable(obj):
    """Convert report values to JSON types; rationals become ``"p/q"`` strings."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, float):
        return float(repr(obj))
    return obj


def _key(k):
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"
