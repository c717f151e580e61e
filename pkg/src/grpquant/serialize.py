"""JSON encodings (schema 1) for groups, groupoids, maps, representations, spans and Kan packages."""
from __future__ import annotations

import json
from pathlib import Path

from .famquant import FamObject, Span
from .groupoid import FiniteGroup, Groupoid, GroupoidMap, validate_group
from .kan import KanPackage
from .linalg import Field, matrix_from_json, matrix_to_json
from .nakayama import LawReport
from .rep import RepMap, Representation, make_rep, validate_rep_map

SCHEMA = 1


class SchemaError(ValueError):
    code = "schema"


def group_to_json(g: FiniteGroup) -> dict:
    return {"order": g.order, "table": [list(r) for r in g.table]}


def group_from_json(obj: dict) -> FiniteGroup:
    g = FiniteGroup(int(obj["order"]), tuple(tuple(int(v) for v in r) for r in obj["table"]))
    validate_group(g)
    return g


def groupoid_to_json(x: Groupoid) -> dict:
    return {"objects": [{"name": n, "group": group_to_json(g)} for n, g in zip(x.objects, x.groups)]}


def groupoid_from_json(obj: dict) -> Groupoid:
    objs = obj["objects"]
    return Groupoid(tuple(o["name"] for o in objs), tuple(group_from_json(o["group"]) for o in objs))


def map_to_json(f: GroupoidMap) -> dict:
    src, tgt = f.source, f.target
    return {
        "source": groupoid_to_json(src),
        "target": groupoid_to_json(tgt),
        "on_objects": {src.objects[x]: tgt.objects[y] for x, y in enumerate(f.obj_map)},
        "on_homs": {src.objects[x]: list(h) for x, h in enumerate(f.hom_maps)},
    }


def map_from_json(obj: dict) -> GroupoidMap:
    src, tgt = groupoid_from_json(obj["source"]), groupoid_from_json(obj["target"])
    on_obj, on_homs = obj["on_objects"], obj["on_homs"]
    return GroupoidMap(src, tgt,
                       tuple(tgt.index(on_obj[n]) for n in src.objects),
                       tuple(tuple(int(v) for v in on_homs[n]) for n in src.objects))


def rep_to_json(v: Representation) -> dict:
    X = v.groupoid
    return {
        "groupoid": groupoid_to_json(X),
        "field": v.field.to_json(),
        "dims": {n: d for n, d in zip(X.objects, v.dims)},
        "action": {n: {str(a): matrix_to_json(m) for a, m in enumerate(acts)}
                   for n, acts in zip(X.objects, v.action)},
    }


def rep_from_json(obj: dict, validate: bool = True) -> Representation:
    X = groupoid_from_json(obj["groupoid"])
    F = Field.from_json(obj["field"])
    action = []
    for n, G in zip(X.objects, X.groups):
        table = obj["action"][n]
        mats = tuple(matrix_from_json(table[str(a)]) for a in G.elements)
        if any(m.field != F for m in mats):
            raise SchemaError(f"matrix field differs from representation field at {n}")
        if mats[0].rows != int(obj["dims"][n]):
            raise SchemaError(f"dimension of {n} disagrees with its matrices")
        action.append(mats)
    return make_rep(X, F, action, validate)


def repmap_to_json(m: RepMap) -> dict:
    X = m.source.groupoid
    return {"source": rep_to_json(m.source), "target": rep_to_json(m.target),
            "components": {n: matrix_to_json(c) for n, c in zip(X.objects, m.components)}}


def repmap_from_json(obj: dict) -> RepMap:
    v, w = rep_from_json(obj["source"]), rep_from_json(obj["target"])
    m = RepMap(v, w, tuple(matrix_from_json(obj["components"][n]) for n in v.groupoid.objects))
    validate_rep_map(m)
    return m


def span_to_json(s: Span) -> dict:
    return {
        "source": rep_to_json(s.source.rep),
        "target": rep_to_json(s.target.rep),
        "left": map_to_json(s.left),
        "right": map_to_json(s.right),
        "filling": {n: matrix_to_json(c) for n, c in zip(s.apex.objects, s.filling.components)},
    }


def span_from_json(obj: dict) -> Span:
    from .famquant import make_span

    v, w = rep_from_json(obj["source"]), rep_from_json(obj["target"])
    f, g = map_from_json(obj["left"]), map_from_json(obj["right"])
    if f.source != g.source:
        raise SchemaError("span legs have different apexes")
    comps = [matrix_from_json(obj["filling"][n]) for n in f.source.objects]
    return make_span(FamObject.of(v), FamObject.of(w), f, g, comps)


def kan_to_json(pkg: KanPackage) -> dict:
    Y = pkg.map.target
    X = pkg.map.source
    blocks = {}
    for y, bs in enumerate(pkg.blocks):
        blocks[Y.objects[y]] = [{
            "x": X.objects[b.x],
            "coset_reps": list(b.coset_reps),
            "offset": b.offset,
            "width": b.width,
            "reduce": matrix_to_json(b.reduce),
            "lift": matrix_to_json(b.lift),
        } for b in bs]
    return {"direction": pkg.direction, "map": map_to_json(pkg.map), "input": rep_to_json(pkg.input),
            "output": rep_to_json(pkg.output), "blocks": blocks}


def report_to_json(r: LawReport) -> dict:
    def disc(d):
        if d is None:
            return None
        if isinstance(d, dict):
            return {k: [matrix_to_json(m) for m in v] for k, v in d.items()}
        return str(d)

    return {"field": r.field.to_json(), "passed": r.passed,
            "records": [{"law": c.law, "instance": c.instance, "pass": c.passed,
                         "discrepancy": disc(c.discrepancy), "detail": c.detail,
                         "runtime": round(c.runtime, 6)} for c in r.records]}


ENCODERS = {
    "group": group_to_json, "groupoid": groupoid_to_json, "map": map_to_json, "rep": rep_to_json,
    "repmap": repmap_to_json, "span": span_to_json, "kan": kan_to_json, "matrix": matrix_to_json,
    "report": report_to_json,
}
DECODERS = {
    "group": group_from_json, "groupoid": groupoid_from_json, "map": map_from_json, "rep": rep_from_json,
    "repmap": repmap_from_json, "span": span_from_json, "matrix": matrix_from_json,
}


def to_document(kind: str, value) -> dict:
    doc = {"schema": SCHEMA, "kind": kind}
    doc.update(ENCODERS[kind](value))
    return doc


def from_document(kind: str, doc: dict):
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise SchemaError(f"unsupported schema {doc.get('schema')!r}")
    if "kind" in doc and doc["kind"] != kind:
        raise SchemaError(f"expected a {kind} document, got {doc['kind']!r}")
    body = {k: v for k, v in doc.items() if k not in ("schema", "kind")}
    return DECODERS[kind](body)


def dumps(kind: str, value) -> str:
    return json.dumps(to_document(kind, value), indent=1, sort_keys=True)


def loads(kind: str, text: str):
    return from_document(kind, json.loads(text))


def load(kind: str, path) -> object:
    return loads(kind, Path(path).read_text())


def save(kind: str, value, path) -> None:
    Path(path).write_text(dumps(kind, value) + "\n")


def write_json(obj: dict, path) -> None:
    Path(path).write_text(json.dumps({"schema": SCHEMA, **obj}, indent=1, sort_keys=True) + "\n")
