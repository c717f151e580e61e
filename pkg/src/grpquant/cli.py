"""Command-line interface: JSON in, JSON out.

Exit codes: 0 when every check passes, 1 when a law check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import serialize as ser
from .corpus import build_corpus, read_corpus, write_corpus
from .famquant import FamObject, Span, compose_spans, make_span, quantize
from .groupoid import (
    GroupoidError,
    cardinality,
    fiber_cardinality,
    homotopy_fiber,
    homotopy_pullback,
    validate_group,
)
from .kan import KanError, kan
from .linalg import QQ, Field, LinalgError, Matrix, matrix_to_json
from .nakayama import (
    NAKAYAMA_METHODS,
    NakayamaError,
    NonInvertibleDelta,
    check_nakayama_laws,
    cyclic_counterexample,
    delta,
    discrepancy_factors,
    gamma,
    gamma_cosets,
    nakayama_map,
    two_cyclic_counterexample,
)
from .rep import RepError, change_field, validate_rep

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class BadArgument(ValueError):
    code = "bad_argument"


INPUT_ERRORS = (BadArgument, ser.SchemaError, GroupoidError, RepError, LinalgError, KanError,
                json.JSONDecodeError, KeyError, ValueError, OSError)


def _fmt(F: Field, x) -> str:
    return F.format(x)


def _emit(doc: dict, out: str | None) -> None:
    doc = {"schema": ser.SCHEMA, **doc}
    text = json.dumps(doc, indent=1, sort_keys=True, default=str)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _read(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _field(args) -> Field | None:
    return Field.parse(args.field) if getattr(args, "field", None) else None


def _rep_over(v, F: Field | None):
    return v if F is None else change_field(v, F)


def _span_over(s: Span, F: Field | None) -> Span:
    if F is None or F == s.source.field:
        return s
    v, w = change_field(s.source.rep, F), change_field(s.target.rep, F)
    comps = [Matrix(F, m.rows, m.cols, [[F(x) for x in r] for r in m.entries]) for m in s.filling.components]
    return make_span(FamObject.of(v), FamObject.of(w), s.left, s.right, comps)


def _guess_kind(doc: dict) -> str:
    if "kind" in doc:
        return doc["kind"]
    if "table" in doc:
        return "group"
    if "on_objects" in doc:
        return "map"
    if "action" in doc:
        return "rep"
    if "objects" in doc:
        return "groupoid"
    if "filling" in doc:
        return "span"
    raise BadArgument("cannot tell what kind of document this is; add a \"kind\" field")


# subcommands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    doc = _read(args.input)
    kind = args.kind or _guess_kind(doc)
    value = ser.from_document(kind, doc)
    if kind == "group":
        validate_group(value)
    _emit({"kind": "validation", "what": kind, "ok": True}, args.out)
    return EXIT_OK


def cmd_validate_rep(args) -> int:
    v = ser.from_document("rep", _read(args.rep))
    validate_rep(v)
    _emit({"kind": "validation", "what": "rep", "ok": True, "dims": list(v.dims)}, args.out)
    return EXIT_OK


def cmd_fiber(args) -> int:
    f = ser.from_document("map", _read(args.map))
    ys = [f.target.index(args.y)] if args.y else range(len(f.target))
    fibers = []
    for y in ys:
        fd = homotopy_fiber(f, y)
        fibers.append({
            "y": f.target.objects[y],
            "cardinality": str(fiber_cardinality(fd)),
            "components": [{"x": f.source.objects[c.x], "coset_rep": c.coset_rep, "coset": list(c.coset),
                            "isotropy": ser.group_to_json(c.isotropy), "inclusion": list(c.inclusion)}
                           for c in fd.components],
        })
    _emit({"kind": "fiber", "fibers": fibers}, args.out)
    return EXIT_OK


def cmd_pullback(args) -> int:
    g = ser.from_document("map", _read(args.g))
    h = ser.from_document("map", _read(args.h))
    pb = homotopy_pullback(g, h)
    _emit({"kind": "pullback", "groupoid": ser.groupoid_to_json(pb.groupoid),
           "p": ser.map_to_json(pb.p), "q": ser.map_to_json(pb.q),
           "pi": {pb.groupoid.objects[o]: c for o, c in enumerate(pb.pi.components)},
           "cardinality": str(cardinality(pb.groupoid))}, args.out)
    return EXIT_OK


def cmd_cardinality(args) -> int:
    doc = _read(args.input)
    kind = _guess_kind(doc)
    if kind == "groupoid":
        x = ser.from_document("groupoid", doc)
    elif kind == "map":
        x = ser.from_document("map", doc).source
    else:
        raise BadArgument(f"cardinality needs a groupoid or a map, got {kind}")
    _emit({"kind": "cardinality", "value": str(cardinality(x))}, args.out)
    return EXIT_OK


def cmd_kan(args) -> int:
    f = ser.from_document("map", _read(args.map))
    v = _rep_over(ser.from_document("rep", _read(args.rep)), _field(args))
    pkg = kan(args.side, f, v)
    _emit({"kind": "kan", **ser.kan_to_json(pkg)}, args.out)
    return EXIT_OK


def _mats(m) -> list:
    return [matrix_to_json(c) for c in m.components]


def cmd_nakayama(args) -> int:
    f = ser.from_document("map", _read(args.map))
    v = _rep_over(ser.from_document("rep", _read(args.rep)), _field(args))
    F = v.field
    doc: dict = {"kind": "nakayama", "variant": args.variant, "field": F.to_json()}
    if args.variant == "delta":
        w = delta(f, F)
        doc["weights"] = [{"y": f.target.objects[e.y], "x": f.source.objects[e.x], "coset_rep": e.coset_rep,
                           "value": _fmt(F, e.value), "kernel_order": e.kernel_order,
                           "invertible": e.invertible} for e in w.entries]
        _emit(doc, args.out)
        return EXIT_OK if not w.non_invertible() else EXIT_FAIL
    try:
        if args.variant == "gamma":
            m = gamma_cosets(f, v) if args.method == "cosets" else gamma(f, v)
        else:
            m = nakayama_map(f, v, args.method if args.method in NAKAYAMA_METHODS else "left")
    except NakayamaError as e:
        doc.update(ok=False, error=type(e).__name__, message=str(e))
        _emit(doc, args.out)
        return EXIT_FAIL
    doc.update(ok=True, invertible=m.is_invertible(), components=_mats(m))
    _emit(doc, args.out)
    return EXIT_OK


def cmd_quantize(args) -> int:
    s = _span_over(ser.from_document("span", _read(args.span)), _field(args))
    r = quantize(s, args.functor)
    _emit({"kind": "quantization", "functor": r.functor, "source_dim": r.source_dim,
           "target_dim": r.target_dim, "matrix": matrix_to_json(r.matrix),
           "stages": [{"name": n, "matrix": matrix_to_json(m)} for n, m in r.stages]}, args.out)
    return EXIT_OK


def cmd_compose(args) -> int:
    a = ser.from_document("span", _read(args.a))
    b = ser.from_document("span", _read(args.b))
    _emit({"kind": "span", **ser.span_to_json(compose_spans(a, b))}, args.out)
    return EXIT_OK


def cmd_laws(args) -> int:
    F = _field(args) or QQ
    c = read_corpus(args.corpus) if args.corpus else build_corpus(args.max_order, args.seed, field=F)
    if args.all_reps:
        inst = c.instances(args.max_dim)
    else:
        inst = c.rotated_instances(args.max_dim)
    inst = [(n, f, g, _rep_over(v, F)) for n, f, g, v in inst]
    t0 = time.perf_counter()
    report = check_nakayama_laws(inst, F)
    body = ser.report_to_json(report)
    body["total_runtime"] = round(time.perf_counter() - t0, 3)
    body["instances"] = len(inst)
    body["failures"] = len(report.failures())
    _emit({"kind": "report", **body}, args.out)
    if args.out:
        print(f"{len(inst)} instances, {len(report.failures())} failing records", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_counterexample(args) -> int:
    F = _field(args) or QQ
    if args.m is not None:
        if args.m < 1 or args.n < 1:
            raise BadArgument("m and n must be positive")
        f, g, v = two_cyclic_counterexample(args.m, args.n, F)
        label = f"two-cyclic m={args.m} n={args.n}"
    else:
        if args.n < 1:
            raise BadArgument("n must be positive")
        f, g, v = cyclic_counterexample(args.n, F)
        label = f"cyclic n={args.n}"
    d = discrepancy_factors(f, g, v)
    factors = d["gamma_factors"]
    doc = {
        "kind": "counterexample",
        "instance": label,
        "field": F.to_json(),
        "gamma_paths_equal": d["gamma_equal"],
        "gamma_direct": matrix_to_json(d["gamma_direct"]),
        "gamma_path": matrix_to_json(d["gamma_path"]),
        "factors": None if factors is None else [F.format(x) for x in factors],
        "nu_paths_equal": d["nu_equal"],
        "nu_error": d["nu_error"],
    }
    _emit(doc, args.out)
    # the point of the example is that gamma disagrees and nu agrees
    return EXIT_OK if d["nu_equal"] in (True, None) else EXIT_FAIL


def cmd_corpus(args) -> int:
    c = build_corpus(args.max_order, args.seed)
    files = write_corpus(c, args.out)
    print(json.dumps({"schema": ser.SCHEMA, "kind": "corpus", "files": [str(p) for p in files],
                      "maps": len(c.maps), "pairs": len(c.pairs())}, indent=1))
    return EXIT_OK


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grpquant", description="Finite groupoid representations, "
                                 "Kan extensions, Nakayama maps and span quantization.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("validate", cmd_validate, "validate a group, groupoid, map, rep or span document")
    p.add_argument("input")
    p.add_argument("--kind", choices=sorted(ser.DECODERS))
    p = add("validate-rep", cmd_validate_rep, "validate a representation")
    p.add_argument("--rep", required=True)
    p = add("fiber", cmd_fiber, "homotopy fibers of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--y", help="target object name (default: all)")
    p = add("pullback", cmd_pullback, "homotopy pullback of M -g-> Y <-h- N")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p = add("cardinality", cmd_cardinality, "groupoid cardinality")
    p.add_argument("input")
    p = add("kan", cmd_kan, "left or right Kan extension with bookkeeping")
    p.add_argument("--side", choices=("left", "right"), required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--rep", required=True)
    p.add_argument("--field")
    p = add("nakayama", cmd_nakayama, "gamma, nu or the weights delta of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--rep", required=True)
    p.add_argument("--field")
    p.add_argument("--variant", choices=("gamma", "nu", "delta"), default="nu")
    p.add_argument("--method", default="left", help="nu: left|right|closed|generic; gamma: closed|cosets")
    p = add("quantize", cmd_quantize, "apply the sum or prod functor to a span")
    p.add_argument("--span", required=True)
    p.add_argument("--functor", choices=("sum", "prod"), default="sum")
    p.add_argument("--field")
    p = add("compose", cmd_compose, "compose two spans (b after a)")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p = add("laws", cmd_laws, "check invertible weights and the comparison triangle on a corpus")
    p.add_argument("--field", default="q")
    p.add_argument("--corpus", help="corpus directory (default: build one)")
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--all-reps", action="store_true", help="every rep per pair, not one rotating rep")
    p = add("counterexample", cmd_counterexample, "the * -> BC_n -> * (or two-component) example")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--field", default="q")
    p = add("corpus", cmd_corpus, "write a deterministic corpus directory")
    p.add_argument("--max-order", type=int, default=6)
    p.set_defaults(out="corpus")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NonInvertibleDelta as e:
        print(json.dumps({"schema": ser.SCHEMA, "error": "NonInvertibleDelta", "message": str(e)}),
              file=sys.stderr)
        return EXIT_FAIL
    except INPUT_ERRORS as e:
        code = getattr(e, "code", type(e).__name__)
        print(json.dumps({"schema": ser.SCHEMA, "error": code, "message": str(e)}), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
