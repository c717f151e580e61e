"""Spans of groupoids with representations, and their quantizations.

An object is a groupoid X with a representation V.  A morphism (X, V) -> (Y, W)
is a span X <-f- M -g-> Y together with a filling intertwiner
alpha: f*V -> g*W.  Spans compose through the homotopy pullback of the middle
legs.

The sum functor sends (X, V) to the coinvariants x_!V along x: X -> *, the
product functor to the invariants x_*V; on spans both pull back, apply the
filling, and push forward using the Nakayama map to turn one kind of
extension into the other.
"""
from __future__ import annotations

from dataclasses import dataclass

from .groupoid import (
    Groupoid,
    GroupoidMap,
    NonComposable,
    Pick,
    compose_maps,
    homotopy_pullback,
    product_groupoid,
    product_map,
)
from .kan import (
    LEFT,
    RIGHT,
    counit_left,
    kan_composition_iso,
    kan_composition_iso_inverse,
    lan,
    mu_left,
    mu_right,
    push_left,
    push_right,
    ran,
    unit_right,
)
from .linalg import Field, Matrix, kronecker
from .nakayama import nakayama_map
from .rep import (
    FieldMismatch,
    RepMap,
    Representation,
    coevaluation,
    compose,
    dual,
    evaluation,
    external_associator,
    external_tensor,
    external_tensor_maps,
    identity_map,
    nat_restrict,
    restrict,
    restrict_map,
    unit_rep,
    validate_rep_map,
)


class NonComposableSpans(NonComposable):
    code = "non_composable_spans"


@dataclass(frozen=True)
class FamObject:
    groupoid: Groupoid
    rep: Representation

    def __post_init__(self):
        if self.rep.groupoid != self.groupoid:
            raise ValueError("representation lives on a different groupoid")

    @property
    def field(self) -> Field:
        return self.rep.field

    @classmethod
    def of(cls, v: Representation) -> "FamObject":
        return cls(v.groupoid, v)


def unit_object(field: Field) -> FamObject:
    P = Groupoid.point()
    return FamObject(P, unit_rep(P, field))


@dataclass(frozen=True)
class Span:
    source: FamObject
    target: FamObject
    apex: Groupoid
    left: GroupoidMap
    right: GroupoidMap
    filling: RepMap

    def __post_init__(self):
        if self.left.source != self.apex or self.right.source != self.apex:
            raise ValueError("legs do not start at the apex")
        if self.left.target != self.source.groupoid or self.right.target != self.target.groupoid:
            raise ValueError("legs do not end at the source and target groupoids")
        if (self.filling.source != restrict(self.left, self.source.rep)
                or self.filling.target != restrict(self.right, self.target.rep)):
            raise ValueError("filling does not map left-leg pullback to right-leg pullback")


def make_span(source: FamObject, target: FamObject, left: GroupoidMap, right: GroupoidMap,
              components, validate: bool = True) -> Span:
    """Build a span from filling matrices, checking they intertwine."""
    fill = RepMap(restrict(left, source.rep), restrict(right, target.rep), tuple(components))
    if validate:
        validate_rep_map(fill)
    return Span(source, target, left.source, left, right, fill)


def identity_span(o: FamObject) -> Span:
    i = GroupoidMap.identity(o.groupoid)
    return Span(o, o, o.groupoid, i, i, identity_map(o.rep))


def span_from_map(f: GroupoidMap, o: FamObject) -> Span:
    """(X, f*W) <-id- X -f-> (Y, W) with identity filling."""
    src = FamObject(f.source, restrict(f, o.rep))
    return Span(src, o, f.source, GroupoidMap.identity(f.source), f, identity_map(src.rep))


def span_to_map(f: GroupoidMap, o: FamObject) -> Span:
    """(Y, W) <-f- X -id-> (X, f*W) with identity filling."""
    tgt = FamObject(f.source, restrict(f, o.rep))
    return Span(o, tgt, f.source, f, GroupoidMap.identity(f.source), identity_map(tgt.rep))


def compose_spans(a: Span, b: Span, pick: Pick = min) -> Span:
    """b after a, with apex the homotopy pullback of the middle legs."""
    if a.target != b.source:
        raise NonComposableSpans("target of the first span is not the source of the second")
    pb = homotopy_pullback(a.right, b.left, pick)
    W = a.target.rep
    fill = compose(restrict_map(pb.p, a.filling), nat_restrict(pb.pi, W), restrict_map(pb.q, b.filling))
    return Span(a.source, b.target, pb.groupoid,
                compose_maps(pb.p, a.left), compose_maps(pb.q, b.right), fill)


def compose_chain(*spans: Span, pick: Pick = min) -> Span:
    out = spans[0]
    for s in spans[1:]:
        out = compose_spans(out, s, pick)
    return out


# monoidal structure --------------------------------------------------------

def tensor_objects(o1: FamObject, o2: FamObject) -> FamObject:
    if o1.field != o2.field:
        raise FieldMismatch(f"field mismatch {o1.field!r} vs {o2.field!r}")
    v = external_tensor(o1.rep, o2.rep)
    return FamObject(v.groupoid, v)


def tensor_spans(a: Span, b: Span) -> Span:
    src, tgt = tensor_objects(a.source, b.source), tensor_objects(a.target, b.target)
    left, right = product_map(a.left, b.left), product_map(a.right, b.right)
    m = external_tensor_maps(a.filling, b.filling)
    fill = RepMap(restrict(left, src.rep), restrict(right, tgt.rep), m.components)
    return Span(src, tgt, left.source, left, right, fill)


def fam_dual(o: FamObject) -> FamObject:
    return FamObject(o.groupoid, dual(o.rep))


def diagonal(x: Groupoid) -> GroupoidMap:
    xx = product_groupoid(x, x).groupoid
    n = len(x)
    return GroupoidMap(x, xx, tuple(i * n + i for i in range(n)),
                       tuple(tuple(a * g.order + a for a in g.elements) for g in x.groups))


def unitor_iso(x: Groupoid, side: str = "left") -> GroupoidMap:
    """X -> * x X (side='left') or X -> X x * (side='right'), the identity on tables."""
    P = Groupoid.point()
    tgt = product_groupoid(P, x) if side == "left" else product_groupoid(x, P)
    return GroupoidMap(x, tgt.groupoid, tuple(range(len(x))), tuple(tuple(g.elements) for g in x.groups))


def _iso_span(o: FamObject, iso: GroupoidMap, target: FamObject, reverse: bool) -> Span:
    i = GroupoidMap.identity(o.groupoid)
    if reverse:
        src, tgt, left, right = target, o, iso, i
    else:
        src, tgt, left, right = o, target, i, iso
    fill = RepMap(restrict(left, src.rep), restrict(right, tgt.rep), identity_map(o.rep).components)
    return Span(src, tgt, o.groupoid, left, right, fill)


def left_unitor_span(o: FamObject, inverse: bool = False) -> Span:
    """1 (x) o -> o (or o -> 1 (x) o when ``inverse``)."""
    t = tensor_objects(unit_object(o.field), o)
    return _iso_span(o, unitor_iso(o.groupoid, "left"), t, reverse=not inverse)


def right_unitor_span(o: FamObject, inverse: bool = False) -> Span:
    """o (x) 1 -> o (or o -> o (x) 1 when ``inverse``)."""
    t = tensor_objects(o, unit_object(o.field))
    return _iso_span(o, unitor_iso(o.groupoid, "right"), t, reverse=not inverse)


def associator_span(o1: FamObject, o2: FamObject, o3: FamObject, inverse: bool = False) -> Span:
    """(o1 (x) o2) (x) o3 -> o1 (x) (o2 (x) o3), or back when ``inverse``."""
    left_obj = tensor_objects(tensor_objects(o1, o2), o3)
    right_obj = tensor_objects(o1, tensor_objects(o2, o3))
    a = external_associator(o1.groupoid, o2.groupoid, o3.groupoid)
    i = GroupoidMap.identity(left_obj.groupoid)
    if inverse:
        src, tgt, l, r = right_obj, left_obj, a, i
    else:
        src, tgt, l, r = left_obj, right_obj, i, a
    fill = RepMap(restrict(l, src.rep), restrict(r, tgt.rep), identity_map(left_obj.rep).components)
    return Span(src, tgt, left_obj.groupoid, l, r, fill)


def coev_span(o: FamObject) -> Span:
    """1 -> o (x) o^d through * <- X -diag-> X x X, filled by the pointwise coevaluation."""
    X = o.groupoid
    t = GroupoidMap.terminal(X)
    d = diagonal(X)
    tgt = tensor_objects(o, fam_dual(o))
    fill = RepMap(restrict(t, unit_rep(t.target, o.field)), restrict(d, tgt.rep),
                  coevaluation(o.rep).components)
    return Span(unit_object(o.field), tgt, X, t, d, fill)


def ev_span(o: FamObject) -> Span:
    """o^d (x) o -> 1 through X x X <-diag- X -> *, filled by the pointwise evaluation."""
    X = o.groupoid
    t = GroupoidMap.terminal(X)
    d = diagonal(X)
    src = tensor_objects(fam_dual(o), o)
    fill = RepMap(restrict(d, src.rep), restrict(t, unit_rep(t.target, o.field)),
                  evaluation(o.rep).components)
    return Span(src, unit_object(o.field), X, d, t, fill)


def snake_spans(o: FamObject, which: str = "object") -> list[Span]:
    """The zig-zag o -> o (which='object') or o^d -> o^d (which='dual') as a list of spans."""
    od = fam_dual(o)
    if which == "object":
        return [
            left_unitor_span(o, inverse=True),
            tensor_spans(coev_span(o), identity_span(o)),
            associator_span(o, od, o),
            tensor_spans(identity_span(o), ev_span(o)),
            right_unitor_span(o),
        ]
    if which == "dual":
        return [
            right_unitor_span(od, inverse=True),
            tensor_spans(identity_span(od), coev_span(o)),
            associator_span(od, o, od, inverse=True),
            tensor_spans(ev_span(o), identity_span(od)),
            left_unitor_span(od),
        ]
    raise ValueError("which must be 'object' or 'dual'")


# quantization --------------------------------------------------------------

@dataclass(frozen=True)
class QuantResult:
    functor: str
    source_dim: int
    target_dim: int
    matrix: Matrix
    stages: tuple[tuple[str, Matrix], ...]


def _terminal(x: Groupoid) -> GroupoidMap:
    return GroupoidMap.terminal(x)


def quant_sum_object(o: FamObject) -> int:
    return lan(_terminal(o.groupoid), o.rep).dims[0]


def quant_prod_object(o: FamObject) -> int:
    return ran(_terminal(o.groupoid), o.rep).dims[0]


def _result(functor: str, stages: list[tuple[str, RepMap]]) -> QuantResult:
    total = compose(*(m for _, m in stages))
    mats = tuple((name, m.components[0]) for name, m in stages)
    M = total.components[0]
    return QuantResult(functor, M.cols, M.rows, M, mats)


def quant_sum_span(s: Span) -> QuantResult:
    """x_!V -> y_!W through f_*, the filling, nu_f, the composition isos and eps^g."""
    f, g = s.left, s.right
    x, y = _terminal(s.source.groupoid), _terminal(s.target.groupoid)
    V, W = s.source.rep, s.target.rep
    gW = restrict(g, W)
    stages = [
        ("eta_R^f", push_left(x, unit_right(f, V))),
        ("f_*(alpha)", push_left(x, push_right(f, s.filling))),
        ("nu_f", push_left(x, nakayama_map(f, gW))),
        ("x_!f_! -> (xf)_!", kan_composition_iso_inverse(LEFT, f, x, gW)),
        ("(yg)_! -> y_!g_!", kan_composition_iso(LEFT, g, y, gW)),
        ("eps_L^g", push_left(y, counit_left(g, W))),
    ]
    return _result("sum", stages)


def quant_prod_span(s: Span) -> QuantResult:
    """x_*V -> y_*W through f_*, the composition isos, the filling, nu_g and eps^g."""
    f, g = s.left, s.right
    x, y = _terminal(s.source.groupoid), _terminal(s.target.groupoid)
    V, W = s.source.rep, s.target.rep
    fV, gW = restrict(f, V), restrict(g, W)
    stages = [
        ("eta_R^f", push_right(x, unit_right(f, V))),
        ("x_*f_* -> (xf)_*", kan_composition_iso_inverse(RIGHT, f, x, fV)),
        ("(yg)_* -> y_*g_*", kan_composition_iso(RIGHT, g, y, fV)),
        ("g_*(alpha)", push_right(y, push_right(g, s.filling))),
        ("nu_g", push_right(y, nakayama_map(g, gW))),
        ("eps_L^g", push_right(y, counit_left(g, W))),
    ]
    return _result("prod", stages)


def quantize(s: Span, functor: str = "sum") -> QuantResult:
    if functor == "sum":
        return quant_sum_span(s)
    if functor == "prod":
        return quant_prod_span(s)
    raise ValueError(f"functor must be 'sum' or 'prod', not {functor!r}")


def sum_monoidal_iso(o1: FamObject, o2: FamObject) -> Matrix:
    """sum(o1 (x) o2) -> sum(o1) (x) sum(o2)."""
    m = mu_left(_terminal(o1.groupoid), _terminal(o2.groupoid), o1.rep, o2.rep)
    return m.components[0]


def prod_monoidal_iso(o1: FamObject, o2: FamObject) -> Matrix:
    """prod(o1 (x) o2) -> prod(o1) (x) prod(o2)."""
    m = mu_right(_terminal(o1.groupoid), _terminal(o2.groupoid), o1.rep, o2.rep)
    return m.components[0]


def nakayama_montran(o: FamObject) -> Matrix:
    """The component prod(o) -> sum(o) of the Nakayama transformation."""
    return nakayama_map(_terminal(o.groupoid), o.rep).components[0]


def tensor_matrices(a: Matrix, b: Matrix) -> Matrix:
    return kronecker(a, b)
