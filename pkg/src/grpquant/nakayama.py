"""The pre-Nakayama map gamma, the weights delta and the Nakayama map nu.

For f: X -> Y all three are maps f_*V -> f_!V written in the canonical bases
of :mod:`grpquant.kan`.  Each is available in two independent forms:

* closed formulas on the coset blocks, and
* the adjunction composites (units, counits and inverse projection maps).

Agreement of the two forms is the main correctness check for this module.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .groupoid import FiniteGroup, Groupoid, GroupoidMap, Pick, compose_maps, fiber_groupoid, homotopy_fiber
from .kan import (
    LEFT,
    RIGHT,
    counit_left,
    counit_right,
    kan_composition_iso,
    lan,
    left_kan,
    proj_lambda,
    proj_rho,
    push_left,
    push_right,
    ran,
    right_kan,
    unit_left,
    unit_right,
)
from .linalg import DimensionMismatch, Field, Matrix, Scalar, scalar_multiple
from .rep import (
    RepMap,
    Representation,
    compose,
    identity_map,
    swap_map,
    tensor_maps,
    unit_rep,
)


class NakayamaError(Exception):
    code = "nakayama"


class NonInvertibleScalar(NakayamaError, ZeroDivisionError):
    code = "non_invertible_scalar"


class NonInvertibleDelta(NakayamaError, ZeroDivisionError):
    """Some fiber component has weight |K_x| divisible by the characteristic."""

    code = "non_invertible_delta"

    def __init__(self, components: Sequence["Weight"]):
        self.components = tuple(components)
        where = ", ".join(f"(y={c.y}; x={c.x}, coset {c.coset_rep})" for c in self.components)
        super().__init__(f"weight not invertible at {where}")


def _accumulate(F: Field, rows: int, cols: int):
    data = [[0] * cols for _ in range(rows)]

    def add(r0: int, c0: int, m: Matrix, s: Scalar = 1):
        for i, row in enumerate(m.entries):
            tgt = data[r0 + i]
            for j, x in enumerate(row):
                if x:
                    tgt[c0 + j] = F.add(tgt[c0 + j], F.mul(s, x))

    return data, add


def _gamma_blocks(f: GroupoidMap, v: Representation, pick: Pick, scale_of, full_group: bool) -> RepMap:
    """Sum of g^-1 (x) phi(g) per block, scaled by ``scale_of(x)``.

    With ``full_group`` the sum runs over all of A_y, otherwise over the
    chosen right coset representatives only.
    """
    L, R = left_kan(f, v, pick), right_kan(f, v, pick)
    F = v.field
    comps = []
    for y, Ay in enumerate(f.target.groups):
        data, add = _accumulate(F, L.output.dims[y], R.output.dims[y])
        for b in R.blocks[y]:
            s = scale_of(b.x)
            gs = Ay.elements if full_group else b.coset_reps
            for g in gs:
                co, E = R.term(y, b.x, g)
                ro, T = L.term(y, b.x, Ay.inv(g))
                add(ro, co, T @ E, s)
        comps.append(Matrix(F, len(data), R.output.dims[y], data))
    return RepMap(R.output, L.output, tuple(comps))


def _inverse_count(F: Field, n: int, what: str, x: int) -> Scalar:
    if not F.is_invertible(n):
        raise NonInvertibleScalar(f"{what} = {n} at source object {x} is zero in {F!r}")
    return F.inv(F(n))


def gamma(f: GroupoidMap, v: Representation, pick: Pick = min) -> RepMap:
    """Closed form: phi_x |-> (1/|f(A_x)|) sum_{g in A_y} g^-1 (x) phi_x(g)."""
    F = v.field
    return _gamma_blocks(f, v, pick, lambda x: _inverse_count(F, len(f.image(x)), "|f(A_x)|", x), True)


def gamma_cosets(f: GroupoidMap, v: Representation, pick: Pick = min) -> RepMap:
    """Division-free form: phi_x |-> sum over right coset reps s of s^-1 (x) phi_x(s)."""
    return _gamma_blocks(f, v, pick, lambda x: 1, False)


def hgamma(f: GroupoidMap, a: Representation, b: Representation) -> RepMap:
    """f_*(A (x) B) -> f_!(A (x) B) through eta_L, rho^-1, lambda^-1 and eps_R."""
    fa, fb = lan(f, a), ran(f, b)
    s1 = push_right(f, tensor_maps(unit_left(f, a), identity_map(b)))
    s2 = proj_rho(f, fa, b).inverse()
    s3 = proj_lambda(f, a, fb).inverse()
    s4 = push_left(f, tensor_maps(identity_map(a), counit_right(f, b)))
    return compose(s1, s2, s3, s4)


def gamma_generic(f: GroupoidMap, v: Representation) -> RepMap:
    """gamma from hgamma with B the unit; tensoring with the 1-dim unit is literally the identity."""
    return hgamma(f, v, unit_rep(f.source, v.field))


def mu_chi(f: GroupoidMap, chi: RepMap | Sequence[Matrix], v: Representation) -> RepMap:
    """The comparison f_*V -> f_!V determined by a map chi: f_*1 -> f_!1."""
    F = v.field
    one_x = unit_rep(f.source, F)
    one_y = unit_rep(f.target, F)
    r1, l1 = ran(f, one_x), lan(f, one_x)
    if not isinstance(chi, RepMap):
        chi = RepMap(r1, l1, tuple(chi))
    for y, c in enumerate(chi.components):
        if c.shape != (l1.dims[y], r1.dims[y]):
            raise DimensionMismatch(f"chi at object {y} has shape {c.shape}, expected {(l1.dims[y], r1.dims[y])}")
    chi = RepMap(r1, l1, chi.components)
    fv = ran(f, v)
    s1 = tensor_maps(identity_map(fv), unit_right(f, one_y))      # f_*V (x) 1 -> f_*V (x) f_*f*1
    s2 = tensor_maps(identity_map(fv), chi)                       # -> f_*V (x) f_!1
    s3 = swap_map(fv, l1)                                         # -> f_!1 (x) f_*V
    s4 = proj_lambda(f, one_x, fv).inverse()                      # -> f_!(1 (x) f*f_*V)
    s5 = push_left(f, counit_right(f, v))                         # -> f_!V
    return compose(s1, s2, s3, s4, s5)


# weights -------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    y: int
    x: int
    coset_rep: int
    value: Scalar
    kernel_order: int
    invertible: bool


@dataclass(frozen=True)
class WeightTable:
    map: GroupoidMap
    field: Field
    entries: tuple[Weight, ...]

    def at(self, y: int, x: int) -> list[Weight]:
        return [w for w in self.entries if w.y == y and w.x == x]

    def non_invertible(self) -> list[Weight]:
        return [w for w in self.entries if not w.invertible]

    def values(self) -> dict[tuple[int, int, int], Scalar]:
        return {(w.y, w.x, w.coset_rep): w.value for w in self.entries}


def delta(f: GroupoidMap, field: Field, pick: Pick = min) -> WeightTable:
    """Closed form: the weight on the component (y; x, coset) is |K_x|."""
    out = []
    for y in range(len(f.target)):
        for c in homotopy_fiber(f, y, pick).components:
            k = c.isotropy.order
            out.append(Weight(y, c.x, c.coset_rep, field(k), k, field.is_invertible(k)))
    return WeightTable(f, field, tuple(out))


def weight_of_component(group: FiniteGroup, field: Field) -> Scalar:
    """eps_L after gamma after eta_R for the basepoint * -> BG, on the unit representation."""
    BG = Groupoid.BG(group)
    iota = GroupoidMap.from_point(BG, 0)
    one = unit_rep(BG, field)
    m = compose(unit_right(iota, one), gamma_generic(iota, unit_rep(iota.source, field)),
                counit_left(iota, one))
    return m.components[0][0, 0]


def delta_generic(f: GroupoidMap, field: Field, pick: Pick = min) -> WeightTable:
    """Weights from the composite definition on each component of the fiber groupoid.

    The fiber at y is built as a homotopy pullback with the basepoint of each
    component selected by ``pick``; the component keyed by x and the left coset
    of f(A_x) containing phi^-1.
    """
    out = []
    for y, Ay in enumerate(f.target.groups):
        P = fiber_groupoid(f, y, pick)
        for o, (_, x, phi, _) in enumerate(P.data):
            cosets = Ay.left_cosets(f.image(x))
            rep = next(r for r, members in cosets if Ay.inv(phi) in members)
            val = weight_of_component(P.groupoid.groups[o], field)
            k = P.groupoid.groups[o].order
            out.append(Weight(y, x, rep, val, k, val != 0))
    order = {(w.y, w.x, w.coset_rep): i for i, w in enumerate(delta(f, field).entries)}
    out.sort(key=lambda w: order[(w.y, w.x, w.coset_rep)])
    return WeightTable(f, field, tuple(out))


def _kernel_orders(f: GroupoidMap) -> list[int]:
    return [len(f.kernel(x)) for x in range(len(f.source))]


def _check_weights(f: GroupoidMap, field: Field) -> None:
    bad = delta(f, field).non_invertible()
    if bad:
        raise NonInvertibleDelta(bad)


def delta_scaling(direction: str, f: GroupoidMap, v: Representation, power: int = -1) -> RepMap:
    """f_!(delta^power) or f_*(delta^power): scale each x-block by |K_x|^power."""
    F = v.field
    if power < 0:
        _check_weights(f, F)
    pkg = left_kan(f, v) if direction == LEFT else right_kan(f, v)
    ks = _kernel_orders(f)
    comps = []
    for y, blocks in enumerate(pkg.blocks):
        diag = []
        for b in blocks:
            k = F(ks[b.x])
            s = F(1)
            for _ in range(abs(power)):
                s = F.mul(s, F.inv(k) if power < 0 else k)
            diag += [s] * b.size
        n = len(diag)
        comps.append(Matrix(F, n, n, [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]))
    return RepMap(pkg.output, pkg.output, tuple(comps))


NAKAYAMA_METHODS = ("left", "right", "closed", "generic")


def nakayama_map(f: GroupoidMap, v: Representation, method: str = "left", pick: Pick = min) -> RepMap:
    """nu_f: f_*V -> f_!V.

    ``left``: f_!(delta^-1) after gamma; ``right``: gamma after f_*(delta^-1);
    ``closed``: phi_x |-> (1/|A_x|) sum_g g^-1 (x) phi_x(g); ``generic``: as
    ``left`` but with gamma from the adjunction composite.  The first two use
    the division-free coset form of gamma, so they are defined exactly when
    every weight is invertible.
    """
    F = v.field
    _check_weights(f, F)
    if method == "left":
        return gamma_cosets(f, v, pick).then(_delta_inv(LEFT, f, v, pick))
    if method == "right":
        return _delta_inv(RIGHT, f, v, pick).then(gamma_cosets(f, v, pick))
    if method == "closed":
        order = lambda x: _inverse_count(F, f.source.groups[x].order, "|A_x|", x)
        return _gamma_blocks(f, v, pick, order, True)
    if method == "generic":
        return gamma_generic(f, v).then(delta_scaling(LEFT, f, v))
    raise ValueError(f"unknown method {method!r}; expected one of {NAKAYAMA_METHODS}")


def _delta_inv(direction: str, f: GroupoidMap, v: Representation, pick: Pick) -> RepMap:
    if pick is min:
        return delta_scaling(direction, f, v)
    # the scaling is diagonal per x, so only the package changes with pick
    pkg = left_kan(f, v, pick) if direction == LEFT else right_kan(f, v, pick)
    base = delta_scaling(direction, f, v)
    return RepMap(pkg.output, pkg.output, base.components)


# the law checker -----------------------------------------------------------

@dataclass(frozen=True)
class CheckRecord:
    law: str
    instance: str
    passed: bool
    discrepancy: object = None
    detail: str = ""
    runtime: float = 0.0


@dataclass
class LawReport:
    field: Field
    records: list[CheckRecord] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def sort(self) -> None:
        self.records.sort(key=lambda r: (r.instance, r.law))


def column_factors(path: Matrix, direct: Matrix) -> list[Scalar] | None:
    """Per-column c_j with path[:, j] = c_j direct[:, j], or None if some column is not proportional."""
    out = []
    for j in range(direct.cols):
        a = path.submatrix(range(path.rows), [j])
        b = direct.submatrix(range(direct.rows), [j])
        if b.is_zero():
            if not a.is_zero():
                return None
            out.append(None)
            continue
        c = scalar_multiple(a, b)
        if c is None:
            return None
        out.append(c)
    return out


@dataclass(frozen=True)
class TriangleCheck:
    """The two paths g_*f_*V -> g_!f_!V against the conjugated composite map."""

    direct: RepMap
    path_right_first: RepMap
    path_left_first: RepMap

    @property
    def holds(self) -> bool:
        return self.direct == self.path_right_first == self.path_left_first

    def factors(self, y: int = 0) -> list[Scalar] | None:
        return column_factors(self.path_left_first.components[y], self.direct.components[y])


def comparison_triangle(f: GroupoidMap, g: GroupoidMap, v: Representation, comparison) -> TriangleCheck:
    """The composition triangle for a comparison ``comparison(map, rep) -> RepMap`` (nu or gamma).

    The composite's map lives on the (gf)-bases; it is conjugated to the
    iterated bases by the composition isomorphisms.
    """
    gf = compose_maps(f, g)
    cr = kan_composition_iso(RIGHT, f, g, v)        # (gf)_*V -> g_*f_*V
    cl = kan_composition_iso(LEFT, f, g, v)         # (gf)_!V -> g_!f_!V
    direct = compose(cr.inverse(), comparison(gf, v), cl)
    cf = comparison(f, v)
    a = push_right(g, cf).then(comparison(g, lan(f, v)))
    b = comparison(g, ran(f, v)).then(push_left(g, cf))
    return TriangleCheck(direct, a, b)


def check_nakayama_laws(instances, field: Field) -> LawReport:
    """Weight invertibility and the composition triangle on ``(name, f, g, V)`` instances over ``field``.

    ``V`` may live over any field; it is used as given and must match ``field``.
    """
    report = LawReport(field)
    for name, f, g, v in instances:
        t0 = time.perf_counter()
        gf = compose_maps(f, g)
        bad = []
        for label, m in (("f", f), ("g", g), ("gf", gf)):
            bad += [(label, w) for w in delta(m, field).non_invertible()]
        detail = "; ".join(f"{lab}: y={w.y} x={w.x} coset {w.coset_rep} |K|={w.kernel_order}" for lab, w in bad)
        report.records.append(CheckRecord("weights", name, not bad, None, detail, time.perf_counter() - t0))
        t0 = time.perf_counter()
        if bad:
            report.records.append(CheckRecord("triangle", name, False, None, "nu undefined: " + detail,
                                              time.perf_counter() - t0))
            continue
        tri = comparison_triangle(f, g, v, nakayama_map)
        disc = None
        if not tri.holds:
            disc = {"direct": tri.direct.components, "path": tri.path_left_first.components}
        report.records.append(CheckRecord("triangle", name, tri.holds, disc, "", time.perf_counter() - t0))
    report.sort()
    return report


# counterexamples -----------------------------------------------------------

def cyclic_counterexample(n: int, field: Field):
    """* -s-> BC_n -t-> * with the unit representation on the point."""
    BCn = Groupoid.BG(FiniteGroup.cyclic(n))
    s = GroupoidMap.from_point(BCn, 0)
    t = GroupoidMap.terminal(BCn)
    return s, t, unit_rep(s.source, field)


def two_cyclic_counterexample(m: int, n: int, field: Field):
    """{x, y} -> BC_m disjoint-union BC_n -> * with the unit representation."""
    Y = Groupoid(("a", "b"), (FiniteGroup.cyclic(m), FiniteGroup.cyclic(n)))
    X = Groupoid.discrete(("x", "y"))
    f = GroupoidMap(X, Y, (0, 1), ((0,), (0,)))
    g = GroupoidMap.terminal(Y)
    return f, g, unit_rep(X, field)


def discrepancy_factors(f: GroupoidMap, g: GroupoidMap, v: Representation) -> dict:
    """Run the triangle with gamma and with nu; report per-column factors."""
    out: dict = {}
    tri = comparison_triangle(f, g, v, gamma_cosets)
    out["gamma_equal"] = tri.holds
    out["gamma_factors"] = tri.factors()
    out["gamma_direct"] = tri.direct.components[0]
    out["gamma_path"] = tri.path_left_first.components[0]
    try:
        ntri = comparison_triangle(f, g, v, nakayama_map)
        out["nu_equal"] = ntri.holds
        out["nu_error"] = None
    except NonInvertibleDelta as e:
        out["nu_equal"] = None
        out["nu_error"] = str(e)
    return out
