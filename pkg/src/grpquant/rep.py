"""Representations of skeletal groupoids over an exact field, and their maps."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from .groupoid import (
    FiniteGroup,
    Groupoid,
    GroupoidMap,
    GroupoidNatTransf,
    product_groupoid,
)
from .linalg import (
    QQ,
    DimensionMismatch,
    Field,
    Matrix,
    Scalar,
    block_diag,
    commutation_matrix,
    kronecker,
)


class RepError(Exception):
    code = "rep"


class NotARepresentation(RepError, ValueError):
    code = "not_a_representation"


class NotNatural(RepError, ValueError):
    """A RepMap component fails to intertwine; carries the offending (object, element)."""

    code = "not_natural"

    def __init__(self, msg: str, x: int | None = None, a: int | None = None):
        super().__init__(msg)
        self.x, self.a = x, a


class FieldMismatch(RepError, DimensionMismatch):
    code = "field_mismatch"


@dataclass(frozen=True)
class Representation:
    groupoid: Groupoid
    field: Field
    dims: tuple[int, ...]
    action: tuple[tuple[Matrix, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "action", tuple(tuple(a) for a in self.action))

    def __repr__(self) -> str:
        return f"Representation({self.groupoid!r}, {self.field!r}, dims={self.dims})"

    def __call__(self, x: int, a: int) -> Matrix:
        return self.action[x][a]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)


def validate_rep(v: Representation) -> None:
    X = v.groupoid
    if len(v.dims) != len(X) or len(v.action) != len(X):
        raise NotARepresentation("dims/action do not match the groupoid's objects")
    for x, (G, d, acts) in enumerate(zip(X.groups, v.dims, v.action)):
        if len(acts) != G.order:
            raise NotARepresentation(f"object {X.objects[x]}: {len(acts)} matrices for a group of order {G.order}")
        for a, m in enumerate(acts):
            if m.field != v.field or m.shape != (d, d):
                raise NotARepresentation(f"object {X.objects[x]}, element {a}: bad matrix {m.shape}")
        if not acts[0].is_identity():
            raise NotARepresentation(f"object {X.objects[x]}: identity does not act trivially")
        # rho(s b) = rho(s) rho(b) for generators s and all b forces multiplicativity everywhere
        for a in G.generators:
            for b in G.elements:
                if acts[G.table[a][b]] != acts[a] @ acts[b]:
                    raise NotARepresentation(f"object {X.objects[x]}: action fails on ({a}, {b})")


def make_rep(groupoid: Groupoid, field: Field, action: Sequence[Sequence[Matrix]],
             validate: bool = True) -> Representation:
    dims = tuple(acts[0].rows for acts in action)
    v = Representation(groupoid, field, dims, tuple(tuple(a) for a in action))
    if validate:
        validate_rep(v)
    return v


def trivial_rep(x: Groupoid, field: Field = QQ, dim: int = 1) -> Representation:
    I = Matrix.identity(field, dim)
    return Representation(x, field, (dim,) * len(x), tuple((I,) * g.order for g in x.groups))


def unit_rep(x: Groupoid, field: Field = QQ) -> Representation:
    return trivial_rep(x, field, 1)


def zero_rep(x: Groupoid, field: Field = QQ) -> Representation:
    return trivial_rep(x, field, 0)


def regular_matrices(g: FiniteGroup, field: Field) -> tuple[Matrix, ...]:
    """Left regular action: a sends basis vector b to a*b."""
    return tuple(Matrix.permutation(field, g.table[a]) for a in g.elements)


def regular_rep(x: Groupoid, field: Field = QQ) -> Representation:
    return Representation(x, field, tuple(g.order for g in x.groups),
                          tuple(regular_matrices(g, field) for g in x.groups))


def rep_from_hom(x: Groupoid, field: Field, images: Sequence[Sequence[Matrix]]) -> Representation:
    """Build and validate a representation from per-object matrix tables."""
    return make_rep(x, field, images)


def restrict(f: GroupoidMap, v: Representation) -> Representation:
    """f*V: dims(x) = dims(f x), action_x(a) = action_{f x}(f a)."""
    if v.groupoid != f.target:
        raise DimensionMismatch("representation does not live on the map's target")
    return Representation(
        f.source, v.field,
        tuple(v.dims[y] for y in f.obj_map),
        tuple(tuple(v.action[y][b] for b in f.hom_maps[x]) for x, y in enumerate(f.obj_map)),
    )


def _same_base(v: Representation, w: Representation):
    if v.field != w.field:
        raise FieldMismatch(f"field mismatch {v.field!r} vs {w.field!r}")
    if v.groupoid != w.groupoid:
        raise DimensionMismatch("representations live on different groupoids")


def tensor(v: Representation, w: Representation) -> Representation:
    _same_base(v, w)
    return Representation(
        v.groupoid, v.field, tuple(a * b for a, b in zip(v.dims, w.dims)),
        tuple(tuple(kronecker(p, q) for p, q in zip(av, aw)) for av, aw in zip(v.action, w.action)),
    )


def tensor_many(*vs: Representation) -> Representation:
    return reduce(tensor, vs)


def dual(v: Representation) -> Representation:
    """Inverse-transpose action."""
    out = []
    for G, acts in zip(v.groupoid.groups, v.action):
        out.append(tuple(acts[G.inv(a)].transpose() for a in G.elements))
    return Representation(v.groupoid, v.field, v.dims, tuple(out))


def direct_sum(v: Representation, w: Representation) -> Representation:
    _same_base(v, w)
    return Representation(
        v.groupoid, v.field, tuple(a + b for a, b in zip(v.dims, w.dims)),
        tuple(tuple(block_diag(v.field, [p, q]) for p, q in zip(av, aw))
              for av, aw in zip(v.action, w.action)),
    )


def external_tensor(v: Representation, w: Representation) -> Representation:
    """V boxtimes W = p_X* V (x) p_Y* W on the product groupoid."""
    if v.field != w.field:
        raise FieldMismatch(f"field mismatch {v.field!r} vs {w.field!r}")
    prod = product_groupoid(v.groupoid, w.groupoid)
    return tensor(restrict(prod.proj_left, v), restrict(prod.proj_right, w))


def conjugate(v: Representation, basis: Sequence[Matrix]) -> Representation:
    """The representation P^-1 rho P for per-object invertible P."""
    out = []
    for P, acts in zip(basis, v.action):
        Pi = P.inverse()
        out.append(tuple(Pi @ a @ P for a in acts))
    return Representation(v.groupoid, v.field, v.dims, tuple(out))


# maps of representations ---------------------------------------------------

@dataclass(frozen=True)
class RepMap:
    source: Representation
    target: Representation
    components: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def __repr__(self) -> str:
        return f"RepMap({self.source.dims} -> {self.target.dims})"

    def __getitem__(self, x: int) -> Matrix:
        return self.components[x]

    def then(self, other: "RepMap") -> "RepMap":
        """Composite: self followed by other."""
        if self.target != other.source:
            raise DimensionMismatch(f"cannot compose {self!r} with {other!r}")
        return RepMap(self.source, other.target,
                      tuple(b @ a for a, b in zip(self.components, other.components)))

    def __matmul__(self, other: "RepMap") -> "RepMap":
        return other.then(self)

    def inverse(self) -> "RepMap":
        return RepMap(self.target, self.source, tuple(m.inverse() for m in self.components))

    def is_invertible(self) -> bool:
        return all(m.is_invertible() for m in self.components)

    def scale(self, s: Scalar) -> "RepMap":
        return RepMap(self.source, self.target, tuple(m.scale(s) for m in self.components))

    def __add__(self, other: "RepMap") -> "RepMap":
        if (self.source, self.target) != (other.source, other.target):
            raise DimensionMismatch("cannot add maps with different endpoints")
        return RepMap(self.source, self.target, tuple(a + b for a, b in zip(self.components, other.components)))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components)


def compose(*maps: RepMap) -> RepMap:
    """Diagrammatic-order composite: compose(a, b, c) is a then b then c."""
    return reduce(RepMap.then, maps)


def identity_map(v: Representation) -> RepMap:
    return RepMap(v, v, tuple(Matrix.identity(v.field, d) for d in v.dims))


def zero_map(v: Representation, w: Representation) -> RepMap:
    return RepMap(v, w, tuple(Matrix.zeros(v.field, b, a) for a, b in zip(v.dims, w.dims)))


def validate_rep_map(m: RepMap) -> None:
    v, w = m.source, m.target
    _same_base(v, w)
    for x, (G, c) in enumerate(zip(v.groupoid.groups, m.components)):
        if c.shape != (w.dims[x], v.dims[x]):
            raise NotNatural(f"component at object {x} has shape {c.shape}", x)
        for a in G.elements:
            if c @ v.action[x][a] != w.action[x][a] @ c:
                raise NotNatural(f"not an intertwiner at object {x}, element {a}", x, a)


def make_rep_map(v: Representation, w: Representation, components: Sequence[Matrix],
                 validate: bool = True) -> RepMap:
    m = RepMap(v, w, tuple(components))
    if validate:
        validate_rep_map(m)
    return m


def tensor_maps(m: RepMap, n: RepMap) -> RepMap:
    return RepMap(tensor(m.source, n.source), tensor(m.target, n.target),
                  tuple(kronecker(a, b) for a, b in zip(m.components, n.components)))


def external_tensor_maps(m: RepMap, n: RepMap) -> RepMap:
    prod = product_groupoid(m.source.groupoid, n.source.groupoid)
    return tensor_maps(restrict_map(prod.proj_left, m), restrict_map(prod.proj_right, n))


def direct_sum_maps(m: RepMap, n: RepMap) -> RepMap:
    F = m.source.field
    return RepMap(direct_sum(m.source, n.source), direct_sum(m.target, n.target),
                  tuple(block_diag(F, [a, b]) for a, b in zip(m.components, n.components)))


def restrict_map(f: GroupoidMap, m: RepMap) -> RepMap:
    """f* applied to a map of representations on f's target."""
    return RepMap(restrict(f, m.source), restrict(f, m.target),
                  tuple(m.components[y] for y in f.obj_map))


def nat_restrict(theta: GroupoidNatTransf, w: Representation) -> RepMap:
    """theta: f => f' induces f*W -> f'*W with components W(theta_x)."""
    f = theta.source_map
    return RepMap(restrict(f, w), restrict(theta.target_map, w),
                  tuple(w.action[f.obj_map[x]][c] for x, c in enumerate(theta.components)))


def swap_map(v: Representation, w: Representation) -> RepMap:
    """Symmetry v (x) w -> w (x) v."""
    return RepMap(tensor(v, w), tensor(w, v),
                  tuple(commutation_matrix(v.field, a, b) for a, b in zip(v.dims, w.dims)))


def coevaluation(v: Representation) -> RepMap:
    """unit -> V (x) V^d, 1 |-> sum_i e_i (x) e_i^*."""
    F = v.field
    comps = []
    for d in v.dims:
        comps.append(Matrix(F, d * d, 1, [[1 if i % (d + 1) == 0 else 0] for i in range(d * d)]))
    return RepMap(unit_rep(v.groupoid, F), tensor(v, dual(v)), tuple(comps))


def evaluation(v: Representation) -> RepMap:
    """V^d (x) V -> unit, e_i^* (x) e_j |-> delta_ij."""
    F = v.field
    comps = []
    for d in v.dims:
        comps.append(Matrix(F, 1, d * d, [[1 if i % (d + 1) == 0 else 0 for i in range(d * d)]]))
    return RepMap(tensor(dual(v), v), unit_rep(v.groupoid, F), tuple(comps))


def dimension_scalar(v: Representation, x: int) -> Scalar:
    """The trace of the identity: ev after swap after coev, read at object x."""
    m = compose(coevaluation(v), swap_map(v, dual(v)), evaluation(v))
    return m.components[x][0, 0]


def external_associator(x: Groupoid, y: Groupoid, z: Groupoid) -> GroupoidMap:
    """The canonical isomorphism (X x Y) x Z -> X x (Y x Z)."""
    left = product_groupoid(product_groupoid(x, y).groupoid, z).groupoid
    right = product_groupoid(x, product_groupoid(y, z).groupoid).groupoid
    # both products enumerate objects and group elements in the same lexicographic order
    return GroupoidMap(left, right, tuple(range(len(left))), tuple(tuple(g.elements) for g in left.groups))


def external_twist(x: Groupoid, y: Groupoid) -> GroupoidMap:
    """The canonical isomorphism X x Y -> Y x X."""
    src = product_groupoid(x, y).groupoid
    tgt = product_groupoid(y, x).groupoid
    obj_map, homs = [], []
    for i in range(len(x)):
        for j in range(len(y)):
            obj_map.append(j * len(x) + i)
            m, n = x.groups[i].order, y.groups[j].order
            homs.append(tuple((a % n) * m + a // n for a in range(m * n)))
    return GroupoidMap(src, tgt, tuple(obj_map), tuple(homs))


def external_twist_map(v: Representation, w: Representation) -> RepMap:
    """V boxtimes W -> t*(W boxtimes V) where t: X x Y -> Y x X."""
    t = external_twist(v.groupoid, w.groupoid)
    return RepMap(external_tensor(v, w), restrict(t, external_tensor(w, v)),
                  tuple(commutation_matrix(v.field, a, b) for a in v.dims for b in w.dims))


def point_rep(field: Field, dim: int) -> Representation:
    return trivial_rep(Groupoid.point(), field, dim)


def dual_map(m: RepMap) -> RepMap:
    """The transpose m^d: W^d -> V^d of m: V -> W."""
    return RepMap(dual(m.target), dual(m.source), tuple(c.transpose() for c in m.components))


def change_field(v: Representation, field: Field) -> Representation:
    """Reinterpret ``v`` over ``field``; rational entries are reduced mod p when field is F_p."""
    if v.field == field:
        return v
    if field.p == 0 or v.field.p not in (0, field.p):
        raise FieldMismatch(f"cannot move a representation from {v.field!r} to {field!r}")
    for acts in v.action:
        for m in acts:
            if any(getattr(x, "denominator", 1) % field.p == 0 for r in m.entries for x in r):
                raise FieldMismatch(f"an entry of the representation has {field.p} in its denominator")
    action = [[Matrix(field, m.rows, m.cols, [[field(x) for x in r] for r in m.entries]) for m in acts]
              for acts in v.action]
    return make_rep(v.groupoid, field, action)
