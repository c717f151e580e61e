"""Skeletal essentially finite groupoids, their maps, fibers and pullbacks.

A skeletal groupoid is a finite list of objects, each carrying a finite group
given by its Cayley table; there are no morphisms between distinct objects.
Group elements are indices ``0..n-1`` with ``0`` the identity, and
``table[a][b]`` is the composite "a after b".
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

Pick = Callable[[Sequence[int]], int]


class GroupoidError(Exception):
    code = "groupoid"


class NotAGroup(GroupoidError, ValueError):
    code = "not_a_group"


class NotAHomomorphism(GroupoidError, ValueError):
    code = "not_a_homomorphism"


class UnknownObject(GroupoidError, KeyError):
    code = "unknown_object"


class NonComposable(GroupoidError, ValueError):
    code = "non_composable"


class TargetMismatch(GroupoidError, ValueError):
    code = "target_mismatch"


class NotNatural(GroupoidError, ValueError):
    code = "not_natural"


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(r) for r in self.table))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(next(b for b in range(self.order) if self.table[a][b] == 0)
                     for a in range(self.order))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A greedy generating set: each element added is outside the span of the earlier ones."""
        gens: list[int] = []
        span = {0}
        for a in self.elements:
            if a not in span:
                gens.append(a)
                span = _closure(self, gens)
        return tuple(gens)

    def generators_of(self, elements: Iterable[int]) -> tuple[int, ...]:
        """A greedy generating set of the subgroup with the given elements."""
        gens: list[int] = []
        span = {0}
        for a in sorted(set(elements)):
            if a not in span:
                gens.append(a)
                span = _closure(self, gens)
        return tuple(gens)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    @property
    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements for b in self.elements)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    # constructors ----------------------------------------------------------

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls(1, ((0,),))

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise ValueError("cyclic group order must be positive")
        return cls(n, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]]) -> "FiniteGroup":
        """Group of the given permutations (must be closed); the identity must come first.

        Composition is ``(a*b)(i) = a(b(i))``.
        """
        perms = [tuple(p) for p in perms]
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(a[b[i]] for i in range(len(a)))] for b in perms] for a in perms]
        return cls(len(perms), tuple(map(tuple, table)))

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        return cls.from_permutations(sorted(itertools.permutations(range(n))))

    def direct_product(self, other: "FiniteGroup") -> "FiniteGroup":
        """Lexicographic elements: ``(a, b) -> a * |other| + b``."""
        m = other.order
        n = self.order * m
        table = [[self.table[i // m][j // m] * m + other.table[i % m][j % m] for j in range(n)]
                 for i in range(n)]
        return FiniteGroup(n, tuple(map(tuple, table)))

    def subgroup(self, elements: Iterable[int]) -> tuple["FiniteGroup", tuple[int, ...]]:
        """Re-index a subgroup as a group of its own, with its embedding (sorted, identity first)."""
        elems = tuple(sorted(set(elements)))
        index = {e: i for i, e in enumerate(elems)}
        table = tuple(tuple(index[self.table[a][b]] for b in elems) for a in elems)
        return FiniteGroup(len(elems), table), elems

    # cosets ----------------------------------------------------------------

    def left_cosets(self, sub: Iterable[int], pick: Pick = min) -> list[tuple[int, tuple[int, ...]]]:
        """Left cosets gH as (representative, sorted members), ordered by minimal member."""
        sub = tuple(sub)
        seen, out = set(), []
        for g in self.elements:
            if g in seen:
                continue
            members = tuple(sorted({self.table[g][h] for h in sub}))
            seen.update(members)
            out.append((pick(members), members))
        return out

    def right_cosets(self, sub: Iterable[int], pick: Pick = min) -> list[tuple[int, tuple[int, ...]]]:
        """Right cosets Hg as (representative, sorted members), ordered by minimal member."""
        sub = tuple(sub)
        seen, out = set(), []
        for g in self.elements:
            if g in seen:
                continue
            members = tuple(sorted({self.table[h][g] for h in sub}))
            seen.update(members)
            out.append((pick(members), members))
        return out


def validate_group(g: FiniteGroup) -> None:
    """Raise NotAGroup naming a failing witness, or return None."""
    n, t = g.order, g.table
    if n < 1 or len(t) != n or any(len(r) != n for r in t):
        raise NotAGroup(f"table is not {n}x{n}")
    for i in range(n):
        for j in range(n):
            if not 0 <= t[i][j] < n:
                raise NotAGroup(f"entry table[{i}][{j}]={t[i][j]} out of range")
    for j in range(n):
        if t[0][j] != j or t[j][0] != j:
            raise NotAGroup(f"index 0 is not an identity (fails at {j})")
    for i, j, k in itertools.product(range(n), repeat=3):
        if t[t[i][j]][k] != t[i][t[j][k]]:
            raise NotAGroup(f"associativity fails at ({i}, {j}, {k})")
    for i in range(n):
        if not any(t[i][j] == 0 and t[j][i] == 0 for j in range(n)):
            raise NotAGroup(f"element {i} has no two-sided inverse")


@dataclass(frozen=True)
class Groupoid:
    objects: tuple[str, ...]
    groups: tuple[FiniteGroup, ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "groups", tuple(self.groups))
        if len(self.objects) != len(self.groups):
            raise ValueError("objects and groups differ in length")
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("object names must be distinct")

    def __len__(self) -> int:
        return len(self.objects)

    def __repr__(self) -> str:
        body = ", ".join(f"{o}:{g.order}" for o, g in zip(self.objects, self.groups))
        return f"Groupoid({body})"

    def index(self, name: str) -> int:
        try:
            return self.objects.index(name)
        except ValueError:
            raise UnknownObject(name) from None

    def group(self, x: int) -> FiniteGroup:
        return self.groups[x]

    @classmethod
    def point(cls, name: str = "*") -> "Groupoid":
        return cls((name,), (FiniteGroup.trivial(),))

    @classmethod
    def BG(cls, g: FiniteGroup, name: str = "*") -> "Groupoid":
        return cls((name,), (g,))

    @classmethod
    def discrete(cls, names: Sequence[str]) -> "Groupoid":
        return cls(tuple(names), tuple(FiniteGroup.trivial() for _ in names))

    def disjoint_union(self, other: "Groupoid") -> "Groupoid":
        return Groupoid(self.objects + other.objects, self.groups + other.groups)


def cardinality(x: Groupoid) -> Fraction:
    """Sum over objects of 1/|A_x|."""
    return sum((Fraction(1, g.order) for g in x.groups), Fraction(0))


@dataclass(frozen=True)
class GroupoidMap:
    """A functor between skeletal groupoids: object map plus per-object homomorphisms."""

    source: Groupoid
    target: Groupoid
    obj_map: tuple[int, ...]
    hom_maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "obj_map", tuple(self.obj_map))
        object.__setattr__(self, "hom_maps", tuple(tuple(h) for h in self.hom_maps))
        self._validate()

    def _validate(self):
        if len(self.obj_map) != len(self.source) or len(self.hom_maps) != len(self.source):
            raise NotAHomomorphism("object or hom table has the wrong length")
        for x, (y, h) in enumerate(zip(self.obj_map, self.hom_maps)):
            if not 0 <= y < len(self.target):
                raise UnknownObject(f"object {x} maps to missing target object {y}")
            G, H = self.source.groups[x], self.target.groups[y]
            if len(h) != G.order or any(not 0 <= v < H.order for v in h):
                raise NotAHomomorphism(f"hom table at {self.source.objects[x]} malformed")
            if h[0] != 0:
                raise NotAHomomorphism(f"identity not preserved at {self.source.objects[x]}")
            for a in G.elements:
                for b in G.elements:
                    if h[G.table[a][b]] != H.table[h[a]][h[b]]:
                        raise NotAHomomorphism(
                            f"multiplication not preserved at {self.source.objects[x]}: ({a}, {b})")

    def __repr__(self) -> str:
        return f"GroupoidMap({self.source!r} -> {self.target!r}, {self.obj_map})"

    def __call__(self, x: int, a: int) -> int:
        return self.hom_maps[x][a]

    @classmethod
    def identity(cls, x: Groupoid) -> "GroupoidMap":
        return cls(x, x, tuple(range(len(x))), tuple(tuple(g.elements) for g in x.groups))

    @classmethod
    def terminal(cls, x: Groupoid, point: Groupoid | None = None) -> "GroupoidMap":
        point = Groupoid.point() if point is None else point
        return cls(x, point, (0,) * len(x), tuple((0,) * g.order for g in x.groups))

    @classmethod
    def from_point(cls, y: Groupoid, obj: int, point: Groupoid | None = None) -> "GroupoidMap":
        point = Groupoid.point() if point is None else point
        return cls(point, y, (obj,), ((0,),))

    @classmethod
    def from_hom(cls, g: FiniteGroup, h: FiniteGroup, table: Sequence[int],
                 names: tuple[str, str] = ("*", "*")) -> "GroupoidMap":
        return cls(Groupoid.BG(g, names[0]), Groupoid.BG(h, names[1]), (0,), (tuple(table),))

    def image(self, x: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.hom_maps[x])))

    def kernel(self, x: int) -> tuple[int, ...]:
        return tuple(a for a, v in enumerate(self.hom_maps[x]) if v == 0)

    def preimage_table(self, x: int) -> dict[int, int]:
        """Section of A_x -> f(A_x): each image element to its minimal preimage."""
        out: dict[int, int] = {}
        for a, v in enumerate(self.hom_maps[x]):
            out.setdefault(v, a)
        return out

    def fiber_objects(self, y: int) -> tuple[int, ...]:
        return tuple(x for x, fx in enumerate(self.obj_map) if fx == y)


def compose_maps(f: GroupoidMap, g: GroupoidMap) -> GroupoidMap:
    """The composite g after f."""
    if f.target != g.source:
        raise NonComposable(f"{f!r} then {g!r}")
    return GroupoidMap(
        f.source, g.target,
        tuple(g.obj_map[y] for y in f.obj_map),
        tuple(tuple(g.hom_maps[f.obj_map[x]][v] for v in f.hom_maps[x]) for x in range(len(f.source))),
    )


@dataclass(frozen=True)
class GroupoidNatTransf:
    """phi: f => f' with component phi_x in A_{f(x)}; phi_x f(a) = f'(a) phi_x."""

    source_map: GroupoidMap
    target_map: GroupoidMap
    components: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        f, f2 = self.source_map, self.target_map
        if f.source != f2.source or f.target != f2.target:
            raise NotNatural("maps have different source or target")
        if f.obj_map != f2.obj_map:
            raise NotNatural("object maps differ (skeletal naturality needs equality)")
        for x, phi in enumerate(self.components):
            H = f.target.groups[f.obj_map[x]]
            for a in f.source.groups[x].elements:
                if H.table[phi][f(x, a)] != H.table[f2(x, a)][phi]:
                    raise NotNatural(f"naturality fails at object {x}, element {a}")

    @classmethod
    def identity(cls, f: GroupoidMap) -> "GroupoidNatTransf":
        return cls(f, f, (0,) * len(f.source))

    def inverse(self) -> "GroupoidNatTransf":
        f = self.source_map
        comps = tuple(f.target.groups[f.obj_map[x]].inv(c) for x, c in enumerate(self.components))
        return GroupoidNatTransf(self.target_map, self.source_map, comps)

    def then(self, other: "GroupoidNatTransf") -> "GroupoidNatTransf":
        """Vertical composite: self followed by other."""
        if self.target_map != other.source_map:
            raise NonComposable("natural transformations do not compose")
        f = self.source_map
        comps = tuple(f.target.groups[f.obj_map[x]].table[b][a]
                      for x, (a, b) in enumerate(zip(self.components, other.components)))
        return GroupoidNatTransf(self.source_map, other.target_map, comps)

    def whisker_left(self, k: GroupoidMap) -> "GroupoidNatTransf":
        """k applied after: k f => k f'."""
        f = self.source_map
        comps = tuple(k(f.obj_map[x], c) for x, c in enumerate(self.components))
        return GroupoidNatTransf(compose_maps(f, k), compose_maps(self.target_map, k), comps)

    def whisker_right(self, u: GroupoidMap) -> "GroupoidNatTransf":
        """u applied before: f u => f' u."""
        comps = tuple(self.components[u.obj_map[w]] for w in range(len(u.source)))
        return GroupoidNatTransf(compose_maps(u, self.source_map), compose_maps(u, self.target_map), comps)


# homotopy fibers -----------------------------------------------------------

@dataclass(frozen=True)
class FiberComponent:
    x: int
    coset_rep: int
    coset: tuple[int, ...]
    isotropy: FiniteGroup
    inclusion: tuple[int, ...]


@dataclass(frozen=True)
class FiberData:
    base_point: int
    components: tuple[FiberComponent, ...]


def homotopy_fiber(f: GroupoidMap, y: int, pick: Pick = min) -> FiberData:
    """Components of the fiber at y: pairs (x, left coset of f(A_x) in A_y)."""
    if not 0 <= y < len(f.target):
        raise UnknownObject(f"target has no object {y}")
    Ay = f.target.groups[y]
    comps = []
    for x in f.fiber_objects(y):
        iso, inc = f.source.groups[x].subgroup(f.kernel(x))
        for rep, members in Ay.left_cosets(f.image(x), pick):
            comps.append(FiberComponent(x, rep, members, iso, inc))
    return FiberData(y, tuple(comps))


def fiber_cardinality(fd: FiberData) -> Fraction:
    return sum((Fraction(1, c.isotropy.order) for c in fd.components), Fraction(0))


# products and pullbacks ----------------------------------------------------

@dataclass(frozen=True)
class Product:
    groupoid: Groupoid
    proj_left: GroupoidMap
    proj_right: GroupoidMap


def product_groupoid(x: Groupoid, y: Groupoid) -> Product:
    """X x Y with objects ordered pairs (x-major) and direct-product groups."""
    objs, groups, pairs = [], [], []
    for i, (ox, gx) in enumerate(zip(x.objects, x.groups)):
        for j, (oy, gy) in enumerate(zip(y.objects, y.groups)):
            objs.append(f"({ox},{oy})")
            groups.append(gx.direct_product(gy))
            pairs.append((i, j))
    xy = Groupoid(tuple(objs), tuple(groups))
    px = GroupoidMap(xy, x, tuple(i for i, _ in pairs),
                     tuple(tuple(a // y.groups[j].order for a in range(g.order))
                           for (i, j), g in zip(pairs, groups)))
    py = GroupoidMap(xy, y, tuple(j for _, j in pairs),
                     tuple(tuple(a % y.groups[j].order for a in range(g.order))
                           for (i, j), g in zip(pairs, groups)))
    return Product(xy, px, py)


def product_map(f: GroupoidMap, g: GroupoidMap) -> GroupoidMap:
    """f x g between the canonical product groupoids."""
    src = product_groupoid(f.source, g.source).groupoid
    tgt = product_groupoid(f.target, g.target).groupoid
    nt = len(g.target)
    obj_map, homs = [], []
    for i in range(len(f.source)):
        for j in range(len(g.source)):
            fi, gj = f.obj_map[i], g.obj_map[j]
            obj_map.append(fi * nt + gj)
            m_src = g.source.groups[j].order
            m_tgt = g.target.groups[gj].order
            homs.append(tuple(f(i, a // m_src) * m_tgt + g(j, a % m_src)
                              for a in range(f.source.groups[i].order * m_src)))
    return GroupoidMap(src, tgt, tuple(obj_map), tuple(homs))


@dataclass(frozen=True)
class Pullback:
    """Skeletal homotopy pullback P with p: P->M, q: P->N and pi: g p => h q."""

    groupoid: Groupoid
    p: GroupoidMap
    q: GroupoidMap
    pi: GroupoidNatTransf
    # per object of P: (m, n, representative, embedding into A_m x A_n as pairs)
    data: tuple[tuple[int, int, int, tuple[tuple[int, int], ...]], ...] = field(repr=False)


def double_cosets(Ay: FiniteGroup, left: Sequence[int], right: Sequence[int]) -> list[tuple[int, ...]]:
    """Orbits of left x right on A_y by (b, a) . phi = b phi a^-1, ordered by minimal member."""
    seen, out = set(), []
    for phi in Ay.elements:
        if phi in seen:
            continue
        orbit = tuple(sorted({Ay.table[Ay.table[b][phi]][Ay.inv(a)] for b in left for a in right}))
        seen.update(orbit)
        out.append(orbit)
    return out


def homotopy_pullback(g: GroupoidMap, h: GroupoidMap, pick: Pick = min) -> Pullback:
    """Skeletalized homotopy pullback of M -g-> Y <-h- N.

    Objects are triples (m, n, [phi]) with phi: g(m) -> h(n) up to the double
    coset h(A_n) phi g(A_m); automorphisms are pairs (a, b) with
    h(b) phi = phi g(a).
    """
    if g.target != h.target:
        raise TargetMismatch(f"{g!r} and {h!r} have different targets")
    M, N, Y = g.source, h.source, g.target
    names, groups, data = [], [], []
    for m in range(len(M)):
        for n in range(len(N)):
            y = g.obj_map[m]
            if h.obj_map[n] != y:
                continue
            Ay, Am, An = Y.groups[y], M.groups[m], N.groups[n]
            for orbit in double_cosets(Ay, h.image(n), g.image(m)):
                phi = pick(orbit)
                stab = [(a, b) for a in Am.elements for b in An.elements
                        if Ay.table[h(n, b)][phi] == Ay.table[phi][g(m, a)]]
                codes = sorted(a * An.order + b for a, b in stab)
                prod = Am.direct_product(An)
                sub, emb = prod.subgroup(codes)
                names.append(f"({M.objects[m]},{N.objects[n]},{phi})")
                groups.append(sub)
                data.append((m, n, phi, tuple((c // An.order, c % An.order) for c in emb)))
    P = Groupoid(tuple(names), tuple(groups))
    p = GroupoidMap(P, M, tuple(d[0] for d in data), tuple(tuple(a for a, _ in d[3]) for d in data))
    q = GroupoidMap(P, N, tuple(d[1] for d in data), tuple(tuple(b for _, b in d[3]) for d in data))
    pi = GroupoidNatTransf(compose_maps(p, g), compose_maps(q, h), tuple(d[2] for d in data))
    return Pullback(P, p, q, pi, tuple(data))


def fiber_groupoid(f: GroupoidMap, y: int, pick: Pick = min) -> Pullback:
    """The homotopy fiber at y as a pullback of * -y-> Y <-f- X."""
    return homotopy_pullback(GroupoidMap.from_point(f.target, y), f, pick)


def enumerate_homomorphisms(g: FiniteGroup, h: FiniteGroup) -> list[tuple[int, ...]]:
    """All homomorphisms g -> h as image tables, in lexicographic order of generator images."""
    gens: list[int] = []
    span = {0}
    for a in g.elements:
        if a not in span:
            gens.append(a)
            span = _closure(g, gens)
    homs = []
    for images in itertools.product(h.elements, repeat=len(gens)):
        table = _extend(g, h, gens, images)
        if table is not None:
            homs.append(table)
    return sorted(homs)


def _closure(g: FiniteGroup, gens: Sequence[int]) -> set[int]:
    span, frontier = {0}, [0]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = g.table[a][s]
                if b not in span:
                    span.add(b)
                    nxt.append(b)
        frontier = nxt
    return span


def _extend(g: FiniteGroup, h: FiniteGroup, gens, images) -> tuple[int, ...] | None:
    table = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for s, t in zip(gens, images):
                b = g.table[a][s]
                v = h.table[table[a]][t]
                if b in table:
                    if table[b] != v:
                        return None
                else:
                    table[b] = v
                    nxt.append(b)
        frontier = nxt
    out = tuple(table[a] for a in g.elements)
    for a in g.elements:
        for b in g.elements:
            if out[g.table[a][b]] != h.table[out[a]][out[b]]:
                return None
    return out
