"""Left and right Kan extensions along maps of skeletal groupoids.

For f: X -> Y and a representation V of X,

    f_!V(y) = (+)_{x: fx=y} k[A_y] (x)_{k[A_x]} V(x)
    f_*V(y) = (+)_{x: fx=y} Hom_{k[A_x]}(k[A_y], V(x))

The left extension has one basis block per (x, left coset r f(A_x)), each a
copy of the coinvariants V(x)_{K_x}; the basis vector (x, r, v) is r (x) v.
The right extension has one block per (x, right coset f(A_x) s), each a copy
of the invariants V(x)^{K_x}; the basis vector (x, s, w) is the function
supported on f(A_x) s with value w at s.  K_x is the kernel of A_x -> A_{fx}.

Everything else here (units, counits, mates, projection maps, composition and
external-product isomorphisms) is built by composing these primitives, never
by shortcut formulas.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .groupoid import (
    GroupoidMap,
    GroupoidNatTransf,
    NonComposable,
    Pick,
    compose_maps,
    homotopy_pullback,
    product_map,
)
from .linalg import (
    DimensionMismatch,
    Field,
    Matrix,
    hstack,
    kernel_basis_with_coordinates,
    quotient_basis,
    vstack,
)
from .rep import (
    FieldMismatch,
    RepMap,
    Representation,
    compose,
    dual,
    dual_map,
    external_tensor,
    external_tensor_maps,
    identity_map,
    nat_restrict,
    restrict,
    restrict_map,
    tensor,
    tensor_maps,
    validate_rep,
)

LEFT, RIGHT = "left", "right"


class KanError(Exception):
    code = "kan"


class MalformedSquare(KanError, ValueError):
    code = "malformed_square"


@dataclass(frozen=True, eq=False)
class KanBlock:
    x: int
    coset_reps: tuple[int, ...]
    locate: dict  # g -> (coset index, a in A_x) with g = r f(a) (left) or g = f(a) s (right)
    reduce: Matrix  # left: V(x) -> V(x)_K ; right: coordinates V(x)^K <- V(x)
    lift: Matrix  # left: section V(x)_K -> V(x) ; right: inclusion V(x)^K -> V(x)
    offset: int
    width: int

    @property
    def size(self) -> int:
        return len(self.coset_reps) * self.width


@dataclass(frozen=True, eq=False)
class KanPackage:
    direction: str
    map: GroupoidMap
    input: Representation
    output: Representation
    blocks: tuple[tuple[KanBlock, ...], ...]

    def block_of(self, y: int, x: int) -> KanBlock:
        return next(b for b in self.blocks[y] if b.x == x)

    def term(self, y: int, x: int, g: int) -> tuple[int, Matrix]:
        """Left: (row offset, M) with g (x) v = M v placed at that offset.

        Right: (column offset, M) with phi_x(g) = M (coordinates at that offset).
        """
        b = self.block_of(y, x)
        i, a = b.locate[g]
        rho = self.input.action[x][a]
        if self.direction == LEFT:
            return b.offset + i * b.width, b.reduce @ rho
        return b.offset + i * b.width, rho @ b.lift

    def term_matrix(self, y: int, x: int, g: int) -> Matrix:
        """The term as a full matrix: V(x) -> out(y) (left) or out(y) -> V(x) (right)."""
        off, m = self.term(y, x, g)
        n = self.output.dims[y]
        if self.direction == LEFT:
            return _place(m.field, n, m.cols, [(off, 0, m)])
        return _place(m.field, m.rows, n, [(0, off, m)])

    def bookkeeping(self) -> list[list[dict]]:
        return [[{"x": b.x, "coset_reps": list(b.coset_reps), "offset": b.offset, "width": b.width,
                  "reduce": b.reduce, "lift": b.lift} for b in blocks] for blocks in self.blocks]


def _place(F: Field, rows: int, cols: int, pieces: Sequence[tuple[int, int, Matrix]]) -> Matrix:
    data = [[0] * cols for _ in range(rows)]
    for r0, c0, m in pieces:
        for i, row in enumerate(m.entries):
            data[r0 + i][c0:c0 + m.cols] = row
    return Matrix._trusted(F, rows, cols, tuple(map(tuple, data)))


def _relations(v: Representation, x: int, kernel: Sequence[int]) -> list[Matrix]:
    # (s w - 1) = (s - 1) w + (w - 1), so generators of K already span all relations
    n = v.dims[x]
    I = Matrix.identity(v.field, n)
    gens = v.groupoid.groups[x].generators_of(kernel)
    return [v.action[x][k] - I for k in gens]


def _build_blocks(direction: str, f: GroupoidMap, v: Representation, y: int, pick: Pick):
    Ay = f.target.groups[y]
    F = v.field
    blocks, offset = [], 0
    for x in f.fiber_objects(y):
        n = v.dims[x]
        H = f.image(x)
        sec = f.preimage_table(x)
        rels = _relations(v, x, f.kernel(x))
        if direction == LEFT:
            cosets = Ay.left_cosets(H, pick)
            sub = hstack(*rels) if rels else Matrix.zeros(F, n, 0)
            reduce, lift = quotient_basis(n, sub)
            width = reduce.rows
            locate = {}
            for i, (r, members) in enumerate(cosets):
                rinv = Ay.inv(r)
                for g in members:
                    locate[g] = (i, sec[Ay.table[rinv][g]])
        else:
            cosets = Ay.right_cosets(H, pick)
            if rels:
                lift, reduce = kernel_basis_with_coordinates(vstack(*rels))
            else:
                lift = reduce = Matrix.identity(F, n)
            width = lift.cols
            locate = {}
            for j, (s, members) in enumerate(cosets):
                sinv = Ay.inv(s)
                for g in members:
                    locate[g] = (j, sec[Ay.table[g][sinv]])
        reps = tuple(r for r, _ in cosets)
        blocks.append(KanBlock(x, reps, locate, reduce, lift, offset, width))
        offset += len(reps) * width
    return tuple(blocks), offset


def _kan(direction: str, f: GroupoidMap, v: Representation, pick: Pick, validate: bool) -> KanPackage:
    if v.groupoid != f.source:
        raise DimensionMismatch("representation does not live on the map's source")
    F = v.field
    all_blocks, dims = [], []
    for y in range(len(f.target)):
        blocks, dim = _build_blocks(direction, f, v, y, pick)
        all_blocks.append(blocks)
        dims.append(dim)
    pkg = KanPackage(direction, f, v, None, tuple(all_blocks))  # type: ignore[arg-type]
    action = []
    for y, Ay in enumerate(f.target.groups):
        mats = []
        for g in Ay.elements:
            pieces = []
            for b in all_blocks[y]:
                for i, r in enumerate(b.coset_reps):
                    if direction == LEFT:
                        ro, m = pkg.term(y, b.x, Ay.table[g][r])
                        pieces.append((ro, b.offset + i * b.width, m @ b.lift))
                    else:
                        co, m = pkg.term(y, b.x, Ay.table[r][g])
                        pieces.append((b.offset + i * b.width, co, b.reduce @ m))
            mats.append(_place(F, dims[y], dims[y], pieces))
        action.append(tuple(mats))
    out = Representation(f.target, F, tuple(dims), tuple(action))
    if validate:
        validate_rep(out)
    object.__setattr__(pkg, "output", out)
    return pkg


@lru_cache(maxsize=1 << 14)
def left_kan(f: GroupoidMap, v: Representation, pick: Pick = min, validate: bool = True) -> KanPackage:
    """Induction f_!V with full basis bookkeeping."""
    return _kan(LEFT, f, v, pick, validate)


@lru_cache(maxsize=1 << 14)
def right_kan(f: GroupoidMap, v: Representation, pick: Pick = min, validate: bool = True) -> KanPackage:
    """Coinduction f_*V with full basis bookkeeping."""
    return _kan(RIGHT, f, v, pick, validate)


def clear_caches() -> None:
    """Drop memoized Kan extensions (they can hold large matrices)."""
    left_kan.cache_clear()
    right_kan.cache_clear()


def lan(f: GroupoidMap, v: Representation) -> Representation:
    return left_kan(f, v).output


def ran(f: GroupoidMap, v: Representation) -> Representation:
    return right_kan(f, v).output


def kan(direction: str, f: GroupoidMap, v: Representation, pick: Pick = min) -> KanPackage:
    if direction not in (LEFT, RIGHT):
        raise ValueError(f"direction must be 'left' or 'right', not {direction!r}")
    return (left_kan if direction == LEFT else right_kan)(f, v, pick)


# units and counits ---------------------------------------------------------

def unit_left(f: GroupoidMap, v: Representation, pick: Pick = min) -> RepMap:
    """eta: V -> f* f_! V, v |-> 1 (x) v."""
    pkg = left_kan(f, v, pick)
    comps = tuple(pkg.term_matrix(y, x, 0) for x, y in enumerate(f.obj_map))
    return RepMap(v, restrict(f, pkg.output), comps)


def counit_left(f: GroupoidMap, w: Representation, pick: Pick = min) -> RepMap:
    """epsilon: f_! f* W -> W, g (x) w |-> g w."""
    fw = restrict(f, w)
    pkg = left_kan(f, fw, pick)
    comps = []
    for y, blocks in enumerate(pkg.blocks):
        pieces = []
        for b in blocks:
            for i, r in enumerate(b.coset_reps):
                pieces.append((0, b.offset + i * b.width, w.action[y][r] @ b.lift))
        comps.append(_place(w.field, w.dims[y], pkg.output.dims[y], pieces))
    return RepMap(pkg.output, w, tuple(comps))


def unit_right(f: GroupoidMap, w: Representation, pick: Pick = min) -> RepMap:
    """eta: W -> f_* f* W, w |-> sum_x phi_{w,x} with phi_{w,x}(g) = g w."""
    fw = restrict(f, w)
    pkg = right_kan(f, fw, pick)
    comps = []
    for y, blocks in enumerate(pkg.blocks):
        pieces = []
        for b in blocks:
            for j, s in enumerate(b.coset_reps):
                pieces.append((b.offset + j * b.width, 0, b.reduce @ w.action[y][s]))
        comps.append(_place(w.field, pkg.output.dims[y], w.dims[y], pieces))
    return RepMap(w, pkg.output, tuple(comps))


def counit_right(f: GroupoidMap, v: Representation, pick: Pick = min) -> RepMap:
    """epsilon: f* f_* V -> V, phi |-> phi_x(1)."""
    pkg = right_kan(f, v, pick)
    comps = tuple(pkg.term_matrix(y, x, 0) for x, y in enumerate(f.obj_map))
    return RepMap(restrict(f, pkg.output), v, comps)


def push_left(f: GroupoidMap, m: RepMap, pick: Pick = min) -> RepMap:
    """f_!(m) for m: V -> V'."""
    src, tgt = left_kan(f, m.source, pick), left_kan(f, m.target, pick)
    comps = []
    for y, blocks in enumerate(src.blocks):
        pieces = []
        for b in blocks:
            for i, r in enumerate(b.coset_reps):
                ro, t = tgt.term(y, b.x, r)
                pieces.append((ro, b.offset + i * b.width, t @ m.components[b.x] @ b.lift))
        comps.append(_place(m.source.field, tgt.output.dims[y], src.output.dims[y], pieces))
    return RepMap(src.output, tgt.output, tuple(comps))


def push_right(f: GroupoidMap, m: RepMap, pick: Pick = min) -> RepMap:
    """f_*(m) for m: V -> V'."""
    src, tgt = right_kan(f, m.source, pick), right_kan(f, m.target, pick)
    comps = []
    for y, blocks in enumerate(tgt.blocks):
        pieces = []
        for b in blocks:
            for j, s in enumerate(b.coset_reps):
                co, t = src.term(y, b.x, s)
                pieces.append((b.offset + j * b.width, co, b.reduce @ m.components[b.x] @ t))
        comps.append(_place(m.source.field, tgt.output.dims[y], src.output.dims[y], pieces))
    return RepMap(src.output, tgt.output, tuple(comps))


def push_transformation(direction: str, f: GroupoidMap, m: RepMap, pick: Pick = min) -> RepMap:
    return (push_left if direction == LEFT else push_right)(f, m, pick)


def rebase(src: KanPackage, tgt: KanPackage) -> RepMap:
    """Change of basis between two packages for the same extension (different coset choices)."""
    if src.direction != tgt.direction or src.map != tgt.map or src.input != tgt.input:
        raise ValueError("packages describe different extensions")
    F = src.input.field
    comps = []
    for y in range(len(src.map.target)):
        pieces = []
        if src.direction == LEFT:
            for b in src.blocks[y]:
                for i, r in enumerate(b.coset_reps):
                    ro, t = tgt.term(y, b.x, r)
                    pieces.append((ro, b.offset + i * b.width, t @ b.lift))
        else:
            for b in tgt.blocks[y]:
                for j, s in enumerate(b.coset_reps):
                    co, t = src.term(y, b.x, s)
                    pieces.append((b.offset + j * b.width, co, b.reduce @ t))
        comps.append(_place(F, tgt.output.dims[y], src.output.dims[y], pieces))
    return RepMap(src.output, tgt.output, tuple(comps))


# squares and mates ---------------------------------------------------------

@dataclass(frozen=True)
class SquareWitness:
    """A square of groupoid maps

        A --top--> A'
        |left      |right
        B --bottom-> B'

    filled by ``nat``: right.top => bottom.left when ``lax``, and
    bottom.left => right.top otherwise (oplax).
    """

    top: GroupoidMap
    left: GroupoidMap
    right: GroupoidMap
    bottom: GroupoidMap
    nat: GroupoidNatTransf
    lax: bool

    def __post_init__(self):
        try:
            ru = compose_maps(self.top, self.right)
            vp = compose_maps(self.left, self.bottom)
        except NonComposable as e:
            raise MalformedSquare(str(e)) from None
        want = (ru, vp) if self.lax else (vp, ru)
        if (self.nat.source_map, self.nat.target_map) != want:
            raise MalformedSquare("filling transformation does not match the square's composites")

    def inverted(self) -> "SquareWitness":
        return SquareWitness(self.top, self.left, self.right, self.bottom, self.nat.inverse(), not self.lax)

    def transposed(self) -> "SquareWitness":
        return SquareWitness(self.left, self.top, self.bottom, self.right, self.nat, not self.lax)


def identity_square(f: GroupoidMap) -> SquareWitness:
    """id on top and bottom, f on both sides."""
    ia, ib = GroupoidMap.identity(f.source), GroupoidMap.identity(f.target)
    return SquareWitness(ia, f, f, ib, GroupoidNatTransf.identity(f), True)


def pullback_square(g: GroupoidMap, h: GroupoidMap, pick: Pick = min) -> SquareWitness:
    """The oplax square P -q-> N, P -p-> M over M -g-> Y <-h- N, filled by pi: g p => h q."""
    pb = homotopy_pullback(g, h, pick)
    return SquareWitness(pb.q, pb.p, h, g, pb.pi, False)


def paste_horizontal(s1: SquareWitness, s2: SquareWitness) -> SquareWitness:
    """s1 on the left, s2 on the right, glued along s1.right == s2.left."""
    if s1.right != s2.left or s1.lax != s2.lax:
        raise MalformedSquare("squares do not paste horizontally")
    if s1.lax:
        nat = s2.nat.whisker_right(s1.top).then(s1.nat.whisker_left(s2.bottom))
    else:
        nat = s1.nat.whisker_left(s2.bottom).then(s2.nat.whisker_right(s1.top))
    return SquareWitness(compose_maps(s1.top, s2.top), s1.left, s2.right,
                         compose_maps(s1.bottom, s2.bottom), nat, s1.lax)


def left_mate(sq: SquareWitness, a: Representation) -> RepMap:
    """left_! top* A -> bottom* right_! A for A on the top-right corner (lax squares)."""
    if not sq.lax:
        raise MalformedSquare("left mate needs a lax square; use .inverted()")
    u, p, q, v = sq.top, sq.left, sq.right, sq.bottom
    qa = lan(q, a)
    s1 = push_left(p, restrict_map(u, unit_left(q, a)))
    s2 = push_left(p, nat_restrict(sq.nat, qa))
    s3 = counit_left(p, restrict(v, qa))
    return compose(s1, s2, s3)


def right_mate(sq: SquareWitness, a: Representation) -> RepMap:
    """bottom* right_* A -> left_* top* A for A on the top-right corner (oplax squares)."""
    if sq.lax:
        raise MalformedSquare("right mate needs an oplax square; use .inverted()")
    u, p, q, v = sq.top, sq.left, sq.right, sq.bottom
    qa = ran(q, a)
    s1 = unit_right(p, restrict(v, qa))
    s2 = push_right(p, nat_restrict(sq.nat, qa))
    s3 = push_right(p, restrict_map(u, counit_right(q, a)))
    return compose(s1, s2, s3)


# projection formulas -------------------------------------------------------

def proj_lambda(f: GroupoidMap, a: Representation, b: Representation) -> RepMap:
    """lambda: f_!(A (x) f*B) -> f_!A (x) B, the left mate of the monoidal structure of f*."""
    step = push_left(f, tensor_maps(unit_left(f, a), identity_map(restrict(f, b))))
    return step.then(counit_left(f, tensor(lan(f, a), b)))


def proj_rho(f: GroupoidMap, a: Representation, b: Representation) -> RepMap:
    """rho: A (x) f_*B -> f_*(f*A (x) B), the right mate of the monoidal structure of f*."""
    step = unit_right(f, tensor(a, ran(f, b)))
    return step.then(push_right(f, tensor_maps(identity_map(restrict(f, a)), counit_right(f, b))))


def right_kan_via_duals(f: GroupoidMap, v: Representation) -> tuple[Representation, RepMap]:
    """(f_! V^d)^d with the comparison isomorphism to f_*V built from the adjunction chain."""
    g = dual(lan(f, dual(v)))
    counit = dual_map(unit_left(f, dual(v)))  # f* (f_! V^d)^d -> V
    iso = unit_right(f, g).then(push_right(f, counit))
    return g, iso


# composition isomorphisms --------------------------------------------------

def kan_composition_iso(direction: str, f: GroupoidMap, g: GroupoidMap, v: Representation) -> RepMap:
    """(g f)-extension of V -> g-extension of the f-extension of V."""
    if f.target != g.source:
        raise NonComposable(f"{f!r} then {g!r}")
    gf = compose_maps(f, g)
    if direction == LEFT:
        fv = lan(f, v)
        s1 = push_left(gf, unit_left(f, v))
        s2 = push_left(gf, restrict_map(f, unit_left(g, fv)))
        s3 = counit_left(gf, lan(g, fv))
        return compose(s1, s2, s3)
    w = ran(gf, v)
    s1 = unit_right(g, w)
    s2 = push_right(g, unit_right(f, restrict(g, w)))
    s3 = push_right(g, push_right(f, counit_right(gf, v)))
    return compose(s1, s2, s3)


def kan_composition_iso_inverse(direction: str, f: GroupoidMap, g: GroupoidMap, v: Representation) -> RepMap:
    """g-extension of the f-extension of V -> (g f)-extension, by the transposed construction."""
    if f.target != g.source:
        raise NonComposable(f"{f!r} then {g!r}")
    gf = compose_maps(f, g)
    if direction == LEFT:
        w = lan(gf, v)
        s1 = push_left(g, push_left(f, unit_left(gf, v)))
        s2 = push_left(g, counit_left(f, restrict(g, w)))
        s3 = counit_left(g, w)
        return compose(s1, s2, s3)
    fv = ran(f, v)
    s1 = unit_right(gf, ran(g, fv))
    s2 = push_right(gf, restrict_map(f, counit_right(g, fv)))
    s3 = push_right(gf, counit_right(f, v))
    return compose(s1, s2, s3)


# external tensor compatibility ---------------------------------------------

def mu_left(f: GroupoidMap, g: GroupoidMap, a: Representation, b: Representation) -> RepMap:
    """(f x g)_!(A boxtimes B) -> f_!A boxtimes g_!B."""
    if a.field != b.field:
        raise FieldMismatch(f"field mismatch {a.field!r} vs {b.field!r}")
    fg = product_map(f, g)
    step = push_left(fg, external_tensor_maps(unit_left(f, a), unit_left(g, b)))
    return step.then(counit_left(fg, external_tensor(lan(f, a), lan(g, b))))


def mu_right_inverse(f: GroupoidMap, g: GroupoidMap, a: Representation, b: Representation) -> RepMap:
    """f_*A boxtimes g_*B -> (f x g)_*(A boxtimes B), the right mate."""
    if a.field != b.field:
        raise FieldMismatch(f"field mismatch {a.field!r} vs {b.field!r}")
    fg = product_map(f, g)
    step = unit_right(fg, external_tensor(ran(f, a), ran(g, b)))
    return step.then(push_right(fg, external_tensor_maps(counit_right(f, a), counit_right(g, b))))


def mu_right(f: GroupoidMap, g: GroupoidMap, a: Representation, b: Representation) -> RepMap:
    """(f x g)_*(A boxtimes B) -> f_*A boxtimes g_*B."""
    return mu_right_inverse(f, g, a, b).inverse()
