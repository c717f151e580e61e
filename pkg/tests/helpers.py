"""Shared strategies and independent oracles for the test suite.

The oracles here avoid the library's coset/kernel machinery: they work on the
unskeletalized fiber (one summand per pair (x, h) with h in A_y) and do their
own row reduction.
"""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from grpquant.corpus import matrix_groups
from grpquant.famquant import FamObject, Span, make_span
from grpquant.groupoid import FiniteGroup, Groupoid, GroupoidMap, enumerate_homomorphisms
from grpquant.linalg import GF, QQ, Field, Matrix, kernel_basis
from grpquant.rep import Representation, conjugate, direct_sum, make_rep, restrict, unit_rep

SMALL_GROUPS = {
    "C1": FiniteGroup.cyclic(1),
    "C2": FiniteGroup.cyclic(2),
    "C3": FiniteGroup.cyclic(3),
    "C4": FiniteGroup.cyclic(4),
    "C2xC2": FiniteGroup.cyclic(2).direct_product(FiniteGroup.cyclic(2)),
}
MEDIUM_GROUPS = {**SMALL_GROUPS, "C6": FiniteGroup.cyclic(6), "S3": FiniteGroup.symmetric(3)}
FIELDS = (QQ, GF(2), GF(3), GF(5), GF(7))


# independent row reduction -------------------------------------------------

def rank(rows: list[list], p: int = 0) -> int:
    """Rank by plain Gaussian elimination over Q (p = 0) or F_p."""
    m = [[Fraction(x) if p == 0 else x % p for x in r] for r in rows]
    rk, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = (1 / m[rk][c]) if p == 0 else pow(m[rk][c], -1, p)
        m[rk] = [x * inv if p == 0 else x * inv % p for x in m[rk]]
        for i in range(len(m)):
            if i != rk and m[i][c] != 0:
                k = m[i][c]
                m[i] = [a - k * b if p == 0 else (a - k * b) % p for a, b in zip(m[i], m[rk])]
        rk += 1
    return rk


# brute-force (co)limit oracle ----------------------------------------------

def _fiber_index(f: GroupoidMap, v: Representation, y: int):
    Ay = f.target.groups[y]
    offs, n = {}, 0
    for x in f.fiber_objects(y):
        for h in Ay.elements:
            offs[(x, h)] = n
            n += v.dims[x]
    return offs, n


def _relations(f: GroupoidMap, v: Representation, y: int):
    """Rows e_{(x,h)} (x) u - e_{(x, h f(a)^-1)} (x) rho(a) u over every a and basis vector u."""
    Ay = f.target.groups[y]
    offs, n = _fiber_index(f, v, y)
    rows = []
    for x in f.fiber_objects(y):
        Ax = f.source.groups[x]
        d = v.dims[x]
        for h in Ay.elements:
            for a in Ax.elements:
                h2 = Ay.table[h][Ay.inv(f(x, a))]
                m = v.action[x][a]
                for j in range(d):
                    row = [0] * n
                    row[offs[(x, h)] + j] += 1
                    for i in range(d):
                        row[offs[(x, h2)] + i] -= m[i, j]
                    rows.append(row)
    return rows, n


def colimit_dim(f: GroupoidMap, v: Representation, y: int) -> int:
    """dim of the colimit of V over the comma groupoid f/y, as a coequalizer."""
    rows, n = _relations(f, v, y)
    return n - (rank(rows, v.field.p) if rows else 0)


def limit_dim(f: GroupoidMap, v: Representation, y: int) -> int:
    """dim of the limit of V over y/f: families with phi_{(x, h f(a)^-1)} = rho(a) phi_{(x,h)}."""
    Ay = f.target.groups[y]
    offs, n = _fiber_index(f, v, y)
    rows = []
    for x in f.fiber_objects(y):
        Ax = f.source.groups[x]
        d = v.dims[x]
        for h in Ay.elements:
            for a in Ax.elements:
                h2 = Ay.table[h][Ay.inv(f(x, a))]
                m = v.action[x][a]
                for i in range(d):
                    row = [0] * n
                    row[offs[(x, h2)] + i] += 1
                    for j in range(d):
                        row[offs[(x, h)] + j] -= m[i, j]
                    rows.append(row)
    return n - (rank(rows, v.field.p) if rows else 0)


# character oracles ---------------------------------------------------------

def trivial_multiplicity(G: FiniteGroup, mats) -> Fraction:
    """(1/|G|) sum_g trace rho(g) over Q."""
    return sum((Fraction(m.trace()) for m in mats), Fraction(0)) / G.order


def induced_character(f: GroupoidMap, v: Representation, y: int, g: int) -> Fraction:
    """Character of f_!V at g in A_y: (1/|A_x|) sum_{h in A_y} sum_{a: f(a) = h^-1 g h} tr rho(a)."""
    Ay = f.target.groups[y]
    total = Fraction(0)
    for x in f.fiber_objects(y):
        Ax = f.source.groups[x]
        s = Fraction(0)
        for h in Ay.elements:
            c = Ay.table[Ay.table[Ay.inv(h)][g]][h]
            s += sum(Fraction(v.action[x][a].trace()) for a in Ax.elements if f(x, a) == c)
        total += s / Ax.order
    return total


# random data ---------------------------------------------------------------

def random_rep(X: Groupoid, F: Field, rng: random.Random, max_dim: int = 3) -> Representation:
    """Pull back a small matrix group along a random hom, maybe add a trivial summand, conjugate."""
    mg = list(matrix_groups(F).items())
    action = []
    for G in X.groups:
        choices = []
        for _, (T, mats) in mg:
            if mats[0].rows <= max_dim:
                for h in enumerate_homomorphisms(G, T):
                    choices.append([mats[b] for b in h])
        choices.append([Matrix.identity(F, 1)] * G.order)
        if rng.random() < 0.15:
            choices.append([Matrix.identity(F, 0)] * G.order)
        acts = rng.choice(choices)
        single = Groupoid.BG(G)
        w = make_rep(single, F, [acts])
        if w.dims[0] < max_dim and rng.random() < 0.4:
            w = direct_sum(unit_rep(single, F), w)
        d = w.dims[0]
        if d:
            while True:
                P = Matrix.from_rows(F, [[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
                if P.is_invertible():
                    break
            w = conjugate(w, [P])
        action.append(w.action[0])
    return make_rep(X, F, action)


def random_map(X: Groupoid, Y: Groupoid, rng: random.Random) -> GroupoidMap:
    objs, homs = [], []
    for G in X.groups:
        y = rng.randrange(len(Y))
        objs.append(y)
        homs.append(rng.choice(enumerate_homomorphisms(G, Y.groups[y])))
    return GroupoidMap(X, Y, tuple(objs), tuple(homs))


def random_groupoid(rng: random.Random, groups=SMALL_GROUPS, max_objects: int = 2) -> Groupoid:
    k = rng.randint(1, max_objects)
    names = sorted(groups)
    return Groupoid(tuple(f"o{i}" for i in range(k)), tuple(groups[rng.choice(names)] for _ in range(k)))


def random_intertwiner(v: Representation, w: Representation, rng: random.Random):
    """A random element of Hom(V, W) over the groupoid, from an exact basis of intertwiners."""
    F = v.field
    comps = []
    for x, G in enumerate(v.groupoid.groups):
        m, n = w.dims[x], v.dims[x]
        # unknown c (m x n, row-major); equations c V(a) - W(a) c = 0
        rows = []
        for a in G.elements:
            A, B = v.action[x][a], w.action[x][a]
            for i in range(m):
                for j in range(n):
                    row = [0] * (m * n)
                    for k in range(n):
                        row[i * n + k] = F.add(row[i * n + k], A[k, j])
                    for k in range(m):
                        row[k * n + j] = F.sub(row[k * n + j], B[i, k])
                    rows.append(row)
        if m * n == 0:
            comps.append(Matrix.zeros(F, m, n))
            continue
        K = kernel_basis(Matrix.from_rows(F, rows, m * n)) if rows else Matrix.identity(F, m * n)
        vec = [0] * (m * n)
        for c in range(K.cols):
            coef = F(rng.randint(-2, 2))
            for r in range(m * n):
                vec[r] = F.add(vec[r], F.mul(coef, K[r, c]))
        comps.append(Matrix(F, m, n, [vec[i * n:(i + 1) * n] for i in range(m)]))
    return comps


def random_object(rng: random.Random, F: Field = QQ, groups=SMALL_GROUPS, max_dim: int = 2) -> FamObject:
    X = random_groupoid(rng, groups)
    return FamObject.of(random_rep(X, F, rng, max_dim))


def random_span(src: FamObject, tgt: FamObject, rng: random.Random, groups=SMALL_GROUPS) -> Span:
    M = random_groupoid(rng, groups)
    f = random_map(M, src.groupoid, rng)
    g = random_map(M, tgt.groupoid, rng)
    comps = random_intertwiner(restrict(f, src.rep), restrict(g, tgt.rep), rng)
    return make_span(src, tgt, f, g, comps)


@st.composite
def seeds(draw):
    return random.Random(draw(st.integers(0, 2**32 - 1)))


def group_names(groups=MEDIUM_GROUPS):
    return st.sampled_from(sorted(groups))
