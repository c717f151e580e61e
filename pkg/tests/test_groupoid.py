import itertools
import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grpquant.groupoid import (
    FiniteGroup,
    Groupoid,
    GroupoidMap,
    GroupoidNatTransf,
    NonComposable,
    NotAGroup,
    NotAHomomorphism,
    NotNatural,
    TargetMismatch,
    UnknownObject,
    cardinality,
    compose_maps,
    enumerate_homomorphisms,
    fiber_cardinality,
    homotopy_fiber,
    homotopy_pullback,
    product_groupoid,
    validate_group,
)
from helpers import MEDIUM_GROUPS, SMALL_GROUPS, random_groupoid, random_map

C = FiniteGroup.cyclic
BG = Groupoid.BG


def t(n):
    return GroupoidMap.terminal(BG(C(n)))


def s(n):
    return GroupoidMap.from_point(BG(C(n)), 0)


# groups --------------------------------------------------------------------

def test_validate_group_examples():
    validate_group(C(3))
    bad = FiniteGroup(2, ((0, 0), (1, 0)))
    with pytest.raises(NotAGroup):
        validate_group(bad)


def test_exactly_one_group_table_of_order_two():
    ok = []
    for entries in itertools.product(range(2), repeat=4):
        g = FiniteGroup(2, (entries[:2], entries[2:]))
        try:
            validate_group(g)
            ok.append(g)
        except NotAGroup:
            pass
    assert ok == [C(2)]


@pytest.mark.parametrize("g", list(MEDIUM_GROUPS.values()) + [FiniteGroup.symmetric(4)])
def test_constructed_groups_are_valid(g):
    validate_group(g)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 7) for n in range(1, 7)])
def test_hom_count_between_cyclic_groups(m, n):
    assert len(enumerate_homomorphisms(C(m), C(n))) == gcd(m, n)


def test_hom_counts_brute_force():
    S3, V4 = FiniteGroup.symmetric(3), MEDIUM_GROUPS["C2xC2"]
    for G, H in [(S3, C(2)), (C(2), S3), (V4, C(2)), (V4, S3), (S3, S3), (C(3), S3)]:
        brute = 0
        for table in itertools.product(H.elements, repeat=G.order):
            if all(table[G.table[a][b]] == H.table[table[a]][table[b]] for a in G.elements for b in G.elements):
                brute += 1
        assert len(enumerate_homomorphisms(G, H)) == brute


def test_generators_generate():
    for G in MEDIUM_GROUPS.values():
        span = set(G.generators) | {0}
        while True:
            bigger = span | {G.table[a][b] for a in span for b in span}
            if bigger == span:
                break
            span = bigger
        assert span == set(G.elements)


# maps ----------------------------------------------------------------------

def test_map_validation():
    with pytest.raises(NotAHomomorphism):
        GroupoidMap(BG(C(2)), BG(C(3)), (0,), ((0, 1),))
    with pytest.raises(UnknownObject):
        GroupoidMap(BG(C(1)), BG(C(1)), (3,), ((0,),))


def test_compose_examples():
    f = GroupoidMap.from_hom(C(6), C(3), [a % 3 for a in range(6)])
    assert compose_maps(f, GroupoidMap.identity(f.target)) == f
    assert compose_maps(GroupoidMap.identity(f.source), f) == f
    ts = compose_maps(s(5), t(5))
    assert ts == GroupoidMap.terminal(Groupoid.point())
    assert f.preimage_table(0) == {0: 0, 1: 1, 2: 2}
    with pytest.raises(NonComposable):
        compose_maps(f, f)


def test_natural_transformation_checks():
    G = C(4)
    f = GroupoidMap.from_hom(C(2), G, (0, 2))
    GroupoidNatTransf(f, f, (1,))  # abelian target: any component works
    S3 = FiniteGroup.symmetric(3)
    homs = [h for h in enumerate_homomorphisms(C(2), S3) if h[1] != 0]
    f1, f2 = (GroupoidMap.from_hom(C(2), S3, h) for h in homs[:2])
    with pytest.raises(NotNatural):
        GroupoidNatTransf(f1, f2, (0,))
    ok = [c for c in S3.elements if S3.table[c][f1(0, 1)] == S3.table[f2(0, 1)][c]]
    nt = GroupoidNatTransf(f1, f2, (ok[0],))
    assert nt.then(nt.inverse()) == GroupoidNatTransf.identity(f1)


# fibers --------------------------------------------------------------------

def test_fiber_examples():
    fd = homotopy_fiber(t(5), 0)
    assert len(fd.components) == 1 and fd.components[0].isotropy.order == 5
    fd = homotopy_fiber(GroupoidMap.identity(BG(C(4))), 0)
    assert len(fd.components) == 1 and fd.components[0].isotropy.order == 1
    fd = homotopy_fiber(s(3), 0)
    assert [c.coset_rep for c in fd.components] == [0, 1, 2]
    assert all(c.isotropy.order == 1 for c in fd.components)
    with pytest.raises(UnknownObject):
        homotopy_fiber(s(3), 2)


def brute_fiber_cardinality(f: GroupoidMap, y: int) -> Fraction:
    """Enumerate the unskeletalized fiber: objects (x, h), one arrow per a in A_x out of each."""
    Ay = f.target.groups[y]
    total = Fraction(0)
    for x in f.fiber_objects(y):
        Ax = f.source.groups[x]
        for h in Ay.elements:
            arrows = {(a, Ay.table[h][Ay.inv(f(x, a))]) for a in Ax.elements}
            total += Fraction(1, len(arrows))
    return total


@given(st.integers(0, 2**32 - 1))
def test_fiber_structure(seed):
    rng = random.Random(seed)
    X, Y = random_groupoid(rng, MEDIUM_GROUPS), random_groupoid(rng, MEDIUM_GROUPS)
    f = random_map(X, Y, rng)
    for y in range(len(Y)):
        fd = homotopy_fiber(f, y)
        Ay = Y.groups[y]
        expected = sum(Ay.order // len(f.image(x)) for x in f.fiber_objects(y))
        assert len(fd.components) == expected
        for c in fd.components:
            assert c.isotropy.order == len(f.kernel(c.x))
            assert set(c.inclusion) == set(f.kernel(c.x))
        if fd.components:
            assert fd.components[0].coset_rep == 0
        assert fiber_cardinality(fd) == brute_fiber_cardinality(f, y)


def test_fiber_cardinality_exhaustive_small_maps():
    groups = list(SMALL_GROUPS.values()) + [C(6), FiniteGroup.symmetric(3), C(8)]
    for G, H in itertools.product(groups, repeat=2):
        for h in enumerate_homomorphisms(G, H):
            f = GroupoidMap.from_hom(G, H, h)
            assert fiber_cardinality(homotopy_fiber(f, 0)) == brute_fiber_cardinality(f, 0)


# pullbacks -----------------------------------------------------------------

def test_pullback_examples():
    pb = homotopy_pullback(s(3), s(3))
    assert len(pb.groupoid) == 3 and all(g.order == 1 for g in pb.groupoid.groups)
    X = Groupoid(("a", "b"), (C(2), FiniteGroup.symmetric(3)))
    i = GroupoidMap.identity(X)
    pb = homotopy_pullback(i, i)
    assert [g.order for g in pb.groupoid.groups] == [2, 6]
    for d in pb.data:
        assert all(a == b for a, b in d[3])  # the diagonal copy of A_x
    pb = homotopy_pullback(t(2), t(3))
    assert len(pb.groupoid) == 1 and pb.groupoid.groups[0].order == 6
    with pytest.raises(TargetMismatch):
        homotopy_pullback(t(2), s(2))


def _explicit_swap_iso(g, h):
    """Match objects of P(g,h) with P(h,g) and check the stabilizers correspond by conjugation."""
    P, Q = homotopy_pullback(g, h), homotopy_pullback(h, g)
    used = set()
    for (m, n, phi, emb) in P.data:
        Ay = g.target.groups[g.obj_map[m]]
        Am, An = g.source.groups[m], h.source.groups[n]
        found = False
        for j, (n2, m2, psi, emb2) in enumerate(Q.data):
            if (n2, m2) != (n, m) or j in used:
                continue
            for al, be in itertools.product(An.elements, Am.elements):
                # psi = g(be) phi^-1 h(al)^-1
                cand = Ay.table[Ay.table[g(m, be)][Ay.inv(phi)]][Ay.inv(h(n, al))]
                if cand != psi:
                    continue
                image = {(An.table[An.table[al][b]][An.inv(al)], Am.table[Am.table[be][a]][Am.inv(be)])
                         for a, b in emb}
                assert image == set(emb2)
                found = True
                break
            if found:
                used.add(j)
                break
        assert found
    assert len(used) == len(Q.data)


@given(st.integers(0, 2**32 - 1))
def test_pullback_symmetric_and_cardinality(seed):
    rng = random.Random(seed)
    Y = random_groupoid(rng, MEDIUM_GROUPS)
    M, N = random_groupoid(rng, MEDIUM_GROUPS), random_groupoid(rng, MEDIUM_GROUPS)
    g, h = random_map(M, Y, rng), random_map(N, Y, rng)
    _explicit_swap_iso(g, h)
    pb = homotopy_pullback(GroupoidMap.terminal(M), GroupoidMap.terminal(N))
    assert cardinality(pb.groupoid) == cardinality(M) * cardinality(N)


def test_pullback_filling_is_natural():
    rng = random.Random(7)
    for _ in range(20):
        Y = random_groupoid(rng, MEDIUM_GROUPS)
        M, N = random_groupoid(rng), random_groupoid(rng)
        pb = homotopy_pullback(random_map(M, Y, rng), random_map(N, Y, rng))
        assert pb.pi.source_map.source == pb.groupoid  # validated at construction


# products and cardinality --------------------------------------------------

def test_product_examples():
    P = product_groupoid(BG(C(2)), BG(C(3))).groupoid
    assert len(P) == 1 and P.groups[0].order == 6
    X = Groupoid(("a", "b"), (C(2), C(3)))
    XP = product_groupoid(X, Groupoid.point())
    assert [g.order for g in XP.groupoid.groups] == [2, 3]
    assert XP.proj_left.hom_maps == GroupoidMap.identity(X).hom_maps
    P = product_groupoid(X, BG(C(2))).groupoid
    assert [g.order for g in P.groups] == [4, 6]


def test_cardinality_examples():
    assert cardinality(BG(C(4))) == Fraction(1, 4)
    assert cardinality(Groupoid(("a", "b"), (C(2), C(3)))) == Fraction(5, 6)
    assert cardinality(Groupoid.point()) == 1
