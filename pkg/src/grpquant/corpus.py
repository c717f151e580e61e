"""A deterministic corpus of small groups, maps and representations for law checks."""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .groupoid import FiniteGroup, Groupoid, GroupoidMap, enumerate_homomorphisms
from .linalg import QQ, Field, Matrix
from .rep import Representation, conjugate, direct_sum, make_rep, unit_rep


def named_groups(max_order: int) -> dict[str, FiniteGroup]:
    """Cyclic groups, products of two nontrivial cyclics, and S3, up to the order bound."""
    out: dict[str, FiniteGroup] = {}
    for n in range(1, max_order + 1):
        out[f"C{n}"] = FiniteGroup.cyclic(n)
    for a in range(2, max_order + 1):
        for b in range(a, max_order + 1):
            if a * b <= max_order:
                out[f"C{a}xC{b}"] = FiniteGroup.cyclic(a).direct_product(FiniteGroup.cyclic(b))
    if max_order >= 6:
        out["S3"] = FiniteGroup.symmetric(3)
    return out


def _powers(g: Matrix, n: int) -> list[Matrix]:
    out = [Matrix.identity(g.field, g.rows)]
    for _ in range(n - 1):
        out.append(g @ out[-1])
    return out


def matrix_groups(F: Field) -> dict[str, tuple[FiniteGroup, list[Matrix]]]:
    """Small faithful matrix representations used to pull back along homomorphisms."""
    m = lambda rows: Matrix.from_rows(F, rows)
    out = {
        "C2": (FiniteGroup.cyclic(2), _powers(m([[-1]]), 2)),
        "C3": (FiniteGroup.cyclic(3), _powers(m([[0, -1], [1, -1]]), 3)),
        "C4": (FiniteGroup.cyclic(4), _powers(m([[0, -1], [1, 0]]), 4)),
        "C6": (FiniteGroup.cyclic(6), _powers(m([[1, -1], [1, 0]]), 6)),
    }
    S3 = FiniteGroup.symmetric(3)
    perms = sorted(itertools.permutations(range(3)))
    out["S3"] = (S3, [Matrix.permutation(F, p) for p in perms])
    return out


def reps_of_group(name: str, G: FiniteGroup, F: Field = QQ, max_dim: int = 3,
                  seed: int = 0) -> list[tuple[str, Representation]]:
    """Unit, sign-like and pulled-back matrix representations of BG, plus a seeded random conjugate."""
    X = Groupoid.BG(G)
    out = [("unit", unit_rep(X, F))]
    seen = {out[0][1]}
    for tname, (T, mats) in matrix_groups(F).items():
        if mats[0].rows > max_dim:
            continue
        for k, h in enumerate(enumerate_homomorphisms(G, T)):
            if all(v == 0 for v in h):
                continue
            v = make_rep(X, F, [[mats[v] for v in h]])
            if v not in seen:
                seen.add(v)
                out.append((f"{tname}#{k}", v))
    # a direct sum and a random change of basis, when they fit
    rng = random.Random(f"{name}:{seed}")
    small = [v for _, v in out if v.dims[0] <= max_dim - 1]
    if len(small) >= 2:
        a = small[rng.randrange(1, len(small))]
        s = direct_sum(unit_rep(X, F), a)
        out.append(("unit+" + next(n for n, v in out if v == a), s))
        d = s.dims[0]
        while True:
            P = Matrix.from_rows(F, [[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
            if P.is_invertible():
                break
        out.append(("random", conjugate(s, [P])))
    return out


def multi_object_maps() -> list[tuple[str, GroupoidMap]]:
    """A few maps between groupoids with several objects."""
    C2, C3, C4 = FiniteGroup.cyclic(2), FiniteGroup.cyclic(3), FiniteGroup.cyclic(4)
    two_points = Groupoid.discrete(("x", "y"))
    b23 = Groupoid(("a", "b"), (C2, C3))
    b42 = Groupoid(("a", "b"), (C4, C2))
    bc2 = Groupoid.BG(C2)
    return [
        ("pts->BC2+BC3", GroupoidMap(two_points, b23, (0, 1), ((0,), (0,)))),
        ("BC2+BC3->*", GroupoidMap.terminal(b23)),
        ("pts->*", GroupoidMap.terminal(two_points)),
        ("BC4+BC2->BC2", GroupoidMap(b42, bc2, (0, 0), ((0, 1, 0, 1), (0, 1)))),
        ("BC2->BC4+BC2", GroupoidMap(bc2, b42, (0,), ((0, 2),))),
        ("BC4+BC2->*", GroupoidMap.terminal(b42)),
    ]


@dataclass
class Corpus:
    max_order: int
    seed: int
    field: Field
    groups: dict[str, FiniteGroup]
    maps: list[tuple[str, GroupoidMap]]
    reps: dict[Groupoid, list[tuple[str, Representation]]] = field(default_factory=dict)

    def groupoids(self) -> list[Groupoid]:
        seen, out = set(), []
        for _, f in self.maps:
            for x in (f.source, f.target):
                if x not in seen:
                    seen.add(x)
                    out.append(x)
        return out

    def reps_on(self, x: Groupoid) -> list[tuple[str, Representation]]:
        if x not in self.reps:
            if len(x) == 1:
                name = next((n for n, g in self.groups.items() if g == x.groups[0]), "G")
                self.reps[x] = reps_of_group(name, x.groups[0], self.field, seed=self.seed)
            else:
                self.reps[x] = [("unit", unit_rep(x, self.field))]
        return self.reps[x]

    def pairs(self) -> list[tuple[str, GroupoidMap, GroupoidMap]]:
        by_source: dict[Groupoid, list[tuple[str, GroupoidMap]]] = {}
        for n, g in self.maps:
            by_source.setdefault(g.source, []).append((n, g))
        out = []
        for nf, f in self.maps:
            for ng, g in by_source.get(f.target, []):
                out.append((f"{nf} ; {ng}", f, g))
        return out

    def instances(self, max_dim: int = 3):
        """(name, f, g, V) for every composable pair and every corpus rep V on the source."""
        for name, f, g in self.pairs():
            for rn, v in self.reps_on(f.source):
                if max(v.dims, default=0) <= max_dim:
                    yield f"{name} | {rn}", f, g, v

    def rotated_instances(self, max_dim: int = 3):
        """One instance per composable pair; pairs sharing a source cycle through its reps in order."""
        counter: dict[Groupoid, int] = {}
        for name, f, g in self.pairs():
            reps = [(n, v) for n, v in self.reps_on(f.source) if max(v.dims, default=0) <= max_dim]
            k = counter.get(f.source, 0)
            counter[f.source] = k + 1
            rn, v = reps[k % len(reps)]
            yield f"{name} | {rn}", f, g, v


def build_corpus(max_order: int = 6, seed: int = 0, field: Field = QQ, multi_object: bool = True) -> Corpus:
    groups = named_groups(max_order)
    maps = []
    bg = {n: Groupoid.BG(g) for n, g in groups.items()}
    for a, G in groups.items():
        for b, H in groups.items():
            for k, h in enumerate(enumerate_homomorphisms(G, H)):
                maps.append((f"{a}->{b}#{k}", GroupoidMap(bg[a], bg[b], (0,), (h,))))
    if multi_object:
        maps += [(n, f) for n, f in multi_object_maps()
                 if all(G.order <= max_order for G in f.source.groups + f.target.groups)]
    return Corpus(max_order, seed, field, groups, maps)


def write_corpus(c: Corpus, out_dir) -> list[Path]:
    """Write the corpus as JSON files; identical inputs give identical bytes."""
    from .serialize import SCHEMA, map_to_json, rep_to_json

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    maps = [{"name": n, "map": map_to_json(f)} for n, f in c.maps]
    reps = []
    for x in c.groupoids():
        for n, v in c.reps_on(x):
            reps.append({"name": n, "rep": rep_to_json(v)})
    pairs = [{"name": n, "f": nf, "g": ng} for n, nf, ng in _pair_names(c)]
    files = []
    for fname, body in (("maps.json", maps), ("reps.json", reps), ("pairs.json", pairs)):
        p = out / fname
        p.write_text(json.dumps({"schema": SCHEMA, "max_order": c.max_order, "seed": c.seed,
                                 "field": c.field.to_json(), "items": body}, sort_keys=True) + "\n")
        files.append(p)
    return files


def _pair_names(c: Corpus):
    names = {id(f): n for n, f in c.maps}
    for name, f, g in c.pairs():
        yield name, names[id(f)], names[id(g)]


def read_corpus(in_dir) -> Corpus:
    from .serialize import map_from_json, rep_from_json

    d = Path(in_dir)
    head = json.loads((d / "maps.json").read_text())
    F = Field.from_json(head["field"])
    maps = [(m["name"], map_from_json(m["map"])) for m in head["items"]]
    groups = {}
    for _, f in maps:
        for x in (f.source, f.target):
            if len(x) == 1:
                groups.setdefault(f"G{len(groups)}", x.groups[0])
    c = Corpus(head["max_order"], head["seed"], F, groups, maps)
    reps: dict[Groupoid, list] = {}
    for r in json.loads((d / "reps.json").read_text())["items"]:
        v = rep_from_json(r["rep"])
        reps.setdefault(v.groupoid, []).append((r["name"], v))
    c.reps = reps
    return c
