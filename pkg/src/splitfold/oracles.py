"""Random instances and brute-force oracles used by the property suites."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import BaseGraph, FreeSplitting, GraphMorphism, reduce_path, rev
from .errors import ValidationError
from .protoforest import (blowup_witness, enumeration_witness, fills, overlap_generators)
from .subgroup import StallingsGraph, WhiteheadAuto, whitehead_autos
from .words import Basis, inverse, mul, reduce_word


# ---------------------------------------------------------------------------
# random splittings and paths


def random_graph(rng: random.Random, n: int, extra_vertices: int = 0) -> BaseGraph:
    """Random connected marked graph of rank n with no vertex of valence < 2."""
    basis = Basis.standard(n)
    for _ in range(1000):
        nv = 1 + extra_vertices
        verts = [f"v{i}" for i in range(nv)]
        edges = {}
        # random spanning tree then n extra edges
        for i in range(1, nv):
            j = rng.randrange(i)
            s, t = (verts[i], verts[j]) if rng.random() < 0.5 else (verts[j], verts[i])
            edges[f"t{i}"] = (s, t)
        letters = list(range(1, n + 1))
        rng.shuffle(letters)
        labels = {}
        names = "abcdefgh"
        for k, x in enumerate(letters):
            s, t = rng.choice(verts), rng.choice(verts)
            nm = names[k]
            edges[nm] = (s, t)
            labels[nm] = (x,) if rng.random() < 0.7 else (-x,)
        val = {v: 0 for v in verts}
        for s, t in edges.values():
            val[s] += 1
            val[t] += 1
        if min(val.values()) < 2:
            continue
        try:
            return BaseGraph.build(basis, verts, edges, labels)
        except ValidationError:
            continue
    raise RuntimeError("could not build a random graph")


def subdivide(graph: BaseGraph, name: str, pieces: int) -> BaseGraph:
    """Subdivide an edge into edgelets name1..namek; the label sits on the last one."""
    s, t = graph.ends(name)
    verts = list(graph.vertices)
    edges = {nm: (a, b) for nm, a, b in graph.edges if nm != name}
    labels = {nm: w for nm, w in graph.labels if nm != name}
    prev = s
    for i in range(1, pieces + 1):
        nxt = t if i == pieces else f"{name}_{i}"
        if i < pieces:
            verts.append(nxt)
        edges[f"{name}{i}"] = (prev, nxt)
        prev = nxt
    if graph.edge_label(name):
        labels[f"{name}{pieces}"] = graph.edge_label(name)
    return BaseGraph.build(graph.basis, verts, edges, labels)


def random_splitting(rng: random.Random, n: int) -> FreeSplitting:
    for _ in range(1000):
        kind = rng.random()
        if kind < 0.35:
            G = BaseGraph.rose(Basis.standard(n))
        elif kind < 0.7:
            G = random_graph(rng, n, rng.randint(1, 2))
        else:
            G = BaseGraph.rose(Basis.standard(n))
            G = subdivide(G, rng.choice(G.edge_names), rng.randint(2, 3))
        names = G.edge_names
        Z = set()
        if rng.random() < 0.5:
            Z = {nm for nm in names if rng.random() < 0.35}
        try:
            return FreeSplitting(G, frozenset(Z))
        except ValidationError:
            continue
    raise RuntimeError("could not build a random splitting")


def random_path(rng: random.Random, split: FreeSplitting, length: int) -> Optional[tuple]:
    """Random immersed base path of the given length that starts and ends uncollapsed."""
    G = split.base
    unc = [(nm, s) for nm in split.uncollapsed() for s in (1, -1)]
    for _ in range(200):
        path = [rng.choice(unc)]
        ok = True
        while len(path) < length:
            opts = [o for o in G.directions(G.tgt(path[-1])) if o != rev(path[-1])]
            if len(path) == length - 1:
                opts = [o for o in opts if o[0] not in split.collapsed]
            if not opts:
                ok = False
                break
            path.append(rng.choice(opts))
        if ok:
            return tuple(path)
    return None


def random_instance(rng: random.Random, max_rank: int = 3, max_len: int = 8):
    n = rng.randint(2, max_rank)
    while True:
        split = random_splitting(rng, n)
        path = random_path(rng, split, rng.randint(1, max_len))
        if path is not None:
            return split, path


# ---------------------------------------------------------------------------
# overlap-chain oracle


@dataclass
class ChainOracleResult:
    radius: int
    reached: int
    agree: bool
    detail: str = ""


def overlap_chain_oracle(split: FreeSplitting, path: Sequence, radius: Optional[int] = None,
                         cap: int = 300000) -> ChainOracleResult:
    """Compare <O> with the set of translates reachable by overlap chains.

    Translates g*alpha are explored geometrically: the tree edges of alpha are
    listed and two translates are adjacent when they contain a common tree
    edge, in either direction.  The exploration stays inside the ball of the given radius."""
    G = split.base
    radius = 2 * len(path) if radius is None else radius
    edges = []
    for k, x, o in split.tree_positions(path):
        h = x if o[1] > 0 else mul(x, G.label(o))
        edges.append((o[0], h))
    # translates g*alpha and g*s*alpha share a tree edge exactly for these steps s
    steps = set()
    for nm, h in edges:
        for nm2, h2 in edges:
            if nm2 == nm:
                s = mul(h, inverse(h2))
                if s:
                    steps.add(s)
    steps = sorted(steps)
    seen = {(): None}
    used = set()
    queue = deque([()])
    truncated = False
    while queue and not truncated:
        g = queue.popleft()
        for s in steps:
            g2 = mul(g, s)
            if g2 in seen or len(g2) > radius:
                continue
            seen[g2] = None
            used.add(s)
            if len(seen) > cap:
                truncated = True
                break
            queue.append(g2)
    od = overlap_generators(split, path)
    H = od.subgroup
    bad = [g for g in seen if not H.contains(g)]
    if bad:
        return ChainOracleResult(radius, len(seen), False, f"reached non-member {bad[0]}")
    R = StallingsGraph.from_generators(sorted(used), split.rank)
    if R != H:
        return ChainOracleResult(radius, len(seen), False, "reachable set generates a smaller subgroup")
    if truncated:
        return ChainOracleResult(radius, len(seen), True, "exploration capped")
    # every member of the ball of radius |alpha| is reachable
    for g in _members_upto(H, len(path)):
        if g not in seen:
            return ChainOracleResult(radius, len(seen), False, f"member {g} not reachable")
    return ChainOracleResult(radius, len(seen), True)


def _members_upto(H: StallingsGraph, r: int):
    """Reduced words of length <= r in H, by walking the Stallings graph."""
    out = []
    stack = [(0, ())]
    while stack:
        v, w = stack.pop()
        if v == 0:
            out.append(w)
        if len(w) == r:
            continue
        for y, z in H.trans[v].items():
            if w and y == -w[-1]:
                continue
            stack.append((z, w + (y,)))
    return out


# ---------------------------------------------------------------------------
# filling oracle


@dataclass
class FillOracleResult:
    fills: bool
    ok: bool
    detail: str = ""


def filling_oracle(split: FreeSplitting, path: Sequence, budget: int = 2) -> FillOracleResult:
    rep = fills(split, path, witness=False)
    if rep.fills:
        w = enumeration_witness(split, path, budget)
        if w is not None:
            return FillOracleResult(True, False, f"enumerated expansion {w.expansion.kind} misses an edge")
        return FillOracleResult(True, True)
    w = blowup_witness(split, path) if rep.kurosh < split.rank else fills(split, path).witness
    lifted, missed = w.expansion.missed(path)
    if not missed:
        return FillOracleResult(False, False, "witness does not miss a natural edge")
    return FillOracleResult(False, True)


# ---------------------------------------------------------------------------
# random automorphisms and maps


def random_automorphism(rng: random.Random, n: int, steps: int) -> dict:
    """Images of the letters under a random product of Whitehead automorphisms."""
    autos = whitehead_autos(n)
    images = {i: (i,) for i in range(1, n + 1)}
    for _ in range(steps):
        a = rng.choice(autos)
        images = {i: a.apply(w) for i, w in images.items()}
    return images


def rose_map(rose: BaseGraph, images: dict) -> GraphMorphism:
    """Self-map of a rose realising letter images."""
    names = rose.edge_names
    letter_edge = {}
    for nm in names:
        (x,) = rose.edge_label(nm)
        letter_edge[abs(x)] = (nm, 1 if x > 0 else -1)
    emap = {}
    for nm in names:
        (x,) = rose.edge_label(nm)
        w = images[abs(x)] if x > 0 else inverse(images[abs(x)])
        emap[nm] = tuple(letter_edge[abs(y)] if y > 0 else rev(letter_edge[abs(y)]) for y in w)
    v = rose.vertices[0]
    return GraphMorphism.build(rose, rose, {v: v}, emap)


# ---------------------------------------------------------------------------
# batch suites shared by the CLI, the acceptance tests and the scripts


@dataclass
class SuiteResult:
    name: str
    instances: int
    violations: list
    stats: dict

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"name": self.name, "instances": self.instances, "ok": self.ok,
                "violations": self.violations, "stats": self.stats}


def fill_suite(seed: int, count: int = 200, max_rank: int = 3, max_len: int = 8,
               budget: int = 2) -> SuiteResult:
    """Filling criterion against expansion enumeration and blowup witnesses."""
    from .errors import SplitfoldError

    rng = random.Random(seed)
    bad, filling = [], 0
    for i in range(count):
        split, path = random_instance(rng, max_rank, max_len)
        try:
            res = filling_oracle(split, path, budget)
        except SplitfoldError as exc:
            bad.append({"instance": i, "error": f"{type(exc).__name__}: {exc}"})
            continue
        filling += res.fills
        if not res.ok:
            bad.append({"instance": i, "error": res.detail})
    return SuiteResult("fill", count, bad, {"filling": filling, "non_filling": count - filling})


def overlap_suite(seed: int, count: int = 100, max_rank: int = 2, max_len: int = 6) -> SuiteResult:
    """Overlap-chain reachability against membership in <O>."""
    rng = random.Random(seed)
    bad, capped = [], 0
    for i in range(count):
        split, path = random_instance(rng, max_rank, max_len)
        res = overlap_chain_oracle(split, path)
        capped += res.detail == "exploration capped"
        if not res.agree:
            bad.append({"instance": i, "error": res.detail})
    return SuiteResult("overlap", count, bad, {"capped": capped})


def random_foldable(rng: random.Random, max_rank: int = 3, max_steps: int = 5) -> GraphMorphism:
    from .folds import is_foldable

    while True:
        n = rng.randint(2, max_rank)
        R = BaseGraph.rose(Basis.standard(n))
        f = rose_map(R, random_automorphism(rng, n, rng.randint(1, max_steps)))
        if is_foldable(f)[0]:
            return f


def fold_suite(seed: int, count: int = 100, max_rank: int = 3) -> SuiteResult:
    """Filling rank monotone along folds; component complexity monotone under pullback."""
    from .errors import SplitfoldError
    from .folds import component_complexity, fold_factorize, push_tile

    rng = random.Random(seed)
    bad, folds, traces = [], 0, 0
    for i in range(count):
        f = random_foldable(rng, max_rank)
        try:
            seq = fold_factorize(f)
            folds += seq.length
            for E in FreeSplitting(f.domain).natural_structure().natural_edges:
                push_tile(seq, E)
                traces += 1
            for k, fold in enumerate(seq.folds):
                target = FreeSplitting(fold.codomain)
                names = fold.codomain.edge_names
                beta = {nm for nm in names if rng.random() < 0.5} or {rng.choice(names)}
                pre = {nm for nm in fold.domain.edge_names if fold.image((nm, 1))[0][0] in beta}
                if component_complexity(FreeSplitting(fold.domain), pre) < component_complexity(target, beta):
                    bad.append({"instance": i, "error": f"component complexity dropped at fold {k + 1}"})
        except SplitfoldError as exc:
            bad.append({"instance": i, "error": f"{type(exc).__name__}: {exc}"})
    return SuiteResult("fold", count, bad, {"folds": folds, "traces": traces})


def nesting_suite(seed: int, count: int = 100, max_rank: int = 3, max_len: int = 8) -> SuiteResult:
    """Filling support monotone under subpath inclusion, equal on equal rank when covering."""
    from .protoforest import filling_support

    rng = random.Random(seed)
    bad, covering = [], 0
    done = 0
    while done < count:
        split, path = random_instance(rng, max_rank, max_len)
        unc = [k for k, o in enumerate(path) if o[0] not in split.collapsed]
        i, j = sorted(rng.sample(unc, 2)) if len(unc) >= 2 else (unc[0], unc[0])
        sub = path[i:j + 1]
        done += 1
        big, small = filling_support(split, path), filling_support(split, sub)
        if small.kurosh > big.kurosh:
            bad.append({"instance": done, "error": "filling rank of a subpath is larger"})
            continue
        if not small.factor.conjugate_into(big.factor):
            bad.append({"instance": done, "error": "support of a subpath is not contained in the support"})
            continue
        if {o[0] for o in sub} >= set(split.uncollapsed()):
            covering += 1
            if small.kurosh == big.kurosh and not small.factor.is_conjugate_to(big.factor):
                bad.append({"instance": done, "error": "equal rank but different supports"})
    return SuiteResult("nesting", count, bad, {"covering": covering})


def random_simplicial(rng: random.Random, max_rank: int = 3, max_steps: int = 4) -> GraphMorphism:
    """Simplicial homotopy equivalence from a subdivided rose onto a random marked graph."""
    from .folds import subdivide_for

    n = rng.randint(2, max_rank)
    if rng.random() < 0.4:
        T = BaseGraph.rose(Basis.standard(n))
    else:
        T = random_graph(rng, n, rng.randint(1, 2))
    images = random_automorphism(rng, n, rng.randint(0, max_steps))
    R = BaseGraph.rose(Basis.standard(n))
    root = T.vertices[0]
    emap = {nm: T.loop_for(images[R.edge_label(nm)[0]], root) for nm in R.edge_names}
    f = GraphMorphism.build(R, T, {R.vertices[0]: root}, emap)
    return subdivide_for(f)[1]


def random_reduced_path(rng: random.Random, G: BaseGraph, length: int) -> tuple:
    path = [(rng.choice(G.edge_names), rng.choice((1, -1)))]
    while len(path) < length:
        opts = [o for o in G.directions(G.tgt(path[-1])) if o != rev(path[-1])]
        if not opts:
            break
        path.append(rng.choice(opts))
    return tuple(path)


def cancellation_suite(seed: int, count: int = 100, paths: int = 20, max_len: int = 12) -> SuiteResult:
    from .folds import bounded_cancellation_constant, cancellation_excursion, is_edge_bijective

    rng = random.Random(seed)
    bad, zero = [], 0
    for i in range(count):
        f = random_simplicial(rng)
        C = bounded_cancellation_constant(f)
        zero += C == 0
        if (C == 0) != is_edge_bijective(f):
            bad.append({"instance": i, "error": f"C = {C} but edge-bijective = {is_edge_bijective(f)}"})
        for _ in range(paths):
            p = random_reduced_path(rng, f.domain, rng.randint(1, max_len))
            ex = cancellation_excursion(f, p)
            if ex > C:
                bad.append({"instance": i, "error": f"excursion {ex} exceeds C = {C}"})
                break
    return SuiteResult("cancellation", count, bad, {"zero_constant": zero})


SUITES = {
    "fill": fill_suite,
    "overlap": overlap_suite,
    "fold": fold_suite,
    "nesting": nesting_suite,
    "cancellation": cancellation_suite,
}
