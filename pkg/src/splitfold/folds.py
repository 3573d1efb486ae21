"""Stallings fold factorizations, tile pushing, pullbacks and bounded cancellation.

Folding works on Grushko presentations (nothing collapsed) and on maps that
induce isomorphisms of fundamental groups, so every intermediate graph is a
marked graph of the same rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import BaseGraph, FreeSplitting, GraphMorphism, reduce_path, rev
from .errors import PropertyViolation, ValidationError
from .protoforest import filling_support, interior_crossings
from .subgroup import StallingsGraph
from .words import inverse, mul


def edge_images(f: GraphMorphism) -> dict:
    return {nm: f.image((nm, 1)) for nm in f.domain.edge_names}


def direction_map(f: GraphMorphism, v: str) -> dict:
    """Oriented edge at v -> first oriented edge of its image."""
    return {o: f.image(o)[0] for o in f.domain.directions(v)}


def is_foldable(f: GraphMorphism) -> tuple:
    """(True, None) or (False, first vertex with fewer than two gates)."""
    for nm, p in edge_images(f).items():
        if reduce_path(p) != p:
            return False, f.domain.ends(nm)[0]
    for v in f.domain.vertices:
        if f.domain.valence(v) >= 2 and len(set(direction_map(f, v).values())) < 2:
            return False, v
    return True, None


# ---------------------------------------------------------------------------
# subdivision and single folds


def _edgelet_names(graph: BaseGraph, name: str, k: int) -> list:
    used = set(graph.edge_names) | set(graph.vertices)
    base = [f"{name}{i}" for i in range(1, k + 1)]
    if not (set(base) & (used - {name})):
        return base
    return [f"{name}_{i}" for i in range(1, k + 1)]


def subdivide_for(f: GraphMorphism) -> tuple:
    """Subdivide the domain so that f maps edges to edges.

    Returns (refinement morphism domain -> subdivided, edge-to-edge map)."""
    D = f.domain
    verts = list(D.vertices)
    edges, labels, refine, emap = {}, {}, {}, {}
    for nm in D.edge_names:
        img = f.image((nm, 1))
        s, t = D.ends(nm)
        if len(img) == 1:
            edges[nm] = (s, t)
            if D.edge_label(nm):
                labels[nm] = D.edge_label(nm)
            refine[nm] = ((nm, 1),)
            emap[nm] = img
            continue
        names = _edgelet_names(D, nm, len(img))
        prev = s
        for i, (ename, o) in enumerate(zip(names, img), start=1):
            nxt = t if i == len(img) else f"{ename}^"
            if i < len(img):
                verts.append(nxt)
            edges[ename] = (prev, nxt)
            emap[ename] = (o,)
            prev = nxt
        if D.edge_label(nm):
            labels[names[-1]] = D.edge_label(nm)
        refine[nm] = tuple((x, 1) for x in names)
    S0 = BaseGraph.build(D.basis, verts, edges, labels)
    vmap0 = {v: v for v in D.vertices}
    ref = GraphMorphism.build(D, S0, vmap0, refine)
    vmap = {v: f.vertex(v) for v in D.vertices}
    for nm, p in emap.items():
        s, t = S0.ends(nm)
        vmap.setdefault(s, f.codomain.src(p[0]))
        vmap.setdefault(t, f.codomain.tgt(p[0]))
    g = GraphMorphism.build(S0, f.codomain, vmap, emap)
    return ref, g


def _twisted_labels(graph: BaseGraph, x: str, rho) -> dict:
    labels = {}
    for nm, s, t in graph.edges:
        lab = graph.edge_label(nm)
        if s == x:
            lab = mul(inverse(rho), lab)
        if t == x:
            lab = mul(lab, rho)
        if lab:
            labels[nm] = lab
    return labels


def fold_pair(graph: BaseGraph, o1, o2) -> GraphMorphism:
    """Identify oriented edges o1, o2 with a common initial vertex."""
    v = graph.src(o1)
    if graph.src(o2) != v or o1[0] == o2[0]:
        raise ValidationError("fold needs two distinct edges at a common vertex")
    w1, w2 = graph.tgt(o1), graph.tgt(o2)
    if w1 == w2:
        raise PropertyViolation("fold would drop the rank (edges with equal endpoints)")
    root = graph.vertices[0]
    l1, l2 = graph.label(o1), graph.label(o2)
    if w2 != root:
        x, keep_o, drop_o, rho = w2, o1, o2, mul(inverse(l2), l1)
    else:
        x, keep_o, drop_o, rho = w1, o2, o1, mul(inverse(l1), l2)
    y = graph.tgt(keep_o)
    labels = _twisted_labels(graph, x, rho)
    edges = {}
    for nm, s, t in graph.edges:
        if nm == drop_o[0]:
            continue
        edges[nm] = (y if s == x else s, y if t == x else t)
    verts = [u for u in graph.vertices if u != x]
    dropped = labels.pop(drop_o[0], ())
    H = BaseGraph.build(graph.basis, verts, edges, labels)
    if H.label(keep_o) != (dropped if drop_o[1] > 0 else inverse(dropped)):
        raise PropertyViolation("fold labels disagree after twisting")
    vmap = {u: (y if u == x else u) for u in graph.vertices}
    emap = {}
    for nm in graph.edge_names:
        if nm == drop_o[0]:
            emap[nm] = (keep_o,) if drop_o[1] > 0 else (rev(keep_o),)
        else:
            emap[nm] = ((nm, 1),)
    return GraphMorphism.build(graph, H, vmap, emap)


# ---------------------------------------------------------------------------
# fold factorization


@dataclass
class FoldSequence:
    """domain -refine-> S_0 -f_1-> ... -f_M-> S_M -final-> codomain."""

    original: GraphMorphism
    refine: GraphMorphism
    graphs: list
    folds: list
    final: GraphMorphism

    @property
    def length(self) -> int:
        return len(self.folds)

    def partial(self, i: int, j: int) -> Optional[GraphMorphism]:
        """f^i_j = f_j o ... o f_{i+1} as a map S_i -> S_j (None if i == j)."""
        g = None
        for k in range(i, j):
            g = self.folds[k] if g is None else g.compose(self.folds[k])
        return g

    def compose_all(self) -> GraphMorphism:
        g = self.refine
        for h in self.folds:
            g = g.compose(h)
        return g.compose(self.final)

    def verify(self) -> None:
        total = self.compose_all()
        for nm in self.original.domain.edge_names:
            if total.image((nm, 1)) != self.original.image((nm, 1)):
                raise PropertyViolation(f"fold composition differs from the map on edge {nm}")


def _first_fold_pair(g: GraphMorphism):
    D = g.domain
    for v in sorted(D.vertices):
        dirs = D.directions(v)
        for i, o1 in enumerate(dirs):
            for o2 in dirs[i + 1:]:
                if o1[0] != o2[0] and g.image(o1) == g.image(o2):
                    return o1, o2
    return None


def fold_factorize(f: GraphMorphism, check: bool = True) -> FoldSequence:
    """Subdivide, then repeatedly fold the least pair of edges with equal images."""
    ok, bad = is_foldable(f)
    if not ok:
        raise ValidationError(f"map is not foldable at vertex {bad}")
    if not f.is_homotopy_equivalence():
        raise ValidationError("fold factorization needs a homotopy equivalence")
    refine, g = subdivide_for(f)
    graphs = [g.domain]
    folds = []
    while True:
        pair = _first_fold_pair(g)
        if pair is None:
            break
        fold = fold_pair(g.domain, *pair)
        vmap = {u: g.vertex(u) for u in g.domain.vertices if u in fold.codomain.vertices}
        emap = {nm: g.image((nm, 1)) for nm in fold.codomain.edge_names}
        g = GraphMorphism.build(fold.codomain, f.codomain, vmap, emap)
        folds.append(fold)
        graphs.append(fold.codomain)
    seq = FoldSequence(f, refine, graphs, folds, g)
    if check:
        seq.verify()
    return seq


# ---------------------------------------------------------------------------
# tiles and filling rank traces


@dataclass
class TraceEntry:
    index: int
    tile: tuple
    support_rank: int
    kurosh: int
    fills: bool
    factor: object = field(default=None, repr=False, compare=False)


@dataclass
class KRTrace:
    entries: list
    breakpoints: list

    @property
    def kurosh(self) -> list:
        return [e.kurosh for e in self.entries]

    def is_monotone(self) -> bool:
        k = self.kurosh
        return all(a <= b for a, b in zip(k, k[1:]))


def _tile_entry(i: int, graph: BaseGraph, tile: tuple) -> TraceEntry:
    split = FreeSplitting(graph)
    sup = filling_support(split, tile)
    cross = interior_crossings(split, tile)
    fl = cross.ok and sup.kurosh == graph.rank
    return TraceEntry(i, tile, sup.factor.rank, sup.kurosh, fl, sup.factor)


def transport_subgroup(f: GraphMorphism, H: StallingsGraph) -> StallingsGraph:
    """Image of H under the homomorphism induced by f."""
    images = f.induced_map()

    def apply(w):
        out = ()
        for x in w:
            out = mul(out, images[x] if x > 0 else inverse(images[-x]))
        return out

    return StallingsGraph.from_generators([apply(g) for g in H.generators()], H.rank_n)


def push_tile(seq: FoldSequence, edge: Sequence, include_codomain: bool = True) -> KRTrace:
    """Filling ranks of the tiles f^0_i(E) along the fold sequence.

    edge is an edge path in the original domain (e.g. a natural edge)."""
    tile = seq.refine.image_path(tuple(edge))
    entries = [_tile_entry(0, seq.graphs[0], tile)]
    cur = tile
    for i, fold in enumerate(seq.folds, start=1):
        cur = fold.image_path(cur)
        entries.append(_tile_entry(i, seq.graphs[i], cur))
    if include_codomain:
        cur = seq.final.image_path(cur)
        entries.append(_tile_entry(len(seq.folds) + 1, seq.final.codomain, cur))
    trace = KRTrace(entries, [e.index for a, e in zip(entries, entries[1:]) if e.kurosh > a.kurosh])
    if not trace.is_monotone():
        raise PropertyViolation(f"filling rank decreased along folds: {trace.kurosh}")
    maps = list(seq.folds) + ([seq.final] if include_codomain else [])
    for a, b, m in zip(entries, entries[1:], maps):
        carried = transport_subgroup(m, a.factor)
        if not carried.conjugate_into(b.factor):
            raise PropertyViolation(f"support at index {a.index} is not carried into the next one")
        if a.kurosh == b.kurosh and not carried.is_conjugate_to(b.factor):
            raise PropertyViolation(f"equal filling rank but different supports at index {b.index}")
    seen_fill = False
    for e in entries:
        if seen_fill and not e.fills:
            raise PropertyViolation("a later tile stopped filling")
        seen_fill = seen_fill or e.fills
    return trace


# ---------------------------------------------------------------------------
# pullbacks and component complexity


@dataclass(frozen=True)
class Pullback:
    refine: GraphMorphism  # domain -> subdivided domain
    graph: BaseGraph
    edges: frozenset


def pullback(f: GraphMorphism, beta) -> Pullback:
    """Edgelets of the subdivided domain mapping into the subgraph beta."""
    beta = frozenset(beta)
    unknown = beta - set(f.codomain.edge_names)
    if unknown:
        raise ValidationError(f"subgraph uses unknown edges {sorted(unknown)}")
    if not beta:
        raise ValidationError("subgraph is empty")
    refine, g = subdivide_for(f)
    keep = frozenset(nm for nm in g.domain.edge_names if g.image((nm, 1))[0][0] in beta)
    return Pullback(refine, g.domain, keep)


def component_complexity(split: FreeSplitting, beta) -> int:
    """Number of components of beta in the quotient of the splitting."""
    beta = set(beta) - set(split.collapsed)
    if not beta:
        raise ValidationError("subgraph is empty")
    parent = {}

    def find(v):
        parent.setdefault(v, v)
        while parent[v] != v:
            v = parent[v]
        return v

    def union(a, b):
        a, b = find(a), find(b)
        if a != b:
            parent[max(a, b)] = min(a, b)

    for nm in beta:
        s, t = split.base.ends(nm)
        union(split.comp(s), split.comp(t))
    return len({find(split.comp(split.base.ends(nm)[0])) for nm in beta})


# ---------------------------------------------------------------------------
# bounded cancellation


def bounded_cancellation_constant(f: GraphMorphism) -> int:
    """Sum of image lengths minus number of codomain edges."""
    if not f.is_homotopy_equivalence():
        raise ValidationError("bounded cancellation constant needs a homotopy equivalence")
    return sum(len(f.image((nm, 1))) for nm in f.domain.edge_names) - len(f.codomain.edge_names)


def cancellation_excursion(f: GraphMorphism, path: Sequence) -> int:
    """Largest distance from a point of the untightened image to the tightened one.

    The vertex after an image prefix q lies at distance |[q]| - |common
    prefix of [q] and [f(p)]| from the geodesic."""
    img = f.image_path(tuple(path), tighten=False)
    geo = reduce_path(img)
    worst = 0
    cur: list = []
    for o in img:
        if cur and cur[-1] == rev(o):
            cur.pop()
        else:
            cur.append(o)
        k = 0
        while k < len(cur) and k < len(geo) and cur[k] == geo[k]:
            k += 1
        worst = max(worst, len(cur) - k)
    return worst


def is_edge_bijective(f: GraphMorphism) -> bool:
    imgs = [f.image((nm, 1)) for nm in f.domain.edge_names]
    if any(len(p) != 1 for p in imgs):
        return False
    return len({p[0][0] for p in imgs}) == len(f.codomain.edge_names) == len(imgs)
