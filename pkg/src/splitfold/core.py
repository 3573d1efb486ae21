"""Marked graphs, collapse presentations of free splittings, immersed paths,
and canonical lifts.

Tree model: the universal cover of a base graph G has vertices (g, v) with
g in F_n and v in V(G); the lift of edge e at g runs from (g, src e) to
(g * label(e), tgt e).  Oriented edges are pairs (name, +1/-1).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import ValidationError
from .subgroup import Rewriter, StallingsGraph
from .words import Basis, GroupElement, Word, inverse, mul, reduce_word

OEdge = tuple  # (name, sign)


def rev(o: OEdge) -> OEdge:
    return (o[0], -o[1])


def reverse_path(path: Sequence[OEdge]) -> tuple:
    return tuple(rev(o) for o in reversed(path))


def reduce_path(path: Iterable[OEdge]) -> tuple:
    out: list = []
    for o in path:
        if out and out[-1] == rev(o):
            out.pop()
        else:
            out.append(o)
    return tuple(out)


def format_oedge(o: OEdge) -> str:
    return o[0] if o[1] > 0 else o[0] + "^-1"


def format_path(path: Sequence[OEdge]) -> str:
    return " ".join(format_oedge(o) for o in path)


def parse_oedge(tok: str) -> OEdge:
    tok = tok.strip()
    if tok.endswith("^-1"):
        return (tok[:-3], -1)
    if tok.endswith("^1"):
        return (tok[:-2], 1)
    return (tok, 1)


def parse_path(text: str) -> tuple:
    return tuple(parse_oedge(t) for t in text.split())


def _okey(o: OEdge):
    return (o[0], -o[1])


class _SubgraphReader:
    """Finds the reduced edge path in a connected subgraph with a given label."""

    def __init__(self, graph: "BaseGraph", names: Iterable[str], root: str):
        self.graph = graph
        self.names = sorted(set(names))
        self.root = root
        tree_paths = {root: ()}
        # spanning tree: Kruskal in name order, then read off paths by BFS
        parent = {}

        def find(v):
            while parent.get(v, v) != v:
                v = parent[v]
            return v

        tree_edges = set()
        for nm in self.names:
            s, t = graph.ends(nm)
            rs, rt = find(s), find(t)
            if rs != rt:
                parent[rs] = rt
                tree_edges.add(nm)
        adj: dict[str, list] = {}
        for nm in tree_edges:
            s, t = graph.ends(nm)
            adj.setdefault(s, []).append((nm, 1))
            adj.setdefault(t, []).append((nm, -1))
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for o in sorted(adj.get(v, []), key=_okey):
                w = graph.tgt(o)
                if w not in tree_paths:
                    tree_paths[w] = tree_paths[v] + (o,)
                    queue.append(w)
        self.tree_paths = tree_paths
        self.tree_edges = tree_edges
        self.pi = {v: graph.path_label(p) for v, p in tree_paths.items()}
        self.loops = []
        gens = []
        for nm in self.names:
            if nm in tree_edges:
                continue
            s, t = graph.ends(nm)
            self.loops.append(nm)
            gens.append(mul(self.pi[s], graph.label((nm, 1)), inverse(self.pi[t])))
        self.generators = gens
        self.rewriter = Rewriter(gens)

    def vertices(self) -> set:
        return set(self.tree_paths)

    def loop_path(self, i: int) -> tuple:
        nm = self.loops[abs(i) - 1]
        s, t = self.graph.ends(nm)
        p = self.tree_paths[s] + ((nm, 1),) + reverse_path(self.tree_paths[t])
        return p if i > 0 else reverse_path(p)

    def path_with_label(self, u: str, v: str, g: Sequence[int]) -> Optional[tuple]:
        if u not in self.tree_paths or v not in self.tree_paths:
            return None
        lam = mul(self.pi[u], g, inverse(self.pi[v]))
        gw = self.rewriter.rewrite(lam)
        if gw is None:
            return None
        path: list = list(reverse_path(self.tree_paths[u]))
        for i in gw:
            path.extend(self.loop_path(i))
        path.extend(self.tree_paths[v])
        return reduce_path(path)


@dataclass(frozen=True)
class BaseGraph:
    """Finite connected graph whose edge labels mark pi_1 as F_n.

    Labels default to the identity (tree edges); the labels of the loops of a
    spanning tree must form a free basis of F_n.
    """

    basis: Basis
    vertices: tuple
    edges: tuple  # (name, src, tgt)
    labels: tuple = ()  # (name, word) for edges with nonidentity label

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "labels", tuple(sorted((nm, reduce_word(w)) for nm, w in self.labels if reduce_word(w))))
        self._validate()

    # construction helpers
    @classmethod
    def build(cls, basis: Basis, vertices: Sequence[str], edges: dict, labels: dict) -> "BaseGraph":
        return cls(basis, tuple(vertices), tuple((nm, s, t) for nm, (s, t) in edges.items()),
                   tuple(labels.items()))

    @classmethod
    def rose(cls, basis: Basis, names: Optional[Sequence[str]] = None) -> "BaseGraph":
        names = list(names) if names else list(basis.names)
        edges = tuple((nm, "v", "v") for nm in names)
        labels = tuple((nm, (i,)) for i, nm in enumerate(names, start=1))
        return cls(basis, ("v",), edges, labels)

    def _validate(self) -> None:
        if not self.vertices:
            raise ValidationError("graph has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex names")
        names = [e[0] for e in self.edges]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate edge names")
        vs = set(self.vertices)
        for nm, s, t in self.edges:
            if s not in vs or t not in vs:
                raise ValidationError(f"edge {nm} has an unknown endpoint")
            if nm in vs:
                pass
        for nm, w in self.labels:
            if nm not in self._ends:
                raise ValidationError(f"label for unknown edge {nm}")
            if w and max(abs(x) for x in w) > self.basis.rank:
                raise ValidationError(f"label of {nm} uses letters outside the basis")
        for v in self.vertices:
            if self.valence(v) < 1:
                raise ValidationError(f"vertex {v} has valence 0")
        reader = self.reader
        if reader.vertices() != vs:
            raise ValidationError("graph is not connected")
        n = self.basis.rank
        if len(reader.generators) != n:
            raise ValidationError(f"graph has first Betti number {len(reader.generators)}, basis rank is {n}")
        if not reader.rewriter.free_basis or any(reader.rewriter.rewrite((i,)) is None for i in range(1, n + 1)):
            raise ValidationError("edge labels do not mark the fundamental group as F_n")

    # basic structure
    @cached_property
    def _ends(self) -> dict:
        return {nm: (s, t) for nm, s, t in self.edges}

    @cached_property
    def _labels(self) -> dict:
        return dict(self.labels)

    @property
    def rank(self) -> int:
        return self.basis.rank

    @property
    def edge_names(self) -> list:
        return sorted(self._ends)

    def ends(self, name: str) -> tuple:
        try:
            return self._ends[name]
        except KeyError:
            raise ValidationError(f"unknown edge {name!r}")

    def src(self, o: OEdge) -> str:
        s, t = self.ends(o[0])
        return s if o[1] > 0 else t

    def tgt(self, o: OEdge) -> str:
        s, t = self.ends(o[0])
        return t if o[1] > 0 else s

    def label(self, o: OEdge) -> Word:
        w = self._labels.get(o[0], ())
        return w if o[1] > 0 else inverse(w)

    def edge_label(self, name: str) -> Word:
        return self._labels.get(name, ())

    @cached_property
    def _out(self) -> dict:
        out = {v: [] for v in self.vertices}
        for nm, s, t in self.edges:
            out[s].append((nm, 1))
            out[t].append((nm, -1))
        return {v: sorted(os, key=_okey) for v, os in out.items()}

    def directions(self, v: str) -> list:
        """Oriented edges starting at v (a loop contributes both orientations)."""
        return self._out[v]

    def valence(self, v: str) -> int:
        return len(self._out[v])

    @cached_property
    def reader(self) -> _SubgraphReader:
        return _SubgraphReader(self, self.edge_names, self.vertices[0])

    @property
    def root(self) -> str:
        return self.vertices[0]

    def tree_edges(self) -> set:
        return set(self.reader.tree_edges)

    # paths
    def check_path(self, path: Sequence[OEdge], immersed: bool = True) -> tuple:
        path = tuple(path)
        for o in path:
            self.ends(o[0])
            if o[1] not in (1, -1):
                raise ValidationError(f"bad orientation in {o}")
        for a, b in zip(path, path[1:]):
            if self.tgt(a) != self.src(b):
                raise ValidationError(f"path is not connected at {format_oedge(a)} {format_oedge(b)}")
            if immersed and b == rev(a):
                raise ValidationError(f"path backtracks at {format_oedge(a)} {format_oedge(b)}")
        return path

    def path_label(self, path: Sequence[OEdge]) -> Word:
        return mul(*(self.label(o) for o in path))

    def prefix_labels(self, path: Sequence[OEdge]) -> list:
        out = [()]
        for o in path:
            out.append(mul(out[-1], self.label(o)))
        return out

    def path_with_label(self, u: str, v: str, g: Sequence[int]) -> tuple:
        p = self.reader.path_with_label(u, v, g)
        if p is None:
            raise ValidationError("no path with that label")
        return p

    def loop_for(self, g: Sequence[int], v: Optional[str] = None) -> tuple:
        v = v or self.root
        return self.path_with_label(v, v, g)

    def canonical_form(self) -> tuple:
        return (self.basis.names, self.vertices, tuple(sorted(self.edges)), self.labels)


def tree_edge(graph: BaseGraph, x: Word, o: OEdge) -> tuple:
    """Unoriented tree edge crossed when traversing o from base-tree vertex (x, src o)."""
    if o[1] > 0:
        return (x, o[0])
    return (mul(x, graph.label(o)), o[0])


# ---------------------------------------------------------------------------
# free splittings


@dataclass(frozen=True)
class NaturalStructure:
    natural_edges: tuple  # each a tuple of uncollapsed oriented edges, canonical orientation
    natural_vertices: tuple  # component ids

    def edge_of(self) -> dict:
        out = {}
        for i, ne in enumerate(self.natural_edges):
            for o in ne:
                out[o[0]] = i
        return out


@dataclass(frozen=True)
class FreeSplitting:
    """Base marked graph plus a collapsed subgraph Z."""

    base: BaseGraph
    collapsed: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "collapsed", frozenset(self.collapsed))
        self._validate()

    def _validate(self) -> None:
        names = set(self.base.edge_names)
        unknown = self.collapsed - names
        if unknown:
            raise ValidationError(f"collapsed edges not in graph: {sorted(unknown)}")
        if not names - self.collapsed:
            raise ValidationError("collapsed subgraph contains every edge")
        for c in self.components:
            if self.comp_valence(c) == 0:
                raise ValidationError(f"component {c} has no uncollapsed edges")
            if self.comp_valence(c) == 1 and self.comp_rank(c) == 0:
                raise ValidationError(f"vertex {c} of the quotient has valence 1 and trivial stabilizer")
        if not self.natural_structure().natural_vertices:
            raise ValidationError("quotient is a circle with no natural vertex")

    @property
    def rank(self) -> int:
        return self.base.rank

    @property
    def basis(self) -> Basis:
        return self.base.basis

    def uncollapsed(self) -> list:
        return [nm for nm in self.base.edge_names if nm not in self.collapsed]

    def is_collapsed(self, o_or_name) -> bool:
        nm = o_or_name[0] if isinstance(o_or_name, tuple) else o_or_name
        return nm in self.collapsed

    @cached_property
    def _comp(self) -> dict:
        parent = {v: v for v in self.base.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for nm in sorted(self.collapsed):
            s, t = self.base.ends(nm)
            a, b = find(s), find(t)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict = {}
        for v in self.base.vertices:
            groups.setdefault(find(v), []).append(v)
        comp = {}
        for members in groups.values():
            cid = min(members)
            for v in members:
                comp[v] = cid
        return comp

    def comp(self, v: str) -> str:
        return self._comp[v]

    @cached_property
    def components(self) -> list:
        return sorted(set(self._comp.values()))

    def comp_vertices(self, c: str) -> list:
        return sorted(v for v, cc in self._comp.items() if cc == c)

    def comp_edges(self, c: str) -> list:
        return sorted(nm for nm in self.collapsed if self._comp[self.base.ends(nm)[0]] == c)

    @cached_property
    def _readers(self) -> dict:
        return {c: _SubgraphReader(self.base, self.comp_edges(c), c) for c in self.components}

    def comp_reader(self, c: str) -> _SubgraphReader:
        return self._readers[c]

    def comp_rank(self, c: str) -> int:
        return len(self._readers[c].generators)

    def stabilizer(self, c: str) -> StallingsGraph:
        """Stabilizer of the tree vertex containing (1, c)."""
        return StallingsGraph.from_generators(self._readers[c].generators, self.rank)

    def half_edges(self, c: str) -> list:
        """Uncollapsed oriented edges starting in component c."""
        out = []
        for v in self.comp_vertices(c):
            out += [o for o in self.base.directions(v) if o[0] not in self.collapsed]
        return sorted(out, key=_okey)

    def comp_valence(self, c: str) -> int:
        return len(self.half_edges(c))

    def is_natural_comp(self, c: str) -> bool:
        return self.comp_rank(c) > 0 or self.comp_valence(c) != 2

    def natural_structure(self) -> NaturalStructure:
        return self._natural

    @cached_property
    def _natural(self) -> NaturalStructure:
        natural = [c for c in self.components if self.is_natural_comp(c)]
        nat = set(natural)
        used = set()
        nedges = []
        for c in natural:
            for o in self.half_edges(c):
                if o[0] in used:
                    continue
                word = [o]
                used.add(o[0])
                cur = self.comp(self.base.tgt(o))
                while cur not in nat:
                    hs = [h for h in self.half_edges(cur) if h != rev(word[-1])]
                    (nxt,) = hs
                    word.append(nxt)
                    used.add(nxt[0])
                    cur = self.comp(self.base.tgt(nxt))
                w = tuple(word)
                r = reverse_path(w)
                nedges.append(min(w, r, key=lambda p: [_okey(x) for x in p]))
        nedges = sorted(set(nedges), key=lambda p: [_okey(x) for x in p])
        return NaturalStructure(tuple(nedges), tuple(natural))

    # paths in the tree
    def check_canonical(self, path: Sequence[OEdge]) -> tuple:
        path = self.base.check_path(path)
        if not path:
            raise ValidationError("path is empty")
        if path[0][0] in self.collapsed or path[-1][0] in self.collapsed:
            raise ValidationError("canonical lift must begin and end with uncollapsed edges")
        return path

    def tree_positions(self, path: Sequence[OEdge]) -> list:
        """[(k, x_k, o_k)] for uncollapsed positions, x_k the prefix label."""
        prefixes = self.base.prefix_labels(path)
        return [(k, prefixes[k], o) for k, o in enumerate(path) if o[0] not in self.collapsed]

    def canonical_form(self) -> tuple:
        return (self.base.canonical_form(), tuple(sorted(self.collapsed)))


@dataclass(frozen=True)
class TreePath:
    """Path in the tree T as a list of (g, o): traverse o from the lift of src(o) at g."""

    steps: tuple

    def __len__(self):
        return len(self.steps)


def project_path(split: FreeSplitting, path: Sequence[OEdge]) -> TreePath:
    path = split.check_canonical(path)
    return TreePath(tuple((GroupElement(x), o) for _, x, o in split.tree_positions(path)))


def lift_path(split: FreeSplitting, quotient_path) -> tuple:
    """Canonical lift in the base graph of a path in T.

    Accepts a TreePath or a base-graph encoding beginning and ending with
    uncollapsed edges (which is re-tightened through the collapsed part)."""
    if not isinstance(quotient_path, TreePath):
        quotient_path = project_path_loose(split, quotient_path)
    steps = quotient_path.steps
    if not steps:
        raise ValidationError("empty tree path")
    G = split.base
    out: list = []
    for k, (g, o) in enumerate(steps):
        if o[0] in split.collapsed:
            raise ValidationError("tree path steps must be uncollapsed edges")
        if k:
            gp, op = steps[k - 1]
            end = mul(gp.word, G.label(op))
            u, v = G.tgt(op), G.src(o)
            if split.comp(u) != split.comp(v):
                raise ValidationError(f"tree path is disconnected before step {k}")
            h = mul(inverse(end), g.word)
            conn = split.comp_reader(split.comp(u)).path_with_label(u, v, h)
            if conn is None:
                raise ValidationError(f"tree path is disconnected before step {k}")
            if not conn and o == rev(op):
                raise ValidationError(f"tree path backtracks at step {k}")
            out.extend(conn)
        out.append(o)
    return G.check_path(out)


def project_path_loose(split: FreeSplitting, path: Sequence[OEdge]) -> TreePath:
    """Project a base path (not necessarily reduced inside Z) to T, tightening."""
    path = split.base.check_path(path, immersed=False)
    if not path:
        raise ValidationError("path is empty")
    if path[0][0] in split.collapsed or path[-1][0] in split.collapsed:
        raise ValidationError("encoding must begin and end with uncollapsed edges")
    steps = [(GroupElement(x), o) for _, x, o in split.tree_positions(path)]
    # tighten: cancel consecutive traversals of the same tree edge in opposite directions
    G = split.base
    out: list = []
    for g, o in steps:
        if out:
            gp, op = out[-1]
            if o == rev(op) and mul(gp.word, G.label(op)) == g.word:
                out.pop()
                continue
        out.append((g, o))
    if not out:
        raise ValidationError("path is trivial in the tree")
    g0 = out[0][0]
    return TreePath(tuple((GroupElement(mul(inverse(g0.word), g.word)), o) for g, o in out))


def element_of_translate(split: FreeSplitting, path: Sequence[OEdge], i: int, j: int,
                         same_orientation: bool = True) -> Optional[GroupElement]:
    """g with g * (edge-lift at position i) = (edge-lift at position j), or None
    when the requested orientation disagrees with the edge data."""
    path = tuple(path)
    if not (0 <= i < len(path) and 0 <= j < len(path)):
        raise ValidationError("position out of range")
    if path[i][0] != path[j][0]:
        raise ValidationError("positions carry different base edges")
    G = split.base
    prefixes = G.prefix_labels(path)
    hi = tree_edge(G, prefixes[i], path[i])[0]
    hj = tree_edge(G, prefixes[j], path[j])[0]
    if (path[i][1] == path[j][1]) != same_orientation:
        return None
    return GroupElement(mul(hj, inverse(hi)))


# ---------------------------------------------------------------------------
# graph morphisms


@dataclass(frozen=True)
class GraphMorphism:
    """Vertex map plus edge-to-edge-path map between base graphs."""

    domain: BaseGraph
    codomain: BaseGraph
    vmap: tuple  # (v, w)
    emap: tuple  # (e, path)
    allow_empty: bool = False

    def __post_init__(self):
        object.__setattr__(self, "vmap", tuple(sorted(tuple(p) for p in self.vmap)))
        object.__setattr__(self, "emap", tuple(sorted((e, tuple(tuple(o) for o in p)) for e, p in self.emap)))
        self._validate()

    @classmethod
    def build(cls, domain: BaseGraph, codomain: BaseGraph, vmap: dict, emap: dict,
              allow_empty: bool = False) -> "GraphMorphism":
        return cls(domain, codomain, tuple(vmap.items()), tuple(emap.items()), allow_empty)

    @cached_property
    def _v(self) -> dict:
        return dict(self.vmap)

    @cached_property
    def _e(self) -> dict:
        return dict(self.emap)

    def _validate(self) -> None:
        D, C = self.domain, self.codomain
        if set(self._v) != set(D.vertices):
            raise ValidationError("vertex map must be defined on every domain vertex")
        for w in self._v.values():
            if w not in C.vertices:
                raise ValidationError(f"vertex map hits unknown vertex {w}")
        if set(self._e) != set(D.edge_names):
            raise ValidationError("edge map must be defined on every domain edge")
        for e, p in self._e.items():
            if not p and not self.allow_empty:
                raise ValidationError(f"edge {e} has an empty image")
            C.check_path(p)
            s, t = D.ends(e)
            if p:
                if C.src(p[0]) != self._v[s] or C.tgt(p[-1]) != self._v[t]:
                    raise ValidationError(f"image of edge {e} does not match the vertex map")
            elif self._v[s] != self._v[t]:
                raise ValidationError(f"edge {e} has an empty image between distinct vertices")

    def vertex(self, v: str) -> str:
        return self._v[v]

    def image(self, o: OEdge) -> tuple:
        p = self._e[o[0]]
        return p if o[1] > 0 else reverse_path(p)

    def image_path(self, path: Sequence[OEdge], tighten: bool = True) -> tuple:
        out: list = []
        for o in path:
            out.extend(self.image(o))
        return reduce_path(out) if tighten else tuple(out)

    def induced_map(self) -> dict:
        """Letter -> image word of the induced homomorphism on F_n (basepoints at roots)."""
        D, C = self.domain, self.codomain
        out = {}
        for i in range(1, D.rank + 1):
            loop = D.loop_for((i,))
            img = self.image_path(loop, tighten=False)
            out[i] = C.path_label(img)
        return out

    def is_homotopy_equivalence(self) -> bool:
        if self.domain.rank != self.codomain.rank:
            return False
        imgs = list(self.induced_map().values())
        rw = Rewriter(imgs)
        return rw.free_basis and all(rw.rewrite((i,)) is not None for i in range(1, self.codomain.rank + 1))

    def compose(self, other: "GraphMorphism") -> "GraphMorphism":
        """other after self."""
        vmap = {v: other.vertex(w) for v, w in self._v.items()}
        emap = {e: other.image_path(p) for e, p in self._e.items()}
        return GraphMorphism.build(self.domain, other.codomain, vmap, emap, allow_empty=True)

    def is_immersion_on_edges(self) -> bool:
        return all(reduce_path(p) == p for p in self._e.values())
