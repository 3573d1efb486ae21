"""Stallings graphs of finitely generated subgroups of F_n, Whitehead graphs,
and the minimal free factor containing a subgroup.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import ResourceLimitError, ValidationError, max_edges, MAX_RANK
from .words import Basis, Word, inverse, mul, reduce_word


# ---------------------------------------------------------------------------
# folding engine


class Folder:
    """Mutable labelled graph that folds to a deterministic automaton.

    Edges carry a letter and, when ``tracked``, a word in auxiliary symbols
    (typically generator indices).  Folding twists vertex frames so that loop
    products at the base vertex are preserved, which lets a folded graph
    rewrite subgroup elements in terms of the generators.
    """

    def __init__(self, tracked: bool = False):
        self.tracked = tracked
        self.edges: dict[int, list] = {}
        self.adj: dict[int, dict[int, set]] = {}
        self.rep: dict[int, int] = {}
        self._next_v = 0
        self._next_e = 0
        self.relation_found = False
        self.base = self.new_vertex()

    def new_vertex(self) -> int:
        v = self._next_v
        self._next_v += 1
        self.adj[v] = {}
        return v

    def find(self, v: int) -> int:
        root = v
        while root in self.rep:
            root = self.rep[root]
        while v in self.rep:
            nxt = self.rep[v]
            self.rep[v] = root
            v = nxt
        return root

    def add_edge(self, u: int, x: int, z: int, s: Word = ()) -> None:
        u, z = self.find(u), self.find(z)
        if x < 0:
            u, x, z, s = z, -x, u, inverse(s)
        e = self._next_e
        self._next_e += 1
        self.edges[e] = [u, x, z, tuple(s)]
        self.adj[u].setdefault(x, set()).add(e)
        self.adj[z].setdefault(-x, set()).add(e)

    def add_path(self, u: int, word: Sequence[int], z: int, label: Word = ()) -> None:
        """Add a path reading ``word`` from u to z; ``label`` sits on its first edge."""
        word = tuple(word)
        if not word:
            if label and self.tracked:
                raise ValidationError("cannot attach a label to an empty path")
            self.identify(u, z)
            return
        cur = u
        for k, x in enumerate(word):
            nxt = z if k == len(word) - 1 else self.new_vertex()
            self.add_edge(cur, x, nxt, label if k == 0 else ())
            cur = nxt

    def identify(self, u: int, z: int) -> None:
        u, z = self.find(u), self.find(z)
        if u == z:
            return
        if z == self.base:
            u, z = z, u
        self._merge(z, u)

    def _read(self, e: int, v: int, y: int):
        u, x, z, s = self.edges[e]
        if u == v and x == y:
            return z, s
        return u, inverse(s)

    def _incident(self, v: int) -> set:
        out = set()
        for es in self.adj[v].values():
            out |= es
        return out

    def _twist(self, b: int, h: Word) -> None:
        if not self.tracked or not h:
            return
        hi = inverse(h)
        for e in self._incident(b):
            rec = self.edges[e]
            if rec[0] == b:
                rec[3] = mul(hi, rec[3])
            if rec[2] == b:
                rec[3] = mul(rec[3], h)

    def _delete_edge(self, e: int) -> None:
        u, x, z, _ = self.edges.pop(e)
        self.adj[u][x].discard(e)
        if not self.adj[u][x]:
            del self.adj[u][x]
        self.adj[z][-x].discard(e)
        if not self.adj[z][-x]:
            del self.adj[z][-x]

    def _merge(self, b: int, a: int) -> None:
        """Merge vertex b into vertex a (frames assumed compatible)."""
        for e in self._incident(b):
            rec = self.edges[e]
            if rec[0] == b:
                rec[0] = a
            if rec[2] == b:
                rec[2] = a
        for y, es in self.adj.pop(b).items():
            self.adj[a].setdefault(y, set()).update(es)
        self.rep[b] = a

    def fold(self) -> "Folder":
        work = list(self.adj)
        while work:
            v = work.pop()
            if v not in self.adj:
                v = self.find(v)
            for y in sorted(self.adj[v]):
                es = self.adj[v].get(y)
                if es is None or len(es) < 2:
                    continue
                e1, e2 = sorted(es)[:2]
                w1, t1 = self._read(e1, v, y)
                w2, t2 = self._read(e2, v, y)
                if w1 == w2:
                    if self.tracked and t1 != t2:
                        self.relation_found = True
                    self._delete_edge(e2)
                    work.append(v)
                    break
                if w2 != self.base:
                    b, a, h, eb = w2, w1, mul(inverse(t2), t1), e2
                else:
                    b, a, h, eb = w1, w2, mul(inverse(t1), t2), e1
                self._twist(b, h)
                self._delete_edge(eb)
                self._merge(b, a)
                work.append(a)
                if v != b:
                    work.append(v)
                break
        return self

    def degree(self, v: int) -> int:
        return sum(len(es) for es in self.adj[v].values())

    def trim(self, keep: Iterable[int] = ()) -> "Folder":
        keep = {self.find(k) for k in keep} | {self.base}
        stack = [v for v in self.adj if v not in keep and self.degree(v) <= 1]
        while stack:
            v = stack.pop()
            if v not in self.adj or v in keep or self.degree(v) > 1:
                continue
            nbrs = []
            for e in list(self._incident(v)):
                u, _, z, _ = self.edges[e]
                nbrs.append(z if u == v else u)
                self._delete_edge(e)
            del self.adj[v]
            stack.extend(n for n in nbrs if n in self.adj)
        return self

    def transitions(self) -> dict[int, dict[int, tuple]]:
        """v -> letter -> (target, label); requires a folded graph."""
        out: dict[int, dict[int, tuple]] = {}
        for v, row in self.adj.items():
            out[v] = {}
            for y, es in row.items():
                (e,) = es
                out[v][y] = self._read(e, v, y)
        return out


# ---------------------------------------------------------------------------
# immutable Stallings graphs


def _canonical(trans: dict, base: int) -> tuple[int, tuple]:
    order = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for y in sorted(trans[v], key=lambda t: (abs(t), t < 0)):
            z = trans[v][y][0] if isinstance(trans[v][y], tuple) else trans[v][y]
            if z not in order:
                order[z] = len(order)
                queue.append(z)
    edges = []
    for v, row in trans.items():
        for y, val in row.items():
            z = val[0] if isinstance(val, tuple) else val
            if y > 0:
                edges.append((order[v], y, order[z]))
    return len(order), tuple(sorted(edges))


@dataclass(frozen=True)
class StallingsGraph:
    """Based folded core graph of a subgroup of F_n.

    Vertices are 0..num_vertices-1 with 0 the basepoint, numbered by a
    breadth-first search in letter order, so equal subgroups give equal
    objects.
    """

    rank_n: int
    num_vertices: int
    edges: tuple
    _trans: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        trans = {v: {} for v in range(self.num_vertices)}
        for u, x, z in self.edges:
            trans[u][x] = z
            trans[z][-x] = u
        object.__setattr__(self, "_trans", trans)

    # construction
    @classmethod
    def from_generators(cls, generators: Iterable[Sequence[int]], n: int) -> "StallingsGraph":
        f = Folder()
        for w in generators:
            w = reduce_word(w)
            if w:
                if max(abs(x) for x in w) > n:
                    raise ValidationError(f"word uses letters beyond rank {n}")
                f.add_path(f.base, w, f.base)
        f.fold().trim()
        trans = {v: {y: t for y, (t, _) in row.items()} for v, row in f.transitions().items()}
        nv, edges = _canonical(trans, f.base)
        return cls(n, nv, edges)

    @classmethod
    def trivial(cls, n: int) -> "StallingsGraph":
        return cls(n, 1, ())

    @classmethod
    def full(cls, n: int) -> "StallingsGraph":
        return cls(n, 1, tuple((0, i, 0) for i in range(1, n + 1)))

    # queries
    @property
    def trans(self) -> dict:
        return self._trans

    @property
    def rank(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    def is_trivial(self) -> bool:
        return not self.edges

    def is_full(self) -> bool:
        return self == StallingsGraph.full(self.rank_n)

    def read(self, word: Sequence[int], start: int = 0) -> Optional[int]:
        v = start
        for x in word:
            v = self._trans[v].get(x)
            if v is None:
                return None
        return v

    def contains(self, word: Sequence[int]) -> bool:
        return self.read(reduce_word(word)) == 0

    def spanning_tree(self) -> dict[int, Word]:
        """Word labelling the tree path from the basepoint to each vertex."""
        paths = {0: ()}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for y in sorted(self._trans[v], key=lambda t: (abs(t), t < 0)):
                z = self._trans[v][y]
                if z not in paths:
                    paths[z] = paths[v] + (y,)
                    queue.append(z)
        return paths

    def generators(self) -> list[Word]:
        """Free basis read off the spanning tree (one per non-tree edge)."""
        paths = self.spanning_tree()
        tree = set()
        for v, p in paths.items():
            if p:
                u = self.read(p[:-1])
                tree.add((u, p[-1], v) if p[-1] > 0 else (v, -p[-1], u))
        gens = []
        for u, x, z in self.edges:
            if (u, x, z) not in tree:
                gens.append(mul(paths[u], (x,), inverse(paths[z])))
        return gens

    def contains_subgroup(self, other: "StallingsGraph") -> bool:
        return all(self.contains(g) for g in other.generators())

    def core(self) -> tuple["StallingsGraph", Word]:
        """Unbased core (as a graph based at its first vertex) and the hair word u
        with H = u * pi1(core) * u^-1."""
        if self.is_trivial():
            return self, ()
        deg = {v: len(row) for v, row in self._trans.items()}
        removed = set()
        v = 0
        hair: list[int] = []
        while deg[v] == 1:
            (y, z), = [(t, w) for t, w in self._trans[v].items() if w not in removed]
            removed.add(v)
            hair.append(y)
            deg[z] -= 1
            v = z
        trans = {u: {y: z for y, z in row.items() if z not in removed}
                 for u, row in self._trans.items() if u not in removed}
        nv, edges = _canonical(trans, v)
        return StallingsGraph(self.rank_n, nv, edges), tuple(hair)

    def core_edge_count(self) -> int:
        return len(self.core()[0].edges)

    def conjugacy_key(self) -> tuple:
        """Canonical form of the unbased core: equal iff conjugate subgroups."""
        core, _ = self.core()
        if core.is_trivial():
            return (0, ())
        return min(_canonical(core._trans, v) for v in range(core.num_vertices))

    def is_conjugate_to(self, other: "StallingsGraph") -> bool:
        return self.rank_n == other.rank_n and self.conjugacy_key() == other.conjugacy_key()

    def conjugate_into(self, other: "StallingsGraph") -> bool:
        """True when some conjugate of self lies in other.

        A labelled map from the core of self into the core of other is
        determined by the image of one vertex, so every choice is tried."""
        core, _ = self.core()
        if core.is_trivial():
            return True
        target, _ = other.core()
        if target.is_trivial():
            return False
        for start in range(target.num_vertices):
            image = {0: start}
            queue = deque([0])
            ok = True
            while queue and ok:
                u = queue.popleft()
                for y, z in core._trans[u].items():
                    w = target._trans[image[u]].get(y)
                    if w is None:
                        ok = False
                        break
                    if z not in image:
                        image[z] = w
                        queue.append(z)
                    elif image[z] != w:
                        ok = False
                        break
            if ok:
                return True
        return False

    def letters(self) -> set[int]:
        return {x for _, x, _ in self.core()[0].edges}

    def conjugate(self, u: Sequence[int]) -> "StallingsGraph":
        """Stallings graph of u H u^-1."""
        return StallingsGraph.from_generators(
            [mul(u, g, inverse(u)) for g in self.generators()], self.rank_n)

    def intersection(self, other: "StallingsGraph") -> "StallingsGraph":
        start = (0, 0)
        index = {start: 0}
        queue = deque([start])
        trans: dict[int, dict[int, int]] = {0: {}}
        while queue:
            p = queue.popleft()
            a, b = p
            for y, za in self._trans[a].items():
                zb = other._trans[b].get(y)
                if zb is None:
                    continue
                q = (za, zb)
                if q not in index:
                    index[q] = len(index)
                    trans[index[q]] = {}
                    queue.append(q)
                trans[index[p]][y] = index[q]
        f = Folder()
        ids = {0: f.base}
        for v in trans:
            if v not in ids:
                ids[v] = f.new_vertex()
        for v, row in trans.items():
            for y, z in row.items():
                if y > 0:
                    f.add_edge(ids[v], y, ids[z])
        f.trim()
        t = {v: {y: z for y, (z, _) in row.items()} for v, row in f.transitions().items()}
        nv, edges = _canonical(t, f.base)
        return StallingsGraph(self.rank_n, nv, edges)

    def format(self, basis: Basis) -> dict:
        return {
            "rank": self.rank,
            "vertices": self.num_vertices,
            "edges": [[u, basis.names[x - 1], z] for u, x, z in self.edges],
            "generators": [basis.format(g) for g in self.generators()],
        }


def stallings_fold(generators: Iterable[Sequence[int]], n: int) -> StallingsGraph:
    return StallingsGraph.from_generators(generators, n)


# ---------------------------------------------------------------------------
# automata with marked vertices (coset sets) and rewriting


class Rewriter:
    """Expresses elements of <h_1..h_k> as words in the generators."""

    def __init__(self, generators: Sequence[Sequence[int]]):
        self.generators = [reduce_word(g) for g in generators]
        f = Folder(tracked=True)
        for i, g in enumerate(self.generators, start=1):
            if g:
                f.add_path(f.base, g, f.base, label=(i,))
        f.fold()
        self.free_basis = not f.relation_found and all(self.generators)
        self.base = f.base
        self.trans = f.transitions()

    def rewrite(self, word: Sequence[int]) -> Optional[Word]:
        v = self.base
        out: list[Word] = []
        for x in reduce_word(word):
            step = self.trans[v].get(x)
            if step is None:
                return None
            v, s = step
            out.append(s)
        if v != self.base:
            return None
        return mul(*out)


def coset_automaton(sub: StallingsGraph, left: Sequence[int], right: Sequence[int]):
    """Folded automaton whose reduced words from p to q are left * sub * right.

    Returns (transitions, p, q)."""
    f = Folder()
    for g in sub.generators():
        f.add_path(f.base, g, f.base)
    p = f.new_vertex()
    q = f.new_vertex()
    f.add_path(p, reduce_word(left), f.base)
    f.add_path(f.base, reduce_word(right), q)
    f.fold()
    trans = {v: {y: z for y, (z, _) in row.items()} for v, row in f.transitions().items()}
    return trans, f.find(p), f.find(q)


def intersect_with_set(sub: StallingsGraph, trans: dict, p: int, q: int) -> Optional[Word]:
    """Some element of sub lying in the set read from p to q, or None."""
    start = (0, p)
    parent = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        a, b = cur
        if a == 0 and b == q:
            word = []
            while parent[cur] is not None:
                prev, y = parent[cur]
                word.append(y)
                cur = prev
            return tuple(reversed(word))
        for y in sorted(sub.trans[a], key=lambda t: (abs(t), t < 0)):
            zb = trans[b].get(y)
            if zb is None:
                continue
            nxt = (sub.trans[a][y], zb)
            if nxt not in parent:
                parent[nxt] = (cur, y)
                queue.append(nxt)
    return None


def double_coset_witness(S: StallingsGraph, F: StallingsGraph, c1: Sequence[int], c2: Sequence[int]) -> Optional[Word]:
    """Some s in S with s * c2 in c1 * F, or None."""
    trans, p, q = coset_automaton(F, c1, inverse(c2))
    return intersect_with_set(S, trans, p, q)


def conjugate_intersection(S: StallingsGraph, F: StallingsGraph, c: Sequence[int]) -> StallingsGraph:
    """S intersected with c F c^-1."""
    return S.intersection(F.conjugate(c))


# ---------------------------------------------------------------------------
# Whitehead automorphisms


@dataclass(frozen=True, order=True)
class WhiteheadAuto:
    """Type-two Whitehead automorphism (A, x): y -> x^-[y^-1 in A] y x^[y in A]."""

    x: int
    A: tuple

    def image(self, y: int) -> Word:
        if abs(y) == abs(self.x):
            return (y,)
        A = self.A
        out = []
        if -y in A:
            out.append(-self.x)
        out.append(y)
        if y in A:
            out.append(self.x)
        return tuple(out)

    def apply(self, word: Sequence[int]) -> Word:
        return reduce_word(z for y in word for z in self.image(y))

    def inverse(self) -> "WhiteheadAuto":
        A = tuple(sorted((set(self.A) - {self.x}) | {-self.x}, key=_okey))
        return WhiteheadAuto(-self.x, A)

    def describe(self, basis: Basis) -> dict:
        return {"x": basis.name_of(self.x), "A": [basis.name_of(y) for y in self.A]}


def _okey(t: int):
    return (abs(t), t < 0)


def whitehead_autos(r: int) -> list[WhiteheadAuto]:
    """All nontrivial, non-inner type-two Whitehead automorphisms of F_r in encoding order."""
    letters = sorted([i for i in range(1, r + 1)] + [-i for i in range(1, r + 1)], key=_okey)
    out = []
    for x in letters:
        others = [y for y in letters if abs(y) != abs(x)]
        for k in range(1, len(others)):
            for B in itertools.combinations(others, k):
                out.append(WhiteheadAuto(x, tuple(sorted((x,) + B, key=_okey))))
    return sorted(out, key=lambda a: (_okey(a.x), [_okey(t) for t in a.A]))


def apply_auto_to_subgroup(auto: WhiteheadAuto, H: StallingsGraph) -> StallingsGraph:
    return StallingsGraph.from_generators([auto.apply(g) for g in H.generators()], H.rank_n)


# ---------------------------------------------------------------------------
# Whitehead graphs


@dataclass(frozen=True)
class WhiteheadGraph:
    """Vertices are oriented letters; one edge per turn of the core graph."""

    rank_n: int
    edges: tuple

    @property
    def vertices(self) -> list[int]:
        return sorted([i for i in range(1, self.rank_n + 1)] + [-i for i in range(1, self.rank_n + 1)], key=_okey)

    @classmethod
    def of_subgroup(cls, H: StallingsGraph) -> "WhiteheadGraph":
        core, _ = H.core()
        edges = []
        for v, row in core.trans.items():
            dirs = sorted(row, key=_okey)
            for d1, d2 in itertools.combinations(dirs, 2):
                edges.append(tuple(sorted((d1, d2), key=_okey)))
        return cls(H.rank_n, tuple(sorted(edges, key=lambda e: (_okey(e[0]), _okey(e[1])))))

    @classmethod
    def of_cyclic_word(cls, word: Sequence[int], n: int) -> "WhiteheadGraph":
        w = reduce_word(word)
        from .words import cyclic_reduce
        _, c = cyclic_reduce(w)
        edges = []
        for i in range(len(c)):
            x, y = c[i], c[(i + 1) % len(c)]
            edges.append(tuple(sorted((-x, y), key=_okey)))
        return cls(n, tuple(sorted(edges, key=lambda e: (_okey(e[0]), _okey(e[1])))))


def _connected(vertices: list[int], edges: Iterable[tuple]) -> bool:
    if not vertices:
        return True
    vs = set(vertices)
    adj = {v: set() for v in vs}
    for a, b in edges:
        if a in vs and b in vs:
            adj[a].add(b)
            adj[b].add(a)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


def whitehead_cut_vertex(W: WhiteheadGraph) -> tuple[str, Optional[int]]:
    """('disconnected', None), ('cut_vertex', v) or ('none', None)."""
    if not W.edges:
        raise ValidationError("Whitehead graph has no edges")
    verts = W.vertices
    if not _connected(verts, W.edges):
        return "disconnected", None
    for v in verts:
        rest = [u for u in verts if u != v]
        if not _connected(rest, W.edges):
            return "cut_vertex", v
    return "none", None


# ---------------------------------------------------------------------------
# minimal free factor


@dataclass
class SupportResult:
    factor: StallingsGraph
    is_proper: bool
    chain: list = field(default_factory=list)
    certificate: str = ""


LEVEL_SET_CAP = 4000


def _check_envelope(H: StallingsGraph) -> None:
    if H.rank_n > MAX_RANK:
        raise ResourceLimitError(f"rank {H.rank_n} exceeds supported envelope {MAX_RANK}")
    if len(H.edges) > max_edges():
        raise ResourceLimitError(f"core graph with {len(H.edges)} edges exceeds envelope {max_edges()}")


def _reduce(H: StallingsGraph, autos: list[WhiteheadAuto], chain: list, depth: int):
    """Greedy strict-descent Whitehead reduction; returns (H', applied autos)."""
    applied = []
    cur = H
    c = cur.core_edge_count()
    while True:
        for a in autos:
            nxt = apply_auto_to_subgroup(a, cur)
            cn = nxt.core_edge_count()
            if cn < c:
                cur, c = nxt, cn
                applied.append(a)
                chain.append((depth, a))
                break
        else:
            return cur, applied


def _level_set_search(H: StallingsGraph, autos: list[WhiteheadAuto]):
    """Search the minimal complexity level set for a representative missing a letter."""
    c = H.core_edge_count()
    n = H.rank_n
    start = H
    seen = {start.conjugacy_key()}
    queue = deque([(start, [])])
    while queue:
        cur, path = queue.popleft()
        if len(cur.letters()) < n:
            return cur, path
        for a in autos:
            nxt = apply_auto_to_subgroup(a, cur)
            if nxt.core_edge_count() != c:
                continue
            key = nxt.conjugacy_key()
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > LEVEL_SET_CAP:
                raise ResourceLimitError("Whitehead level set exceeds search cap")
            queue.append((nxt, path + [a]))
    return None, None


def _support(H: StallingsGraph, chain: list, depth: int) -> tuple[StallingsGraph, str]:
    """Minimal free factor of F_r containing H (H nontrivial)."""
    n = H.rank_n
    if H.is_trivial():
        return StallingsGraph.trivial(n), "trivial"
    _check_envelope(H)
    autos = whitehead_autos(n)
    cur, applied = _reduce(H, autos, chain, depth)
    used = cur.letters()
    certificate = ""
    if len(used) == n:
        verdict, _ = whitehead_cut_vertex(WhiteheadGraph.of_subgroup(cur))
        if verdict == "none":
            return StallingsGraph.full(n), "whitehead graph has no cut vertex at minimum"
        found, path = _level_set_search(cur, autos)
        if found is None:
            return StallingsGraph.full(n), "level set has no representative missing a letter"
        for a in path:
            chain.append((depth, a))
        applied = applied + path
        cur = found
        used = cur.letters()
        certificate = "level set representative misses a letter"
    else:
        certificate = "minimum misses a letter"
    # cur <= u <S> u^-1 with S the used letters
    core, u = cur.core()
    S = sorted(used)
    rename = {x: i for i, x in enumerate(S, start=1)}
    back = {i: x for x, i in rename.items()}
    sub_gens = []
    for g in cur.generators():
        h = mul(inverse(u), g, u)
        sub_gens.append(tuple(rename[abs(y)] * (1 if y > 0 else -1) for y in h))
    inner = StallingsGraph.from_generators(sub_gens, len(S))
    if inner.is_full():
        fac_gens = [(i,) for i in range(1, len(S) + 1)]
        inner_cert = "full rank in subfactor"
    else:
        inner_fac, inner_cert = _support(inner, chain, depth + 1)
        fac_gens = inner_fac.generators()
    gens = []
    for g in fac_gens:
        h = tuple(back[abs(y)] * (1 if y > 0 else -1) for y in g)
        h = mul(u, h, inverse(u))
        for a in reversed(applied):
            h = a.inverse().apply(h)
        gens.append(h)
    return StallingsGraph.from_generators(gens, n), certificate + "; " + inner_cert


def free_factor_support(H: StallingsGraph) -> SupportResult:
    """Minimal free factor containing H, with the Whitehead witness chain."""
    n = H.rank_n
    if H.is_trivial():
        return SupportResult(StallingsGraph.trivial(n), True, [], "trivial subgroup")
    chain: list = []
    fac, cert = _support(H, chain, 0)
    return SupportResult(fac, fac.rank < n, chain, cert)


# ---------------------------------------------------------------------------
# free factor systems and Kurosh rank


@dataclass(frozen=True)
class FreeFactorSystem:
    factors: tuple
    rank_n: int

    @property
    def corank(self) -> int:
        return self.rank_n - sum(f.rank for f in self.factors)

    def relative_kurosh_rank(self) -> int:
        """|A| + corank(A): the Kurosh rank of F_n relative to this system."""
        return len(self.factors) + self.corank


def kurosh_rank(F) -> int:
    if isinstance(F, FreeFactorSystem):
        return sum(f.rank for f in F.factors)
    return F.rank
