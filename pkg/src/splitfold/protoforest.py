"""Overlap and filling protoforests of paths, the filling test, and expansions.

A path alpha is given by its canonical lift in the base graph of a splitting
T.  Its overlap set O consists of the elements g != 1 with g*alpha and alpha
sharing an edge of T; <O> stabilizes the overlap protocomponent containing
alpha and its free factor support Fm(alpha) determines the filling rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .core import (BaseGraph, FreeSplitting, GraphMorphism, NaturalStructure,
                   _SubgraphReader, _okey, format_path, project_path, reduce_path,
                   rev, tree_edge)
from .errors import (InapplicableError, NoWitnessError, PropertyViolation,
                     ResourceLimitError, UnsupportedConfiguration, ValidationError)
from .subgroup import (Rewriter, StallingsGraph, SupportResult, apply_auto_to_subgroup,
                       conjugate_intersection, double_coset_witness, free_factor_support,
                       whitehead_autos)
from .words import GroupElement, Word, inverse, mul

MAX_BUDGET = 3


# ---------------------------------------------------------------------------
# interior crossings


@dataclass(frozen=True)
class CrossingReport:
    natural: NaturalStructure
    crossed: tuple  # indices into natural.natural_edges
    missing: tuple

    @property
    def ok(self) -> bool:
        return not self.missing


def _occurs_inside(seq: Sequence, word: Sequence) -> bool:
    m = len(word)
    for i in range(1, len(seq) - m):
        if tuple(seq[i:i + m]) == tuple(word):
            return True
    return False


def interior_crossings(split: FreeSplitting, path: Sequence) -> CrossingReport:
    """Natural edge orbits whose edge word sits strictly inside the path."""
    path = split.check_canonical(path)
    seq = [o for o in path if o[0] not in split.collapsed]
    nat = split.natural_structure()
    crossed, missing = [], []
    for i, word in enumerate(nat.natural_edges):
        back = tuple(rev(o) for o in reversed(word))
        if _occurs_inside(seq, word) or _occurs_inside(seq, back):
            crossed.append(i)
        else:
            missing.append(i)
    return CrossingReport(nat, tuple(crossed), tuple(missing))


# ---------------------------------------------------------------------------
# overlap set


def _tree_edge_ids(split: FreeSplitting, path: Sequence) -> list:
    """[(position, edge name, h)] where (h, name) is the tree edge crossed.

    Overlap only asks for a common edge, so the direction of traversal is
    ignored: a translate crossing an edge of the path backwards still overlaps."""
    G = split.base
    return [(k, o[0], tree_edge(G, x, o)[0]) for k, x, o in split.tree_positions(path)]


@dataclass(frozen=True)
class OverlapData:
    split: FreeSplitting
    path: tuple
    spanning: tuple  # GroupElements generating <O>, closed under inverse
    subgroup: StallingsGraph

    def elements(self) -> list:
        """The full overlap set O, sorted, without the identity."""
        by_edge: dict = {}
        for _, nm, h in _tree_edge_ids(self.split, self.path):
            by_edge.setdefault(nm, []).append(h)
        out = set()
        for hs in by_edge.values():
            for hi in hs:
                for hj in hs:
                    g = mul(hj, inverse(hi))
                    if g:
                        out.add(GroupElement(g))
        return sorted(out, key=lambda g: (len(g), g.word))

    @property
    def is_empty(self) -> bool:
        return self.subgroup.is_trivial()


def overlap_generators(split: FreeSplitting, path: Sequence) -> OverlapData:
    """Generators of the stabilizer of the overlap protocomponent of the path.

    Positions carrying the same tree-edge orbit differ by an element of O; the
    differences to the first such position already generate <O>."""
    path = split.check_canonical(path)
    first: dict = {}
    gens: list = []
    H = StallingsGraph.trivial(split.rank)
    for _, nm, h in _tree_edge_ids(split, path):
        if nm not in first:
            first[nm] = h
            continue
        g = mul(h, inverse(first[nm]))
        if g and not H.contains(g):
            gens.append(g)
            H = StallingsGraph.from_generators(gens, split.rank)
    span = set()
    for g in gens:
        span.add(GroupElement(g))
        span.add(GroupElement(inverse(g)))
    return OverlapData(split, path, tuple(sorted(span, key=lambda g: (len(g), g.word))), H)


@dataclass(frozen=True)
class FillingSupport:
    factor: StallingsGraph
    kurosh: int
    overlap: OverlapData
    support: SupportResult


def filling_support(split: FreeSplitting, path: Sequence) -> FillingSupport:
    od = overlap_generators(split, path)
    res = free_factor_support(od.subgroup)
    return FillingSupport(res.factor, res.factor.rank, od, res)


# ---------------------------------------------------------------------------
# expansions


@dataclass(frozen=True)
class Expansion:
    """Collapse map U -> T given by a morphism of base graphs.

    Edges of U's base graph whose image has no uncollapsed edge of T form the
    collapse region; every uncollapsed edge of T has exactly one preimage.
    """

    target: FreeSplitting
    total: FreeSplitting
    collapse: GraphMorphism
    kind: str = "expansion"

    @cached_property
    def _data(self) -> tuple:
        T, U, f = self.target, self.total, self.collapse
        G, G2 = T.base, U.base
        region, pre = [], {}
        cut: dict = {}
        for nm in G2.edge_names:
            img = f.image((nm, 1))
            ks = [k for k, o in enumerate(img) if o[0] not in T.collapsed]
            if not ks:
                region.append(nm)
            elif len(ks) == 1:
                o = img[ks[0]]
                if o[0] in pre:
                    raise PropertyViolation(f"edge {o[0]} has two preimages")
                pre[o[0]] = nm
                cut[nm] = (ks[0], o)
            else:
                raise PropertyViolation(f"edge {nm} maps over several uncollapsed edges")
        missing = set(T.uncollapsed()) - set(pre)
        if missing:
            raise PropertyViolation(f"edges without preimage: {sorted(missing)}")
        # lambda_y: f~(1, y) = (lambda_y, f(y))
        lam = {}
        for y, p in G2.reader.tree_paths.items():
            lam[y] = mul(inverse(G2.reader.pi[y]), G.path_label(f.image_path(p, tighten=False)))
        # per T-edge: (U edge, sign, tau) with U edge (g, e2) over T edge (g tau, e)
        edge_info = {}
        for nm, (k, o) in cut.items():
            img = f.image((nm, 1))
            h = mul(lam[G2.ends(nm)[0]], G.path_label(img[:k]))
            if o[1] > 0:
                edge_info[o[0]] = (nm, 1, h)
            else:
                edge_info[o[0]] = (nm, -1, mul(h, inverse(G.label((o[0], 1)))))
        # region components and readers
        parent = {v: v for v in G2.vertices}

        def find(v):
            while parent[v] != v:
                v = parent[v]
            return v

        for nm in region:
            s, t = G2.ends(nm)
            a, b = find(s), find(t)
            if a != b:
                parent[max(a, b)] = min(a, b)
        comps: dict = {}
        for v in G2.vertices:
            comps.setdefault(find(v), []).append(v)
        rcomp = {}
        readers = {}
        for root, members in comps.items():
            ms = set(members)
            names = [nm for nm in region if G2.ends(nm)[0] in ms]
            readers[root] = _SubgraphReader(G2, names, min(members))
            for v in members:
                rcomp[v] = root
        return edge_info, lam, rcomp, readers, region

    @property
    def region(self) -> list:
        return self._data[4]

    def verify(self) -> None:
        """Check that the morphism is an equivariant collapse onto T."""
        T, U, f = self.target, self.total, self.collapse
        G, G2 = T.base, U.base
        edge_info, lam, rcomp, readers, region = self._data
        induced = f.induced_map()
        if any(induced[i] != (i,) for i in induced):
            raise PropertyViolation("collapse does not induce the identity on the free group")
        if not set(U.collapsed) <= set(region):
            raise PropertyViolation("collapsed edges of U must lie in the collapse region")
        seen = {}
        for root, reader in readers.items():
            y = reader.root
            w = f.vertex(y)
            c = T.comp(w)
            z = T.comp_reader(c).pi[w]
            hv = mul(lam[y], inverse(z))
            if c in seen:
                raise PropertyViolation(f"two region components over vertex {c}")
            seen[c] = root
            expect = T.stabilizer(c).conjugate(hv)
            got = StallingsGraph.from_generators(reader.generators, T.rank)
            if got != expect:
                raise PropertyViolation(f"region over {c} has the wrong stabilizer")
        if set(seen) != set(T.components):
            raise PropertyViolation("some vertex of T has no region over it")

    def lift(self, path: Sequence) -> tuple:
        """Canonical lift in U of a canonical path in T."""
        T, U = self.target, self.total
        G, G2 = T.base, U.base
        edge_info, lam, rcomp, readers, _ = self._data
        steps = project_path(T, path).steps
        out: list = []
        prev_end = None
        for g, o in steps:
            nm2, sign, tau = edge_info[o[0]]
            h = g.word if o[1] > 0 else mul(g.word, inverse(G.label((o[0], 1))))
            base = mul(h, inverse(tau))
            o2 = (nm2, sign * o[1])
            if o2[1] > 0:
                start = (base, G2.ends(nm2)[0])
                end = (mul(base, G2.label((nm2, 1))), G2.ends(nm2)[1])
            else:
                start = (mul(base, G2.label((nm2, 1))), G2.ends(nm2)[1])
                end = (base, G2.ends(nm2)[0])
            if prev_end is not None:
                (ge, y1), (gs, y2) = prev_end, start
                if rcomp[y1] != rcomp[y2]:
                    raise PropertyViolation("lift leaves the collapse region")
                conn = readers[rcomp[y1]].path_with_label(y1, y2, mul(inverse(ge), gs))
                if conn is None:
                    raise PropertyViolation("lift has no connector in the collapse region")
                out.extend(conn)
            out.append(o2)
            prev_end = end
        lifted = reduce_path(out)
        if len(lifted) != len(out):
            raise PropertyViolation("lifted path is not reduced")
        return G2.check_path(lifted)

    def missed(self, path: Sequence) -> tuple:
        """(lifted path, natural edges of U not interiorly crossed)."""
        lifted = self.lift(path)
        rep = interior_crossings(self.total, lifted)
        return lifted, tuple(rep.natural.natural_edges[i] for i in rep.missing)

    def canonical_form(self) -> tuple:
        return (self.total.canonical_form(), self.collapse.emap)


def trivial_expansion(split: FreeSplitting) -> Expansion:
    G = split.base
    f = GraphMorphism.build(G, G, {v: v for v in G.vertices},
                            {nm: ((nm, 1),) for nm in G.edge_names})
    return Expansion(split, split, f, "trivial")


def partial_uncollapse(split: FreeSplitting, edges) -> Expansion:
    """U = (base, Z minus edges) with the identity map."""
    G = split.base
    U = FreeSplitting(G, split.collapsed - set(edges))
    f = GraphMorphism.build(G, G, {v: v for v in G.vertices},
                            {nm: ((nm, 1),) for nm in G.edge_names})
    return Expansion(split, U, f, "uncollapse")


@dataclass
class LocalGraph:
    """Replacement of a quotient vertex v of T by a graph Y_v.

    pis[y] is the label of a path from the center (first vertex) to y;
    attach maps each half-edge at v to (local vertex, twist in Stab(v))."""

    vertices: list
    pis: dict
    edges: list  # (name, src, tgt, label)
    attach: dict


def _fresh(prefix: str, used: set) -> str:
    name = prefix
    i = 1
    while name in used:
        i += 1
        name = f"{prefix}{i}"
    used.add(name)
    return name


def build_expansion(split: FreeSplitting, local: dict, uncollapse=(), kind: str = "blowup") -> Expansion:
    """Assemble U from local replacement graphs at some vertices of T."""
    G = split.base
    used = set(G.vertices) | set(G.edge_names)
    vname: dict = {}
    vertices: list = []
    edges: dict = {}
    labels: dict = {}
    zset = set()
    frame: dict = {}  # G2 vertex -> (P_y, T vertex it maps to)
    for c in split.components:
        members = split.comp_vertices(c)
        if c not in local:
            for u in members:
                vertices.append(u)
                frame[u] = ((), u)
            for nm in split.comp_edges(c):
                s, t = G.ends(nm)
                edges[nm] = (s, t)
                if G.edge_label(nm):
                    labels[nm] = G.edge_label(nm)
                if nm not in uncollapse:
                    zset.add(nm)
            continue
        L = local[c]
        for y in L.vertices:
            vname[(c, y)] = _fresh(f"{c}_{y}", used)
            vertices.append(vname[(c, y)])
            frame[vname[(c, y)]] = (inverse(L.pis[y]), c)
        for nm, s, t, lab in L.edges:
            name = _fresh(f"{c}_{nm}", used)
            edges[name] = (vname[(c, s)], vname[(c, t)])
            if lab:
                labels[name] = lab
    comp_z = {u: split.comp_reader(split.comp(u)).pi[u] for u in G.vertices}

    def attachment(o):
        u = G.src(o)
        c = split.comp(u)
        if c not in local:
            return u, comp_z[u], (), comp_z[u]
        a, t = local[c].attach[o]
        return vname[(c, a)], local[c].pis[a], t, comp_z[u]

    emap_info = {}
    for nm in split.uncollapsed():
        a, pa, t, z1 = attachment((nm, 1))
        b, pb, t2, z2 = attachment((nm, -1))
        tau = mul(inverse(pa), t, z1)
        lab = mul(tau, G.edge_label(nm), inverse(z2), inverse(t2), pb)
        edges[nm] = (a, b)
        if lab:
            labels[nm] = lab
        emap_info[nm] = tau
    order = sorted(vertices, key=lambda v: (frame[v][0] != (), vertices.index(v)))
    G2 = BaseGraph.build(G.basis, order, edges, labels)
    U = FreeSplitting(G2, frozenset(zset))
    vmap = {}
    emap = {}
    for y, (P, w) in frame.items():
        vmap[y] = w
    for nm, (s, t) in edges.items():
        Ps, ws = frame[s]
        Pt, wt = frame[t]
        lab = G2.edge_label(nm)
        if nm in emap_info:
            tau = emap_info[nm]
            u1, u2 = G.ends(nm)
            r1 = split.comp_reader(split.comp(u1))
            r2 = split.comp_reader(split.comp(u2))
            c1 = r1.path_with_label(ws, u1, mul(inverse(Ps), tau))
            c2 = r2.path_with_label(u2, wt, mul(inverse(mul(tau, G.edge_label(nm))), lab, Pt))
            if c1 is None or c2 is None:
                raise PropertyViolation(f"edge {nm} has no image in T")
            emap[nm] = c1 + ((nm, 1),) + c2
        else:
            r = split.comp_reader(split.comp(ws))
            img = r.path_with_label(ws, wt, mul(inverse(Ps), lab, Pt))
            if img is None:
                raise PropertyViolation(f"edge {nm} does not map into the collapsed part")
            emap[nm] = img
    f = GraphMorphism.build(G2, G, vmap, emap, allow_empty=True)
    exp = Expansion(split, U, f, kind)
    exp.verify()
    return exp


# ---------------------------------------------------------------------------
# blowup witness


@dataclass(frozen=True)
class Witness:
    expansion: Expansion
    lifted: tuple
    missed_edge: tuple  # natural edge of U (oriented edge word)


def _anchors(split: FreeSplitting, path: Sequence) -> dict:
    """For each vertex of T: half-edge -> c with direction in c * (Fm-protocomponent)."""
    G = split.base
    z = {u: split.comp_reader(split.comp(u)).pi[u] for u in G.vertices}
    out: dict = {}
    for _, x, o in split.tree_positions(path):
        for half, y in ((o, x), (rev(o), mul(x, G.label(o)))):
            u = G.src(half)
            out.setdefault(split.comp(u), {}).setdefault(half, mul(z[u], inverse(y)))
    return out


def _make_visible(S: StallingsGraph, Cs: list) -> tuple:
    """Basis of S adapted to the nontrivial subgroups Cs.

    Returns (free letters, [(loop labels, u)]) with C = u <loops> u^-1 and
    everything together a basis of S, or raises UnsupportedConfiguration."""
    sgens = S.generators()
    m = len(sgens)
    rw = Rewriter(sgens)
    local = []
    for C in Cs:
        ws = [rw.rewrite(g) for g in C.generators()]
        if any(w is None for w in ws):
            raise PropertyViolation("intersection not contained in the stabilizer")
        local.append(StallingsGraph.from_generators(ws, m))
    autos = whitehead_autos(m) if m > 1 else []
    applied = []

    def cost(hs):
        return sum(h.core_edge_count() for h in hs)

    cur = local
    c = cost(cur)
    target = sum(h.rank for h in cur)
    while c > target:
        for a in autos:
            nxt = [apply_auto_to_subgroup(a, h) for h in cur]
            cn = cost(nxt)
            if cn < c:
                cur, c = nxt, cn
                applied.append(a)
                break
        else:
            raise UnsupportedConfiguration("cannot make the stabilizer intersections visible")
    letters_seen = set()
    parts = []
    for h in cur:
        core, u = h.core()
        if core.num_vertices != 1:
            raise UnsupportedConfiguration("intersection is not a free factor of the stabilizer")
        ls = {x for _, x, _ in core.edges}
        if ls & letters_seen:
            raise UnsupportedConfiguration("intersections overlap after reduction")
        letters_seen |= ls
        parts.append((sorted(ls), u))

    def back(w):
        for a in reversed(applied):
            w = a.inverse().apply(w)
        return mul(*[sgens[abs(i) - 1] if i > 0 else inverse(sgens[abs(i) - 1]) for i in w])

    free = [back((i,)) for i in range(1, m + 1) if i not in letters_seen]
    return free, [([back((i,)) for i in ls], back(u)) for ls, u in parts]


def _general_blowup(split: FreeSplitting, path: Sequence, F: StallingsGraph) -> Expansion:
    G = split.base
    anchors = _anchors(split, path)
    local = {}
    for v in split.components:
        S = split.stabilizer(v)
        anc = anchors.get(v, {})
        if not anc:
            continue
        halves = sorted(anc, key=_okey)
        reps: list = []  # (c_j, [(half, s)])
        for h in halves:
            ch = anc[h]
            for cj, members in reps:
                s = double_coset_witness(S, F, cj, ch)
                if s is not None:
                    members.append((h, s))
                    break
            else:
                reps.append((ch, [(h, ())]))
        Cs = [conjugate_intersection(S, F, cj) for cj, _ in reps]
        if len(reps) == 1 and Cs[0] == S:
            continue
        nontriv = [i for i, C in enumerate(Cs) if not C.is_trivial()]
        if nontriv:
            free, parts = _make_visible(S, [Cs[i] for i in nontriv])
            loops = dict(zip(nontriv, parts))
        else:
            free, loops = S.generators(), {}
        vertices = ["c"]
        pis = {"c": ()}
        ledges = []
        attach = {}
        for i, lab in enumerate(free, start=1):
            ledges.append((f"l{i}", "c", "c", lab))
        for j, (cj, members) in enumerate(reps, start=1):
            r = f"r{j}"
            vertices.append(r)
            pis[r] = ()
            ledges.append((f"j{j}", "c", r, ()))
            lbls, u = loops.get(j - 1, ([], ()))
            for i, lab in enumerate(lbls, start=1):
                ledges.append((f"l{j}_{i}", r, r, lab))
            for h, s in members:
                attach[h] = (r, mul(inverse(u), s))
        for h in split.half_edges(v):
            attach.setdefault(h, ("c", ()))
        # a center of valence one is absorbed into its only neighbour
        cval = sum(2 if e[1] == e[2] == "c" else 1 for e in ledges if "c" in (e[1], e[2]))
        cval += sum(1 for a, _ in attach.values() if a == "c")
        if cval == 1:
            (j,) = [e for e in ledges if "c" in (e[1], e[2])]
            ledges.remove(j)
            vertices.remove("c")
            vertices.remove(j[2])
            vertices.insert(0, j[2])
            del pis["c"]
        local[v] = LocalGraph(vertices, pis, ledges, attach)
    if not local:
        # translates already meet only in single protocomponents: U = T
        return trivial_expansion(split)
    return build_expansion(split, local, kind="blowup")


def blowup_witness(split: FreeSplitting, path: Sequence, support: Optional[FillingSupport] = None) -> Witness:
    """Expansion of T in which the lift of the path misses a natural edge orbit."""
    path = split.check_canonical(path)
    support = support or filling_support(split, path)
    if support.kurosh == split.rank:
        raise NoWitnessError("filling support is the whole group")
    candidates = []
    if split.collapsed:
        candidates.append(lambda: partial_uncollapse(split, split.collapsed))
    candidates.append(lambda: _general_blowup(split, path, support.factor))
    for make in candidates:
        exp = make()
        lifted, missed = exp.missed(path)
        if missed:
            return Witness(exp, lifted, missed[0])
    raise PropertyViolation("blowup construction did not produce a witness")


# ---------------------------------------------------------------------------
# the filling test


@dataclass(frozen=True)
class FillingReport:
    crossing: CrossingReport
    support: FillingSupport
    rank: int
    witness: Optional[Witness] = None

    @property
    def crossing_ok(self) -> bool:
        return self.crossing.ok

    @property
    def kurosh(self) -> int:
        return self.support.kurosh

    @property
    def fills(self) -> bool:
        return self.crossing_ok and self.kurosh == self.rank


def fills(split: FreeSplitting, path: Sequence, witness: bool = True) -> FillingReport:
    """Decide whether the path fills T; attach a witness expansion when it does not.

    With filling rank below n the blowup witness is used, otherwise (crossing
    fails at full rank) the trivial expansion."""
    path = split.check_canonical(path)
    cross = interior_crossings(split, path)
    sup = filling_support(split, path)
    rep = FillingReport(cross, sup, split.rank)
    if rep.fills or not witness:
        return rep
    if sup.kurosh < split.rank:
        w = blowup_witness(split, path, sup)
    else:
        exp = trivial_expansion(split)
        lifted, missed = exp.missed(path)
        w = Witness(exp, lifted, missed[0])
    return FillingReport(cross, sup, split.rank, w)


# ---------------------------------------------------------------------------
# enumeration of expansions


def _labelled_trees(m: int) -> list:
    """All labelled trees on vertices 0..m-1 as sorted edge tuples."""
    if m == 1:
        return [()]
    if m == 2:
        return [((0, 1),)]
    out = []
    for seq in itertools.product(range(m), repeat=m - 2):
        seq = list(seq)
        degree = [1] * m
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(i for i in range(m) if degree[i] == 1)
            edges.append(tuple(sorted((leaf, x))))
            degree[leaf] -= 1
            degree[x] -= 1
        a, b = [i for i in range(m) if degree[i] == 1]
        edges.append((a, b))
        out.append(tuple(sorted(edges)))
    return out


def _vertex_blowups(halves: list, k: int) -> list:
    """Blowups of a trivially stabilized vertex into a tree with k edges, every
    new vertex of valence >= 3, up to relabelling."""
    m = k + 1
    seen = set()
    out = []
    for tree in _labelled_trees(m):
        deg = [0] * m
        for a, b in tree:
            deg[a] += 1
            deg[b] += 1
        for assign in itertools.product(range(m), repeat=len(halves)):
            counts = [0] * m
            for x in assign:
                counts[x] += 1
            if any(deg[i] + counts[i] < 3 for i in range(m)):
                continue
            key = None
            for perm in itertools.permutations(range(m)):
                e = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in tree))
                blocks = tuple(tuple(h for h, x in zip(halves, assign) if perm[x] == i) for i in range(m))
                cand = (e, blocks)
                if key is None or cand < key:
                    key = cand
            if key in seen:
                continue
            seen.add(key)
            out.append(key)
    return out


class ExpansionStream:
    """Iterator over expansions of T with at most `budget` new edges."""

    def __init__(self, split: FreeSplitting, budget: int, limit: int = 20000):
        if budget < 0:
            raise ValidationError("budget must be nonnegative")
        if budget > MAX_BUDGET:
            raise ResourceLimitError(f"budget {budget} exceeds supported envelope {MAX_BUDGET}")
        self.split = split
        self.budget = budget
        self.limit = limit
        self.truncated = False
        self.count = 0

    def _options(self, v: str) -> list:
        split = self.split
        opts = [(0, None)]
        if split.comp_rank(v) == 0:
            halves = [(o[0], o[1]) for o in split.half_edges(v)]
            keyed = [(o[0], o[1]) for o in halves]
            for k in range(1, self.budget + 1):
                for tree, blocks in _vertex_blowups(keyed, k):
                    opts.append((k, ("tree", tree, blocks)))
        else:
            edges = split.comp_edges(v)
            for k in range(1, self.budget + 1):
                for sub in itertools.combinations(edges, k):
                    opts.append((k, ("uncollapse", sub)))
        return opts

    def _realize(self, choice: dict) -> Expansion:
        split = self.split
        local = {}
        unc = set()
        for v, opt in choice.items():
            if opt is None:
                continue
            if opt[0] == "uncollapse":
                unc |= set(opt[1])
                continue
            _, tree, blocks = opt
            m = len(blocks)
            vertices = [f"n{i}" for i in range(m)]
            pis = {y: () for y in vertices}
            ledges = [(f"t{i}", f"n{a}", f"n{b}", ()) for i, (a, b) in enumerate(tree)]
            attach = {}
            for i, blk in enumerate(blocks):
                for h in blk:
                    attach[h] = (f"n{i}", ())
            local[v] = LocalGraph(vertices, pis, ledges, attach)
        if not local and not unc:
            return trivial_expansion(split)
        return build_expansion(split, local, uncollapse=unc, kind="enumerated")

    def __iter__(self) -> Iterator[Expansion]:
        comps = self.split.components
        options = [self._options(v) for v in comps]
        seen = set()
        for combo in itertools.product(*options):
            if sum(k for k, _ in combo) > self.budget:
                continue
            if self.count >= self.limit:
                self.truncated = True
                return
            try:
                exp = self._realize(dict(zip(comps, [o for _, o in combo])))
            except ValidationError:
                continue
            key = exp.canonical_form()
            if key in seen:
                continue
            seen.add(key)
            self.count += 1
            yield exp


def expansion_enumerate(split: FreeSplitting, budget: int, limit: int = 20000) -> ExpansionStream:
    return ExpansionStream(split, budget, limit)


def enumeration_witness(split: FreeSplitting, path: Sequence, budget: int = 2) -> Optional[Witness]:
    """Brute-force search for an expansion whose lift misses a natural edge."""
    path = split.check_canonical(path)
    for exp in expansion_enumerate(split, budget):
        lifted, missed = exp.missed(path)
        if missed:
            return Witness(exp, lifted, missed[0])
    return None
