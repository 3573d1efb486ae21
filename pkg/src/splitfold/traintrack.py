"""Train track self-maps: validation, transition matrices and exponents.

Maps act on Grushko presentations (nothing collapsed).  Matrices are plain
lists of int lists indexed by edge names in lexicographic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core import BaseGraph, FreeSplitting, GraphMorphism, reduce_path, rev
from .errors import (InapplicableError, PropertyViolation, ResourceLimitError,
                     ValidationError)
from .protoforest import filling_support, fills
from .words import inverse, mul


def iterate_path(F: GraphMorphism, path: Sequence, k: int) -> tuple:
    cur = tuple(path)
    for _ in range(k):
        cur = F.image_path(cur)
    return cur


def map_power(F: GraphMorphism, k: int) -> GraphMorphism:
    if k < 1:
        raise ValidationError("power must be at least 1")
    G = F
    for _ in range(k - 1):
        G = G.compose(F)
    return G


# ---------------------------------------------------------------------------
# validation


@dataclass
class TrainTrackMap:
    graph: BaseGraph
    map: GraphMorphism
    gates: dict  # vertex -> list of frozensets of directions

    @property
    def edge_names(self) -> list:
        return sorted(self.graph.edge_names)


@dataclass
class IllegalTurn:
    """A turn taken by an iterate whose derivative image degenerates."""

    taken: tuple
    steps: int
    vertex: str


def derivative(F: GraphMorphism) -> dict:
    return {(nm, s): F.image((nm, s))[0] for nm in F.domain.edge_names for s in (1, -1)}


def taken_turns(F: GraphMorphism) -> set:
    turns = set()
    for nm in F.domain.edge_names:
        img = F.image((nm, 1))
        for o1, o2 in zip(img, img[1:]):
            turns.add(frozenset((rev(o1), o2)) if rev(o1) != o2 else frozenset((o2,)))
    return turns


def _gates(F: GraphMorphism, D: dict) -> dict:
    n = len(D)
    out = {}
    for v in F.domain.vertices:
        classes: dict = {}
        for o in F.domain.directions(v):
            x = o
            for _ in range(n):
                x = D[x]
            classes.setdefault(x, set()).add(o)
        out[v] = sorted((frozenset(c) for c in classes.values()), key=lambda c: sorted(c))
    return out


def check_self_map(F: GraphMorphism) -> None:
    if F.domain != F.codomain:
        raise ValidationError("train track maps are self-maps")
    if not F.is_immersion_on_edges() or any(not F.image((nm, 1)) for nm in F.domain.edge_names):
        raise ValidationError("edge images must be nonempty immersed paths")
    if not F.is_homotopy_equivalence():
        raise ValidationError("map is not a homotopy equivalence")


def validate_tt(F: GraphMorphism):
    """TrainTrackMap, or the IllegalTurn found by the taken-turn orbit."""
    check_self_map(F)
    D = derivative(F)
    seen = {}
    frontier = []
    for t in sorted(taken_turns(F), key=lambda t: sorted(t)):
        seen[t] = (t, 0)
        frontier.append(t)
    while frontier:
        nxt = []
        for t in frontier:
            origin, k = seen[t]
            if len(t) == 1:
                (o,) = tuple(t)
                return IllegalTurn(tuple(sorted(origin)), k, F.domain.src(o))
            a, b = sorted(t)
            img = frozenset((D[a], D[b]))
            if img not in seen:
                seen[img] = (origin, k + 1)
                nxt.append(img)
        frontier = nxt
    return TrainTrackMap(F.domain, F, _gates(F, D))


def require_tt(F: GraphMorphism) -> TrainTrackMap:
    res = validate_tt(F)
    if isinstance(res, IllegalTurn):
        raise InapplicableError(f"not a train track map: turn {sorted(res.taken)} degenerates after {res.steps} steps")
    return res


# ---------------------------------------------------------------------------
# transition matrices and Perron-Frobenius data


def transition_matrix(F: GraphMorphism) -> list:
    names = sorted(F.domain.edge_names)
    idx = {nm: i for i, nm in enumerate(names)}
    M = [[0] * len(names) for _ in names]
    for j, nm in enumerate(names):
        for o in F.image((nm, 1)):
            M[idx[o[0]]][j] += 1
    return M


def mat_mul(A: list, B: list) -> list:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def mat_pow(M: list, k: int) -> list:
    n = len(M)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = mat_mul(out, M)
    return out


def _bool_exponent_of(M: list) -> Optional[int]:
    """Least k with M^k entrywise positive, or None (Wielandt bound search)."""
    m = len(M)
    B = [[1 if x else 0 for x in row] for row in M]
    P = B
    for k in range(1, (m - 1) ** 2 + 2):
        if all(all(row) for row in P):
            return k
        P = [[1 if x else 0 for x in row] for row in mat_mul(P, B)]
    return None


def is_primitive(M: list) -> bool:
    return _bool_exponent_of(M) is not None


def pf_exponent(F_or_M) -> int:
    """Least kappa with every entry of M^kappa at least 4."""
    M = F_or_M if isinstance(F_or_M, list) else transition_matrix(F_or_M)
    if not is_primitive(M):
        raise InapplicableError("transition matrix is not primitive (map is not EG-aperiodic)")
    P = M
    k = 1
    while min(min(row) for row in P) < 4:
        P = mat_mul(P, M)
        k += 1
    return k


@dataclass(frozen=True)
class PFInterval:
    lower: Fraction
    upper: Fraction

    @property
    def approx(self) -> float:
        return float((self.lower + self.upper) / 2)


def pf_interval(M: list, iterations: int = 40) -> PFInterval:
    """Collatz-Wielandt bounds min/max (Mx)_i / x_i along x = M^k 1."""
    if not is_primitive(M):
        raise InapplicableError("transition matrix is not primitive")
    x = [Fraction(1)] * len(M)
    lo, hi = Fraction(0), None
    for _ in range(iterations):
        y = [sum(a * b for a, b in zip(row, x)) for row in M]
        ratios = [yi / xi for yi, xi in zip(y, x)]
        lo = max(lo, min(ratios))
        hi = max(ratios) if hi is None else min(hi, max(ratios))
        if lo == hi:
            break
        s = max(y)
        x = [yi / s for yi in y]
        x = [Fraction(v).limit_denominator(10 ** 12) or Fraction(1, 10 ** 12) for v in x]
    return PFInterval(lo, hi)


def pf_weights(M: list) -> list:
    """Left Perron-Frobenius eigenvector (edge lengths), normalised to max 1."""
    vals, vecs = np.linalg.eig(np.array(M, dtype=float).T)
    k = int(np.argmax(vals.real))
    w = np.abs(vecs[:, k].real)
    return list(w / w.max()) if w.max() > 0 else [1.0] * len(M)


# ---------------------------------------------------------------------------
# filling and crossing exponents


def _split(F: GraphMorphism) -> FreeSplitting:
    return FreeSplitting(F.domain)


def natural_edges(F: GraphMorphism) -> tuple:
    return _split(F).natural_structure().natural_edges


def tile_fills(F: GraphMorphism, path: Sequence) -> bool:
    return fills(_split(F), path, witness=False).fills


@dataclass
class FillingExponent:
    omega: int
    first_filling: dict  # natural edge (formatted) -> least k
    bound: int


def filling_exponent(F: GraphMorphism, kappa: Optional[int] = None) -> FillingExponent:
    """Least k such that every natural tile F^k(E) fills, searched up to kappa*n."""
    require_tt(F)
    kappa = pf_exponent(F) if kappa is None else kappa
    bound = kappa * F.domain.rank
    first: dict = {}
    tiles = {E: E for E in natural_edges(F)}
    for k in range(1, bound + 1):
        for E in tiles:
            tiles[E] = F.image_path(tiles[E])
            if E not in first and tile_fills(F, tiles[E]):
                first[E] = k
        if len(first) == len(tiles):
            # filling is inherited by later tiles, so the max is the exponent
            return FillingExponent(max(first.values()), first, bound)
    raise PropertyViolation(f"no filling exponent up to the bound {bound}")


def count_occurrences(path: Sequence, word: Sequence) -> int:
    path, word = tuple(path), tuple(word)
    r = tuple(rev(o) for o in reversed(word))
    m = len(word)
    return sum(1 for i in range(len(path) - m + 1) if path[i:i + m] in (word, r))


def uniform_crossing_check(F: GraphMorphism, kappa: int) -> bool:
    """Every natural kappa-tile contains two occurrences of every natural edge."""
    nat = natural_edges(F)
    for E in nat:
        tile = iterate_path(F, E, kappa)
        if any(count_occurrences(tile, E2) < 2 for E2 in nat):
            return False
    return True


@dataclass
class CrossingFillingReport:
    ok: bool
    blocks: dict  # natural edge -> number of filling omega-tiles inside its (kappa+omega)-tile
    detail: str = ""


def crossing_filling_check(F: GraphMorphism, kappa: int, omega: int) -> CrossingFillingReport:
    """Each (kappa+omega)-tile splits into >= 4 consecutive filling omega-tiles per natural edge."""
    require_tt(F)
    nat = natural_edges(F)
    index = {}
    for E in nat:
        index[E] = E
        index[tuple(rev(o) for o in reversed(E))] = E
    fill_cache: dict = {}
    blocks = {}
    for E in nat:
        mid = iterate_path(F, E, kappa)
        # split the kappa-tile into natural edges
        pieces, i = [], 0
        while i < len(mid):
            for w in index:
                if tuple(mid[i:i + len(w)]) == w:
                    pieces.append(w)
                    i += len(w)
                    break
            else:
                return CrossingFillingReport(False, blocks, "kappa-tile is not a union of natural edges")
        parts = [iterate_path(F, w, omega) for w in pieces]
        whole = iterate_path(F, E, kappa + omega)
        if tuple(itertools.chain.from_iterable(parts)) != whole:
            return CrossingFillingReport(False, blocks, "omega-tiles cancel inside the tile")
        good = 0
        for w in pieces:
            key = index[w]
            if key not in fill_cache:
                fill_cache[key] = tile_fills(F, iterate_path(F, key, omega))
            good += fill_cache[key]
        blocks[E] = good
        for E2 in nat:
            if sum(1 for w in pieces if index[w] == E2) < 4:
                return CrossingFillingReport(False, blocks, "fewer than four omega-tiles of some natural edge")
        if good < 4:
            return CrossingFillingReport(False, blocks, "fewer than four filling omega-tiles")
    return CrossingFillingReport(True, blocks)


# ---------------------------------------------------------------------------
# nested iteration tiles


@dataclass
class NestingTrace:
    power: int
    occurrence: int
    kurosh: list
    cover_index: int
    first_positive: Optional[int]
    stabilized_at: Optional[int]
    stabilized_value: Optional[int]
    lengths: list = field(default_factory=list)


def interior_occurrences(path: Sequence, word: Sequence) -> list:
    path, word = tuple(path), tuple(word)
    m = len(word)
    return [i for i in range(1, len(path) - m) if path[i:i + m] == word]


def tile_nesting_trace(F: GraphMorphism, edge: Sequence, occurrence: Optional[int] = None,
                       power: Optional[int] = None, max_power: int = 8,
                       max_length: int = 2000) -> NestingTrace:
    """Filling ranks of eta_m = G^m(E) for G = F^p, where G(E) contains E inside.

    The power p defaults to the least one with an interior occurrence of E in
    F^p(E); occurrence selects which one (default the first)."""
    require_tt(F)
    E = tuple(edge)
    if power is None:
        for p in range(1, max_power + 1):
            if interior_occurrences(iterate_path(F, E, p), E):
                power = p
                break
        else:
            raise InapplicableError("no iterate of the edge crosses it in its interior")
    occ = interior_occurrences(iterate_path(F, E, power), E)
    if not occ:
        raise InapplicableError("the chosen iterate does not cross the edge in its interior")
    occurrence = occ[0] if occurrence is None else occurrence
    if occurrence not in occ:
        raise ValidationError(f"no interior occurrence of the edge at position {occurrence}")
    split = _split(F)
    n = split.rank
    G = map_power(F, power)
    etas = [E]
    kr, factors = [], []
    all_edges = set(F.domain.edge_names)
    cover = None
    first_pos = None
    stab = None
    m = 0
    while True:
        eta = etas[-1]
        sup = filling_support(split, eta)
        kr.append(sup.kurosh)
        factors.append(sup.factor)
        if cover is None and {o[0] for o in eta} >= all_edges:
            cover = m
        if first_pos is None and sup.kurosh > 0:
            first_pos = m
        if m > 0:
            if kr[m] < kr[m - 1]:
                raise PropertyViolation(f"filling rank decreased along nested tiles: {kr}")
            if not factors[m - 1].conjugate_into(factors[m]):
                raise PropertyViolation("support of a tile is not carried into the next tile")
            if kr[m] == kr[m - 1] and not factors[m - 1].is_conjugate_to(factors[m]):
                raise PropertyViolation("equal filling rank with different supports")
            if cover is not None and m - 1 >= cover and kr[m] == kr[m - 1] and stab is None:
                stab = m - 1
        if stab is not None and m >= stab + 2:
            break
        if kr[m] == n and m >= 1 and kr[m - 1] == n and stab is not None:
            break
        nxt = G.image_path(eta)
        if len(nxt) > max_length:
            break
        etas.append(nxt)
        m += 1
    if stab is not None and any(k != kr[stab] for k in kr[stab:]):
        raise PropertyViolation(f"filling rank changed after its first repeat: {kr}")
    return NestingTrace(power, occurrence, kr, cover if cover is not None else -1, first_pos, stab,
                        kr[stab] if stab is not None else None, [len(e) for e in etas])


# ---------------------------------------------------------------------------
# Boolean exponents and the translation length bound


@dataclass
class BoolExponent:
    m: int
    kappa2: int
    matrix: list

    @property
    def kappa1(self) -> int:
        return 3 * self.kappa2


def bool_exponent(m: int) -> BoolExponent:
    """Largest primitivity exponent over all m x m Boolean matrices."""
    if m < 1:
        raise ValidationError("m must be positive")
    if m > 4:
        raise ResourceLimitError("exhaustive search is limited to m <= 4")
    best, arg = 0, None
    cells = m * m
    full = (1 << m) - 1
    for bits in range(1 << cells):
        rows = [(bits >> (i * m)) & full for i in range(m)]
        if any(r == 0 for r in rows):
            continue
        k = _bool_power_exponent(rows, m)
        if k is not None and k > best:
            best, arg = k, rows
    matrix = [[(arg[i] >> j) & 1 for j in range(m)] for i in range(m)]
    return BoolExponent(m, best, matrix)


def _bool_power_exponent(rows: list, m: int) -> Optional[int]:
    full = (1 << m) - 1
    P = rows
    for k in range(1, (m - 1) ** 2 + 2):
        if all(r == full for r in P):
            return k
        Q = []
        for r in P:
            acc = 0
            for j in range(m):
                if (r >> j) & 1:
                    acc |= rows[j]
            Q.append(acc)
        P = Q
    return None


def tau_lower_bound(kappa: int, omega: int, nu) -> Fraction:
    nu = Fraction(nu)
    if kappa < 1 or omega < 1 or nu <= 0:
        raise ValidationError("kappa and omega must be >= 1 and nu > 0")
    return 1 / (nu * (3 * kappa + omega))


@dataclass
class ExponentReport:
    matrix: list
    lam: PFInterval
    kappa: int
    omega: int
    first_filling: dict

    @property
    def mu(self) -> int:
        return 3 * self.kappa + self.omega

    def tau_lower(self, nu) -> Fraction:
        return tau_lower_bound(self.kappa, self.omega, nu)


def analyze(F: GraphMorphism) -> ExponentReport:
    require_tt(F)
    M = transition_matrix(F)
    kappa = pf_exponent(M)
    lam = pf_interval(M)
    if lam.upper <= 1:
        raise PropertyViolation("Perron-Frobenius eigenvalue of a primitive map must exceed 1")
    fe = filling_exponent(F, kappa)
    return ExponentReport(M, lam, kappa, fe.omega, fe.first_filling)


# ---------------------------------------------------------------------------
# improvement moves


def _twist(graph: BaseGraph, x: str, rho) -> dict:
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


def _tighten_map(graph: BaseGraph, vmap: dict, emap: dict) -> GraphMorphism:
    return GraphMorphism.build(graph, graph, vmap, {e: reduce_path(p) for e, p in emap.items()},
                               allow_empty=True)


def eligible_valence2(F: GraphMorphism) -> list:
    G = F.domain
    return [v for v in G.vertices if G.valence(v) == 2 and len({o[0] for o in G.directions(v)}) == 2]


def valence2_homotopy(F: GraphMorphism, vertex: Optional[str] = None) -> GraphMorphism:
    """Remove a valence-two vertex by collapsing the lighter edge and stretching the other."""
    G = F.domain
    cands = eligible_valence2(F)
    if vertex is None:
        if not cands:
            raise InapplicableError("no valence-two vertex")
        vertex = sorted(cands)[0]
    elif vertex not in cands:
        raise InapplicableError(f"vertex {vertex} is not an eligible valence-two vertex")
    v = vertex
    d1, d2 = sorted(G.directions(v))
    names = sorted(G.edge_names)
    try:
        w = pf_weights(transition_matrix(F))
        weight = {nm: w[i] for i, nm in enumerate(names)}
    except Exception:
        weight = {nm: 1.0 for nm in names}
    # keep the heavier edge e_i, collapse e_j; ties go to the lexicographically smaller name
    a, b = d1[0], d2[0]
    if weight[a] > weight[b] + 1e-12 or (abs(weight[a] - weight[b]) <= 1e-12 and a < b):
        oi, oj = d1, d2
    else:
        oi, oj = d2, d1
    ei, ej = oi[0], oj[0]
    u, wv = G.tgt(oi), G.tgt(oj)
    # merged edge E keeps the name and orientation of ei
    merged = (rev(oi), oj) if oi[1] < 0 else (rev(oj), oi)
    lab = G.path_label(merged)
    root = G.vertices[0]
    if v == root:
        # move the base point off v; loops keep their labels so the marking is unchanged
        order = [x for x in G.vertices if x != v] + [v]
        G2 = BaseGraph.build(G.basis, order, {nm: (s, t) for nm, s, t in G.edges}, dict(G.labels))
        F2 = GraphMorphism.build(G2, G2, dict(F.vmap), dict(F.emap))
        return valence2_homotopy(F2, v)
    edges = {nm: (s, t) for nm, s, t in G.edges if nm not in (ei, ej)}
    edges[ei] = (u, wv) if oi[1] < 0 else (wv, u)
    labels = {nm: lw for nm, lw in G.labels if nm not in (ei, ej)}
    if lab:
        labels[ei] = lab
    verts = [x for x in G.vertices if x != v]
    H = BaseGraph.build(G.basis, verts, edges, labels)
    E = (ei, 1)

    def proj(o):
        if o[0] == ej:
            return ()
        if o[0] == ei:
            return (E,) if o[1] > 0 else (rev(E),)
        return (o,)

    def proj_path(p):
        out = []
        for o in p:
            out.extend(proj(o))
        return reduce_path(out)

    def section(nm):
        if nm == ei:
            return merged
        return ((nm, 1),)

    vmap = {x: (wv if F.vertex(x) == v else F.vertex(x)) for x in verts}
    emap = {nm: proj_path(F.image_path(section(nm), tighten=False)) for nm in H.edge_names}
    Fnew = _tighten_map(H, vmap, emap)
    _check_marking(F, Fnew)
    if all(emap.values()) and is_primitive(transition_matrix(F)) and is_primitive(transition_matrix(Fnew)):
        old, new = pf_interval(transition_matrix(F)), pf_interval(transition_matrix(Fnew))
        if new.lower > old.upper:
            raise PropertyViolation("valence-two homotopy increased the growth rate")
    return Fnew


def _check_marking(F: GraphMorphism, Fnew: GraphMorphism) -> None:
    a, b = F.induced_map(), Fnew.induced_map()
    if a != b:
        raise PropertyViolation("improvement move changed the induced automorphism")


@dataclass
class ForestReport:
    collapsed: tuple
    invariant: list  # closed edge sets that are proper subgraphs
    result: Optional[GraphMorphism]


def _closure(F: GraphMorphism, start: set) -> frozenset:
    S = set(start)
    frontier = list(S)
    while frontier:
        nm = frontier.pop()
        for o in F.image((nm, 1)):
            if o[0] not in S:
                S.add(o[0])
                frontier.append(o[0])
    return frozenset(S)


def _is_forest(G: BaseGraph, edges) -> bool:
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            x = parent[x]
        return x

    for nm in edges:
        s, t = G.ends(nm)
        a, b = find(s), find(t)
        if a == b:
            return False
        parent[a] = b
    return True


def pretrivial_edges(F: GraphMorphism) -> frozenset:
    P: set = set()
    changed = True
    while changed:
        changed = False
        for nm in F.domain.edge_names:
            if nm not in P and all(o[0] in P for o in F.image((nm, 1))):
                P.add(nm)
                changed = True
    return frozenset(P)


def collapse_forest(F: GraphMorphism, forest) -> GraphMorphism:
    """Induced map on the graph with each forest component collapsed to a point."""
    G = F.domain
    forest = sorted(forest)
    graph = G
    vclass = {x: x for x in G.vertices}
    for nm in forest:
        s, t = graph.ends(nm)
        lab = graph.edge_label(nm)
        root = graph.vertices[0]
        if t != root:
            x, y, rho = t, s, inverse(lab)
        else:
            x, y, rho = s, t, lab
        labels = _twist(graph, x, rho)
        labels.pop(nm, None)
        edges = {e: ((y if a == x else a), (y if b == x else b)) for e, a, b in graph.edges if e != nm}
        verts = [z for z in graph.vertices if z != x]
        graph = BaseGraph.build(G.basis, verts, edges, labels)
        for z, c in vclass.items():
            if c == x:
                vclass[z] = y
    gone = set(forest)
    vmap = {z: vclass[F.vertex(z)] for z in graph.vertices}
    emap = {}
    for nm in graph.edge_names:
        emap[nm] = reduce_path([o for o in F.image((nm, 1)) if o[0] not in gone])
    Fnew = _tighten_map(graph, vmap, emap)
    _check_marking(F, Fnew)
    return Fnew


def collapse_invariant_forest(F: GraphMorphism) -> ForestReport:
    """Collapse pretrivial edges, else a maximal invariant proper subforest."""
    G = F.domain
    names = sorted(G.edge_names)
    closures = {nm: _closure(F, {nm}) for nm in names}
    invariant = sorted({c for c in closures.values() if len(c) < len(names)}, key=lambda c: sorted(c))
    P = pretrivial_edges(F)
    if P:
        if not _is_forest(G, P):
            raise PropertyViolation("pretrivial edges contain a cycle")
        return ForestReport(tuple(sorted(P)), [sorted(c) for c in invariant], collapse_forest(F, P))
    forest: set = set()
    for c in invariant:
        if _is_forest(G, forest | c) and len(forest | c) < len(names):
            forest |= c
    if forest:
        return ForestReport(tuple(sorted(forest)), [sorted(c) for c in invariant], collapse_forest(F, forest))
    return ForestReport((), [sorted(c) for c in invariant], None)


def improve(F: GraphMorphism, max_steps: int = 50) -> tuple:
    """Apply forest collapses and valence-two homotopies until neither applies."""
    steps = []
    for _ in range(max_steps):
        rep = collapse_invariant_forest(F)
        if rep.result is not None:
            steps.append(("collapse", list(rep.collapsed)))
            F = rep.result
            continue
        cands = eligible_valence2(F)
        if cands:
            v = sorted(cands)[0]
            F = valence2_homotopy(F, v)
            steps.append(("valence2", v))
            continue
        return F, steps
    raise ResourceLimitError("improvement did not reach a fixed point")
