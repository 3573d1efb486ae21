import random

import pytest
from hypothesis import given, settings, strategies as st

from splitfold.core import BaseGraph, FreeSplitting, format_path, tree_edge
from splitfold.errors import NoWitnessError
from splitfold.oracles import random_instance
from splitfold.protoforest import (blowup_witness, expansion_enumerate, filling_support, fills,
                                   interior_crossings, overlap_generators)
from splitfold.subgroup import StallingsGraph
from splitfold.words import inverse, mul

seeds = st.integers(min_value=0, max_value=10**6)

COMM_AB = (1, 2, -1, -2)
COMM_CD = (3, 4, -3, -4)


def shape(split):
    ns = split.natural_structure()
    return len(ns.natural_vertices), len(ns.natural_edges)


# --- interior crossings ----------------------------------------------------


def test_two_letter_path_crosses_nothing(paths_fx):
    rep = interior_crossings(*paths_fx.path("ab"))
    assert rep.crossed == () and not rep.ok


def test_middle_a_is_an_interior_crossing(paths_fx):
    rep = interior_crossings(*paths_fx.path("aaa"))
    assert rep.crossed == (0,) and rep.ok


def test_subdivided_counterexample_misses_a(paths_fx):
    split, path = paths_fx.path("sub")
    rep = interior_crossings(split, path)
    nat = rep.natural.natural_edges
    assert [format_path(nat[i]) for i in rep.missing] == ["a1 a2 a3"]
    assert [format_path(nat[i]) for i in rep.crossed] == ["b"]


# --- overlap set and filling support ---------------------------------------


def test_no_overlap_for_ab(paths_fx):
    od = overlap_generators(*paths_fx.path("ab"))
    assert od.elements() == [] and od.is_empty


def test_overlap_set_of_aaa(paths_fx):
    od = overlap_generators(*paths_fx.path("aaa"))
    assert sorted(g.word for g in od.elements()) == [(-1,), (-1, -1), (1,), (1, 1)]
    assert od.subgroup == StallingsGraph.from_generators([(1,)], 2)


def test_new_example_overlap_subgroup(new_example):
    """[c,d] alpha shares the edge [c,d] e with alpha (crossed backwards), so the
    overlap stabilizer is <[a,b],[c,d]>; it contains [c,d][a,b] and is not a
    free factor."""
    split, path = new_example
    od = overlap_generators(split, path)
    assert od.subgroup == StallingsGraph.from_generators([COMM_AB, COMM_CD], 4)
    assert od.subgroup.contains(mul(COMM_CD, COMM_AB))
    G = split.base
    edges = {tree_edge(G, x, o) for _, x, o in split.tree_positions(path)}
    moved = {(mul(COMM_CD, h), nm) for h, nm in edges}
    assert edges & moved


def test_support_examples(paths_fx, new_example):
    assert filling_support(*paths_fx.path("ab")).kurosh == 0
    sup = filling_support(*paths_fx.path("aaa"))
    assert sup.kurosh == 1 and sup.factor == StallingsGraph.from_generators([(1,)], 2)
    sup = filling_support(*paths_fx.path("sub"))
    assert sup.kurosh == 2 and sup.factor.is_full()
    sup = filling_support(*new_example)
    assert sup.kurosh == 4 and sup.factor.is_full()


# --- the filling test and witnesses ----------------------------------------


def test_new_example_fills(new_example):
    rep = fills(*new_example)
    assert rep.fills and rep.crossing_ok and rep.kurosh == 4 and rep.witness is None


def test_ab_gets_theta_witness(paths_fx):
    rep = fills(*paths_fx.path("ab"))
    assert not rep.fills
    U = rep.witness.expansion.total
    assert U.base.rank == 2 and shape(U) == (2, 3)
    assert rep.witness.expansion.kind == "blowup"


def test_aaa_gets_uncollapse_witness(paths_fx):
    rep = fills(*paths_fx.path("aaa"))
    assert not rep.fills and rep.kurosh == 1
    w = rep.witness
    assert w.expansion.kind == "uncollapse"
    assert not w.expansion.total.collapsed
    assert format_path(w.missed_edge) == "b"


def test_counterexample_gets_trivial_witness(paths_fx):
    rep = fills(*paths_fx.path("sub"))
    assert not rep.fills and not rep.crossing_ok and rep.kurosh == 2
    assert rep.witness.expansion.kind == "trivial"
    assert format_path(rep.witness.missed_edge) == "a1 a2 a3"


def test_blowup_witness_refuses_filling_path(new_example):
    with pytest.raises(NoWitnessError):
        blowup_witness(*new_example)


# --- expansion enumeration -------------------------------------------------


def test_budget_zero_is_trivial_only(paths_fx):
    (only,) = list(expansion_enumerate(paths_fx.splittings["R2"], 0))
    assert only.kind == "trivial"


def test_rose_budget_one_has_theta_and_barbell(paths_fx):
    shapes = sorted(shape(e.total) for e in expansion_enumerate(paths_fx.splittings["R2"], 1))
    # the rose itself, one barbell (2 vertices, 3 natural edges with two loops),
    # two theta graphs with different direction pairings
    assert shapes == [(1, 2), (2, 3), (2, 3), (2, 3)]
    loops = []
    for e in expansion_enumerate(paths_fx.splittings["R2"], 1):
        if e.kind != "trivial":
            loops.append(sum(1 for _, s, t in e.total.base.edges if s == t))
    assert sorted(loops) == [0, 0, 2]


def test_new_example_budget_one_uncollapses(new_example):
    split, _ = new_example
    exps = list(expansion_enumerate(split, 1))
    unc = sorted(tuple(sorted(e.total.collapsed)) for e in exps if e.kind != "trivial")
    assert unc == [("a", "b", "c"), ("a", "b", "d"), ("a", "c", "d"), ("b", "c", "d")]


# --- properties ------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_fills_iff_crossing_and_full_rank(seed):
    split, path = random_instance(random.Random(seed), 3, 8)
    rep = fills(split, path)
    assert rep.fills == (rep.crossing_ok and rep.kurosh == split.rank)
    if not rep.fills:
        lifted, missed = rep.witness.expansion.missed(path)
        assert missed


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_empty_overlap_iff_rank_zero(seed):
    split, path = random_instance(random.Random(seed), 3, 8)
    od = overlap_generators(split, path)
    assert (filling_support(split, path).kurosh == 0) == od.is_empty == (not od.elements())


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_overlap_set_is_symmetric_and_spans(seed):
    split, path = random_instance(random.Random(seed), 3, 8)
    od = overlap_generators(split, path)
    elems = {g.word for g in od.elements()}
    assert () not in elems
    assert all(inverse(w) in elems for w in elems)
    assert StallingsGraph.from_generators(sorted(elems), split.rank) == od.subgroup


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_support_is_monotone_under_nesting(seed, cut_left, cut_right):
    split, path = random_instance(random.Random(seed), 3, 8)
    sub = path[cut_left:len(path) - cut_right]
    if not sub or split.is_collapsed(sub[0]) or split.is_collapsed(sub[-1]):
        return
    small, big = filling_support(split, sub), filling_support(split, path)
    assert small.kurosh <= big.kurosh
    assert small.factor.conjugate_into(big.factor)
    if fills(split, sub, witness=False).fills:
        assert fills(split, path, witness=False).fills


def _renamed(split, path):
    """Same splitting with edge and vertex names reversed in order."""
    G = split.base
    names = sorted(G.edge_names)
    emap = {nm: f"e{len(names) - i}" for i, nm in enumerate(names)}
    vmap = {v: f"w{len(G.vertices) - i}" for i, v in enumerate(G.vertices)}
    verts = [vmap[v] for v in reversed(G.vertices)]
    # keep the old root first so the marking basepoint is unchanged
    verts.remove(vmap[G.root])
    verts.insert(0, vmap[G.root])
    edges = {emap[nm]: (vmap[s], vmap[t]) for nm, s, t in G.edges}
    labels = {emap[nm]: G.edge_label(nm) for nm in G.edge_names if G.edge_label(nm)}
    H = BaseGraph.build(G.basis, verts, edges, labels)
    return FreeSplitting(H, frozenset(emap[z] for z in split.collapsed)), tuple((emap[n], s) for n, s in path)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_report_is_invariant_under_renaming(seed):
    split, path = random_instance(random.Random(seed), 3, 8)
    a = fills(split, path, witness=False)
    b = fills(*_renamed(split, path), witness=False)
    assert (a.fills, a.crossing_ok, a.kurosh) == (b.fills, b.crossing_ok, b.kurosh)
    assert a.support.factor.is_conjugate_to(b.support.factor)
