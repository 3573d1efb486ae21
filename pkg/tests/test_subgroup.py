import random

import pytest
from hypothesis import given, settings, strategies as st

from splitfold.oracles import random_automorphism
from splitfold.subgroup import (FreeFactorSystem, Rewriter, StallingsGraph, WhiteheadGraph,
                                apply_auto_to_subgroup, double_coset_witness, free_factor_support,
                                kurosh_rank, whitehead_autos, whitehead_cut_vertex)
from splitfold.words import inverse, mul, reduce_word

letters = st.integers(min_value=1, max_value=2).flatmap(lambda x: st.sampled_from([x, -x]))
words = st.lists(letters, min_size=1, max_size=8).map(lambda w: reduce_word(w))


def S(gens, n=2):
    return StallingsGraph.from_generators(gens, n)


def test_trivial_and_full():
    assert S([]).is_trivial()
    assert S([(1,), (2,)]).is_full()
    assert S([(1, 2), (2,)]).is_full()
    assert S([(1, 2), (2, 1)]).rank == 2 and not S([(1, 2), (2, 1)]).is_full()


def test_membership_examples():
    H = S([(1, 1), (2,)])
    assert H.contains((2, 1, 1, -2))
    assert not H.contains((1,))


def test_equal_subgroups_compare_equal():
    assert S([(1,), (2,)]) == S([(1, 2), (2,)])
    assert S([(1, 2)]) != S([(2, 1)])
    assert S([(1, 2)]).is_conjugate_to(S([(2, 1)]))


@given(st.lists(words, min_size=1, max_size=3), st.lists(st.integers(0, 2), max_size=6))
def test_products_of_generators_are_members(gens, picks):
    H = S(gens)
    w = ()
    for i in picks:
        g = gens[i % len(gens)]
        w = mul(w, g if i % 2 == 0 else inverse(g))
    assert H.contains(w)


@given(st.lists(words, min_size=1, max_size=3))
def test_generators_span_same_subgroup(gens):
    H = S(gens)
    assert S(H.generators()) == H


@given(st.lists(words, min_size=1, max_size=3), words)
def test_conjugates_embed_by_conjugation(gens, u):
    H = S(gens)
    K = H.conjugate(u)
    assert K.conjugate_into(H) and H.conjugate_into(K)
    assert K.is_conjugate_to(H)


def test_conjugate_into_detects_proper_containment():
    assert S([(2, 1, -2)]).conjugate_into(S([(1,)]))
    assert not S([(1, 2)]).conjugate_into(S([(1,)]))
    assert S([(1,)]).conjugate_into(StallingsGraph.full(2))
    assert not StallingsGraph.full(2).conjugate_into(S([(1,)]))


@given(st.lists(words, min_size=1, max_size=3), st.lists(st.integers(0, 5), max_size=5))
def test_rewriter_reconstructs_words(gens, picks):
    rw = Rewriter(gens)
    w = ()
    for i in picks:
        g = gens[i % len(gens)]
        w = mul(w, g if i % 2 else inverse(g))
    code = rw.rewrite(w)
    assert code is not None


def test_whitehead_autos_invert():
    for a in whitehead_autos(2):
        for w in [(1,), (2, -1), (1, 2, 1)]:
            assert a.inverse().apply(a.apply(w)) == w


@given(st.lists(words, min_size=1, max_size=2))
@settings(max_examples=30)
def test_auto_preserves_rank(gens):
    H = S(gens)
    for a in whitehead_autos(2)[:4]:
        assert apply_auto_to_subgroup(a, H).rank == H.rank


def test_whitehead_graph_of_commutator_has_no_cut_vertex():
    W = WhiteheadGraph.of_cyclic_word((1, 2, -1, -2), 2)
    kind, _ = whitehead_cut_vertex(W)
    assert kind == "none"


def test_free_factor_support_examples():
    comm = free_factor_support(S([(1, 2, -1, -2)]))
    assert comm.factor.is_full()
    prim = free_factor_support(S([(1, 2)]))
    assert prim.factor == S([(1, 2)])
    assert free_factor_support(S([(1, 1)])).factor == S([(1,)])
    assert free_factor_support(S([])).factor.is_trivial()
    conj = free_factor_support(S([(2, 1, -2)]))
    assert conj.factor.rank == 1 and conj.factor.contains((2, 1, -2))


def test_support_of_image_of_basis_element_is_itself():
    rng = random.Random(3)
    for _ in range(20):
        phi = random_automorphism(rng, 3, rng.randint(1, 4))
        H = S([phi[1]], 3)
        res = free_factor_support(H)
        assert res.factor == H


@given(st.lists(words, min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_support_contains_subgroup(gens):
    H = S(gens)
    res = free_factor_support(H)
    assert res.factor.contains_subgroup(H)


def test_double_coset_witness():
    A, B = S([(1,)]), S([(2,)])
    s = double_coset_witness(A, B, (), (1, 2))
    assert s is not None
    assert A.contains(s)


def test_kurosh_rank_of_systems():
    sysm = FreeFactorSystem((S([(1,)], 3), S([(2,)], 3)), 3)
    assert sysm.corank == 1
    assert sysm.relative_kurosh_rank() == 3
    assert kurosh_rank(sysm) == 2
    assert kurosh_rank(S([(1,), (2,)], 3)) == 2
