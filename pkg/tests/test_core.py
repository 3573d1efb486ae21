import random

import pytest
from hypothesis import given, settings, strategies as st

from splitfold.core import (BaseGraph, FreeSplitting, GraphMorphism, element_of_translate,
                            format_path, lift_path, parse_path, project_path, reduce_path,
                            tree_edge)
from splitfold.errors import ValidationError
from splitfold.oracles import random_instance
from splitfold.words import Basis, inverse, mul

seeds = st.integers(min_value=0, max_value=10**6)


def natural_words(split):
    return [format_path(e) for e in split.natural_structure().natural_edges]


def test_rose_is_natural(paths_fx):
    R2 = paths_fx.splittings["R2"]
    ns = R2.natural_structure()
    assert natural_words(R2) == ["a", "b"]
    assert ns.natural_vertices == ("v",)


def test_subdivided_rose_has_two_natural_edges(paths_fx):
    assert natural_words(paths_fx.splittings["R2sub"]) == ["a1 a2 a3", "b"]


def test_new_example_single_natural_edge(new_example):
    split, _ = new_example
    ns = split.natural_structure()
    assert natural_words(split) == ["e"]
    assert sorted(ns.natural_vertices) == ["p", "q"]
    assert split.comp_rank("p") == 2 and split.comp_rank("q") == 2


def test_new_example_lift_reads_expected_word(new_example):
    split, path = new_example
    assert format_path(path) == "e c d c^-1 d^-1 e^-1 a b a^-1 b^-1 e"
    tp = project_path(split, path)
    assert len(tp) == 3
    assert lift_path(split, tp) == path


def test_lift_retightens_loose_encoding(new_example):
    split, path = new_example
    loose = parse_path("e c c^-1 c d c^-1 d^-1 e^-1 a b a^-1 b^-1 e")
    assert lift_path(split, loose) == path


def test_aaa_projects_to_three_a_crossings(paths_fx):
    split, path = paths_fx.path("aaa")
    tp = project_path(split, path)
    assert [o for _, o in tp.steps] == [("a", 1)] * 3
    assert [g.word for g, _ in tp.steps] == [(), (1,), (1, 1)]


def test_zero_collapse_lift_is_identity(paths_fx):
    split, path = paths_fx.path("ab")
    assert lift_path(split, project_path(split, path)) == path


def test_lift_rejects_collapsed_ends(new_example):
    split, _ = new_example
    with pytest.raises(ValidationError):
        lift_path(split, parse_path("a e"))


def test_element_of_translate_examples(paths_fx):
    R2 = paths_fx.splittings["R2"]
    R2b = paths_fx.splittings["R2b"]
    with pytest.raises(ValidationError):
        element_of_translate(R2, parse_path("a b"), 0, 1)
    assert element_of_translate(R2b, parse_path("a a a"), 0, 1).word == (1,)
    assert element_of_translate(R2, parse_path("a b a"), 0, 2).word == (1, 2)
    with pytest.raises(ValidationError):
        element_of_translate(R2, parse_path("a b a"), 0, 5)


def test_orientation_flag_must_match(paths_fx):
    R2 = paths_fx.splittings["R2"]
    path = parse_path("a b a^-1")
    assert element_of_translate(R2, path, 0, 2) is None
    g = element_of_translate(R2, path, 0, 2, same_orientation=False)
    assert g.word == (1, 2, -1)


def test_collapsing_everything_is_rejected():
    R = BaseGraph.rose(Basis.standard(2))
    with pytest.raises(ValidationError):
        FreeSplitting(R, frozenset({"a", "b"}))


def test_graph_needs_rank_many_loops():
    B = Basis.standard(2)
    with pytest.raises(ValidationError):
        BaseGraph.build(B, ["v"], {"a": ("v", "v")}, {"a": (1,)})


def test_morphism_rejects_disconnected_image():
    R = BaseGraph.rose(Basis.standard(2))
    with pytest.raises(ValidationError):
        GraphMorphism.build(R, R, {"v": "v"}, {"a": parse_path("a"), "b": ()})


def test_fibonacci_induced_map(fib):
    ind = fib.induced_map()
    assert ind[1] == (1, 2) and ind[2] == (1,)
    assert fib.is_homotopy_equivalence()


def test_compose_matches_iterated_images(maps_fx):
    F = maps_fx.map("trib")
    FF = F.compose(F)
    for nm in F.domain.edge_names:
        assert FF.image((nm, 1)) == F.image_path(F.image((nm, 1)))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_lift_inverts_projection(seed):
    split, path = random_instance(random.Random(seed), 3, 8)
    tp = project_path(split, path)
    assert lift_path(split, tp) == path
    assert len(tp) == len(split.tree_positions(path))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_translate_element_aligns_positions(seed):
    """g carries the tree edge at position i onto the one at position j."""
    split, path = random_instance(random.Random(seed), 3, 8)
    G = split.base
    pos = split.tree_positions(path)
    for a, (i, x, o) in enumerate(pos):
        for j, y, o2 in pos[a + 1:]:
            if o2[0] != o[0]:
                continue
            g = element_of_translate(split, path, i, j, same_orientation=(o == o2))
            assert g is not None
            assert mul(g.word, tree_edge(G, x, o)[0]) == tree_edge(G, y, o2)[0]


@given(st.lists(st.sampled_from(["a", "a^-1", "b", "b^-1"]), max_size=12))
def test_path_reduction_is_confluent(tokens):
    """Reducing left to right and right to left agree."""
    path = parse_path(" ".join(tokens))
    fwd = reduce_path(path)
    back = tuple(reversed(reduce_path(tuple(reversed(path)))))
    assert fwd == back


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_words_read_along_paths_multiply(seed):
    split, path = random_instance(random.Random(seed), 3, 8)
    G = split.base
    k = len(path) // 2
    assert G.path_label(path) == mul(G.path_label(path[:k]), G.path_label(path[k:]))
    assert G.path_label(tuple((o[0], -o[1]) for o in reversed(path))) == inverse(G.path_label(path))
