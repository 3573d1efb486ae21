import pytest
from hypothesis import given, strategies as st

from splitfold.errors import ValidationError
from splitfold.words import (Basis, GroupElement, conjugacy_rep, cyclic_reduce, inverse, mul,
                             power, reduce_word)

letters = st.integers(min_value=1, max_value=3).flatmap(lambda x: st.sampled_from([x, -x]))
words = st.lists(letters, max_size=12).map(tuple)


def test_reduce_cancels_adjacent_pairs():
    assert reduce_word((1, 2, -2, -1, 3)) == (3,)
    assert reduce_word(()) == ()


def test_basis_format_and_parse_round_trip():
    b = Basis.standard(3)
    assert b.format(()) == "1"
    assert b.format((1, 1, -2)) == "a^2b^-1"
    assert b.parse("a^2 b^-1") == (1, 1, -2)
    assert b.parse(b.format((3, -1, -1, 2))) == (3, -1, -1, 2)


def test_parse_rejects_unknown_letter():
    with pytest.raises(ValidationError):
        Basis.standard(2).parse("a c")


def test_power_and_cyclic_reduction():
    assert power((1, 2), 2) == (1, 2, 1, 2)
    assert power((1, 2), -1) == (-2, -1)
    conj, core = cyclic_reduce((2, 1, 3, -2))
    assert core == (1, 3) and conj == (2,)


@given(words, words, words)
def test_multiplication_is_associative(u, v, w):
    assert mul(mul(u, v), w) == mul(u, mul(v, w))


@given(words)
def test_inverse_cancels(w):
    w = reduce_word(w)
    assert mul(w, inverse(w)) == ()
    assert reduce_word(reduce_word(w)) == reduce_word(w)


@given(words, words)
def test_conjugacy_rep_is_conjugation_invariant(w, u):
    w = reduce_word(w)
    assert conjugacy_rep(mul(u, w, inverse(u))) == conjugacy_rep(w)


@given(words, words)
def test_group_element_product(u, v):
    g, h = GroupElement(u), GroupElement(v)
    assert (g * h).word == mul(u, v)
    assert (g * g.inverse()).is_identity()
