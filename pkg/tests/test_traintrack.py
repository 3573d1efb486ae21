import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import rose_self_map
from splitfold.core import GraphMorphism, parse_path, rev
from splitfold.errors import InapplicableError, ResourceLimitError, ValidationError
from splitfold.fixture import load
from splitfold.oracles import random_automorphism
from splitfold.traintrack import (IllegalTurn, TrainTrackMap, analyze, bool_exponent,
                                  collapse_invariant_forest, crossing_filling_check,
                                  filling_exponent, improve, is_primitive, map_power, mat_pow,
                                  pf_exponent, pf_interval, tau_lower_bound, tile_fills,
                                  tile_nesting_trace,
                                  transition_matrix, uniform_crossing_check, valence2_homotopy,
                                  validate_tt)

seeds = st.integers(min_value=0, max_value=10**6)


@pytest.fixture(scope="module")
def improve_fx():
    return load(["improve.sfd", "maps.sfd"])


# --- validation --------------------------------------------------------------


def test_fibonacci_is_a_train_track(fib):
    tt = validate_tt(fib)
    assert isinstance(tt, TrainTrackMap)
    # a and b leave v in the same gate (both images start with a)
    assert frozenset({("a", 1), ("b", 1)}) in tt.gates["v"]


def test_conjugating_map_fails_at_a_turn(maps_fx):
    bad = validate_tt(maps_fx.map("notrack"))
    assert isinstance(bad, IllegalTurn)
    assert bad.taken == (("a", -1), ("b", 1)) and bad.steps == 1


def test_non_equivalence_is_rejected():
    f = rose_self_map({"a": "a b", "b": "b^-1 a^-1"})
    with pytest.raises(ValidationError):
        validate_tt(f)


# --- matrices ----------------------------------------------------------------


def test_transition_matrices(fib, maps_fx, rose2):
    ident = GraphMorphism.build(rose2, rose2, {"v": "v"}, {"a": parse_path("a"), "b": parse_path("b")})
    assert transition_matrix(ident) == [[1, 0], [0, 1]]
    assert transition_matrix(fib) == [[1, 1], [1, 0]]
    assert transition_matrix(rose_self_map({"a": "a b", "b": "b a"})) == [[1, 1], [1, 1]]
    assert transition_matrix(maps_fx.map("trib")) == [[0, 0, 1], [1, 0, 1], [0, 1, 0]]


def test_pf_exponents(fib):
    assert pf_exponent([[2, 2], [2, 2]]) == 2
    assert pf_exponent(fib) == 6
    assert min(min(r) for r in mat_pow([[1, 1], [1, 0]], 5)) == 3
    with pytest.raises(InapplicableError):
        pf_exponent([[1, 0], [0, 1]])


def test_pf_interval_brackets_golden_ratio():
    iv = pf_interval([[1, 1], [1, 0]])
    # x^2 - x - 1 changes sign at the golden ratio
    assert iv.lower ** 2 - iv.lower - 1 <= 0 <= iv.upper ** 2 - iv.upper - 1
    assert iv.upper - iv.lower < Fraction(1, 10 ** 9)


def test_matrix_of_power_is_power_of_matrix(maps_fx, fib):
    for F in (fib, maps_fx.map("trib"), maps_fx.map("abbab")):
        M = transition_matrix(F)
        for k in range(1, 7):
            assert transition_matrix(map_power(F, k)) == mat_pow(M, k)


# --- exponents -----------------------------------------------------------------


def test_fibonacci_report(fib):
    rep = analyze(fib)
    assert rep.kappa == 6 and rep.omega == 4
    assert rep.omega <= rep.kappa * 2
    assert rep.mu == 22
    assert rep.tau_lower(1) == Fraction(1, 22)
    Fw = map_power(fib, rep.omega)
    assert tile_fills(fib, Fw.image(("a", 1))) and tile_fills(fib, Fw.image(("b", 1)))


def test_filling_exponents_within_bound(maps_fx):
    for name, omega in (("abbab", 2), ("trib", 9)):
        F = maps_fx.map(name)
        fe = filling_exponent(F)
        assert fe.omega == omega and fe.omega <= fe.bound == pf_exponent(F) * F.domain.rank


def test_identity_has_no_exponents(rose2):
    ident = GraphMorphism.build(rose2, rose2, {"v": "v"}, {"a": parse_path("a"), "b": parse_path("b")})
    with pytest.raises(InapplicableError):
        filling_exponent(ident)
    with pytest.raises(InapplicableError):
        tile_nesting_trace(ident, (("a", 1),))


def test_uniform_crossing(fib):
    assert uniform_crossing_check(fib, 6)
    # at kappa - 5 = 1 the tile F(b) = a does not even cross b
    assert not uniform_crossing_check(fib, 1)


def test_crossing_filling_on_fibonacci(fib):
    rep = crossing_filling_check(fib, 6, 4)
    assert rep.ok


def test_tile_nesting_fibonacci(fib):
    tr = tile_nesting_trace(fib, (("a", 1),))
    assert tr.power == 3
    assert tr.kurosh == [0, 2, 2]
    assert tr.stabilized_value == 2
    assert tr.stabilized_at - tr.first_positive <= 2


def test_tau_formula():
    assert tau_lower_bound(6, 12, 1) == Fraction(1, 30)
    assert tau_lower_bound(1, 1, 1) == Fraction(1, 4)
    assert tau_lower_bound(1, 1, 2) == Fraction(1, 8)
    with pytest.raises(ValidationError):
        tau_lower_bound(0, 1, 1)
    with pytest.raises(ValidationError):
        tau_lower_bound(1, 1, 0)


@pytest.mark.parametrize("m,expected", [(1, 1), (2, 2), (3, 5)])
def test_bool_exponents(m, expected):
    be = bool_exponent(m)
    assert be.kappa2 == expected <= (m - 1) ** 2 + 1
    assert be.kappa1 == 3 * expected
    assert is_primitive(be.matrix)


def test_bool_exponent_envelope():
    with pytest.raises(ResourceLimitError):
        bool_exponent(5)


# --- improvement moves -------------------------------------------------------


def test_valence2_on_natural_graph_is_inapplicable(fib):
    with pytest.raises(InapplicableError):
        valence2_homotopy(fib)


def test_valence2_recovers_fibonacci(maps_fx, fib):
    F = maps_fx.map("fibsub")
    N = valence2_homotopy(F, "w")
    assert N.domain.vertices == ("v",)
    assert transition_matrix(N) == [[1, 1], [1, 0]]
    assert N.induced_map() == F.induced_map() == fib.induced_map()


def test_valence2_lowers_growth(improve_fx):
    F = improve_fx.map("detour")
    N = valence2_homotopy(F, "w")
    old, new = pf_interval(transition_matrix(F)), pf_interval(transition_matrix(N))
    assert new.upper < old.lower
    assert N.induced_map() == F.induced_map()


def test_forest_collapse_examples(fib, maps_fx):
    assert collapse_invariant_forest(fib).result is None
    rep = collapse_invariant_forest(maps_fx.map("triangular"))
    assert rep.invariant == [["a"]] and rep.result is None


def test_pretrivial_edge_is_collapsed():
    B = load("cancellation.sfd").splittings["Barbell"].base
    F = GraphMorphism.build(B, B, {"p": "p", "q": "p"},
                            {"a": parse_path("a"), "b": parse_path("e b e^-1"), "e": ()}, allow_empty=True)
    rep = collapse_invariant_forest(F)
    assert rep.collapsed == ("e",)
    assert rep.result.domain.vertices == ("p",)
    assert rep.result.induced_map() == F.induced_map()


def test_improve_reaches_rose(improve_fx):
    G, steps = improve(improve_fx.map("detour"))
    assert steps == [("valence2", "w")]
    assert len(G.domain.vertices) == 1


# --- properties ------------------------------------------------------------------

_LETTER = {1: (("a1", 1), ("a2", 1)), 2: (("b", 1),)}


def _word_path(w):
    out = []
    for x in w:
        p = _LETTER[abs(x)]
        out += list(p) if x > 0 else [rev(o) for o in reversed(p)]
    return out


def _detoured(rng, G):
    """Representative of a random automorphism on the subdivided rose whose
    edge images a1, a2 backtrack across the subdivision vertex."""
    while True:
        phi = random_automorphism(rng, 2, rng.randint(1, 5))
        pa = _word_path(phi[1])
        if len(pa) < 2:
            continue
        k = rng.randint(1, len(pa) - 1)
        q, cur = [], pa[k - 1]
        for _ in range(rng.randint(0, 3)):
            opts = [o for o in G.directions(G.tgt(cur)) if o != rev(cur) and (q or o != pa[k])]
            if not opts:
                break
            cur = rng.choice(opts)
            q.append(cur)
        end = G.tgt(q[-1]) if q else G.tgt(pa[k - 1])
        f1 = tuple(pa[:k] + q)
        f2 = tuple([rev(o) for o in reversed(q)] + pa[k:])
        return GraphMorphism.build(G, G, {"v": "v", "w": end},
                                   {"a1": f1, "a2": f2, "b": tuple(_word_path(phi[2]))})


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_valence2_never_raises_growth(seed):
    G = load("improve.sfd").splittings["R2sub"].base
    F = _detoured(random.Random(seed), G)
    N = valence2_homotopy(F, "w")
    assert N.induced_map() == F.induced_map()
    M, M2 = transition_matrix(F), transition_matrix(N)
    if is_primitive(M) and is_primitive(M2):
        assert pf_interval(M2).lower <= pf_interval(M).upper


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_pf_interval_bounds_eigenvalue(rows):
    if not is_primitive(rows):
        return
    lam = max(abs(np.linalg.eigvals(np.array(rows, dtype=float))))
    iv = pf_interval(rows)
    assert float(iv.lower) - 1e-9 <= lam <= float(iv.upper) + 1e-9
    assert iv.lower > 1 or lam <= 1 + 1e-9
