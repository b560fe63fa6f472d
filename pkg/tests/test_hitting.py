import itertools

import pytest
from hypothesis import given, strategies as st

from multitrans import brute
from multitrans.hitting import (
    HorizonError, a_transitive, hitting_finite, hitting_sft, hitting_spacing,
    intersect_dilations, walk_lengths, walk_lengths_by_repetition,
)
from multitrans.indexset import ExactSet, ExplicitSet, NAMED_SETS
from multitrans.systems import (
    FiniteMap, InadmissibleWordError, MalformedSystemError, Power, ProductHandle, Sft,
    SpacingShiftApprox, cycle_map, cycle_sft, full_shift, golden_mean, identity_map,
)

from conftest import finite_maps, vectors_st


@st.composite
def sfts(draw, max_vertices=6):
    n = draw(st.integers(1, max_vertices))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=1))
    try:
        return Sft(n, frozenset(edges))
    except MalformedSystemError:
        return golden_mean()


# --- finite maps -----------------------------------------------------------


def test_finite_examples():
    assert hitting_finite(cycle_map(3), {0}, {1}) == ExactSet.residue_class(1, 3)
    assert hitting_finite(identity_map(2), {0}, {1}).is_empty
    with pytest.raises(InadmissibleWordError):
        hitting_finite(cycle_map(3), set(), {1})


def test_random_six_point_map_with_tail(rng):
    for _ in range(20):
        # points 0,1 form a 2-cycle; 2..5 feed into it
        table = [1, 0] + [rng.randrange(i) for i in range(2, 6)]
        f = FiniteMap(tuple(table))
        for x, y in itertools.product(range(6), repeat=2):
            s = hitting_finite(f, {x}, {y})
            assert s.modulus in (1, 2) and s.threshold <= 6
            assert s.elements_upto(50) == brute.simulate_hitting(f, [x], [y], 50)


@given(finite_maps(), st.data())
def test_finite_matches_simulation(f, data):
    U = data.draw(st.sets(st.integers(0, f.size - 1), min_size=1))
    V = data.draw(st.sets(st.integers(0, f.size - 1), min_size=1))
    assert hitting_finite(f, U, V).elements_upto(50) == brute.simulate_hitting(f, U, V, 50)


# --- SFTs --------------------------------------------------------------------


def test_sft_examples():
    assert hitting_sft(cycle_sft(2), (0,), (0,)) == NAMED_SETS["evens"]
    assert hitting_sft(golden_mean(), (1,), (1,)) == ExactSet((), 1, (0,), 2)
    assert hitting_sft(full_shift(2), (0,), (1,)) == ExactSet.everything()
    with pytest.raises(InadmissibleWordError):
        hitting_sft(golden_mean(), (1, 1), (0,))


@given(sfts(), st.data())
def test_sft_matches_path_search(s, data):
    words = s.cylinders(3)
    u = data.draw(st.sampled_from(words))
    v = data.draw(st.sampled_from(words))
    assert hitting_sft(s, u, v).elements_upto(64) == brute.path_hitting(s, u, v, 64)


def test_sft_matches_path_search_exhaustive_small():
    for n in (1, 2, 3):
        for bits in itertools.product((0, 1), repeat=n * n):
            try:
                s = Sft(n, frozenset((i, j) for i in range(n) for j in range(n) if bits[i * n + j]))
            except MalformedSystemError:
                continue
            for u in s.cylinders(2):
                for v in s.cylinders(2):
                    assert hitting_sft(s, u, v).elements_upto(40) == brute.path_hitting(s, u, v, 40)


@given(sfts(max_vertices=5))
def test_walk_length_methods_agree(s):
    for i in s.live:
        for j in s.live:
            assert walk_lengths(s, i, j) == walk_lengths_by_repetition(s, i, j)


# --- spacing shifts ----------------------------------------------------------


def spacing_brute(sys, u, v, horizon):
    out = []
    for n in range(1, horizon + 1):
        length = max(len(u), n + len(v))
        free = length - len(u)
        ok = False
        for tail in itertools.product((0, 1), repeat=free):
            w = u + tail
            if w[n:n + len(v)] == v and sys.is_admissible(w):
                ok = True
                break
        if ok:
            out.append(n)
    return out


def test_spacing_examples():
    full = SpacingShiftApprox(frozenset(range(1, 40)), 40)
    assert hitting_spacing(full, (1,), (1,), 10).elements == tuple(range(1, 11))
    evens = SpacingShiftApprox(frozenset(range(2, 40, 2)), 40)
    assert hitting_spacing(evens, (1,), (1,), 10).elements == (2, 4, 6, 8, 10)
    three = SpacingShiftApprox(frozenset({3}), 40)
    assert hitting_spacing(three, (1,), (1,), 10).elements == (3, 6, 9)
    with pytest.raises(HorizonError):
        hitting_spacing(three, (1,), (1,), 40)


@pytest.mark.parametrize("gaps", [{1}, {2}, {2, 3}, {1, 4}, {3, 5, 7}, {2, 4, 6}])
def test_spacing_matches_word_enumeration(gaps):
    sys = SpacingShiftApprox(frozenset(gaps), 16)
    words = sys.cylinders(3)
    for u in words:
        for v in words:
            got = hitting_spacing(sys, u, v, 9).elements
            assert list(got) == spacing_brute(sys, u, v, 9), (u, v)


# --- dilations ---------------------------------------------------------------


def test_dilation_examples():
    assert intersect_dilations([ExactSet.residue_class(1, 3), ExactSet.everything()], (1, 2)) \
        == ExactSet.residue_class(1, 3)
    odds = NAMED_SETS["odds"]
    assert intersect_dilations([odds, odds], (1, 2)).is_empty
    g = hitting_sft(golden_mean(), (1,), (1,))
    assert intersect_dilations([g, g], (2, 3)) == ExactSet.everything()
    mixed = intersect_dilations([ExplicitSet((2, 4, 6, 8), 8), ExactSet.everything()], (2, 1))
    assert mixed == ExplicitSet((1, 2, 3, 4), 4)
    with pytest.raises(ValueError):
        intersect_dilations([odds], (1, 2))


@given(finite_maps(), vectors_st, st.data())
def test_dilation_identity_against_product_simulation(f, a, data):
    xs = data.draw(st.lists(st.integers(0, f.size - 1), min_size=len(a), max_size=len(a)))
    ys = data.draw(st.lists(st.integers(0, f.size - 1), min_size=len(a), max_size=len(a)))
    sets = [hitting_finite(f, {x}, {y}) for x, y in zip(xs, ys)]
    got = intersect_dilations(sets, a)
    assert got.elements_upto(60) == brute.product_hitting(f, a, xs, ys, 60)
    assert ExactSet(got.exceptional, got.modulus, got.residues, got.threshold) == got


# --- vector transitivity -------------------------------------------------------


def test_a_transitive_examples():
    v = a_transitive(cycle_map(3), (1, 2))
    assert v.is_fails
    s = a_transitive(cycle_sft(3), (1, 2))
    assert s.is_fails and s.witness["residues"] == [0, 1]
    full = a_transitive(full_shift(2), (1, 2, 3), depth=3)
    assert full.is_holds and full.extra["cross_check"]["agree"]
    assert a_transitive(FiniteMap((0,)), (2, 3)).is_holds


def test_reducible_sft_fails_with_unreachable_pair():
    s = Sft(2, frozenset({(0, 0), (0, 1), (1, 1)}))
    v = a_transitive(s, (1,))
    assert v.is_fails and v.witness["reason"] == "reducible"
    i, j = v.witness["u"][0][0], v.witness["v"][0][0]
    assert not s.reaches(i, j)


def test_mixing_sfts_are_strongly_multi_transitive():
    for s in (golden_mean(), full_shift(2), Sft(3, frozenset({(0, 1), (1, 2), (2, 0), (2, 1)}))):
        assert s.is_mixing
        for r in (1, 2, 3):
            for a in itertools.product(range(1, 5), repeat=r):
                v = a_transitive(s, a, depth=2 if r == 3 else 3)
                assert v.is_holds and v.extra["cross_check"]["agree"]


@given(sfts(max_vertices=4), vectors_st)
def test_residue_criterion_matches_cylinder_search(s, a):
    v = a_transitive(s, a, depth=2)
    if "cross_check" in v.extra:
        assert v.extra["cross_check"]["agree"]


@given(finite_maps(max_size=4), st.lists(st.integers(1, 3), min_size=1, max_size=2))
def test_finite_a_transitive_matches_materialised_product(f, a):
    prod = ProductHandle(f, tuple(a)).materialize()
    assert a_transitive(f, a).is_holds == prod.is_single_cycle


def test_power_and_product_handles_rescale_vectors():
    g = cycle_sft(2)
    assert a_transitive(Power(g, 2), (1,)).is_fails  # f^2 splits the two classes
    assert a_transitive(Power(golden_mean(), 3), (1, 2)).is_holds
    h = ProductHandle(cycle_map(3), (1, 1))
    assert a_transitive(h, (1,)).status == a_transitive(cycle_map(3), (1, 1)).status


def test_spacing_transitivity_is_bounded():
    full = SpacingShiftApprox(frozenset(range(1, 80)), 80)
    v = a_transitive(full, (1, 2), depth=2, horizon=64)
    assert v.is_holds and not v.exact
    evens = SpacingShiftApprox(frozenset(range(2, 80, 2)), 80)
    w = a_transitive(evens, (1, 2), depth=2, horizon=64)
    assert w.is_fails and not w.exact
