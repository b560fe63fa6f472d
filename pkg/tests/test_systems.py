import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from multitrans import brute
from multitrans.hitting import hitting
from multitrans.systems import (
    ESystemWitness, FiniteMap, InadmissibleWordError, MalformedSystemError, MaterializationError,
    Power, ProductHandle, Sft, SpacingShiftApprox, as_vector, cycle_map, cycle_sft, cyclic_esystem,
    full_shift, golden_mean, identity_map, power, system_from_json, tower, tower_state,
    vector_system,
)

from conftest import finite_maps


def test_finite_map_validation():
    with pytest.raises(MalformedSystemError):
        FiniteMap((0, 3))
    with pytest.raises(MalformedSystemError):
        FiniteMap(())


def test_as_vector():
    assert as_vector([1, 2]) == (1, 2)
    for bad in ([], [0], [1, -2]):
        with pytest.raises(ValueError):
            as_vector(bad)


@given(finite_maps(), st.integers(0, 12), st.integers(0, 12))
def test_iterate_composes(f, m, n):
    for x in range(f.size):
        assert f.iterate(x, 0) == x
        assert f.iterate(x, m + n) == f.iterate(f.iterate(x, m), n)


@given(finite_maps())
def test_transitive_iff_every_point_transitive(f):
    every = all(f.is_transitive_point(x) for x in range(f.size))
    assert f.is_single_cycle == every == brute.functional_graph_single_cycle(f)
    assert (f.transitive_points() == list(range(f.size))) == every


def test_orbit_shape_and_cycles():
    f = FiniteMap((1, 2, 3, 2))  # 0 -> 1 -> 2 <-> 3
    assert f.orbit_shape(0) == (2, 2)
    assert f.cycles == ((2, 3),)
    assert f.periodic_points == frozenset({2, 3})


def test_power_examples():
    assert power(cycle_map(3), 3) == identity_map(3)
    assert power(cycle_map(3), 2) == cycle_map(3, 2)
    g2 = power(golden_mean(), 2)
    assert isinstance(g2, Power) and g2.exponent == 2
    assert 1 in hitting(g2, (1,), (1,))
    assert power(g2, 3).exponent == 6
    with pytest.raises(ValueError):
        power(cycle_map(2), 0)


def test_vector_system_materialisation():
    three = vector_system(cycle_map(3), (1, 1)).materialize()
    assert three.size == 9 and len(three.cycles) == 3
    assert all(len(c) == 3 for c in three.cycles)
    two = vector_system(cycle_map(2), (1, 2)).materialize()
    assert two.size == 4 and not two.is_single_cycle
    handle = vector_system(full_shift(2), (1, 2, 3))
    assert handle.state_count is None
    with pytest.raises(MaterializationError):
        handle.materialize()
    with pytest.raises(MaterializationError):
        vector_system(cycle_map(10), (1,) * 7).materialize()


@given(finite_maps(max_size=4), st.lists(st.integers(1, 3), min_size=1, max_size=2))
def test_product_coordinates_are_independent(f, a):
    handle = ProductHandle(f, tuple(a))
    prod = handle.materialize()
    for code in range(prod.size):
        start = handle.decode(code)
        assert handle.encode(start) == code
        for n in (1, 2, 5, 20):
            moved = handle.decode(prod.iterate(code, n))
            assert moved == tuple(f.iterate(x, ai * n) for x, ai in zip(start, a))


def test_tower_examples():
    t = tower(cycle_map(2), 2)
    assert t.is_single_cycle and t.size == 4
    assert t.is_transitive_point(tower_state(0, 0, 2))
    assert tower(cycle_map(3), 2).is_single_cycle
    g = FiniteMap((1, 1, 0))
    assert tower(g, 1) == g


@given(finite_maps(max_size=5), st.integers(1, 4))
def test_tower_returns_to_base_level(g, k):
    h = tower(g, k)
    for x in range(g.size):
        assert h.iterate(tower_state(x, 0, k), k) == tower_state(g(x), 0, k)


def test_esystem_witness():
    e = cyclic_esystem(4)
    assert e.measure == (Fraction(1, 4),) * 4
    with pytest.raises(MalformedSystemError):
        ESystemWitness(FiniteMap((0, 0)))


def test_sft_pruning_and_rejection():
    s = Sft(3, frozenset({(0, 0), (0, 1), (1, 2)}))  # 1 and 2 lead nowhere
    assert s.live == (0,)
    with pytest.raises(MalformedSystemError):
        Sft(2, frozenset())
    with pytest.raises(MalformedSystemError):
        Sft(2, frozenset({(0, 1)}))


def test_sft_structure():
    g = golden_mean()
    assert g.irreducible and g.period == 1 and g.is_mixing
    c = cycle_sft(3)
    assert c.period == 3 and not c.is_mixing
    assert sorted(c.cyclic_class.values()) == [0, 1, 2]
    with pytest.raises(InadmissibleWordError):
        g.validate_cylinder((1, 1))
    assert g.words(3) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1)]


def all_graphs(n):
    for bits in itertools.product((0, 1), repeat=n * n):
        edges = frozenset((i, j) for i in range(n) for j in range(n) if bits[i * n + j])
        try:
            yield Sft(n, edges)
        except MalformedSystemError:
            continue


def test_sft_invariants_exhaustive_three_vertices():
    for s in all_graphs(3):
        for v in s.live:
            assert s.successors(v), "every live vertex keeps an out-edge"
            assert any(v in s.successors(u) for u in s.live), "and an in-edge"
        for idx, comp in enumerate(s.components):
            p = s.component_period(idx)
            cyc = brute.cycle_gcd(s, comp)
            assert cyc == p
            assert brute.return_time_gcd(s, comp[0], 30) == p
        if s.irreducible:
            for u, v in s.live_edges:
                assert s.cyclic_class[v] == (s.cyclic_class[u] + 1) % s.period


def test_spacing_shift_admissibility():
    s = SpacingShiftApprox(frozenset({2, 3}), 8)
    assert s.is_admissible((1, 0, 1, 0, 0, 1))
    assert not s.is_admissible((1, 1))
    assert not s.is_admissible((1,) + (0,) * 8)  # longer than the horizon
    for w in s.words(6):
        for i in range(len(w)):
            for j in range(i + 1, len(w) + 1):
                assert s.is_admissible(w[i:j])


def test_system_from_json():
    assert system_from_json({"kind": "finite_map", "table": [1, 0]}) == cycle_map(2)
    assert system_from_json({"kind": "sft", "vertices": 2,
                             "edges": [[0, 0], [0, 1], [1, 0]]}) == golden_mean()
    sp = system_from_json({"kind": "spacing_shift", "gaps": [2, 4], "horizon": 10})
    assert sp.gaps == frozenset({2, 4})
    for doc in (cycle_map(3), golden_mean(), sp, Power(golden_mean(), 2)):
        assert system_from_json(doc.to_json()) == doc
    with pytest.raises(MalformedSystemError):
        system_from_json({"kind": "torus"})
