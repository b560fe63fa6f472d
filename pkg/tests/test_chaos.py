import itertools

import pytest

from multitrans import brute
from multitrans.chaos import (
    distance_exponent, find_scrambled_pair, pair_evidence, proximal_pairs, scrambled_pairs_finite,
    sensitivity_witness,
)
from multitrans.systems import (
    FiniteMap, Sft, SpacingShiftApprox, cycle_map, cycle_sft, full_shift, golden_mean,
)


def test_full_shift_pair_is_delta_scrambled():
    v = find_scrambled_pair(full_shift(2), delta=0.5, horizon=2 ** 12)
    assert v.is_holds and not v.exact
    ev = v.witness
    assert ev.close_times and ev.far_times and ev.recheck()
    assert all(t <= ev.horizon for t in ev.close_times + ev.far_times)
    assert set(ev.x[: ev.horizon]) == {0}


def test_liminf_proxy_shrinks_as_horizon_doubles():
    exps = [find_scrambled_pair(full_shift(2), horizon=2 ** t).witness.liminf_proxy_exponent
            for t in range(10, 19, 2)]
    assert exps[0] >= 8
    assert all(a < b for a, b in zip(exps, exps[1:]))


def test_evidence_recomputes_from_the_pair():
    ev = pair_evidence((0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 1), horizon=4, delta=0.3,
                       epsilon_exponent=1)
    exps = [distance_exponent(ev.x, ev.y, n) for n in range(5)]
    assert exps == [1, 0, 3, 2, 1]
    assert ev.close_times == (2, 3)
    assert ev.far_times == (0, 1, 4)  # distances 2^-1, 2^0, 2^-1 exceed 0.3


def test_diagonal_and_bad_parameters_rejected():
    with pytest.raises(ValueError):
        pair_evidence((0, 1), (0, 1), horizon=1)
    with pytest.raises(ValueError):
        pair_evidence((0, 1), (1, 1), horizon=1, delta=1.0)
    with pytest.raises(ValueError):
        pair_evidence((0, 0), (0, 0, 1)[:2] + (1,), horizon=5)


def test_other_sfts():
    v = find_scrambled_pair(golden_mean(), horizon=256)
    assert v.is_holds and v.witness.recheck()
    assert find_scrambled_pair(cycle_sft(3)).is_unknown
    s = find_scrambled_pair(SpacingShiftApprox(frozenset(range(1, 400)), 400), horizon=128)
    assert s.is_holds and s.witness.recheck()
    assert find_scrambled_pair(SpacingShiftApprox(frozenset({1}), 400)).is_unknown


def test_finite_maps_have_no_scrambled_pairs():
    assert find_scrambled_pair(cycle_map(3)).is_fails
    for n in range(1, 5):
        for table in itertools.product(range(n), repeat=n):
            assert scrambled_pairs_finite(FiniteMap(table)) == []


def test_proximal_pairs_examples(rng):
    merge = FiniteMap((1, 1, 1))
    assert proximal_pairs(merge) == frozenset(itertools.product(range(3), repeat=2))
    assert proximal_pairs(cycle_map(3)) == frozenset((x, x) for x in range(3))
    for _ in range(30):
        f = FiniteMap(tuple(rng.randrange(6) for _ in range(6)))
        expected = {(x, y) for x in range(6) for y in range(6)
                    if brute.orbit(f, x, 40)[-1] == brute.orbit(f, y, 40)[-1]}
        assert proximal_pairs(f) == expected


def test_sensitivity():
    v = sensitivity_witness(full_shift(2), delta=0.5)
    assert v.is_holds and all(w["point"] != w["perturbed"] for w in v.witness)
    assert sensitivity_witness(Sft(1, frozenset({(0, 0)}))).is_fails
    g = sensitivity_witness(golden_mean(), delta=0.25, horizon=32, depth=3)
    assert g.is_holds and len(g.witness) == len(golden_mean().cylinders(3))
    for w in g.witness:
        assert tuple(w["point"][: len(w["cylinder"])]) == tuple(w["cylinder"])
        assert golden_mean().is_admissible(w["point"]) and golden_mean().is_admissible(w["perturbed"])
