import pytest

from multitrans.classify import SearchBounds, classify
from multitrans.systems import (
    CapabilityError, FiniteMap, Power, Sft, SpacingShiftApprox, cycle_map, cycle_sft, full_shift,
    golden_mean,
)


def statuses(record):
    return {k: v["verdict"] for k, v in record.to_json().items() if k != "facts"}


def test_three_cycle():
    rec = classify(cycle_map(3))
    assert rec.transitive.is_holds and rec.weakly_mixing.is_fails
    assert rec.totally_transitive.witness == {"exponent": 3}
    assert rec.dense_small_periodic_sets.is_holds


def test_full_shift_and_golden_mean():
    for s in (full_shift(2), golden_mean()):
        rec = classify(s)
        assert set(statuses(rec).values()) == {"holds"}
        assert rec.facts["period"] == 1
        assert rec.facts["weak_mixing_equals_mixing"]["agree"]
        assert rec.facts["period_cross_check"]["return_time_gcd"] == 1


def test_periodic_and_reducible_sfts():
    rec = classify(cycle_sft(2))
    assert rec.transitive.is_holds and rec.mixing.is_fails
    assert rec.facts["weak_mixing_equals_mixing"]["agree"]
    red = classify(Sft(2, frozenset({(0, 0), (0, 1), (1, 1)})))
    assert red.transitive.is_fails and red.dense_small_periodic_sets.is_fails


def test_finite_maps():
    assert classify(FiniteMap((0,))).mixing.is_holds
    tail = classify(FiniteMap((1, 1)))
    assert tail.transitive.is_fails
    assert tail.dense_small_periodic_sets.witness == {"point": 0}


def test_spacing_shifts_are_bounded():
    full = classify(SpacingShiftApprox(frozenset(range(1, 70)), 70), SearchBounds(horizon=60))
    assert full.mixing.is_holds and not full.mixing.exact
    evens = classify(SpacingShiftApprox(frozenset(range(2, 70, 2)), 70), SearchBounds(horizon=60))
    assert evens.weakly_mixing.is_fails and not evens.weakly_mixing.exact


def test_capability_error():
    with pytest.raises(CapabilityError):
        classify(Power(golden_mean(), 2))
