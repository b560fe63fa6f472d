"""Transitivity/mixing classification of a single system."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import brute
from .families import is_cofinite
from .hitting import (
    DEFAULT_HORIZON, a_transitive, cylinder_tuple_check, hitting_finite, hitting_spacing,
    unreachable_pair,
)
from .systems import CapabilityError, FiniteMap, Sft, SpacingShiftApprox
from .verdict import Verdict, both


@dataclass(frozen=True)
class SearchBounds:
    depth: int = 2
    horizon: int | None = None
    total_n: int = 6
    return_length: int = 20


@dataclass
class PropertyRecord:
    transitive: Verdict
    totally_transitive: Verdict
    weakly_mixing: Verdict
    mixing: Verdict
    dense_small_periodic_sets: Verdict
    hy_candidate: Verdict
    facts: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {name: getattr(self, name).to_json()
               for name in ("transitive", "totally_transitive", "weakly_mixing", "mixing",
                            "dense_small_periodic_sets", "hy_candidate")}
        out["facts"] = self.facts
        return out


def classify(system, bounds: SearchBounds | None = None) -> PropertyRecord:
    bounds = bounds or SearchBounds()
    if isinstance(system, FiniteMap):
        return _classify_finite(system)
    if isinstance(system, Sft):
        return _classify_sft(system, bounds)
    if isinstance(system, SpacingShiftApprox):
        return _classify_spacing(system, bounds)
    raise CapabilityError(f"classification is not available for {type(system).__name__}")


def _smallest_prime_factor(n: int) -> int:
    return next(d for d in range(2, n + 1) if n % d == 0)


def _classify_finite(sys: FiniteMap) -> PropertyRecord:
    s = sys.size
    if sys.is_single_cycle:
        transitive = Verdict.holds()
    else:
        x, y = next((x, y) for x in range(s) for y in range(s)
                    if hitting_finite(sys, {x}, {y}).is_empty)
        transitive = Verdict.fails({"u": [x], "v": [y]})
    if not transitive.is_holds:
        total = transitive
    elif s == 1:
        total = Verdict.holds()
    else:
        total = Verdict.fails({"exponent": _smallest_prime_factor(s)},
                              note="a power splits the cycle")
    weak = a_transitive(sys, (1, 1))
    mixing = Verdict.holds()
    for x in range(s):
        for y in range(s):
            if not hitting_finite(sys, {x}, {y}).is_cofinite:
                mixing = Verdict.fails({"u": [x], "v": [y]})
                break
        if mixing.is_fails:
            break
    aperiodic = sorted(set(range(s)) - sys.periodic_points)
    dsps = Verdict.fails({"point": aperiodic[0]}) if aperiodic else Verdict.holds()
    facts = {"cycles": [list(c) for c in sys.cycles], "size": s}
    return PropertyRecord(transitive, total, weak, mixing, dsps, both(total, dsps), facts)


def _classify_sft(sys: Sft, bounds: SearchBounds) -> PropertyRecord:
    facts: dict = {"live_vertices": list(sys.live),
                   "components": [list(c) for c in sys.components]}
    stuck = unreachable_pair(sys)
    if stuck is not None:
        transitive = Verdict.fails({"u": [stuck[0]], "v": [stuck[1]]}, note="reducible")
        total = mixing = transitive
    else:
        p = sys.period
        facts["period"] = p
        facts["cyclic_classes"] = {str(v): c for v, c in sorted(sys.cyclic_class.items())}
        v0 = sys.live[0]
        facts["period_cross_check"] = {
            "return_time_gcd": brute.return_time_gcd(sys, v0, bounds.return_length),
            "length": bounds.return_length,
        }
        transitive = Verdict.holds()
        if p == 1:
            total = mixing = Verdict.holds()
        else:
            total = Verdict.fails({"exponent": p}, note="the p-th power is reducible")
            mixing = Verdict.fails({"period": p})
    weak = mixing
    brute_hit = cylinder_tuple_check(sys, (1, 1), bounds.depth)
    facts["weak_mixing_equals_mixing"] = {
        "derived": True,
        "cylinder_check_depth": bounds.depth,
        "agree": (brute_hit is None) == mixing.is_holds,
    }
    crossing = sorted((u, v) for u, v in sys.live_edges
                      if sys.component_of[u] != sys.component_of[v])
    dsps = Verdict.fails({"edge": list(crossing[0])}) if crossing else Verdict.holds()
    return PropertyRecord(transitive, total, weak, mixing, dsps, both(total, dsps), facts)


def _periodic_extension(sys: SpacingShiftApprox, w: tuple, limit: int) -> int | None:
    """Smallest j >= 0 such that (w 0^j)^∞ is a point of the spacing shift."""
    ones = [i for i, s in enumerate(w) if s]
    if not ones:
        return 0
    for j in range(0, limit + 1):
        if (len(w) - 1 - ones[-1]) + j + ones[0] + 1 in sys.gaps:
            return j
    return None


def _classify_spacing(sys: SpacingShiftApprox, bounds: SearchBounds) -> PropertyRecord:
    depth = bounds.depth
    cap = sys.horizon - depth
    h = min(cap, bounds.horizon or DEFAULT_HORIZON)
    scope = {"horizon": h, "depth": depth}
    transitive = a_transitive(sys, (1,), depth, h)
    total = transitive
    for j in range(2, bounds.total_n + 1):
        if not total.is_holds:
            break
        v = a_transitive(sys, (j,), depth, h)
        if v.is_fails:
            total = Verdict.fails({"exponent": j, **v.witness}, exact=False, bounds=scope)
    if total.is_holds:
        total = Verdict.holds(exact=False, bounds={**scope, "total_n": bounds.total_n},
                              note="at horizon")
    weak = a_transitive(sys, (1, 1), depth, h)
    mixing = Verdict.holds(exact=False, bounds=scope, note="at horizon")
    words = sys.cylinders(depth)
    for u in words:
        for v in words:
            c = is_cofinite(hitting_spacing(sys, u, v, h))
            if not c.is_holds:
                mixing = Verdict.fails({"u": list(u), "v": list(v), **c.witness},
                                       exact=False, bounds=scope)
                break
        if mixing.is_fails:
            break
    dsps = Verdict.holds(exact=False, bounds=scope, note="periodic point in every cylinder")
    for w in words:
        if _periodic_extension(sys, w, sys.horizon) is None:
            dsps = Verdict.fails({"cylinder": list(w)}, exact=False, bounds=scope)
            break
    facts = {"gaps": sorted(sys.gaps), "truncation": sys.horizon}
    return PropertyRecord(transitive, total, weak, mixing, dsps, both(total, dsps), facts)

