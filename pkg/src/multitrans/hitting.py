"""Hitting-time sets N(U, V) and transitivity of products of powers.

Finite maps and SFTs get exact ultimately periodic answers; truncated spacing
shifts get explicit answers up to a horizon.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from .indexset import ExactSet, ExplicitSet, IndexSet
from .systems import (
    CapabilityError, DynSystem, FiniteMap, Power, ProductHandle, Sft, SpacingShiftApprox,
    _bits, as_vector,
)
from .verdict import Verdict

DEFAULT_HORIZON = 4096


class HorizonError(ValueError):
    pass


# ---------------------------------------------------------------------------
# walk lengths in a graph


def _mat_mult(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for row in a:
        acc = 0
        for k in _bits(row):
            acc |= b[k]
        out.append(acc)
    return tuple(out)


@lru_cache(maxsize=4096)
def _walk_table(sys: Sft) -> dict[tuple[int, int], ExactSet]:
    if sys.irreducible:
        return _walk_table_irreducible(sys)
    return _walk_table_by_repetition(sys)


def _walk_table_irreducible(sys: Sft) -> dict[tuple[int, int], ExactSet]:
    p = sys.period
    sizes = [0] * p
    for v in sys.live:
        sizes[sys.cyclic_class[v]] += 1
    wielandt = (max(sizes) - 1) ** 2 + 1
    # every length >= p*(wielandt+1) in the right residue class is realized
    limit = p * (wielandt + 1)
    table = {}
    for i in sys.live:
        masks = [0]
        cur = sys.succ_mask[i]
        for _ in range(limit + p):
            masks.append(cur)
            nxt = 0
            for k in _bits(cur):
                nxt |= sys.succ_mask[k]
            cur = nxt
        for j in sys.live:
            table[i, j] = ExactSet.from_predicate(lambda m, j=j: bool(masks[m] >> j & 1), p, limit)
    return table


def _walk_table_by_repetition(sys: Sft) -> dict[tuple[int, int], ExactSet]:
    base = sys.succ_mask
    powers = [(), base]
    seen = {base: 1}
    while True:
        nxt = _mat_mult(powers[-1], base)
        if nxt in seen:
            start = seen[nxt]
            period = len(powers) - start
            break
        seen[nxt] = len(powers)
        powers.append(nxt)
    table = {}
    for i in sys.live:
        for j in sys.live:
            table[i, j] = ExactSet.from_predicate(
                lambda m, i=i, j=j: bool(powers[m][i] >> j & 1), period, start)
    return table


def walk_lengths(sys: Sft, i: int, j: int) -> ExactSet:
    """``{m >= 1 : there is a walk of length m from i to j}``."""
    return _walk_table(sys)[i, j]


def walk_lengths_by_repetition(sys: Sft, i: int, j: int) -> ExactSet:
    """Same set via the eventually periodic sequence of boolean matrix powers."""
    return _walk_table_by_repetition(sys)[i, j]


# ---------------------------------------------------------------------------
# hitting sets


@lru_cache(maxsize=65536)
def _point_hitting(sys: FiniteMap, x: int, targets: frozenset) -> ExactSet:
    pre, per = sys.orbit_shape(x)
    orbit = [x]
    for _ in range(pre + per):
        orbit.append(sys(orbit[-1]))

    def pred(n):
        if n >= pre + per:
            n = pre + (n - pre) % per
        return orbit[n] in targets

    return ExactSet.from_predicate(pred, per, max(pre, 1))


def hitting_finite(sys: FiniteMap, U, V) -> ExactSet:
    """Exact N(U, V) by simulating each point of U through its pre-period and period."""
    U = sys.validate_cylinder(U)
    V = sys.validate_cylinder(V)
    out = ExactSet.empty()
    for x in sorted(U):
        out = out | _point_hitting(sys, x, V)
    return out


def _overlap_ok(u: Sequence[int], v: Sequence[int], n: int) -> bool:
    ol = min(len(u) - n, len(v))
    return tuple(u[n:n + ol]) == tuple(v[:ol])


def hitting_sft(sys: Sft, u, v) -> ExactSet:
    """Exact N([u], [v]): n is a member iff some point starting with u shows v at coordinate n."""
    u = sys.validate_cylinder(u)
    v = sys.validate_cylinder(v)
    return _hitting_sft(sys, u, v)


@lru_cache(maxsize=1 << 16)
def _hitting_sft(sys: Sft, u: tuple, v: tuple) -> ExactSet:
    tail = walk_lengths(sys, u[-1], v[0])
    lu = len(u)
    overlaps = frozenset(n for n in range(1, lu) if _overlap_ok(u, v, n))

    def pred(n):
        if n < lu:
            return n in overlaps
        return (n - lu + 1) in tail

    return ExactSet.from_predicate(pred, tail.modulus, tail.threshold + lu - 1)


def spacing_capacity(sys: SpacingShiftApprox, v: Sequence[int]) -> int:
    return sys.horizon - len(v)


def hitting_spacing(sys: SpacingShiftApprox, u, v, horizon: int | None = None) -> ExplicitSet:
    """N([u], [v]) on [1, horizon], by gap dynamic programming over positions of 1s."""
    u = sys.validate_cylinder(u)
    v = sys.validate_cylinder(v)
    cap = spacing_capacity(sys, v)
    if horizon is None:
        horizon = min(cap, DEFAULT_HORIZON)
    if horizon > cap:
        raise HorizonError(f"horizon {horizon} exceeds capacity {cap} of this truncation")
    return ExplicitSet.from_mask(_spacing_mask(sys, u, v, horizon), horizon)


@lru_cache(maxsize=1 << 14)
def _spacing_mask(sys: SpacingShiftApprox, u: tuple, v: tuple, horizon: int) -> int:
    lu = len(u)
    mask = 0
    for n in range(1, min(lu, horizon + 1)):
        if _overlap_ok(u, v, n):
            merged = u + v[lu - n:] if len(v) > lu - n else u
            if sys.is_admissible(merged):
                mask |= 1 << n
    if horizon < lu:
        return mask
    ones_u = [i for i, s in enumerate(u) if s]
    ones_v = [i for i, s in enumerate(v) if s]
    tail_bits = ((1 << (horizon + 1)) - 1) & ~((1 << lu) - 1)
    if not ones_u or not ones_v:
        return mask | tail_bits
    last_u, first_v = ones_u[-1], ones_v[0]
    top = horizon + first_v + 1
    limit = (1 << (top + 1)) - 1
    gaps = sys.sorted_gaps
    # absolute positions of the first 1 written after u
    starts = 0
    for g in gaps:
        if last_u + g >= lu:
            starts |= 1 << (last_u + g)
    starts &= limit
    chain = 0
    for e in _bits(starts):
        chain |= sys.sums_mask << e
    chain &= limit
    # positions of v's first 1 reached through at least one intermediate 1
    ends = 0
    for g in gaps:
        if g >= first_v + 1:
            ends |= chain << g
    ends &= limit
    for n in range(lu, horizon + 1):
        target = n + first_v
        if (target - last_u) in sys.gaps or ends >> target & 1:
            mask |= 1 << n
    return mask


def hitting(sys: DynSystem, U, V, horizon: int | None = None) -> IndexSet:
    """Dispatch to the exact or horizon-bounded computation for ``sys``."""
    if isinstance(sys, FiniteMap):
        return hitting_finite(sys, U, V)
    if isinstance(sys, Sft):
        return hitting_sft(sys, U, V)
    if isinstance(sys, SpacingShiftApprox):
        return hitting_spacing(sys, U, V, horizon)
    if isinstance(sys, Power):
        k = sys.exponent
        base_h = None
        if isinstance(sys.base, SpacingShiftApprox):
            cap = spacing_capacity(sys.base, V)
            base_h = cap if horizon is None else horizon * k
            if base_h > cap:
                raise HorizonError(f"horizon {horizon} under exponent {k} exceeds capacity {cap}")
        return intersect_dilations([hitting(sys.base, U, V, base_h)], (k,))
    raise TypeError(f"no hitting sets for {type(sys).__name__}")


# ---------------------------------------------------------------------------
# products


def intersect_dilations(sets: Sequence[IndexSet], a: Sequence[int]) -> IndexSet:
    """``{k >= 1 : a_i * k in S_i for every i}``."""
    a = as_vector(a)
    if len(sets) != len(a):
        raise ValueError("need one set per vector entry")
    if all(isinstance(s, ExactSet) for s in sets):
        if len(sets) == 1:
            return _dilate(sets[0], a[0])
        modulus = 1
        threshold = 1
        for s, ai in zip(sets, a):
            modulus = lcm(modulus, s.modulus // gcd(s.modulus, ai))
            threshold = max(threshold, -(-s.threshold // ai))
        return ExactSet.from_predicate(
            lambda k: all((ai * k) in s for s, ai in zip(sets, a)), modulus, threshold)
    horizon = min(s.horizon // ai for s, ai in zip(sets, a) if isinstance(s, ExplicitSet))
    return ExplicitSet.from_predicate(lambda k: all((ai * k) in s for s, ai in zip(sets, a)), horizon)


@lru_cache(maxsize=1 << 16)
def _dilate(s: ExactSet, ai: int) -> ExactSet:
    return ExactSet.from_predicate(lambda k: (ai * k) in s, s.modulus // gcd(s.modulus, ai),
                                   -(-s.threshold // ai))


@lru_cache(maxsize=1 << 14)
def _tails_meet(tails: tuple) -> bool:
    m = 1
    for p, _ in tails:
        m = lcm(m, p)
    res = [frozenset(r) for _, r in tails]
    return any(all(t % p in rs for (p, _), rs in zip(tails, res)) for t in range(m))


def _sets_meet(sets: Sequence[ExactSet]) -> bool:
    if _tails_meet(tuple((s.modulus, s.residues) for s in sets)):
        return True
    top = max(s.threshold for s in sets)
    return any(all(n in s for s in sets) for n in range(1, top))


def first_empty_combo(columns: Sequence[Sequence[ExactSet]]) -> tuple[int, ...] | None:
    """Indices of a choice (one set per column) with empty intersection, or None.

    Sets sharing a periodic tail are grouped first, so when all tails meet the
    whole group product is accepted without touching the exceptional parts.
    """
    grouped = []
    for col in columns:
        groups: dict[tuple, list[int]] = {}
        for idx, s in enumerate(col):
            groups.setdefault((s.modulus, s.residues), []).append(idx)
        grouped.append(list(groups.items()))
    for choice in itertools.product(*grouped):
        if _tails_meet(tuple(t for t, _ in choice)):
            continue
        for idxs in itertools.product(*(members for _, members in choice)):
            if not _sets_meet([columns[c][i] for c, i in enumerate(idxs)]):
                return idxs
    return None


def _first_empty_mask_combo(columns: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    def walk(c, acc, chosen):
        if c == len(columns):
            return None if acc else tuple(chosen)
        for i, m in enumerate(columns[c]):
            hit = walk(c + 1, acc & m, chosen + [i])
            if hit is not None:
                return hit
        return None

    return walk(0, -1, [])


def _distinct(items):
    """Keep first occurrence of each key; returns (keys, first_index_for_each_key)."""
    keys, firsts, seen = [], [], {}
    for idx, k in enumerate(items):
        if k not in seen:
            seen[k] = len(keys)
            keys.append(k)
            firsts.append(idx)
    return keys, firsts


def _pair_columns(pairs, sets, a):
    columns, reps = [], []
    for ai in a:
        keys, firsts = _distinct([_dilate(s, ai) for s in sets])
        columns.append(keys)
        reps.append([pairs[f] for f in firsts])
    return columns, reps


def a_transitive(sys, a: Sequence[int], depth: int = 2, horizon: int | None = None,
                 cross_check: bool = True) -> Verdict:
    """Is ``f^{a_1} x ... x f^{a_r}`` transitive?"""
    a = as_vector(a)
    if isinstance(sys, ProductHandle):
        return a_transitive(sys.system, tuple(ai * b for ai in a for b in sys.a), depth,
                            horizon, cross_check)
    if isinstance(sys, Power):
        return a_transitive(sys.base, tuple(sys.exponent * ai for ai in a), depth,
                            None if horizon is None else horizon * sys.exponent, cross_check)
    if isinstance(sys, FiniteMap):
        return _a_transitive_finite(sys, a)
    if isinstance(sys, Sft):
        return _a_transitive_sft(sys, a, depth, cross_check)
    if isinstance(sys, SpacingShiftApprox):
        return _a_transitive_spacing(sys, a, depth, horizon)
    raise TypeError(f"cannot decide a-transitivity for {type(sys).__name__}")


def _a_transitive_finite(sys: FiniteMap, a) -> Verdict:
    pairs = [(x, y) for x in range(sys.size) for y in range(sys.size)]
    sets = [_point_hitting(sys, x, frozenset({y})) for x, y in pairs]
    columns, reps = _pair_columns(pairs, sets, a)
    bad = first_empty_combo(columns)
    if bad is None:
        return Verdict.holds()
    chosen = [reps[c][i] for c, i in enumerate(bad)]
    return Verdict.fails({"u": [x for x, _ in chosen], "v": [y for _, y in chosen]})


def unreachable_pair(sys: Sft) -> tuple[int, int] | None:
    for i in sys.live:
        for j in sys.live:
            if not sys.reaches(i, j):
                return i, j
    return None


def residue_gap(p: int, a: Sequence[int]) -> tuple[int, ...] | None:
    """Lexicographically first c in (Z/p)^r with no k solving a_i k ≡ c_i (mod p)."""
    hit = {tuple(ai * k % p for ai in a) for k in range(p)}
    if len(hit) == p ** len(a):
        return None
    for c in itertools.product(range(p), repeat=len(a)):
        if c not in hit:
            return c
    return None


def cylinder_tuple_check(sys, a, depth: int) -> tuple | None:
    """Search all r-tuples of cylinder pairs up to ``depth`` for an empty product hitting set."""
    words = sys.cylinders(depth)
    pairs = [(u, v) for u in words for v in words]
    sets = [hitting_sft(sys, u, v) for u, v in pairs]
    columns, reps = _pair_columns(pairs, sets, a)
    bad = first_empty_combo(columns)
    if bad is None:
        return None
    return tuple(reps[c][i] for c, i in enumerate(bad))


def _a_transitive_sft(sys: Sft, a, depth: int, cross_check: bool) -> Verdict:
    stuck = unreachable_pair(sys)
    if stuck is not None:
        i, j = stuck
        return Verdict.fails({"u": [[i]], "v": [[j]], "reason": "reducible"},
                             note="no path between the witness cylinders")
    gap = residue_gap(sys.period, a)
    extra = {}
    if cross_check:
        brute = cylinder_tuple_check(sys, a, depth)
        extra["cross_check"] = {"depth": depth, "agree": (brute is None) == (gap is None)}
    if gap is None:
        return Verdict.holds(extra=extra)
    by_class: dict[int, int] = {}
    for v in sorted(sys.live, reverse=True):
        by_class[sys.cyclic_class[v]] = v
    return Verdict.fails({"residues": list(gap), "u": [[by_class[0]]] * len(a),
                          "v": [[by_class[c]] for c in gap]}, extra=extra)


def _a_transitive_spacing(sys: SpacingShiftApprox, a, depth: int, horizon: int | None) -> Verdict:
    words = sys.cylinders(depth)
    cap = sys.horizon - depth
    h = min(cap, DEFAULT_HORIZON) if horizon is None else horizon
    if h > cap:
        raise HorizonError(f"horizon {h} exceeds capacity {cap}")
    bounds = {"horizon": h, "depth": depth}
    pairs = [(u, v) for u in words for v in words]
    sets = [hitting_spacing(sys, u, v, h) for u, v in pairs]
    columns, reps = [], []
    for ai in a:
        dil = [intersect_dilations([s], (ai,)).mask for s in sets]
        keys, firsts = _distinct(dil)
        columns.append(keys)
        reps.append([pairs[f] for f in firsts])
    if h // max(a) < 1:
        return Verdict.unknown(bounds, note="horizon leaves no checkable k")
    bad = _first_empty_mask_combo(columns)
    if bad is None:
        return Verdict.holds(exact=False, bounds=bounds, note="at horizon")
    chosen = [reps[c][i] for c, i in enumerate(bad)]
    return Verdict.fails({"u": [list(u) for u, _ in chosen], "v": [list(v) for _, v in chosen]},
                         exact=False, bounds=bounds, note=f"no k <= {h // max(a)}")


__all__ = [
    "CapabilityError", "DEFAULT_HORIZON", "HorizonError", "a_transitive", "cylinder_tuple_check",
    "first_empty_combo", "hitting", "hitting_finite", "hitting_sft", "hitting_spacing",
    "intersect_dilations", "residue_gap", "unreachable_pair", "walk_lengths",
    "walk_lengths_by_repetition",
]
