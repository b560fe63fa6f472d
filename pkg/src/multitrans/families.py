"""Furstenberg families over index sets: thick, cofinite, infinite, and the vector families.

``F`` belongs to the family generated by ``a = (a_1..a_r)`` when every shift
vector ``n`` in Z_+^r admits some ``k >= 1`` with ``a_i*k + n_i`` in ``F`` for all i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .indexset import ExactSet, ExplicitSet, IndexSet
from .systems import as_vector
from .verdict import Verdict

DEFAULT_N_MAX = 16
DEFAULT_K_MAX = 1000


class BoundsError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyQuery:
    """Which family to test and how far a bounded search may go."""

    kind: str  # "inf" | "cf" | "thick" | "vec" | "infty" | "seq"
    a: tuple[int, ...] = ()
    r_max: int = 0
    n_max: int = DEFAULT_N_MAX
    k_max: int | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in {"inf", "cf", "thick", "vec", "infty", "seq"}:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind in {"vec", "seq"}:
            object.__setattr__(self, "a", as_vector(self.a))
        if self.kind == "infty" and self.r_max < 1:
            raise ValueError("r_max must be >= 1")
        if self.n_max < 0 or (self.k_max is not None and self.k_max < 1):
            raise ValueError("bounds must be positive")


def _no_k(F: IndexSet, a: Sequence[int], n: Sequence[int], k_hi: int) -> bool:
    return not any(all((ai * k + ni) in F for ai, ni in zip(a, n)) for k in range(1, k_hi + 1))


def exact_k_bound(F: ExactSet, a: Sequence[int], n: Sequence[int]) -> int:
    """Past this k every coordinate sits in the periodic tail; one more period decides."""
    k0 = max(max(1, -(-(F.threshold - ni) // ai)) for ai, ni in zip(a, n))
    return k0 + F.modulus


def fails_at(F: IndexSet, a: Sequence[int], n: Sequence[int]) -> bool:
    """Recheck a refutation: no admissible k puts ``k*a + n`` inside F."""
    if isinstance(F, ExactSet):
        return _no_k(F, a, n, exact_k_bound(F, a, n))
    return _no_k(F, a, n, horizon_k_cap(F, a, n))


def horizon_k_cap(F: ExplicitSet, a: Sequence[int], n: Sequence[int]) -> int:
    return min((F.horizon - ni) // ai for ai, ni in zip(a, n))


def _residue_criterion(F: ExactSet, a: Sequence[int]) -> bool:
    p, res = F.modulus, F.residues
    if not res:
        return False
    covered = set()
    for k in range(p):
        shift = [ai * k % p for ai in a]
        for choice in itertools.product(res, repeat=len(a)):
            covered.add(tuple((c - s) % p for c, s in zip(choice, shift)))
        if len(covered) == p ** len(a):
            return True
    return False


def lexmin_failing(F: ExactSet, a: Sequence[int]) -> tuple[int, ...] | None:
    """Lexicographically least n in Z_+^r with no valid k.

    Entries at or beyond the threshold behave like their representative in
    [threshold, threshold + modulus), so that box is enough.
    """
    box = range(F.threshold + F.modulus)
    for n in itertools.product(box, repeat=len(a)):
        if fails_at(F, a, n):
            return n
    return None


def member_exact(F: ExactSet, a: Sequence[int]) -> Verdict:
    a = as_vector(a)
    if not isinstance(F, ExactSet):
        raise TypeError("member_exact needs an exact index set")
    if _residue_criterion(F, a):
        return Verdict.holds()
    witness = lexmin_failing(F, a)
    if witness is None:  # pragma: no cover - the residue criterion is exact
        raise AssertionError(f"residue criterion refuted {F} for {a} but no witness exists")
    note = "finite sets lie in no vector family" if not F.residues else ""
    return Verdict.fails(list(witness), note=note)


def default_k_max(F: ExplicitSet, a: Sequence[int], n_max: int) -> int:
    return max(1, (F.horizon - n_max) // max(a))


def member_bounded(F: ExplicitSet, a: Sequence[int], n_max: int = DEFAULT_N_MAX,
                   k_max: int | None = None) -> Verdict:
    """Search shift vectors in [0, n_max]^r; Fails only when every k the horizon allows was tried."""
    a = as_vector(a)
    if k_max is None:
        k_max = default_k_max(F, a, n_max)
    if max(a) * k_max + n_max > F.horizon:
        raise BoundsError(f"a_i*k_max + n_max = {max(a) * k_max + n_max} exceeds horizon {F.horizon}")
    bounds = {"n_max": n_max, "k_max": k_max, "horizon": F.horizon}
    for n in itertools.product(range(n_max + 1), repeat=len(a)):
        if not _no_k(F, a, n, k_max):
            continue
        cap = horizon_k_cap(F, a, n)
        if cap < 1:
            return Verdict.unknown(bounds, note=f"no checkable k for n={list(n)}")
        if _no_k(F, a, n, cap):
            return Verdict.fails(list(n), exact=False, bounds=bounds,
                                 note=f"no k <= {cap} within horizon")
    return Verdict.holds(exact=False, bounds=bounds, note="at bounds")


def member(F: IndexSet, a: Sequence[int], n_max: int = DEFAULT_N_MAX,
           k_max: int | None = None) -> Verdict:
    if isinstance(F, ExactSet):
        return member_exact(F, a)
    return member_bounded(F, a, n_max, k_max)


# ---------------------------------------------------------------------------
# thick / cofinite / infinite


def is_thick(F: IndexSet, run_goal: int | None = None) -> Verdict:
    """Exact sets are thick exactly when cofinite; explicit sets report their longest run."""
    if isinstance(F, ExactSet):
        if F.is_cofinite:
            return Verdict.holds()
        return Verdict.fails({"missing_residues": sorted(set(range(F.modulus)) - set(F.residues)),
                              "modulus": F.modulus})
    goal = run_goal if run_goal is not None else max(2, F.horizon // 64)
    run = F.longest_run()
    bounds = {"horizon": F.horizon, "run_goal": goal}
    extra = {"longest_run": run}
    if run >= goal:
        return Verdict.holds(exact=False, bounds=bounds, extra=extra)
    return Verdict.fails({"longest_run": run}, exact=False, bounds=bounds, extra=extra)


def is_cofinite(F: IndexSet) -> Verdict:
    if isinstance(F, ExactSet):
        if F.is_cofinite:
            return Verdict.holds()
        missing = next(n for n in itertools.count(F.threshold) if n not in F)
        return Verdict.fails({"missing_residue": missing % F.modulus, "modulus": F.modulus})
    bounds = {"horizon": F.horizon}
    absent = [n for n in range(1, F.horizon + 1) if n not in F]
    if not absent or absent[-1] <= F.horizon // 2:
        return Verdict.holds(exact=False, bounds=bounds,
                             extra={"last_missing": absent[-1] if absent else 0})
    return Verdict.fails({"last_missing": absent[-1]}, exact=False, bounds=bounds)


def is_infinite(F: IndexSet) -> Verdict:
    if isinstance(F, ExactSet):
        if F.is_infinite:
            return Verdict.holds()
        return Verdict.fails({"max": F.exceptional[-1] if F.exceptional else 0})
    bounds = {"horizon": F.horizon}
    late = [e for e in F.elements if e > F.horizon // 2]
    if late:
        return Verdict.holds(exact=False, bounds=bounds, extra={"largest": late[-1]})
    return Verdict.fails({"largest": F.elements[-1] if F.elements else 0},
                         exact=False, bounds=bounds)


# ---------------------------------------------------------------------------
# intersections of vector families


def _conjunction(F: IndexSet, vectors: Iterable[tuple[int, ...]], depth_label: dict,
                 n_max: int, k_max: int | None) -> Verdict:
    exact = True
    for vec in vectors:
        v = member(F, vec, n_max, k_max)
        exact = exact and v.exact
        if v.is_fails:
            return Verdict.fails({"a": list(vec), "n": v.witness}, exact=v.exact,
                                 bounds={**depth_label, **(v.bounds or {})})
        if v.is_unknown:
            return Verdict.unknown({**depth_label, **(v.bounds or {})},
                                   note=f"undecided at a={list(vec)}")
    return Verdict.holds(exact=False, bounds=depth_label,
                         note="truncated intersection" + ("" if exact else ", at bounds"))


def member_infty(F: IndexSet, r_max: int, n_max: int = DEFAULT_N_MAX,
                 k_max: int | None = None) -> Verdict:
    """Membership in the families of (1), (1,2), ..., (1..r_max); Holds is a truncation claim."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    vectors = (tuple(range(1, r + 1)) for r in range(1, r_max + 1))
    return _conjunction(F, vectors, {"r_max": r_max}, n_max, k_max)


def member_seq(F: IndexSet, prefix: Sequence[int], n_max: int = DEFAULT_N_MAX,
               k_max: int | None = None) -> Verdict:
    """Membership in the families of every prefix (a_1..a_i) of a sequence."""
    prefix = as_vector(prefix)
    vectors = (prefix[:i] for i in range(1, len(prefix) + 1))
    return _conjunction(F, vectors, {"prefix_depth": len(prefix)}, n_max, k_max)


# ---------------------------------------------------------------------------
# difference sets


def differences(B: Sequence[int]) -> tuple[int, ...]:
    """Distinct positive differences ``b - b'`` with ``b > b'``, ascending."""
    return tuple(sorted({x - y for x in B for y in B if x > y}))


def find_difference_subset(A: IndexSet, m: int, bound: int = 256) -> Verdict:
    """An m-element B with every positive difference in A (witness B)."""
    if m < 2:
        raise ValueError("size goal must be >= 2")
    if isinstance(A, ExactSet) and 0 in A.residues:
        step = A.modulus * -(-A.threshold // A.modulus)
        B = [step * j for j in range(1, m + 1)]
        if all(d in A for d in differences(B)):
            return Verdict.holds(B, note="arithmetic progression")

    def ok(d):
        if isinstance(A, ExplicitSet) and d > A.horizon:
            return False
        return d in A

    top = bound if isinstance(A, ExactSet) else min(bound, A.horizon + 1)

    def extend(chosen):
        if len(chosen) == m:
            return chosen
        for b in range(chosen[-1] + 1, top + 1):
            if all(ok(b - c) for c in chosen):
                found = extend(chosen + [b])
                if found:
                    return found
        return None

    found = extend([1])
    if found:
        return Verdict.holds(found, exact=True)
    return Verdict.unknown({"search_bound": top, "size_goal": m}, note="search exhausted")


# ---------------------------------------------------------------------------
# upward heredity


def upward_closure_check(pairs: Iterable[tuple[ExactSet, ExactSet]], a: Sequence[int]) -> Verdict:
    """For each F ⊆ G, membership of F must carry over to G."""
    a = as_vector(a)
    checked = 0
    for idx, (F, G) in enumerate(pairs):
        if not F.issubset(G):
            raise ValueError(f"pair {idx}: first set is not contained in the second")
        if member_exact(F, a).is_holds and not member_exact(G, a).is_holds:
            return Verdict.fails({"pair": idx, "F": F.to_json(), "G": G.to_json()})
        checked += 1
    return Verdict.holds(extra={"pairs_checked": checked})


def evaluate(query: FamilyQuery, F: IndexSet) -> Verdict:
    if query.kind == "inf":
        return is_infinite(F)
    if query.kind == "cf":
        return is_cofinite(F)
    if query.kind == "thick":
        return is_thick(F)
    if query.kind == "vec":
        return member(F, query.a, query.n_max, query.k_max)
    if query.kind == "infty":
        return member_infty(F, query.r_max, query.n_max, query.k_max)
    return member_seq(F, query.a, query.n_max, query.k_max)
