"""Equivalence harness: compute both sides of each characterization independently and compare.

Exact-lane disagreements (finite maps, SFTs) indicate an implementation defect
and stop a corpus run; anything involving a bounded or Unknown verdict is
reported but never fatal.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from . import brute
from .families import DEFAULT_N_MAX, member, member_bounded, member_exact
from .hitting import _overlap_ok, a_transitive, hitting_finite, hitting_sft, hitting_spacing
from .indexset import ExactSet
from .systems import (
    ESystemWitness, FiniteMap, Sft, SpacingShiftApprox, as_vector, power, tower,
    tower_state,
)
from .verdict import Status, Verdict

AGREE = "agree"
DISAGREE = "disagree"
SKIPPED = "skipped"
INCONCLUSIVE = "inconclusive"


class VerificationDefect(AssertionError):
    """An exact-lane disagreement; ``bundle`` is the serialized counterexample."""

    def __init__(self, bundle: dict):
        super().__init__(json.dumps(bundle, sort_keys=True))
        self.bundle = bundle


@dataclass
class AgreementReport:
    """Outcome of one harness case."""

    check: str
    system: dict
    params: dict
    sides: dict[str, Verdict]
    status: str
    exact: bool = True
    note: str = ""

    @property
    def agree(self) -> bool:
        return self.status == AGREE

    @property
    def fatal(self) -> bool:
        return self.exact and self.status == DISAGREE

    def witness(self):
        for v in self.sides.values():
            if v.witness is not None:
                return v.witness
        return None

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "system": self.system,
            **self.params,
            "sides": {k: v.to_json() for k, v in self.sides.items()},
            "agree": self.agree,
            "status": self.status,
        }
        names = list(self.sides)
        if len(names) >= 2:
            out["side_L"] = self.sides[names[0]].status.value
            out["side_R"] = self.sides[names[1]].status.value
        if self.witness() is not None:
            out["witness"] = self.sides[next(k for k, v in self.sides.items()
                                             if v.witness is not None)].to_json()["witness"]
        if not self.exact:
            out["exact"] = False
        if self.note:
            out["note"] = self.note
        return out


def _compare(check, sys, params, sides: dict[str, Verdict], note="") -> AgreementReport:
    statuses = {v.status for v in sides.values()}
    exact = all(v.exact for v in sides.values())
    if Status.UNKNOWN in statuses:
        status = INCONCLUSIVE
    elif len(statuses) == 1:
        status = AGREE
    else:
        status = DISAGREE
    return AgreementReport(check, sys.to_json(), params, sides, status, exact, note)


# ---------------------------------------------------------------------------
# vector transitivity versus membership of hitting sets


@lru_cache(maxsize=1 << 16)
def _member_cached(F: ExactSet, a: tuple) -> Verdict:
    return member_exact(F, a)


@lru_cache(maxsize=4096)
def _distinct_hitting_sets(sys, depth: int) -> tuple:
    """Distinct exact hitting sets over all cylinder pairs, each with its first pair."""
    if isinstance(sys, FiniteMap):
        pairs = ((frozenset({x}), frozenset({y})) for x in range(sys.size) for y in range(sys.size))
        found: dict[ExactSet, tuple] = {}
        for U, V in pairs:
            found.setdefault(hitting_finite(sys, U, V), (sorted(U), sorted(V)))
        return tuple(found.items())
    words = sys.cylinders(depth)
    # N([u],[v]) depends only on |u|, the overlap pattern and the end vertices
    by_key: dict[tuple, tuple] = {}
    for u in words:
        for v in words:
            key = (len(u), u[-1], v[0],
                   tuple(n for n in range(1, len(u)) if _overlap_ok(u, v, n)))
            by_key.setdefault(key, (u, v))
    found = {}
    for u, v in by_key.values():
        found.setdefault(hitting_sft(sys, u, v), (list(u), list(v)))
    return tuple(found.items())


def family_side(sys, a: Sequence[int], depth: int = 2, horizon: int | None = None,
                n_max: int | None = None) -> Verdict:
    """Every hitting set between cylinders of depth <= ``depth`` lies in F[a]."""
    a = as_vector(a)
    if isinstance(sys, SpacingShiftApprox):
        return _family_side_spacing(sys, a, depth, horizon, n_max)
    for F, (u, v) in _distinct_hitting_sets(sys, depth):
        m = _member_cached(F, a)
        if not m.is_holds:
            return Verdict.fails({"u": u, "v": v, "n": m.witness})
    return Verdict.holds()


def _family_side_spacing(sys, a, depth, horizon, n_max) -> Verdict:
    cap = sys.horizon - depth
    h = min(cap, 512) if horizon is None else horizon
    n_max = min(DEFAULT_N_MAX, h // 4) if n_max is None else n_max
    bounds = {"horizon": h, "depth": depth, "n_max": n_max}
    words = sys.cylinders(depth)
    worst = Verdict.holds(exact=False, bounds=bounds, note="at horizon")
    for u in words:
        for v in words:
            m = member_bounded(hitting_spacing(sys, u, v, h), a, n_max)
            if m.is_fails:
                return Verdict.fails({"u": list(u), "v": list(v), "n": m.witness},
                                     exact=False, bounds=bounds)
            if m.is_unknown:
                worst = Verdict.unknown(bounds, note=f"undecided at u={list(u)}, v={list(v)}")
    return worst


def verify_thm_42(sys, a: Sequence[int], depth: int = 2, horizon: int | None = None) -> AgreementReport:
    """a-transitivity against F[a]-membership of every cylinder hitting set."""
    a = as_vector(a)
    lhs = a_transitive(sys, a, depth, horizon, cross_check=False)
    rhs = family_side(sys, a, depth, horizon)
    return _compare("thm42", sys, {"a": list(a), "depth": depth},
                    {"a_transitive": lhs, "family_transitive": rhs})


# ---------------------------------------------------------------------------
# powers


def _multi_upto(sys, m: int, depth: int) -> Verdict:
    for r in range(1, m + 1):
        v = a_transitive(sys, tuple(range(1, r + 1)), depth, cross_check=False)
        if not v.is_holds:
            return Verdict(v.status, {"m": r, "detail": v.witness}, v.bounds, v.exact)
    return Verdict.holds(note=f"(1..m)-transitive for m <= {m}")


def verify_lemma_32(sys, n: int, m: int = 3, depth: int = 2) -> AgreementReport:
    """Multi-transitivity of f and of f^n, both truncated to vectors (1..r), r <= m."""
    if m < 2:
        raise ValueError("the truncation needs m >= 2 to separate weak forms")
    lhs = _multi_upto(sys, m, depth)
    rhs = _multi_upto(power(sys, n), m, depth)
    return _compare("lemma32", sys, {"n": n, "m": m},
                    {"f": lhs, "f_power": rhs}, note="truncated at m")


# ---------------------------------------------------------------------------
# strong multi-transitivity and weak mixing of products


def verify_prop_33(sys, r_max: int = 3, entry_max: int = 3, k_max: int = 3,
                   depth: int = 2) -> AgreementReport:
    def run(vectors: Iterable[tuple]) -> Verdict:
        for vec in vectors:
            v = a_transitive(sys, vec, depth, cross_check=False)
            if not v.is_holds:
                return Verdict(v.status, {"a": list(vec), "detail": v.witness}, v.bounds, v.exact)
        return Verdict.holds()

    strong = run(vec for r in range(1, r_max + 1)
                 for vec in itertools.product(range(1, entry_max + 1), repeat=r))
    # f x f^2 x ... x f^k is weakly mixing iff its square is transitive
    prod_wm = run(tuple(range(1, k + 1)) * 2 for k in range(1, k_max + 1))
    wm_multi = run([(1, 1)] + [tuple(range(1, r + 1)) for r in range(1, r_max + 1)])
    return _compare("prop33", sys, {"r_max": r_max, "entry_max": entry_max, "k_max": k_max},
                    {"strong_multi": strong, "product_weak_mixing": prod_wm,
                     "weak_mixing_and_multi": wm_multi}, note="at bounds")


# ---------------------------------------------------------------------------
# weak disjointness from E-systems


def verify_thm_53_claim(sys, a_prefix: Sequence[int], e_sys: ESystemWitness,
                        depth: int = 3) -> AgreementReport:
    """N_f(U,V) meets N_g(W,W), and N_g(W1,W2), for all cylinders U, V and points W."""
    a_prefix = as_vector(a_prefix)
    params = {"a_prefix": list(a_prefix), "e_system": e_sys.system.to_json(), "depth": depth}
    for i in range(1, len(a_prefix) + 1):
        gate = a_transitive(sys, a_prefix[:i], depth, cross_check=False)
        if not gate.is_holds:
            return AgreementReport("thm53", sys.to_json(), params, {"precondition": gate},
                                   SKIPPED, note=f"not a-transitive at prefix {list(a_prefix[:i])}")
    g = e_sys.system
    g_sets = {(w1, w2): hitting_finite(g, {w1}, {w2}) for w1 in range(g.size) for w2 in range(g.size)}
    words = sys.cylinders(depth)
    diag = pairs = Verdict.holds()
    checked = 0
    for u in words:
        for v in words:
            N = hitting_sft(sys, u, v) if isinstance(sys, Sft) else hitting_finite(sys, u, v)
            for (w1, w2), M in g_sets.items():
                checked += 1
                if not (N & M).is_empty:
                    continue
                bad = Verdict.fails({"u": list(u), "v": list(v), "w": [w1, w2]})
                if w1 == w2 and diag.is_holds:
                    diag = bad
                if pairs.is_holds:
                    pairs = bad
    sides = {"precondition": Verdict.holds(),
             "claim_same_point": diag, "claim_point_pairs": pairs}
    status = AGREE if diag.is_holds and pairs.is_holds else DISAGREE
    return AgreementReport("thm53", sys.to_json(), {**params, "intersections": checked}, sides,
                           status, note="finite prefix of the sequence only")


# ---------------------------------------------------------------------------
# towers


def verify_tower_transitive_point(base: FiniteMap, k: int) -> AgreementReport:
    points = base.transitive_points()
    params = {"k": k}
    if not points:
        return AgreementReport("tower", base.to_json(), params,
                               {"precondition": Verdict.fails(note="no transitive point")}, SKIPPED)
    y = points[0]
    z = tower(base, k)
    start = tower_state(y, 0, k)
    by_method = Verdict.holds() if z.is_transitive_point(start) else Verdict.fails({"point": [y, 0]})
    seen = set(brute.orbit(z, start, z.size))
    missing = sorted(set(range(z.size)) - seen)
    by_orbit = Verdict.fails({"missed": missing}) if missing else Verdict.holds()
    return _compare("tower", base, {"k": k, "y": y}, {"method": by_method, "orbit": by_orbit})


# ---------------------------------------------------------------------------
# corpora


def maps_corpus(n: int) -> Iterator[FiniteMap]:
    """Every self-map of {0..n-1}, tables in lexicographic order."""
    for table in itertools.product(range(n), repeat=n):
        yield FiniteMap(table)


def _strongly_connected(n: int, rows: Sequence[int]) -> bool:
    """Every vertex reaches every vertex by a path of length >= 1."""
    for start in range(n):
        seen = rows[start]
        frontier = seen
        while frontier:
            nxt = 0
            for v in range(n):
                if frontier >> v & 1:
                    nxt |= rows[v]
            frontier = nxt & ~seen
            seen |= nxt
        if seen != (1 << n) - 1:
            return False
    return True


def _matrix_bits(n: int, rows: Sequence[int]) -> tuple[int, ...]:
    return tuple(rows[i] >> j & 1 for i in range(n) for j in range(n))


def _permuted(n: int, rows: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n):
        for j in range(n):
            if rows[i] >> j & 1:
                out[perm[i]] |= 1 << perm[j]
    return tuple(out)


@lru_cache(maxsize=None)
def _irreducible_rows(n: int, up_to_iso: bool) -> tuple[tuple[int, ...], ...]:
    perms = list(itertools.permutations(range(n)))
    out = []
    for bits in itertools.product((0, 1), repeat=n * n):
        rows = tuple(sum(bits[i * n + j] << j for j in range(n)) for i in range(n))
        if not _strongly_connected(n, rows):
            continue
        if up_to_iso:
            me = bits
            if any(_matrix_bits(n, _permuted(n, rows, p)) < me for p in perms):
                continue
        out.append(rows)
    return tuple(out)


def _sft_from_rows(n: int, rows: Sequence[int]) -> Sft:
    return Sft(n, frozenset((i, j) for i in range(n) for j in range(n) if rows[i] >> j & 1))


def irreducible_sft_corpus(n: int, up_to_iso: bool = True) -> Iterator[Sft]:
    """Strongly connected graphs on exactly n vertices, adjacency matrices in lexicographic order.

    With ``up_to_iso`` only the lexicographically least matrix of each
    relabeling class is kept.
    """
    for rows in _irreducible_rows(n, up_to_iso):
        yield _sft_from_rows(n, rows)


def periodic_sft_corpus(n: int) -> Iterator[Sft]:
    """All irreducible SFTs on n labeled vertices with period >= 2.

    Such a graph is cyclic over its period classes, so it is found by choosing
    a class map onto Z/p (class of vertex 0 fixed at 0) and any edges from
    class c to class c+1.
    """
    seen = set()
    for p in range(2, n + 1):
        for classes in itertools.product(range(p), repeat=n - 1):
            cls = (0,) + classes
            if len(set(cls)) != p:
                continue
            slots = [(i, j) for i in range(n) for j in range(n) if cls[j] == (cls[i] + 1) % p]
            for pick in itertools.product((0, 1), repeat=len(slots)):
                rows = [0] * n
                for (i, j), b in zip(slots, pick):
                    if b:
                        rows[i] |= 1 << j
                rows = tuple(rows)
                if rows in seen or not _strongly_connected(n, rows):
                    continue
                seen.add(rows)
    for rows in sorted(seen, key=lambda r: _matrix_bits(n, r)):
        yield _sft_from_rows(n, rows)


def vectors(r_max: int, entry_max: int) -> Iterator[tuple[int, ...]]:
    for r in range(1, r_max + 1):
        yield from itertools.product(range(1, entry_max + 1), repeat=r)


def corpus(name: str) -> list:
    """``maps5`` = all maps on 1..5 states; ``sft4`` = irreducible SFTs on 1..4 vertices."""
    if name.startswith("maps"):
        top = int(name[4:])
        return [m for n in range(1, top + 1) for m in maps_corpus(n)]
    if name.startswith("sft"):
        top = int(name[3:])
        return [s for n in range(1, top + 1) for s in irreducible_sft_corpus(n)]
    raise ValueError(f"unknown corpus {name!r}")


# ---------------------------------------------------------------------------
# corpus runs


@dataclass
class CorpusReport:
    check: str
    corpus: str
    cases: list[AgreementReport] = field(default_factory=list)

    def summary(self) -> dict:
        counts = {s: 0 for s in (AGREE, DISAGREE, INCONCLUSIVE, SKIPPED)}
        for c in self.cases:
            counts[c.status] += 1
        return {"check": self.check, "corpus": self.corpus, "cases": len(self.cases), **counts,
                "all_agree": counts[DISAGREE] == 0 and counts[INCONCLUSIVE] == 0}

    def to_json(self) -> dict:
        return {"summary": self.summary(), "cases": [c.to_json() for c in self.cases]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "check", "system", "params", "side_L", "side_R", "status"])
        for i, c in enumerate(self.cases):
            names = list(c.sides)
            left = c.sides[names[0]].status.value
            right = c.sides[names[-1]].status.value
            params = json.dumps(c.params, sort_keys=True, separators=(",", ":"))
            system = json.dumps(c.system, sort_keys=True, separators=(",", ":"))
            w.writerow([i, c.check, system, params, left, right, c.status])
        return buf.getvalue()


def run_cases(check: str, corpus_name: str, cases: Iterable[Callable[[], AgreementReport]],
              halt_on_defect: bool = True) -> CorpusReport:
    """Evaluate cases in order; an exact-lane disagreement raises with its bundle."""
    report = CorpusReport(check, corpus_name)
    for make in cases:
        case = make()
        report.cases.append(case)
        if halt_on_defect and case.fatal:
            raise VerificationDefect({"defect": case.to_json(), "corpus": corpus_name,
                                      "case_index": len(report.cases) - 1})
    return report


def thm42_corpus(name: str, r_max: int = 3, entry_max: int = 4, depth: int = 3,
                 halt_on_defect: bool = True) -> CorpusReport:
    systems = corpus(name)
    cases = (lambda s=s, a=a: verify_thm_42(s, a, depth)
             for s in systems for a in vectors(r_max, entry_max))
    return run_cases("thm42", name, cases, halt_on_defect)


def lemma32_corpus(name: str, n_max: int = 3, m: int = 3, halt_on_defect: bool = True) -> CorpusReport:
    systems = corpus(name)
    cases = (lambda s=s, n=n: verify_lemma_32(s, n, m) for s in systems for n in range(1, n_max + 1))
    return run_cases("lemma32", name, cases, halt_on_defect)


def prop33_corpus(name: str, halt_on_defect: bool = True) -> CorpusReport:
    cases = (lambda s=s: verify_prop_33(s) for s in corpus(name))
    return run_cases("prop33", name, cases, halt_on_defect)


def tower_corpus(name: str, k_max: int = 4) -> CorpusReport:
    systems = [m for m in corpus(name) if m.is_single_cycle]
    cases = (lambda s=s, k=k: verify_tower_transitive_point(s, k)
             for s in systems for k in range(1, k_max + 1))
    return run_cases("tower", name, cases)


def thm53_catalog(depth: int = 3, sizes: Sequence[int] = (2, 3, 4, 5, 6),
                  a_prefix: Sequence[int] = (1, 2, 3)) -> CorpusReport:
    from .systems import cyclic_esystem, full_shift
    cases = (lambda n=n: verify_thm_53_claim(full_shift(2), a_prefix, cyclic_esystem(n), depth)
             for n in sizes)
    return run_cases("thm53", "full2-vs-cycles", cases)


def furstenberg_check(sys, n_max: int = 4, depth: int = 2, oracle_cap: int = 64) -> AgreementReport:
    """(1,...,1)-transitivity for n = 2..n_max, exact verdict against the product-graph oracle.

    The oracle only runs while the product has at most ``oracle_cap`` states.
    """
    exact = Verdict.holds()
    oracle = Verdict.holds()
    for n in range(2, n_max + 1):
        v = a_transitive(sys, (1,) * n, depth, cross_check=False)
        if not v.is_holds and exact.is_holds:
            exact = Verdict(v.status, {"n": n, "detail": v.witness}, v.bounds, v.exact)
        if isinstance(sys, Sft) and len(sys.live) ** n <= oracle_cap and oracle.is_holds:
            bad = brute.product_graph_transitive(sys, (1,) * n)
            if bad is not None:
                oracle = Verdict.fails({"n": n, "from": list(bad[0]), "to": list(bad[1])})
    return _compare("furstenberg", sys, {"n_max": n_max}, {"exact": exact, "product_graph": oracle})


# ---------------------------------------------------------------------------
# counterexample search over spacing shifts


GENERATORS = ("all", "evens", "multiples", "random")


def gap_sets(kind: str, count: int, bound: int, seed: int = 0) -> Iterator[tuple[str, frozenset]]:
    """Deterministic stream of (label, gap set) candidates up to ``bound``."""
    if kind == "all":
        yield "all", frozenset(range(1, bound + 1))
    elif kind == "evens":
        yield "evens", frozenset(range(2, bound + 1, 2))
    elif kind == "multiples":
        for m in range(2, count + 2):
            yield f"multiples_of_{m}", frozenset(range(m, bound + 1, m))
    elif kind == "random":
        rng = random.Random(seed)
        for i in range(count):
            density = rng.choice((0.25, 0.5, 0.75))
            yield f"random_{i}", frozenset(g for g in range(1, bound + 1) if rng.random() < density)
    else:
        raise ValueError(f"unknown generator {kind!r}; choose from {GENERATORS}")


@dataclass
class Candidate:
    label: str
    gaps: frozenset
    profile: dict[str, Verdict]

    @property
    def separates(self) -> dict[str, bool]:
        wm = self.profile["weak_mixing"].status
        mt = self.profile["multi_1_2"].status
        return {"weak_mixing_not_multi": wm is Status.HOLDS and mt is Status.FAILS,
                "multi_not_weak_mixing": mt is Status.HOLDS and wm is Status.FAILS}

    def to_json(self) -> dict:
        small = sorted(self.gaps)
        return {"label": self.label, "gap_count": len(small), "gaps_head": small[:12],
                "profile": {k: v.to_json() for k, v in self.profile.items()},
                "separates": self.separates}


def search_separation(kind: str, count: int = 100, horizon: int = 512, depth: int = 2,
                      seed: int = 0) -> list[Candidate]:
    """Profile spacing shifts from a generator; all verdicts are at the horizon."""
    out = []
    for label, gaps in gap_sets(kind, count, horizon + depth, seed):
        sys = SpacingShiftApprox(gaps, horizon + depth)
        wm = a_transitive(sys, (1, 1), depth, horizon)
        mt = a_transitive(sys, (1, 2), depth, horizon)
        returns = member(hitting_spacing(sys, (1,), (1,), horizon), (1, 2), min(DEFAULT_N_MAX, horizon // 4))
        out.append(Candidate(label, gaps, {"weak_mixing": wm, "multi_1_2": mt,
                                           "return_set_in_F12": returns}))
    return out


def candidates_csv(cands: Sequence[Candidate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "gap_count", "weak_mixing", "multi_1_2", "return_set_in_F12",
                "weak_mixing_not_multi", "multi_not_weak_mixing"])
    for c in cands:
        s = c.separates
        w.writerow([c.label, len(c.gaps)] + [c.profile[k].status.value for k in
                   ("weak_mixing", "multi_1_2", "return_set_in_F12")]
                   + [s["weak_mixing_not_multi"], s["multi_not_weak_mixing"]])
    return buf.getvalue()
