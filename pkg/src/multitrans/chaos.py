"""Finite-horizon evidence for proximal, scrambled and delta-scrambled pairs, and sensitivity.

Shift systems use the metric d(x, y) = 2^-j where j is the first coordinate at
which x and y differ.  Distances are carried as integer exponents so that very
small values stay exact.  Everything here is evidence up to a horizon; a
liminf or limsup is a tail quantity no finite prefix can settle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .systems import FiniteMap, Sft, SpacingShiftApprox
from .verdict import Verdict


def distance_exponent(x: Sequence[int], y: Sequence[int], n: int) -> int | None:
    """j - n for the first j >= n with x_j != y_j; None if the prefixes agree from n on."""
    for j in range(n, min(len(x), len(y))):
        if x[j] != y[j]:
            return j - n
    return None


@dataclass(frozen=True)
class PairEvidence:
    x: tuple[int, ...]
    y: tuple[int, ...]
    horizon: int
    epsilon_exponent: int  # epsilon = 2^-epsilon_exponent
    delta: float
    close_times: tuple[int, ...]
    far_times: tuple[int, ...]
    rule: str = ""

    @property
    def liminf_proxy_exponent(self) -> int:
        """Largest exponent (smallest distance) seen at times <= horizon."""
        return max(_exponents(self.x, self.y, self.horizon))

    @property
    def limsup_proxy(self) -> float:
        return 2.0 ** -min(_exponents(self.x, self.y, self.horizon))

    def recheck(self) -> bool:
        close, far = _classify_times(self.x, self.y, self.horizon, self.epsilon_exponent, self.delta)
        return close == self.close_times and far == self.far_times

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "x_prefix": "".join(map(str, self.x)) if max(self.x + self.y) < 10 else list(self.x),
            "y_prefix": "".join(map(str, self.y)) if max(self.x + self.y) < 10 else list(self.y),
            "horizon": self.horizon,
            "epsilon": f"2^-{self.epsilon_exponent}",
            "delta": self.delta,
            "close_times": len(self.close_times),
            "first_close_time": self.close_times[0] if self.close_times else None,
            "far_times": list(self.far_times),
            "liminf_proxy": f"2^-{self.liminf_proxy_exponent}",
        }


def _exponents(x, y, horizon) -> list[int]:
    """distance_exponent at every time 0..horizon in one backward sweep."""
    length = min(len(x), len(y))
    nxt = None
    out = [0] * (horizon + 1)
    for j in range(length - 1, -1, -1):
        if x[j] != y[j]:
            nxt = j
        if j <= horizon:
            if nxt is None:
                raise ValueError(f"prefixes too short to certify the distance at time {j}")
            out[j] = nxt - j
    if length <= horizon:
        raise ValueError(f"prefixes too short to certify the distance at time {length}")
    return out


def _classify_times(x, y, horizon, eps_exp, delta):
    close, far = [], []
    for n, e in enumerate(_exponents(x, y, horizon)):
        if e > eps_exp:
            close.append(n)
        if 2.0 ** -e > delta:
            far.append(n)
    return tuple(close), tuple(far)


def default_epsilon_exponent(horizon: int) -> int:
    return max(1, horizon // 4)


def pair_evidence(x: Sequence[int], y: Sequence[int], horizon: int, delta: float = 0.5,
                  epsilon_exponent: int | None = None, rule: str = "") -> PairEvidence:
    """Evidence for the pair (x, y) at times 0..horizon; the diagonal is rejected."""
    x, y = tuple(x), tuple(y)
    if x == y:
        raise ValueError("diagonal pair: the two points coincide")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    eps = default_epsilon_exponent(horizon) if epsilon_exponent is None else epsilon_exponent
    close, far = _classify_times(x, y, horizon, eps, delta)
    return PairEvidence(x, y, horizon, eps, delta, close, far, rule)


# ---------------------------------------------------------------------------
# constructions


def _first_return_loops(sys: Sft, v: int, max_len: int) -> list[tuple[int, ...]]:
    """Loops v -> ... -> v visiting v only at the ends, ordered by (length, word)."""
    loops = []
    stack = [(v,)]
    while stack:
        path = stack.pop()
        for w in sys.successors(path[-1]):
            if w == v:
                loops.append(path)
            elif len(path) < max_len and w not in path:
                stack.append(path + (w,))
    return sorted(set(loops), key=lambda p: (len(p), p))


def _two_loops(sys: Sft) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    for comp in sys.components:
        members = set(comp)
        for v in comp:
            loops = [lp for lp in _first_return_loops(sys, v, len(comp))
                     if all(w in members for w in lp)]
            if len(loops) >= 2:
                return loops[0], loops[1]
    return None


def _doubling_pattern(base: tuple, detour: tuple, horizon: int) -> tuple[list, list]:
    """x = base^∞; y = base^{2^j} detour base^{2^(j+1)} detour ...

    ``detour`` has the same length as a whole number of ``base`` repeats and
    differs from them, so y stays in phase with x.  The prefixes run past the
    horizon until the first disagreement after it, which certifies every
    distance at times <= horizon.
    """
    reps = len(detour) // len(base)
    x, y = [], []
    j = 0
    past = False
    while not past:
        block = base * (2 ** j)
        y.extend(block)
        x.extend(block)
        y.extend(detour)
        x.extend(base * reps)
        past = len(x) > horizon + len(detour)
        j += 1
    return x, y


def find_scrambled_pair(sys, delta: float = 0.5, horizon: int = 2 ** 10,
                        epsilon_exponent: int | None = None) -> Verdict:
    """Holds with a self-certifying :class:`PairEvidence`, Fails when none can exist, else Unknown."""
    if isinstance(sys, FiniteMap):
        return Verdict.fails(note="finite space: orbits that meet coincide forever")
    bounds = {"horizon": horizon, "delta": delta}
    if isinstance(sys, Sft):
        loops = _two_loops(sys)
        if loops is None:
            return Verdict.unknown(bounds, note="no vertex with two distinct return loops")
        c0, c1 = loops
        detour = c1 * len(c0)
        x, y = _doubling_pattern(c0, detour, horizon)
        rule = f"x=({','.join(map(str, c0))})^inf; y doubling blocks with detour {list(c1)}"
    elif isinstance(sys, SpacingShiftApprox):
        x, y = _spacing_pattern(sys, horizon)
        if x is None:
            return Verdict.unknown(bounds, note="gap set lacks the long gaps the construction needs")
        rule = "x=0^inf; y isolated 1s separated by doubling gaps"
    else:
        raise TypeError(f"no scrambled-pair construction for {type(sys).__name__}")
    try:
        ev = pair_evidence(x, y, horizon, delta, epsilon_exponent, rule)
    except ValueError:
        return Verdict.unknown(bounds, note="horizon too small to certify distances")
    if not ev.close_times or not ev.far_times:
        return Verdict.unknown(bounds, note="horizon too small to exhibit both events")
    return Verdict.holds(ev, exact=False, bounds=bounds, note="evidence at horizon")


def _spacing_pattern(sys: SpacingShiftApprox, horizon: int):
    gaps = sys.sorted_gaps
    if not gaps:
        return None, None
    ones = [0]
    j = 0
    while ones[-1] <= horizon:
        want = 2 ** j + 1
        g = next((g for g in gaps if g >= want), None)
        if g is None:
            return None, None
        ones.append(ones[-1] + g)
        j += 1
    length = ones[-1] + 1
    if length > sys.horizon:
        return None, None
    y = [0] * length
    for i in ones:
        y[i] = 1
    return [0] * length, y


# ---------------------------------------------------------------------------
# finite maps


def proximal_pairs(sys: FiniteMap) -> frozenset:
    """Ordered pairs whose orbits eventually collide (diagonal included).

    After ``size`` steps both points are periodic, and distinct periodic
    points never merge, so comparing the size-th iterates is exact.
    """
    n = sys.size
    far = [sys.iterate(x, n) for x in range(n)]
    return frozenset((x, y) for x in range(n) for y in range(n) if far[x] == far[y])


def scrambled_pairs_finite(sys: FiniteMap) -> list[tuple[int, int]]:
    """Exhaustive search with the discrete metric, reading liminf/limsup off the periodic tail."""
    out = []
    for x, y in itertools.combinations(range(sys.size), 2):
        seen: dict[tuple[int, int], int] = {}
        states = []
        s = (x, y)
        while s not in seen:
            seen[s] = len(states)
            states.append(s)
            s = (sys(s[0]), sys(s[1]))
        cyc = states[seen[s]:]
        lim_inf_zero = any(a == b for a, b in cyc)
        lim_sup_pos = any(a != b for a, b in cyc)
        if lim_inf_zero and lim_sup_pos:
            out.append((x, y))
    return out


# ---------------------------------------------------------------------------
# sensitivity


def _separation_threshold(delta: float) -> int:
    """Largest j with 2^-j > delta: disagreement within j+1 coordinates exceeds delta."""
    j = 0
    while 2.0 ** -(j + 1) > delta:
        j += 1
    return j


def sensitivity_witness(sys: Sft, delta: float = 0.5, horizon: int = 32, depth: int = 3) -> Verdict:
    """For every cylinder of depth <= ``depth``, two extensions that separate by more than delta."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    witnesses = []
    for u in sys.cylinders(depth):
        found = _split(sys, u, horizon)
        if found is None:
            return Verdict.fails({"cylinder": list(u)}, exact=False,
                                 bounds={"horizon": horizon, "depth": depth},
                                 note="no branching below this cylinder within the horizon")
        w1, w2, t = found
        j = _separation_threshold(delta)
        assert 2.0 ** -(distance_exponent(w1, w2, t)) > delta and j >= 0
        witnesses.append({"cylinder": list(u), "point": list(w1), "perturbed": list(w2), "time": t})
    return Verdict.holds(witnesses, exact=False, bounds={"horizon": horizon, "depth": depth})


def _split(sys: Sft, u: tuple, horizon: int):
    """Extend u along the lexicographically first path until a vertex with two successors."""
    word = list(u)
    while len(word) <= horizon:
        succ = sys.successors(word[-1])
        if len(succ) >= 2:
            return tuple(word + [succ[0]]), tuple(word + [succ[1]]), len(word)
        word.append(succ[0])
    return None
