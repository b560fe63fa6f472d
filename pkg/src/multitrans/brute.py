"""Brute-force oracles: direct simulation and path dynamic programming.

Nothing here uses ultimately periodic arithmetic, so these functions can be
used to check the exact machinery in ``hitting`` and ``families``.
"""

from __future__ import annotations

import itertools
from collections import deque
from math import gcd
from typing import Sequence

from .systems import FiniteMap, Sft


def simulate_hitting(sys: FiniteMap, U, V, horizon: int) -> list[int]:
    V = set(V)
    out = []
    for n in range(1, horizon + 1):
        if any(sys.iterate(x, n) in V for x in U):
            out.append(n)
    return out


def product_hitting(sys: FiniteMap, a: Sequence[int], xs: Sequence[int], ys: Sequence[int],
                    horizon: int) -> list[int]:
    """Times k <= horizon at which the product of powers carries xs onto ys, by stepping."""
    cur = list(xs)
    out = []
    for k in range(1, horizon + 1):
        cur = [sys.iterate(x, ai) for x, ai in zip(cur, a)]
        if cur == list(ys):
            out.append(k)
    return out


def path_hitting(sys: Sft, u: Sequence[int], v: Sequence[int], horizon: int) -> list[int]:
    """N([u],[v]) on [1, horizon] by forward reachability over vertices, one step at a time."""
    u, v = tuple(u), tuple(v)
    out = []
    for n in range(1, min(len(u), horizon + 1)):
        ol = min(len(u) - n, len(v))
        if u[n:n + ol] == v[:ol]:
            out.append(n)
    frontier = {u[-1]}
    for n in range(len(u), horizon + 1):
        frontier = {w for x in frontier for w in sys.successors(x)}
        if v[0] in frontier:
            out.append(n)
    return out


def return_time_gcd(sys: Sft, v: int, length: int) -> int:
    g = 0
    frontier = {v}
    for m in range(1, length + 1):
        frontier = {w for x in frontier for w in sys.successors(x)}
        if v in frontier:
            g = gcd(g, m)
    return g


def cycle_gcd(sys: Sft, comp: Sequence[int]) -> int:
    """gcd of the lengths of all simple cycles inside a component (exhaustive DFS)."""
    members = set(comp)
    g = 0
    order = sorted(comp)
    for start_idx, s in enumerate(order):
        allowed = set(order[start_idx:])
        stack = [(s, [s])]
        while stack:
            x, path = stack.pop()
            for w in sys.successors(x):
                if w not in members or w not in allowed:
                    continue
                if w == s:
                    g = gcd(g, len(path))
                elif w not in path:
                    stack.append((w, path + [w]))
    return g


def product_graph_transitive(sys: Sft, a: Sequence[int]) -> tuple | None:
    """Depth-1 cylinder check of ``f^{a_1} x ... x f^{a_r}`` by BFS on vertex tuples.

    Returns the first (source, target) pair of tuples with no connecting path of
    length >= 1, or None if every tuple reaches every tuple.
    """
    def step_power(x, k):
        frontier = {x}
        for _ in range(k):
            frontier = {w for y in frontier for w in sys.successors(y)}
        return frontier

    moves = {(x, k): sorted(step_power(x, k)) for x in sys.live for k in set(a)}
    states = list(itertools.product(sys.live, repeat=len(a)))
    for s in states:
        seen = set()
        queue = deque([s])
        while queue:
            cur = queue.popleft()
            for nxt in itertools.product(*(moves[x, k] for x, k in zip(cur, a))):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        for t in states:
            if t not in seen:
                return s, t
    return None


def functional_graph_single_cycle(sys: FiniteMap) -> bool:
    x = 0
    seen = set()
    for _ in range(sys.size):
        seen.add(x)
        x = sys(x)
    return x == 0 and len(seen) == sys.size


def orbit(sys: FiniteMap, x: int, steps: int) -> list[int]:
    out = [x]
    for _ in range(steps):
        x = sys(x)
        out.append(x)
    return out
