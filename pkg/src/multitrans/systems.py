"""Desk-scale dynamical systems: finite maps, shifts of finite type, truncated spacing shifts.

Shift spaces are one-sided; a cylinder is an admissible word anchored at
coordinate 0.  For a finite map a cylinder is a non-empty set of points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterator, Sequence, Union

import networkx as nx

DEFAULT_PRODUCT_CAP = 10 ** 6


class MalformedSystemError(ValueError):
    """The system violates a structural invariant (e.g. an SFT that prunes to nothing)."""


class InadmissibleWordError(ValueError):
    pass


class MaterializationError(RuntimeError):
    """Explicit product refused; use the factored form."""


class CapabilityError(RuntimeError):
    """The requested exact lane does not exist for this kind of system."""


def as_vector(a: Sequence[int]) -> tuple[int, ...]:
    """Validate an integer vector ``(a_1, ..., a_r)`` of positive entries."""
    vec = tuple(int(x) for x in a)
    if not vec:
        raise ValueError("vector must have length >= 1")
    if any(x < 1 for x in vec):
        raise ValueError(f"vector entries must be positive, got {vec}")
    return vec


# ---------------------------------------------------------------------------
# finite maps


@dataclass(frozen=True)
class FiniteMap:
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(t) for t in self.table)
        if not table:
            raise MalformedSystemError("a finite map needs at least one point")
        n = len(table)
        bad = [t for t in table if not 0 <= t < n]
        if bad:
            raise MalformedSystemError(f"table entries {bad} outside 0..{n - 1}")
        object.__setattr__(self, "table", table)

    @property
    def size(self) -> int:
        return len(self.table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def iterate(self, x: int, n: int) -> int:
        for _ in range(n):
            x = self.table[x]
        return x

    def orbit_shape(self, x: int) -> tuple[int, int]:
        """(pre-period, period) of the forward orbit of ``x``."""
        seen: dict[int, int] = {}
        i = 0
        while x not in seen:
            seen[x] = i
            x = self.table[x]
            i += 1
        return seen[x], i - seen[x]

    @cached_property
    def periodic_points(self) -> frozenset:
        pts = set()
        for x in range(self.size):
            y = self.iterate(x, self.size)
            pts.add(y)
        # close under the map: the image of a periodic point is periodic
        out = set()
        for y in pts:
            z = y
            while z not in out:
                out.add(z)
                z = self.table[z]
        return frozenset(out)

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        done: set[int] = set()
        cycles = []
        for x in sorted(self.periodic_points):
            if x in done:
                continue
            cyc = [x]
            y = self.table[x]
            while y != x:
                cyc.append(y)
                y = self.table[y]
            done.update(cyc)
            cycles.append(tuple(cyc))
        return tuple(cycles)

    @property
    def is_single_cycle(self) -> bool:
        return len(self.periodic_points) == self.size and len(self.cycles) == 1

    def is_transitive_point(self, x: int) -> bool:
        orbit = {x}
        y = x
        for _ in range(self.size):
            y = self.table[y]
            orbit.add(y)
        return len(orbit) == self.size

    def transitive_points(self) -> list[int]:
        return [x for x in range(self.size) if self.is_transitive_point(x)]

    def validate_cylinder(self, c) -> frozenset:
        pts = frozenset(int(x) for x in c)
        if not pts:
            raise InadmissibleWordError("cylinder must be non-empty")
        if any(not 0 <= x < self.size for x in pts):
            raise InadmissibleWordError(f"points {sorted(pts)} outside 0..{self.size - 1}")
        return pts

    def cylinders(self, depth: int = 1) -> list[frozenset]:
        """Singletons; every non-empty open set contains one."""
        return [frozenset({x}) for x in range(self.size)]

    def to_json(self) -> dict:
        return {"kind": "finite_map", "table": list(self.table)}


def cycle_map(n: int, step: int = 1) -> FiniteMap:
    return FiniteMap(tuple((i + step) % n for i in range(n)))


def identity_map(n: int) -> FiniteMap:
    return FiniteMap(tuple(range(n)))


@dataclass(frozen=True)
class ESystemWitness:
    """A cyclic permutation with its uniform invariant measure."""

    system: FiniteMap

    def __post_init__(self):
        if not self.system.is_single_cycle:
            raise MalformedSystemError("an E-system witness must be a single cycle")
        mu = self.measure
        pushed = [Fraction(0)] * self.system.size
        for x, w in enumerate(mu):
            pushed[self.system(x)] += w
        if pushed != list(mu) or any(w <= 0 for w in mu) or sum(mu) != 1:
            raise MalformedSystemError("uniform measure is not invariant with full support")

    @property
    def measure(self) -> tuple[Fraction, ...]:
        n = self.system.size
        return tuple(Fraction(1, n) for _ in range(n))


def cyclic_esystem(n: int) -> ESystemWitness:
    return ESystemWitness(cycle_map(n))


# ---------------------------------------------------------------------------
# shifts of finite type (vertex shifts)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Sft:
    """Vertex shift on a directed graph; vertices keep their original labels after pruning."""

    vertices: int
    edges: frozenset

    def __post_init__(self):
        n = int(self.vertices)
        if n < 1:
            raise MalformedSystemError("an SFT needs at least one vertex")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        bad = [e for e in edges if not (0 <= e[0] < n and 0 <= e[1] < n)]
        if bad:
            raise MalformedSystemError(f"edges {sorted(bad)} reference missing vertices")
        object.__setattr__(self, "vertices", n)
        object.__setattr__(self, "edges", edges)
        if not self.live:
            raise MalformedSystemError("graph has no essential vertices (prunes to empty)")

    @classmethod
    def from_adjacency(cls, rows: Sequence[Sequence[int]]) -> Sft:
        n = len(rows)
        return cls(n, frozenset((i, j) for i in range(n) for j in range(n) if rows[i][j]))

    @cached_property
    def live(self) -> tuple[int, ...]:
        alive = set(range(self.vertices))
        edges = set(self.edges)
        while True:
            has_out = {u for u, v in edges}
            has_in = {v for u, v in edges}
            keep = alive & has_out & has_in
            if keep == alive:
                break
            alive = keep
            edges = {(u, v) for u, v in edges if u in alive and v in alive}
        return tuple(sorted(alive))

    @cached_property
    def live_edges(self) -> frozenset:
        alive = set(self.live)
        return frozenset((u, v) for u, v in self.edges if u in alive and v in alive)

    @cached_property
    def succ_mask(self) -> tuple[int, ...]:
        masks = [0] * self.vertices
        for u, v in self.live_edges:
            masks[u] |= 1 << v
        return tuple(masks)

    def successors(self, v: int) -> list[int]:
        return list(_bits(self.succ_mask[v]))

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.live)
        g.add_edges_from(self.live_edges)
        return g

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        comps = [tuple(sorted(c)) for c in nx.strongly_connected_components(self.graph)]
        return tuple(sorted(comps))

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {v: i for i, comp in enumerate(self.components) for v in comp}

    @property
    def irreducible(self) -> bool:
        return len(self.components) == 1

    def _classes(self, comp: tuple[int, ...]) -> tuple[int, dict[int, int]]:
        members = set(comp)
        level = {comp[0]: 0}
        frontier = [comp[0]]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self.successors(u):
                    if v in members and v not in level:
                        level[v] = level[u] + 1
                        nxt.append(v)
            frontier = nxt
        p = 0
        for u in comp:
            for v in self.successors(u):
                if v in members:
                    p = gcd(p, level[u] + 1 - level[v])
        p = abs(p)
        if p == 0:  # trivial component without a loop; pruning rules this out for live SCCs
            return 0, {v: 0 for v in comp}
        return p, {v: level[v] % p for v in comp}

    def component_period(self, index: int) -> int:
        return self._classes(self.components[index])[0]

    @cached_property
    def period(self) -> int:
        """Period of an irreducible SFT (gcd of its cycle lengths)."""
        if not self.irreducible:
            raise ValueError("period is defined per component for a reducible SFT")
        return self._classes(self.components[0])[0]

    @cached_property
    def cyclic_class(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for comp in self.components:
            out.update(self._classes(comp)[1])
        return out

    @property
    def is_mixing(self) -> bool:
        return self.irreducible and self.period == 1

    def reaches(self, u: int, v: int) -> bool:
        """Is there a path of length >= 1 from u to v?"""
        return v in self.reach_sets[u]

    @cached_property
    def reach_sets(self) -> dict[int, frozenset]:
        out = {}
        for u in self.live:
            seen: set[int] = set()
            stack = self.successors(u)
            while stack:
                w = stack.pop()
                if w not in seen:
                    seen.add(w)
                    stack.extend(self.successors(w))
            out[u] = frozenset(seen)
        return out

    def is_admissible(self, word: Sequence[int]) -> bool:
        if not word:
            return False
        alive = self.live
        if any(w not in alive for w in word):
            return False
        return all(self.succ_mask[a] >> b & 1 for a, b in zip(word, word[1:]))

    def validate_cylinder(self, word) -> tuple[int, ...]:
        w = tuple(int(x) for x in word)
        if not self.is_admissible(w):
            raise InadmissibleWordError(f"word {list(w)} is not admissible")
        return w

    def words(self, length: int) -> list[tuple[int, ...]]:
        out = [(v,) for v in self.live]
        for _ in range(length - 1):
            out = [w + (v,) for w in out for v in self.successors(w[-1])]
        return out

    def cylinders(self, depth: int) -> list[tuple[int, ...]]:
        return [w for k in range(1, depth + 1) for w in self.words(k)]

    def to_json(self) -> dict:
        return {"kind": "sft", "vertices": self.vertices, "edges": sorted(list(e) for e in self.edges)}


def full_shift(k: int = 2) -> Sft:
    return Sft(k, frozenset((i, j) for i in range(k) for j in range(k)))


def golden_mean() -> Sft:
    return Sft(2, frozenset({(0, 0), (0, 1), (1, 0)}))


def cycle_sft(n: int) -> Sft:
    return Sft(n, frozenset((i, (i + 1) % n) for i in range(n)))


# ---------------------------------------------------------------------------
# spacing shifts truncated to a maximal word length


@dataclass(frozen=True)
class SpacingShiftApprox:
    """0/1 words of length <= ``horizon`` whose gaps between consecutive 1s lie in ``gaps``."""

    gaps: frozenset
    horizon: int

    def __post_init__(self):
        if self.horizon < 1:
            raise MalformedSystemError("horizon must be >= 1")
        gaps = frozenset(int(g) for g in self.gaps)
        if any(g < 1 for g in gaps):
            raise MalformedSystemError("gaps must be positive")
        object.__setattr__(self, "gaps", frozenset(g for g in gaps if g <= self.horizon))

    @cached_property
    def sorted_gaps(self) -> tuple[int, ...]:
        return tuple(sorted(self.gaps))

    @cached_property
    def sums_mask(self) -> int:
        """Bit m set iff m is a (possibly empty) sum of gaps, m <= horizon."""
        limit = self.horizon
        reach = [False] * (limit + 1)
        reach[0] = True
        for m in range(1, limit + 1):
            reach[m] = any(reach[m - g] for g in self.sorted_gaps if g <= m)
        return sum(1 << m for m in range(limit + 1) if reach[m])

    def is_admissible(self, word: Sequence[int]) -> bool:
        if not word or len(word) > self.horizon or any(s not in (0, 1) for s in word):
            return False
        ones = [i for i, s in enumerate(word) if s]
        return all(b - a in self.gaps for a, b in zip(ones, ones[1:]))

    def validate_cylinder(self, word) -> tuple[int, ...]:
        w = tuple(int(x) for x in word)
        if not self.is_admissible(w):
            raise InadmissibleWordError(f"word {list(w)} is not admissible")
        return w

    def words(self, length: int) -> list[tuple[int, ...]]:
        return [w for w in itertools.product((0, 1), repeat=length) if self.is_admissible(w)]

    def cylinders(self, depth: int) -> list[tuple[int, ...]]:
        return [w for k in range(1, depth + 1) for w in self.words(k)]

    def to_json(self) -> dict:
        return {"kind": "spacing_shift", "gaps": sorted(self.gaps), "horizon": self.horizon}


# ---------------------------------------------------------------------------
# powers, products, towers


@dataclass(frozen=True)
class Power:
    """Lazy ``f^k`` for a shift system: length-n queries resolve to length k*n on the base."""

    base: Union[Sft, SpacingShiftApprox]
    exponent: int

    def validate_cylinder(self, word):
        return self.base.validate_cylinder(word)

    def cylinders(self, depth: int):
        return self.base.cylinders(depth)

    def to_json(self) -> dict:
        return {"kind": "power", "base": self.base.to_json(), "exponent": self.exponent}


DynSystem = Union[FiniteMap, Sft, SpacingShiftApprox, Power]


def power(system: DynSystem, k: int) -> DynSystem:
    if k < 1:
        raise ValueError("exponent must be >= 1")
    if isinstance(system, FiniteMap):
        return FiniteMap(tuple(system.iterate(x, k) for x in range(system.size)))
    if isinstance(system, Power):
        return Power(system.base, system.exponent * k)
    if k == 1:
        return system
    return Power(system, k)


@dataclass(frozen=True)
class ProductHandle:
    """Factored ``f^(a) = f^{a_1} x ... x f^{a_r}``; coordinates evolve independently."""

    system: DynSystem
    a: tuple[int, ...]

    @property
    def state_count(self) -> int | None:
        if isinstance(self.system, FiniteMap):
            return self.system.size ** len(self.a)
        return None

    def coordinate(self, i: int) -> DynSystem:
        return power(self.system, self.a[i])

    def encode(self, point: Sequence[int]) -> int:
        n = self.system.size
        code = 0
        for x in point:
            code = code * n + x
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        n = self.system.size
        out = []
        for _ in self.a:
            code, x = divmod(code, n)
            out.append(x)
        return tuple(reversed(out))

    def materialize(self, cap: int = DEFAULT_PRODUCT_CAP) -> FiniteMap:
        if not isinstance(self.system, FiniteMap):
            raise MaterializationError("only finite maps can be materialized; use factored form")
        count = self.state_count
        if count > cap:
            raise MaterializationError(f"{count} product states exceed cap {cap}; use factored form")
        coords = [power(self.system, ai).table for ai in self.a]
        table = [self.encode([c[x] for c, x in zip(coords, self.decode(s))]) for s in range(count)]
        return FiniteMap(tuple(table))


def vector_system(system: DynSystem, a: Sequence[int]) -> ProductHandle:
    return ProductHandle(system, as_vector(a))


def tower(base: FiniteMap, k: int) -> FiniteMap:
    """Map on states ``x*k + i`` sending (x, i) to (x, i+1), and (x, k-1) to (g(x), 0)."""
    if k < 1:
        raise ValueError("tower height must be >= 1")
    table = []
    for x in range(base.size):
        for i in range(k):
            table.append(x * k + i + 1 if i < k - 1 else base(x) * k)
    return FiniteMap(tuple(table))


def tower_state(x: int, i: int, k: int) -> int:
    return x * k + i


# ---------------------------------------------------------------------------
# JSON ingestion


def system_from_json(doc: dict) -> DynSystem:
    kind = doc.get("kind")
    if kind == "finite_map":
        return FiniteMap(tuple(doc["table"]))
    if kind == "sft":
        return Sft(int(doc["vertices"]), frozenset(tuple(e) for e in doc["edges"]))
    if kind == "spacing_shift":
        return SpacingShiftApprox(frozenset(doc["gaps"]), int(doc["horizon"]))
    if kind == "power":
        return power(system_from_json(doc["base"]), int(doc["exponent"]))
    raise MalformedSystemError(f"unknown system kind {kind!r}")


__all__ = [
    "CapabilityError", "DynSystem", "ESystemWitness", "FiniteMap", "InadmissibleWordError",
    "MalformedSystemError", "MaterializationError", "Power", "ProductHandle", "Sft",
    "SpacingShiftApprox", "as_vector", "cycle_map", "cycle_sft", "cyclic_esystem", "full_shift",
    "golden_mean", "identity_map", "power", "system_from_json", "tower", "tower_state",
    "vector_system",
]
