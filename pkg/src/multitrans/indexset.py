"""Subsets of the positive integers: ultimately periodic (exact) or known up to a horizon.

An :class:`ExactSet` is ``exceptional ∪ {n >= threshold : n % modulus in residues}``
and is always kept in canonical form (smallest modulus, then smallest threshold).
An :class:`ExplicitSet` records membership on ``[1, horizon]`` only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, lcm
from typing import Callable, Iterable, Union


def _divisors(p: int) -> list[int]:
    small = [d for d in range(1, int(p ** 0.5) + 1) if p % d == 0]
    return sorted(set(small + [p // d for d in small]))


@dataclass(frozen=True)
class ExactSet:
    exceptional: tuple[int, ...] = ()
    modulus: int = 1
    residues: tuple[int, ...] = ()
    threshold: int = 1

    def __post_init__(self):
        p, n0 = int(self.modulus), int(self.threshold)
        if p < 1 or n0 < 1:
            raise ValueError("modulus and threshold must be >= 1")
        res = frozenset(int(r) for r in self.residues)
        if any(not 0 <= r < p for r in res):
            raise ValueError(f"residues must lie in [0, {p})")
        exc = frozenset(int(e) for e in self.exceptional)
        if any(not 1 <= e < n0 for e in exc):
            raise ValueError(f"exceptional elements must lie in [1, {n0})")

        # smallest period of the tail
        for d in _divisors(p):
            if all((r + d) % p in res for r in res):
                res = frozenset(r % d for r in res)
                p = d
                break
        # smallest threshold for that period
        while n0 > 1 and ((n0 - 1) in exc) == ((n0 - 1) % p in res):
            n0 -= 1
            exc = exc - {n0}

        object.__setattr__(self, "exceptional", tuple(sorted(exc)))
        object.__setattr__(self, "modulus", p)
        object.__setattr__(self, "residues", tuple(sorted(res)))
        object.__setattr__(self, "threshold", n0)

    # constructors -------------------------------------------------------

    @classmethod
    def from_predicate(cls, pred: Callable[[int], bool], modulus: int, threshold: int) -> ExactSet:
        """Build from a membership test that is ``modulus``-periodic from ``threshold`` on."""
        threshold = max(1, threshold)
        exc = tuple(n for n in range(1, threshold) if pred(n))
        res = tuple(sorted({n % modulus for n in range(threshold, threshold + modulus) if pred(n)}))
        return cls(exc, modulus, res, threshold)

    @classmethod
    def everything(cls) -> ExactSet:
        return cls((), 1, (0,), 1)

    @classmethod
    def empty(cls) -> ExactSet:
        return cls()

    @classmethod
    def residue_class(cls, r: int, p: int, start: int = 1) -> ExactSet:
        """``{n >= start : n ≡ r (mod p)}``."""
        return cls((), p, (r % p,), start)

    @classmethod
    def finite(cls, elements: Iterable[int]) -> ExactSet:
        elements = sorted(set(elements))
        top = elements[-1] + 1 if elements else 1
        return cls(tuple(elements), 1, (), top)

    # queries ------------------------------------------------------------

    @cached_property
    def _exc(self) -> frozenset:
        return frozenset(self.exceptional)

    @cached_property
    def _res(self) -> frozenset:
        return frozenset(self.residues)

    def __contains__(self, n: int) -> bool:
        if n < 1:
            return False
        if n < self.threshold:
            return n in self._exc
        return n % self.modulus in self._res

    contains = __contains__

    @property
    def is_empty(self) -> bool:
        return not self.exceptional and not self.residues

    @property
    def is_infinite(self) -> bool:
        return bool(self.residues)

    @property
    def is_cofinite(self) -> bool:
        return len(self.residues) == self.modulus

    def first(self) -> int | None:
        """Smallest element, or None for the empty set."""
        if self.exceptional:
            return self.exceptional[0]
        for n in range(self.threshold, self.threshold + self.modulus):
            if n in self:
                return n
        return None

    def elements_upto(self, horizon: int) -> list[int]:
        return [n for n in range(1, horizon + 1) if n in self]

    def truncate(self, horizon: int) -> ExplicitSet:
        return ExplicitSet(tuple(self.elements_upto(horizon)), horizon)

    def span(self) -> int:
        """Length of the prefix after which membership is purely periodic."""
        return self.threshold + self.modulus

    def issubset(self, other: ExactSet) -> bool:
        top = max(self.threshold, other.threshold) + lcm(self.modulus, other.modulus)
        return all(n in other for n in range(1, top) if n in self)

    def shift(self, offset: int) -> ExactSet:
        """``{n + offset : n in self}`` restricted to the positive integers."""
        return ExactSet.from_predicate(lambda n: (n - offset) in self, self.modulus,
                                       self.threshold + max(offset, 0))

    def __or__(self, other: ExactSet) -> ExactSet:
        return _combine(self, other, lambda x, y: x or y)

    def __and__(self, other: ExactSet) -> ExactSet:
        return _combine(self, other, lambda x, y: x and y)

    def to_json(self) -> dict:
        return {"exact": {"exceptional": list(self.exceptional), "modulus": self.modulus,
                          "residues": list(self.residues), "threshold": self.threshold}}

    def __str__(self) -> str:
        tail = f"{{n>={self.threshold} : n mod {self.modulus} in {list(self.residues)}}}"
        if self.exceptional:
            return f"{set(self.exceptional)} ∪ {tail}"
        return tail


def _combine(s: ExactSet, t: ExactSet, op) -> ExactSet:
    return ExactSet.from_predicate(lambda n: op(n in s, n in t), lcm(s.modulus, t.modulus),
                                   max(s.threshold, t.threshold))


@dataclass(frozen=True)
class ExplicitSet:
    elements: tuple[int, ...]
    horizon: int
    _set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        elems = tuple(sorted(set(int(e) for e in self.elements)))
        if elems and (elems[0] < 1 or elems[-1] > self.horizon):
            raise ValueError(f"elements must lie in [1, {self.horizon}]")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_set", frozenset(elems))

    @classmethod
    def from_predicate(cls, pred: Callable[[int], bool], horizon: int) -> ExplicitSet:
        return cls(tuple(n for n in range(1, horizon + 1) if pred(n)), horizon)

    @classmethod
    def from_mask(cls, mask: int, horizon: int) -> ExplicitSet:
        """Bit ``n`` of ``mask`` set means ``n`` is a member."""
        return cls(tuple(n for n in range(1, horizon + 1) if mask >> n & 1), horizon)

    @cached_property
    def mask(self) -> int:
        m = 0
        for e in self.elements:
            m |= 1 << e
        return m

    def __contains__(self, n: int) -> bool:
        if n > self.horizon:
            raise ValueError(f"membership of {n} unknown beyond horizon {self.horizon}")
        return n in self._set

    contains = __contains__

    @property
    def is_empty(self) -> bool:
        return not self.elements

    def truncate(self, horizon: int) -> ExplicitSet:
        if horizon > self.horizon:
            raise ValueError("cannot extend an explicit set past its horizon")
        return ExplicitSet(tuple(e for e in self.elements if e <= horizon), horizon)

    def longest_run(self) -> int:
        best = run = 0
        prev = None
        for e in self.elements:
            run = run + 1 if prev is not None and e == prev + 1 else 1
            best = max(best, run)
            prev = e
        return best

    def to_json(self) -> dict:
        return {"explicit": {"elements": list(self.elements), "horizon": self.horizon}}


IndexSet = Union[ExactSet, ExplicitSet]


def index_set_from_json(doc: dict) -> IndexSet:
    if "exact" in doc:
        e = doc["exact"]
        return ExactSet(tuple(e.get("exceptional", ())), int(e["modulus"]),
                        tuple(e["residues"]), int(e["threshold"]))
    if "explicit" in doc:
        e = doc["explicit"]
        return ExplicitSet(tuple(e["elements"]), int(e["horizon"]))
    raise ValueError("index set JSON needs an 'exact' or 'explicit' key")


NAMED_SETS = {
    "all": ExactSet.everything(),
    "naturals": ExactSet.everything(),
    "empty": ExactSet.empty(),
    "odds": ExactSet.residue_class(1, 2),
    "evens": ExactSet.residue_class(0, 2),
}


def dilation_modulus(s: ExactSet, a: int) -> int:
    return s.modulus // gcd(s.modulus, a)
