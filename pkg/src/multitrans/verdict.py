"""Three-valued answers for questions that are only semi-decidable at desk scale."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    """Holds, Fails (with a refuting witness) or Unknown (with the bounds searched).

    ``exact`` is False when the answer is only claimed relative to ``bounds``
    (a horizon, a truncation depth, a finite family of cylinders).
    """

    status: Status
    witness: Any = None
    bounds: dict | None = None
    exact: bool = True
    note: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def holds(cls, witness=None, **kw) -> Verdict:
        return cls(Status.HOLDS, witness, **kw)

    @classmethod
    def fails(cls, witness=None, **kw) -> Verdict:
        return cls(Status.FAILS, witness, **kw)

    @classmethod
    def unknown(cls, bounds=None, **kw) -> Verdict:
        return cls(Status.UNKNOWN, None, bounds=bounds, exact=False, **kw)

    @property
    def is_holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def is_fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def is_unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def to_json(self) -> dict:
        out: dict[str, Any] = {"verdict": self.status.value}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if not self.exact:
            out["exact"] = False
        if self.bounds:
            out["bounds"] = _jsonable(self.bounds)
        if self.note:
            out["note"] = self.note
        if self.extra:
            out.update(_jsonable(self.extra))
        return out


def both(first: Verdict, second: Verdict) -> Verdict:
    """Conjunction: the first failure wins, then unknown, else holds."""
    for v in (first, second):
        if v.is_fails:
            return v
    for v in (first, second):
        if v.is_unknown:
            return v
    return Verdict.holds(exact=first.exact and second.exact,
                         bounds=first.bounds or second.bounds)


def _jsonable(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    return obj
