"""Exception types. Every error carries a JSON-serialisable witness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Witness:
    kind: str
    indices: tuple = ()
    values: tuple = ()

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "indices": list(self.indices), "values": [_plain(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Witness":
        return cls(data["kind"], tuple(data.get("indices", ())), tuple(data.get("values", ())))


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    if hasattr(v, "denominator"):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


class InjhullError(Exception):
    """Base class; ``witness`` holds the offending indices and values."""

    kind = "error"

    def __init__(self, message: str = "", indices=(), values=()):
        super().__init__(message or self.kind)
        self.witness = Witness(self.kind, tuple(int(i) for i in indices), tuple(values))

    @property
    def indices(self) -> tuple:
        return self.witness.indices


class AsymmetricEntry(InjhullError):
    kind = "AsymmetricEntry"


class NegativeEntry(InjhullError):
    kind = "NegativeEntry"


class NonzeroDiagonal(InjhullError):
    kind = "NonzeroDiagonal"


class ZeroOffDiagonal(InjhullError):
    kind = "ZeroOffDiagonal"


class TriangleViolation(InjhullError):
    kind = "TriangleViolation"


class Disconnected(InjhullError):
    kind = "Disconnected"


class BadParams(InjhullError):
    kind = "BadParams"


class BudgetExceeded(InjhullError):
    """Search stopped at its node budget.

    ``partial`` is whatever had been established so far (a lower bound, a
    count of emitted paths, ...), never a silently truncated final answer.
    """

    kind = "BudgetExceeded"

    def __init__(self, message: str = "", partial: Any = None, nodes: int = 0):
        super().__init__(message, values=(nodes,))
        self.partial = partial
        self.nodes = nodes


class NotConcatenable(InjhullError):
    kind = "NotConcatenable"


class TooFewPoints(InjhullError):
    kind = "TooFewPoints"


class NotMetricForm(InjhullError):
    kind = "NotMetricForm"


class NonIntegerMetric(InjhullError):
    kind = "NonIntegerMetric"


class MetricMismatch(InjhullError):
    kind = "MetricMismatch"


class NotHelly(InjhullError):
    """``balls`` is a list of (center, radius) pairs that pairwise meet but share no point."""

    kind = "NotHelly"

    def __init__(self, message: str = "", balls=()):
        balls = [tuple(int(v) for v in b) for b in balls]
        super().__init__(message, indices=[c for c, _ in balls], values=[r for _, r in balls])
        self.balls = balls
