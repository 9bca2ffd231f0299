from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.errors import ConsistencyError

from .scalars import format_rational


def _plain(value: object) -> object:
    """JSON-friendly rendering of scalars, vectors and tensors."""
    if isinstance(value, np.ndarray):
        return [_plain(item) for item in value.tolist()] if value.ndim else _plain(value.item())
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, (Verdict, Report)):
        return value.to_dict()
    try:
        return format_rational(value)
    except ValueError:
        return str(value)


@dataclass(frozen=True)
class Witness:
    """First basis tuple where an identity fails, with both sides."""

    location: Tuple[int, ...]
    lhs: object
    rhs: object

    def describe(self, labels: Optional[Sequence[str]] = None) -> str:
        names = [labels[i] if labels and i < len(labels) else f"e{i + 1}" for i in self.location]
        return f"({', '.join(names)}): {_plain(self.lhs)} != {_plain(self.rhs)}"

    def to_dict(self) -> Dict[str, object]:
        return {
            "location": [index + 1 for index in self.location],
            "lhs": _plain(self.lhs),
            "rhs": _plain(self.rhs),
        }


@dataclass(frozen=True)
class Verdict:
    """Outcome of a predicate. Truthy exactly when the property holds."""

    check: str
    holds: bool
    witness: Optional[Witness] = None
    reason: str = ""
    details: Mapping[str, object] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    @staticmethod
    def passed(check: str, **details: object) -> "Verdict":
        return Verdict(check=check, holds=True, details=details)

    @staticmethod
    def failed(check: str, reason: str, witness: Optional[Witness] = None, **details: object) -> "Verdict":
        return Verdict(check=check, holds=False, witness=witness, reason=reason, details=details)

    def to_dict(self) -> Dict[str, object]:
        payload: Dict[str, object] = {"check": self.check, "result": self.holds}
        if self.reason:
            payload["reason"] = self.reason
        if self.witness is not None:
            payload["witness"] = self.witness.to_dict()
        return payload


@dataclass(frozen=True)
class Report:
    """A named group of verdicts that holds when every member holds."""

    check: str
    parts: Tuple[Verdict, ...]

    @property
    def holds(self) -> bool:
        return all(part.holds for part in self.parts)

    def __bool__(self) -> bool:
        return self.holds

    def part(self, check: str) -> Verdict:
        for verdict in self.parts:
            if verdict.check == check:
                return verdict
        raise KeyError(check)

    def failures(self) -> Tuple[Verdict, ...]:
        return tuple(part for part in self.parts if not part.holds)

    def as_verdict(self) -> Verdict:
        failures = self.failures()
        if not failures:
            return Verdict.passed(self.check)
        first = failures[0]
        return Verdict.failed(self.check, f"{first.check}: {first.reason}", first.witness)

    def to_dict(self) -> Dict[str, object]:
        return {"check": self.check, "result": self.holds, "parts": [part.to_dict() for part in self.parts]}


def compare(check: str, lhs: np.ndarray, rhs: np.ndarray, value_axes: int = 1, reason: str = "") -> Verdict:
    """
    Compare two tensors whose trailing ``value_axes`` axes hold values.
    Leading axes index basis tuples; the first differing tuple is the witness.
    """
    left = np.asarray(lhs, dtype=object)
    right = np.asarray(rhs, dtype=object)
    if left.shape != right.shape:
        raise ConsistencyError(f"cannot compare shapes {left.shape} and {right.shape}")
    mismatch = np.asarray(left != right, dtype=bool)
    if value_axes:
        mismatch = mismatch.reshape(mismatch.shape[: mismatch.ndim - value_axes] + (-1,)).any(axis=-1)
    positions = np.argwhere(mismatch)
    if positions.size == 0:
        return Verdict.passed(check)
    location = tuple(int(index) for index in positions[0])
    witness = Witness(location=location, lhs=left[location], rhs=right[location])
    return Verdict.failed(check, reason or "identity fails", witness)


def vanishes(check: str, tensor: np.ndarray, value_axes: int = 1, reason: str = "") -> Verdict:
    tensor = np.asarray(tensor, dtype=object)
    return compare(check, tensor, np.zeros_like(tensor), value_axes, reason or "expected zero")


def combine(check: str, verdicts: Iterable[Verdict]) -> Report:
    return Report(check=check, parts=tuple(verdicts))
