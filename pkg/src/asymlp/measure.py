"""Finite discrete measure spaces and the simple functions living on them.

A space is an ordered list of atoms with strictly positive weights; a
function assigns one finite real per atom.  Every quantity computed by this
package (norms, clamp errors, level-set measures) depends only on the
distribution of |f| over that finite partition, so these two types carry the
whole state of the library.  "Large measure" is emulated by many atoms.

Weight sums use compensated accumulation (``math.fsum``), so exact
set-function identities can be asserted at 1e-12 relative tolerance.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .errors import SpaceMismatchError


def _as_finite_floats(values: Iterable[Any], what: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for v in out:
        if not math.isfinite(v):
            raise ValueError(f"{what} must be finite, got {v!r}")
    return out


def _content_id(weights: tuple[float, ...]) -> str:
    digest = hashlib.sha256("|".join(repr(w) for w in weights).encode()).hexdigest()
    return f"space-{len(weights)}-{digest[:12]}"


@dataclass(frozen=True)
class MeasureSpace:
    """Finite discrete measure: atom weights, all strictly positive.

    The ``id`` is an opaque label used to cross-check that functions are
    evaluated on the space they were defined on.  By default it is derived
    from the weights, so equal-weight spaces are interchangeable.
    """

    weights: tuple[float, ...]
    id: str = ""

    def __post_init__(self) -> None:
        weights = _as_finite_floats(self.weights, "atom weight")
        if not weights:
            raise ValueError("a measure space needs at least one atom")
        for w in weights:
            if w <= 0.0:
                raise ValueError(f"atom weights must be strictly positive, got {w!r}")
        object.__setattr__(self, "weights", weights)
        if not self.id:
            object.__setattr__(self, "id", _content_id(weights))

    @property
    def atom_count(self) -> int:
        return len(self.weights)

    @property
    def total_measure(self) -> float:
        return math.fsum(self.weights)

    def to_json(self) -> dict:
        return {"weights": list(self.weights)}

    @classmethod
    def from_json(cls, obj: dict) -> "MeasureSpace":
        if not isinstance(obj, dict) or "weights" not in obj:
            raise ValueError("space JSON must be an object with a 'weights' list")
        return cls(tuple(obj["weights"]))


@dataclass(frozen=True)
class SimpleFunction:
    """A measurable function represented by one finite real value per atom."""

    values: tuple[float, ...]
    space_id: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_finite_floats(self.values, "function value"))

    def __sub__(self, other: "SimpleFunction") -> "SimpleFunction":
        if self.space_id != other.space_id or len(self.values) != len(other.values):
            raise SpaceMismatchError("cannot subtract functions on different spaces")
        return SimpleFunction(tuple(a - b for a, b in zip(self.values, other.values)), self.space_id)

    def __abs__(self) -> "SimpleFunction":
        return SimpleFunction(tuple(abs(v) for v in self.values), self.space_id)

    def sup_abs(self) -> float:
        """Pointwise bound max_i |f_i| (the sup norm on a finite space)."""
        return max(abs(v) for v in self.values)

    def to_json(self) -> dict:
        return {"values": list(self.values)}


def make_space(weights: Sequence[float]) -> MeasureSpace:
    """Build a measure space from strictly positive, finite atom weights."""
    return MeasureSpace(tuple(weights))


def make_function(space: MeasureSpace, values: Sequence[float]) -> SimpleFunction:
    """Build a function on ``space``, one finite value per atom."""
    vals = tuple(values)
    if len(vals) != space.atom_count:
        raise SpaceMismatchError(
            f"expected {space.atom_count} values (one per atom), got {len(vals)}"
        )
    return SimpleFunction(vals, space.id)


def function_from_json(space: MeasureSpace, obj: dict) -> SimpleFunction:
    if not isinstance(obj, dict) or "values" not in obj:
        raise ValueError("function JSON must be an object with a 'values' list")
    return make_function(space, obj["values"])


def require_on_space(space: MeasureSpace, f: SimpleFunction) -> None:
    """Raise ``SpaceMismatchError`` unless ``f`` is defined on ``space``."""
    if f.space_id != space.id or len(f.values) != space.atom_count:
        raise SpaceMismatchError(
            f"function on space {f.space_id!r} used with space {space.id!r}"
        )


def level_set_measure(space: MeasureSpace, f: SimpleFunction, threshold: float) -> float:
    """Measure of the strict level set, mu(|f| > threshold).

    Tie atoms with |value| exactly equal to the threshold are excluded.
    """
    threshold = float(threshold)
    if not math.isfinite(threshold) or threshold <= 0.0:
        raise ValueError(f"threshold must be a positive finite real, got {threshold!r}")
    require_on_space(space, f)
    return math.fsum(w for w, v in zip(space.weights, f.values) if abs(v) > threshold)


@dataclass(frozen=True)
class FunctionFamily:
    """A finite indexed set of functions over one measure space.

    ``growth_index`` records the family's position in an instance-size
    ladder when it was produced by a generator.
    """

    space: MeasureSpace
    members: tuple[SimpleFunction, ...]
    label: str = ""
    growth_index: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a function family needs at least one member")
        if self.growth_index is not None and self.growth_index < 1:
            raise ValueError("growth index must be >= 1")
        for f in self.members:
            require_on_space(self.space, f)

    def __len__(self) -> int:
        return len(self.members)

    def to_json(self) -> dict:
        return {"label": self.label, "members": [f.to_json() for f in self.members]}

    @classmethod
    def from_json(cls, obj: dict, space: MeasureSpace) -> "FunctionFamily":
        if not isinstance(obj, dict) or "members" not in obj:
            raise ValueError("family JSON must be an object with a 'members' list")
        members = tuple(function_from_json(space, m) for m in obj["members"])
        return cls(space, members, label=str(obj.get("label", "")))
