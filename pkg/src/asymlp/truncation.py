"""Pointwise clamp operators t -> max(-M, min(t, M)) and their contracts.

The clamp at level M is 1-Lipschitz, so it contracts the bounded distance.
On pairs bounded by M the bounded distance and the L^p distance are
equivalent with constant ``max(1, 2M)``, and the clamp error obeys the
level-set sandwich

    mu(|f| > M+1)  <=  ||min(|f - clamp(f)|, 1)||_p^p  <=  mu(|f| > M).

These three facts are what the covering engine in ``compactness`` runs on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .measure import MeasureSpace, SimpleFunction, require_on_space
from .metrics import Exponent, _pvalue


@dataclass(frozen=True)
class TruncationLevel:
    """A clamp level M > 0."""

    m: float

    def __post_init__(self) -> None:
        m = float(self.m)
        if not math.isfinite(m) or m <= 0.0:
            raise ValueError(f"truncation level must be a positive finite real, got {m!r}")
        object.__setattr__(self, "m", m)


def _mvalue(level: "TruncationLevel | float") -> float:
    if isinstance(level, TruncationLevel):
        return level.m
    return TruncationLevel(level).m


def truncate(f: SimpleFunction, level: "TruncationLevel | float") -> SimpleFunction:
    """Atomwise clamp of values to [-M, M]; output lives on the same space."""
    m = _mvalue(level)
    return SimpleFunction(tuple(max(-m, min(v, m)) for v in f.values), f.space_id)


def truncation_error_fnorm(
    space: MeasureSpace,
    f: SimpleFunction,
    level: "TruncationLevel | float",
    p: "Exponent | float",
) -> float:
    """Bounded F-norm of the clamp error, ||min(|f - clamp(f)|, 1)||_p.

    Computed through the identity |f - clamp(f)| = (|f| - M)_+ rather than
    by subtracting clamped values; both routes agree bit-for-bit and the
    agreement is itself a unit test.
    """
    m = _mvalue(level)
    q = _pvalue(p)
    require_on_space(space, f)
    terms = []
    for w, v in zip(space.weights, f.values):
        excess = abs(v) - m
        if excess < 0.0:
            excess = 0.0
        terms.append(w * min(excess, 1.0) ** q)
    return math.fsum(terms) ** (1.0 / q)


def lipschitz_constant_cm(level: "TruncationLevel | float") -> float:
    """Equivalence constant max{1, 2M} for M-bounded pairs.

    For |u|, |v| <= M:  ||min(|u-v|,1)||_p <= ||u-v||_p <= max{1,2M} * ||min(|u-v|,1)||_p.
    """
    m = _mvalue(level)
    return max(1.0, 2.0 * m)


def compose_truncations(
    f: SimpleFunction,
    level1: "TruncationLevel | float",
    level2: "TruncationLevel | float",
) -> SimpleFunction:
    """Clamp at level2, then at level1.

    Equals the single clamp at min(level1, level2) atomwise, exactly: both
    are pure selections, no arithmetic is involved.
    """
    return truncate(truncate(f, level2), level1)
