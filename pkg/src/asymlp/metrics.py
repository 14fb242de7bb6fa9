"""Norms and distances for simple functions.

Two functionals drive everything here: the discrete weighted L^p norm
``(sum_i w_i |f_i|^p)^(1/p)`` and the bounded variant obtained by clipping
the integrand at one, ``(sum_i w_i min(|f_i|, 1)^p)^(1/p)``.  The clipped
functional is a nonhomogeneous F-norm; its induced distance metrizes
convergence in measure on finite-measure spaces, and
``measure_bridge_bounds`` makes that bridge quantitative.

All operations are pure, recompute from scratch, and accumulate with
``math.fsum``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .measure import MeasureSpace, SimpleFunction, level_set_measure, require_on_space

# Exact inequalities meet floating point: property checks compare with this
# relative slack and absolute floor.
REL_TOL = 1e-12
ABS_FLOOR = 1e-15


def tolerant_leq(a: float, b: float, rel: float = REL_TOL, floor: float = ABS_FLOOR) -> bool:
    """a <= b up to the documented relative slack."""
    return a <= b + max(floor, rel * max(abs(a), abs(b)))


@dataclass(frozen=True)
class Exponent:
    """An integrability exponent p with 1 <= p < infinity (reals allowed)."""

    p: float

    def __post_init__(self) -> None:
        p = float(self.p)
        if not math.isfinite(p) or p < 1.0:
            raise ValueError(f"exponent must satisfy 1 <= p < inf, got {p!r}")
        object.__setattr__(self, "p", p)


def _pvalue(p: "Exponent | float") -> float:
    if isinstance(p, Exponent):
        return p.p
    return Exponent(p).p


def lp_norm(space: MeasureSpace, f: SimpleFunction, p: "Exponent | float") -> float:
    """Weighted discrete L^p norm, (sum_i w_i |f_i|^p)^(1/p)."""
    q = _pvalue(p)
    require_on_space(space, f)
    total = math.fsum(w * abs(v) ** q for w, v in zip(space.weights, f.values))
    return total ** (1.0 / q)


def fnorm(space: MeasureSpace, f: SimpleFunction, p: "Exponent | float") -> float:
    """Bounded F-norm, (sum_i w_i min(|f_i|, 1)^p)^(1/p).

    Agrees with ``lp_norm`` whenever all |values| <= 1, and never exceeds
    total_measure(space)^(1/p).
    """
    q = _pvalue(p)
    require_on_space(space, f)
    total = math.fsum(w * min(abs(v), 1.0) ** q for w, v in zip(space.weights, f.values))
    return total ** (1.0 / q)


def lambda_distance(
    space: MeasureSpace, f: SimpleFunction, g: SimpleFunction, p: "Exponent | float"
) -> float:
    """Distance induced by the bounded F-norm: fnorm(f - g).

    Symmetric, satisfies the triangle inequality, and vanishes iff f = g
    atomwise (weights are strictly positive).
    """
    require_on_space(space, f)
    require_on_space(space, g)
    return fnorm(space, f - g, p)


def lp_distance(
    space: MeasureSpace, f: SimpleFunction, g: SimpleFunction, p: "Exponent | float"
) -> float:
    """Distance induced by the L^p norm: lp_norm(f - g)."""
    require_on_space(space, f)
    require_on_space(space, g)
    return lp_norm(space, f - g, p)


def measure_bridge_bounds(
    space: MeasureSpace, g: SimpleFunction, p: "Exponent | float", delta: float
) -> tuple[float, float]:
    """Two-sided level-set bounds sandwiching fnorm(g)^p, for 0 < delta <= 1.

    Returns ``(lower, upper)`` with

        lower = min(delta, 1)^p * mu(|g| > delta)
        upper = mu(|g| > delta) + delta^p * mu(X)

    and guarantees ``lower <= fnorm(g)^p <= upper``.  Sweeping delta makes
    "F-norm convergence iff convergence in measure on finite measure
    spaces" checkable from level sets alone.
    """
    q = _pvalue(p)
    delta = float(delta)
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0, 1], got {delta!r}")
    exceed = level_set_measure(space, g, delta)
    lower = min(delta, 1.0) ** q * exceed
    upper = exceed + delta**q * space.total_measure
    return lower, upper
