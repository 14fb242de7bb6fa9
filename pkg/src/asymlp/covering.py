"""Greedy epsilon-net and epsilon-packing engine with verifiable certificates.

Nets certify coverability of a finite family at a given scale, packings
refute it: a set of points with pairwise distances > epsilon lower-bounds
the size of every epsilon/2 cover (no two such points fit in one ball).
Certificates record every distance they rely on and are never trusted
unverified; ``verify_certificate`` recomputes them from the oracle.

Design notes
------------
- Net centers are drawn from the family itself (self-centered nets).  An
  ambient net at radius eps/2 yields a self-centered net at radius eps, so
  restricting to members changes only constants.
- Tie-breaking is lowest-index-first, making both constructions fully
  deterministic.
- The greedy cover is not minimal, but its centers are pairwise > epsilon
  apart, so its size never exceeds the size of a minimal epsilon/2 cover.
- Distances are computed on demand and memoized per oracle; desk-scale
  family sizes keep the O(N^2) matrix cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import VerificationError
from .measure import FunctionFamily, MeasureSpace
from .metrics import Exponent, lambda_distance, lp_distance, tolerant_leq


@dataclass
class DistanceOracle:
    """Symmetric nonnegative pairwise-distance evaluator over point indices.

    ``tag`` says which metric the oracle represents (bounded F-norm
    distance, or L^p distance at a clamp level).  Symmetry is structural
    (each unordered pair is computed once); d(i,i)=0 is hard-wired; the
    triangle inequality is spot-checked on demand, never assumed silently.
    """

    size: int
    pair_distance: Callable[[int, int], float]
    tag: str
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.size:
            raise IndexError(f"point index {i} out of range for {self.size} points")

    def distance(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        if i == j:
            return 0.0
        key = (i, j) if i < j else (j, i)
        d = self._cache.get(key)
        if d is None:
            d = self.pair_distance(*key)
            self._cache[key] = d
        return d

    def diameter(self) -> float:
        return max(
            (self.distance(i, j) for i in range(self.size) for j in range(i + 1, self.size)),
            default=0.0,
        )

    def spot_check(self, max_points: int = 8) -> None:
        """Validate d(i,i)=0, symmetry, and the triangle inequality on a
        deterministic index sample; raises VerificationError on violation."""
        if self.size <= max_points:
            sample = range(self.size)
        else:
            stride = max(1, self.size // max_points)
            sample = range(0, self.size, stride)[:max_points]
        pts = list(sample)
        for i in pts:
            if self.pair_distance(i, i) != 0.0:
                raise VerificationError(f"oracle {self.tag}: d({i},{i}) != 0")
        for a in pts:
            for b in pts:
                if a < b and self.pair_distance(a, b) != self.pair_distance(b, a):
                    raise VerificationError(f"oracle {self.tag}: asymmetric at ({a},{b})")
        for a in pts:
            for b in pts:
                for c in pts:
                    if not tolerant_leq(self.distance(a, c), self.distance(a, b) + self.distance(b, c)):
                        raise VerificationError(
                            f"oracle {self.tag}: triangle inequality fails at ({a},{b},{c})"
                        )


def lambda_distance_oracle(
    space: MeasureSpace, family: FunctionFamily, p: "Exponent | float"
) -> DistanceOracle:
    """Oracle for the bounded F-norm distance between family members."""
    members = family.members
    return DistanceOracle(
        size=len(members),
        pair_distance=lambda i, j: lambda_distance(space, members[i], members[j], p),
        tag=f"lambda-distance(p={float(p.p if isinstance(p, Exponent) else p):g})",
    )


def lp_distance_oracle(
    space: MeasureSpace, family: FunctionFamily, p: "Exponent | float"
) -> DistanceOracle:
    """Oracle for the L^p distance between family members."""
    members = family.members
    return DistanceOracle(
        size=len(members),
        pair_distance=lambda i, j: lp_distance(space, members[i], members[j], p),
        tag=f"lp-distance(p={float(p.p if isinstance(p, Exponent) else p):g})",
    )


@dataclass(frozen=True)
class CoveringCertificate:
    """Verifiable evidence that a family is epsilon-coverable.

    ``assignment`` maps every member to its center with the distance that
    was recorded when the certificate was built; validity means each
    recorded distance is accurate and <= epsilon, and each center is a
    family member.
    """

    epsilon: float
    center_indices: tuple[int, ...]
    assignment: tuple[tuple[int, int, float], ...]  # (member, center, distance)

    @property
    def size(self) -> int:
        return len(self.center_indices)

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "centers": list(self.center_indices),
            "assignment": [[m, c, d] for m, c, d in self.assignment],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CoveringCertificate":
        return cls(
            epsilon=float(obj["epsilon"]),
            center_indices=tuple(int(c) for c in obj["centers"]),
            assignment=tuple((int(m), int(c), float(d)) for m, c, d in obj["assignment"]),
        )


@dataclass(frozen=True)
class PackingWitness:
    """Verifiable evidence of epsilon-separation: all pairwise distances
    among the listed points exceed epsilon."""

    epsilon: float
    point_indices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.point_indices)

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "points": list(self.point_indices)}

    @classmethod
    def from_json(cls, obj: dict) -> "PackingWitness":
        return cls(epsilon=float(obj["epsilon"]), point_indices=tuple(int(i) for i in obj["points"]))


def certificate_from_json(obj: dict) -> "CoveringCertificate | PackingWitness":
    """Dispatch on the schema: covers carry 'assignment', packings 'points'."""
    if "assignment" in obj:
        return CoveringCertificate.from_json(obj)
    if "points" in obj:
        return PackingWitness.from_json(obj)
    raise ValueError("not a certificate: expected 'assignment' or 'points' key")


def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not math.isfinite(epsilon) or epsilon <= 0.0:
        raise ValueError(f"epsilon must be a positive finite real, got {epsilon!r}")
    return epsilon


def _check_points(points: FunctionFamily, d: DistanceOracle) -> None:
    if len(points) != d.size:
        raise ValueError(f"oracle covers {d.size} points but the family has {len(points)}")


def greedy_cover(points: FunctionFamily, d: DistanceOracle, epsilon: float) -> CoveringCertificate:
    """Deterministic greedy epsilon-net: repeatedly promote the lowest-index
    uncovered member to a center and cover everything within epsilon of it.

    Members keep the first center that covers them.  Not guaranteed
    minimal; the size is bounded by that of any epsilon/2 cover.
    """
    epsilon = _check_epsilon(epsilon)
    _check_points(points, d)
    n = d.size
    assigned: dict[int, tuple[int, float]] = {}
    centers: list[int] = []
    for i in range(n):
        if i in assigned:
            continue
        centers.append(i)
        for j in range(i, n):
            if j in assigned:
                continue
            dij = d.distance(i, j)
            if dij <= epsilon:
                assigned[j] = (i, dij)
    assignment = tuple((j, assigned[j][0], assigned[j][1]) for j in range(n))
    return CoveringCertificate(epsilon, tuple(centers), assignment)


def greedy_packing(points: FunctionFamily, d: DistanceOracle, epsilon: float) -> PackingWitness:
    """Deterministic greedy epsilon-packing, maximal by construction: scan
    by index and keep a point iff it is > epsilon from everything kept."""
    epsilon = _check_epsilon(epsilon)
    _check_points(points, d)
    chosen: list[int] = []
    for i in range(d.size):
        if all(d.distance(i, c) > epsilon for c in chosen):
            chosen.append(i)
    return PackingWitness(epsilon, tuple(chosen))


def verify_certificate(
    cert: "CoveringCertificate | PackingWitness", d: DistanceOracle
) -> bool:
    """Recompute every recorded distance and check the certificate's
    invariants; raises IndexError on dangling point indices."""
    if isinstance(cert, CoveringCertificate):
        for c in cert.center_indices:
            d._check_index(c)
        for m, c, _ in cert.assignment:
            d._check_index(m)
            d._check_index(c)
        if cert.epsilon <= 0.0:
            return False
        if len(set(cert.center_indices)) != len(cert.center_indices):
            return False
        if sorted(m for m, _, _ in cert.assignment) != list(range(d.size)):
            return False
        centers = set(cert.center_indices)
        for m, c, recorded in cert.assignment:
            if c not in centers:
                return False
            actual = d.distance(m, c)
            # Recorded distances must be exact; the radius comparison gets
            # the documented float slack so transfer chains that meet the
            # radius with mathematical equality are not rejected by an ulp.
            if actual != recorded or not tolerant_leq(actual, cert.epsilon):
                return False
        return True
    if isinstance(cert, PackingWitness):
        for i in cert.point_indices:
            d._check_index(i)
        if cert.epsilon <= 0.0:
            return False
        pts = cert.point_indices
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if d.distance(pts[a], pts[b]) <= cert.epsilon:
                    return False
        return True
    raise TypeError(f"not a certificate: {type(cert).__name__}")
