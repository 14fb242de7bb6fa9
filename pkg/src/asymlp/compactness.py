"""Total-boundedness certification for function families at desk scale.

The engine checks two finite, decidable conditions over a grid of clamp
levels M:

  (i)  uniform clamp approximation -- the sup over the family of the
       bounded-F-norm clamp error, which by the level-set sandwich is
       equivalent to almost equiboundedness (sup mu(|f| > M) -> 0);
  (ii) coverability of the clamped family in L^p at each fixed level.

From (i)+(ii) a verified net for the family under the bounded distance is
assembled with an eps/2 + eps/2 split: pick the first grid level whose sup
clamp error is below eps/2, cover the clamped family in L^p at eps/2, and
lift the centers back to the family; the lifted certificate is verified
directly under the bounded distance before it is reported.

Any concrete finite family is trivially totally bounded, so single-family
verdicts speak only about the requested scale: "certified-net" embeds a
verified net at eps, "refuted-at-scale" means the family is epsilon-
separated (the greedy packing captures every member, so no ball holds two
of them), and "inconclusive" is mandatory whenever neither holds.  The
asymptotic question is addressed by ``ladder_trend``, which reruns the
engine along a growth-index ladder and judges trends; it never claims
asymptotic truth, only certificates and trends.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .covering import (
    CoveringCertificate,
    PackingWitness,
    greedy_cover,
    greedy_packing,
    lambda_distance_oracle,
    lp_distance_oracle,
    verify_certificate,
)
from .errors import ConfigurationError, VerificationError
from .measure import FunctionFamily, level_set_measure
from .metrics import Exponent, _pvalue, lambda_distance, lp_distance, tolerant_leq
from . import truncation


@dataclass(frozen=True)
class LevelGrid:
    """Strictly increasing positive clamp levels to sweep."""

    levels: tuple[float, ...]

    def __post_init__(self) -> None:
        levels = tuple(float(m) for m in self.levels)
        if not levels:
            raise ConfigurationError("level grid must be non-empty")
        for m in levels:
            if not math.isfinite(m) or m <= 0.0:
                raise ConfigurationError(f"grid levels must be positive finite reals, got {m!r}")
        if any(a >= b for a, b in zip(levels, levels[1:])):
            raise ConfigurationError("grid levels must be strictly increasing")
        object.__setattr__(self, "levels", levels)


def default_level_grid(max_level: float = 16.0) -> LevelGrid:
    """Geometric ladder {1, 2, 4, ..., max_level} augmented with M+1
    companions, so every power level has its (M, M+1) pair available."""
    if max_level < 1.0:
        raise ConfigurationError("grid maximum must be >= 1")
    levels: set[float] = set()
    m = 1.0
    while m <= max_level:
        levels.add(m)
        levels.add(m + 1.0)
        m *= 2.0
    return LevelGrid(tuple(sorted(levels)))


@dataclass(frozen=True)
class ProfileEntry:
    level: float
    sup_truncation_error: float
    sup_level_set_measure: float


@dataclass(frozen=True)
class ConditionProfile:
    """Per-level records (M, sup clamp error, sup level-set measure) for one
    family; the error column is nonincreasing along the grid."""

    family_label: str
    p: float
    entries: tuple[ProfileEntry, ...]

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        if not entries:
            raise ValueError("profile must contain at least one level")
        for e in entries:
            if e.sup_truncation_error < 0.0 or e.sup_level_set_measure < 0.0:
                raise ValueError("profile entries must be nonnegative")
        for a, b in zip(entries, entries[1:]):
            if a.level >= b.level:
                raise ValueError("profile levels must be strictly increasing")
            if not tolerant_leq(b.sup_truncation_error, a.sup_truncation_error):
                raise ValueError("sup clamp error must be nonincreasing along the grid")
        object.__setattr__(self, "entries", entries)

    def min_level_below(self, threshold: float) -> float | None:
        """Smallest grid level whose sup clamp error is strictly below
        threshold, or None if the grid never gets there."""
        for e in self.entries:
            if e.sup_truncation_error < threshold:
                return e.level
        return None

    def to_json(self) -> dict:
        return {
            "family_label": self.family_label,
            "p": self.p,
            "entries": [
                {
                    "level": e.level,
                    "sup_truncation_error": e.sup_truncation_error,
                    "sup_level_set_measure": e.sup_level_set_measure,
                }
                for e in self.entries
            ],
        }


VERDICT_CERTIFIED = "certified-net"
VERDICT_REFUTED = "refuted-at-scale"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CompactnessReport:
    """Single-family verdict with the evidence that backs it.

    ``cover_sizes`` records, for every grid level, the size of the greedy
    L^p cover of the clamped family at radius epsilon/2 (the radius the
    net assembly would use at that level).  ``chosen_level`` is the grid
    level the assembly actually used, when it ran.
    """

    family_label: str
    p: float
    epsilon: float
    profile: ConditionProfile
    cover_sizes: tuple[tuple[float, int], ...]
    chosen_level: float | None
    net: CoveringCertificate | None
    packing: PackingWitness | None
    verdict: str

    def __post_init__(self) -> None:
        if self.verdict == VERDICT_CERTIFIED and self.net is None:
            raise ValueError("a certified-net verdict requires an embedded net")

    def to_json(self) -> dict:
        return {
            "family_label": self.family_label,
            "p": self.p,
            "epsilon": self.epsilon,
            "verdict": self.verdict,
            "chosen_level": self.chosen_level,
            "profile": self.profile.to_json(),
            "cover_sizes": [[level, size] for level, size in self.cover_sizes],
            "net": self.net.to_json() if self.net is not None else None,
            "packing": self.packing.to_json() if self.packing is not None else None,
        }


def condition_i_profile(
    family: FunctionFamily, p: "Exponent | float", grid: LevelGrid
) -> ConditionProfile:
    """Sweep the grid and record, per level, the exact max over members of
    the clamp-error F-norm and of the level-set measure mu(|f| > M)."""
    q = _pvalue(p)
    space = family.space
    entries = []
    for m in grid.levels:
        sup_err = max(
            truncation.truncation_error_fnorm(space, f, m, q) for f in family.members
        )
        sup_measure = max(level_set_measure(space, f, m) for f in family.members)
        entries.append(ProfileEntry(m, sup_err, sup_measure))
    return ConditionProfile(family.label, q, tuple(entries))


def check_almost_equibounded_equivalence(profile: ConditionProfile) -> bool:
    """Check the level-set sandwich on every (M, M+1) pair in the profile:

        sup_err(M)^p <= sup_measure(M)   and   sup_measure(M+1) <= sup_err(M)^p.

    Both are theorems for exact arithmetic; a False return indicates a
    falsified profile (or an implementation bug).  Raises
    ConfigurationError if the grid contains no (M, M+1) pair.
    """
    by_level = {e.level: e for e in profile.entries}
    pairs = [
        (e, by_level[e.level + 1.0]) for e in profile.entries if e.level + 1.0 in by_level
    ]
    if not pairs:
        raise ConfigurationError("profile grid contains no (M, M+1) pair")
    q = profile.p
    for low, high in pairs:
        err_p = low.sup_truncation_error**q
        if not tolerant_leq(err_p, low.sup_level_set_measure):
            return False
        if not tolerant_leq(high.sup_level_set_measure, err_p):
            return False
    return True


def _truncated_family(family: FunctionFamily, level: float) -> FunctionFamily:
    return FunctionFamily(
        family.space,
        tuple(truncation.truncate(f, level) for f in family.members),
        label=f"{family.label}@clamp{level:g}",
        growth_index=family.growth_index,
    )


def condition_ii_check(
    family: FunctionFamily,
    level: float,
    p: "Exponent | float",
    epsilon: float,
) -> tuple[CoveringCertificate, int]:
    """Clamp every member at ``level`` and greedily cover the clamped family
    in L^p at ``epsilon``; returns the verified certificate and its size."""
    clamped = _truncated_family(family, truncation._mvalue(level))
    oracle = lp_distance_oracle(family.space, clamped, p)
    cert = greedy_cover(clamped, oracle, epsilon)
    if not verify_certificate(cert, oracle):
        raise VerificationError("greedy L^p cover failed self-verification")
    return cert, cert.size


def transfer_net_to_truncations(
    family: FunctionFamily,
    net: CoveringCertificate,
    level: "float | truncation.TruncationLevel",
    p: "Exponent | float",
) -> CoveringCertificate:
    """Push a verified bounded-distance net through the clamp at ``level``.

    Given a net for the family at radius eps' under the bounded distance,
    the same center indices cover the clamped family in L^p at radius
    C_M * eps' with C_M = max{1, 2M}: clamped pairs are M-bounded, so their
    L^p distance is at most C_M times their bounded distance, which the
    clamp only contracts.  The output is re-verified; failure means the
    chain above was violated and is raised as VerificationError.
    """
    m = truncation._mvalue(level)
    space = family.space
    lam = lambda_distance_oracle(space, family, p)
    if not verify_certificate(net, lam):
        raise ValueError("input net does not verify under the bounded distance")
    clamped = _truncated_family(family, m)
    cm = truncation.lipschitz_constant_cm(m)
    oracle = lp_distance_oracle(space, clamped, p)
    assignment = tuple(
        (member, center, oracle.distance(member, center))
        for member, center, _ in net.assignment
    )
    out = CoveringCertificate(cm * net.epsilon, net.center_indices, assignment)
    if not verify_certificate(out, oracle):
        raise VerificationError(
            "clamped net failed verification: the C_M transfer chain was violated"
        )
    return out


def assemble_lambda_net(
    family: FunctionFamily,
    p: "Exponent | float",
    epsilon: float,
    grid: LevelGrid,
) -> CompactnessReport:
    """Run the eps/2 + eps/2 net assembly and return a verdict report.

    Degenerate inputs short-circuit: a single-member family is certified
    with a radius-0 net, and an epsilon above the family diameter yields a
    one-center net.  A family whose greedy packing at epsilon captures
    every member is epsilon-separated, so no ball holds two members and
    the verdict is refuted-at-scale.  Otherwise the assembly picks the
    first grid level with sup clamp error < eps/2, covers the clamped
    family in L^p at eps/2, lifts the centers, and verifies the lifted net
    directly under the bounded distance at epsilon.
    """
    epsilon = float(epsilon)
    if not math.isfinite(epsilon) or epsilon <= 0.0:
        raise ValueError(f"epsilon must be a positive finite real, got {epsilon!r}")
    q = _pvalue(p)
    space = family.space
    n = len(family)

    profile = condition_i_profile(family, q, grid)
    cover_sizes = tuple(
        (m, condition_ii_check(family, m, q, epsilon / 2.0)[1]) for m in grid.levels
    )

    lam = lambda_distance_oracle(space, family, q)
    lam.spot_check()

    def report(chosen, net, packing, verdict):
        return CompactnessReport(
            family_label=family.label,
            p=q,
            epsilon=epsilon,
            profile=profile,
            cover_sizes=cover_sizes,
            chosen_level=chosen,
            net=net,
            packing=packing,
            verdict=verdict,
        )

    if n == 1:
        net = CoveringCertificate(epsilon, (0,), ((0, 0, 0.0),))
        return report(None, net, None, VERDICT_CERTIFIED)

    packing = greedy_packing(family, lam, epsilon)
    if packing.size == n:
        return report(None, None, packing, VERDICT_REFUTED)

    if epsilon > lam.diameter():
        assignment = tuple((j, 0, lam.distance(j, 0)) for j in range(n))
        net = CoveringCertificate(epsilon, (0,), assignment)
        if not verify_certificate(net, lam):
            raise VerificationError("diameter short-circuit produced an invalid net")
        return report(None, net, None, VERDICT_CERTIFIED)

    chosen = profile.min_level_below(epsilon / 2.0)
    if chosen is None:
        verdict = VERDICT_REFUTED if packing.size > 1 else VERDICT_INCONCLUSIVE
        return report(None, None, packing if packing.size > 1 else None, verdict)

    lp_cert, _ = condition_ii_check(family, chosen, q, epsilon / 2.0)
    lifted_assignment = tuple(
        (member, center, lam.distance(member, center))
        for member, center, _ in lp_cert.assignment
    )
    lifted = CoveringCertificate(epsilon, lp_cert.center_indices, lifted_assignment)
    if verify_certificate(lifted, lam):
        return report(chosen, lifted, None, VERDICT_CERTIFIED)
    # The lift is guaranteed only up to 3*eps/2 for self-centered nets; a
    # direct miss at eps is honest inconclusive evidence, not a refutation.
    return report(chosen, None, packing if packing.size > 1 else None, VERDICT_INCONCLUSIVE)


def bounded_family_equivalence(
    family: FunctionFamily,
    m0: float,
    p: "Exponent | float",
    epsilon: float,
) -> bool:
    """On a family bounded by m0, verify both transfer directions between
    L^p covers and bounded-distance covers.

    An L^p cover at epsilon is a valid bounded-distance cover at epsilon
    (the bounded distance never exceeds the L^p distance), and a
    bounded-distance cover at epsilon / max{1, 2*m0} clamps through to a
    valid L^p cover at epsilon.  Returns whether both certificates verify;
    every member must satisfy sup|f| <= m0 or ValueError is raised.
    """
    m0 = float(m0)
    if m0 <= 0.0 or not math.isfinite(m0):
        raise ValueError(f"m0 must be a positive finite real, got {m0!r}")
    for f in family.members:
        if f.sup_abs() > m0:
            raise ValueError(
                f"family {family.label!r} has a member with sup |f| = {f.sup_abs()} > {m0}"
            )
    q = _pvalue(p)
    space = family.space
    lam = lambda_distance_oracle(space, family, q)
    lp = lp_distance_oracle(space, family, q)

    lp_cover = greedy_cover(family, lp, epsilon)
    lifted = CoveringCertificate(
        epsilon,
        lp_cover.center_indices,
        tuple((m, c, lam.distance(m, c)) for m, c, _ in lp_cover.assignment),
    )
    forward_ok = verify_certificate(lifted, lam)

    cm = truncation.lipschitz_constant_cm(m0)
    lam_cover = greedy_cover(family, lam, epsilon / cm)
    try:
        transferred = transfer_net_to_truncations(family, lam_cover, m0, q)
    except VerificationError:
        return False
    backward_ok = transferred.epsilon <= epsilon * (1.0 + 1e-12)
    return forward_ok and backward_ok


@dataclass(frozen=True)
class TrendRow:
    index: int
    cover_size: int
    packing_size: int
    min_level_for_half_epsilon: float | None


TREND_CONSISTENT = "TB-consistent"
TREND_REFUTING = "TB-refuting"
TREND_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class LadderTrend:
    """Cover/packing sizes as functions of the growth index, with one
    three-valued trend verdict; per-index reports ride along."""

    p: float
    epsilon: float
    rows: tuple[TrendRow, ...]
    verdict: str
    reports: tuple[CompactnessReport, ...]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "epsilon": self.epsilon,
            "verdict": self.verdict,
            "rows": [
                {
                    "index": r.index,
                    "cover_size": r.cover_size,
                    "packing_size": r.packing_size,
                    "min_M_for_half_epsilon": r.min_level_for_half_epsilon,
                }
                for r in self.rows
            ],
            "reports": [r.to_json() for r in self.reports],
        }


def trend_to_csv(trend: LadderTrend) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "cover_size", "packing_size", "min_M_for_half_epsilon"])
    for r in trend.rows:
        min_level = "" if r.min_level_for_half_epsilon is None else repr(r.min_level_for_half_epsilon)
        writer.writerow([r.index, r.cover_size, r.packing_size, min_level])
    return buf.getvalue()


def ladder_trend(
    generator: Callable[[int], FunctionFamily],
    indices: Sequence[int],
    p: "Exponent | float",
    epsilon: float,
    grid: LevelGrid,
    threads: int = 1,
) -> LadderTrend:
    """Rerun the net assembly along a growth-index ladder and judge trends.

    Per index, the row records the greedy bounded-distance cover and
    packing sizes at epsilon plus the first grid level with sup clamp
    error below epsilon/2.  The verdict is "TB-refuting" if packing sizes
    grow strictly along the ladder, "TB-consistent" if every index
    certified, the cover size stabilized over the last two indices, and
    every index reached the epsilon/2 error threshold within the grid, and
    "inconclusive" otherwise.
    """
    indices = tuple(int(i) for i in indices)
    if not indices:
        raise ConfigurationError("ladder needs at least one growth index")
    if any(i < 1 for i in indices):
        raise ConfigurationError("ladder indices must be >= 1")
    if any(a >= b for a, b in zip(indices, indices[1:])):
        raise ConfigurationError("ladder indices must be strictly increasing")
    q = _pvalue(p)

    def run(index: int) -> tuple[TrendRow, CompactnessReport]:
        try:
            family = generator(index)
        except Exception as exc:  # surfaced with the failing index attached
            raise ValueError(f"family generator failed at index {index}: {exc}") from exc
        rep = assemble_lambda_net(family, q, epsilon, grid)
        lam = lambda_distance_oracle(family.space, family, q)
        cover = greedy_cover(family, lam, epsilon)
        packing = greedy_packing(family, lam, epsilon)
        row = TrendRow(
            index=index,
            cover_size=cover.size,
            packing_size=packing.size,
            min_level_for_half_epsilon=rep.profile.min_level_below(epsilon / 2.0),
        )
        return row, rep

    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(indices))) as pool:
            results = list(pool.map(run, indices))
    else:
        results = [run(i) for i in indices]
    rows = tuple(row for row, _ in results)
    reports = tuple(rep for _, rep in results)

    packing_growing = len(rows) >= 2 and all(
        a.packing_size < b.packing_size for a, b in zip(rows, rows[1:])
    )
    all_certified = all(r.verdict == VERDICT_CERTIFIED for r in reports)
    cover_stable = len(rows) < 2 or rows[-1].cover_size == rows[-2].cover_size
    error_uniform = all(r.min_level_for_half_epsilon is not None for r in rows)

    if packing_growing:
        verdict = TREND_REFUTING
    elif all_certified and cover_stable and error_uniform:
        verdict = TREND_CONSISTENT
    else:
        verdict = TREND_INCONCLUSIVE
    return LadderTrend(q, float(epsilon), rows, verdict, reports)
