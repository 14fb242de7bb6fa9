"""Randomized verification of the package's quantitative contracts.

Every check below is a theorem for exact arithmetic; failures indicate an
implementation bug (or a deliberately injected fault) and are reported with
the first counterexample found.  Checks draw from independent PCG64
streams spawned off one seed, so results are deterministic per (seed,
trials) and independent of check order.

Comparisons use the documented slack (1e-12 relative, 1e-15 floor) except
where the contract is exact: clamp-composition and the two clamp-error
computation routes must agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import compactness, covering, families, measure, metrics, truncation


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    trials: int
    counterexample: dict | None


def _space_and_values(rng: np.random.Generator, max_atoms: int = 32):
    n = int(rng.integers(1, max_atoms + 1))
    weights = 10.0 ** rng.uniform(-2.0, 0.7, size=n)
    space = measure.make_space(weights.tolist())
    return space, n


def _function(rng: np.random.Generator, space, n: int):
    values = rng.uniform(-15.0, 15.0, size=n)
    spikes = rng.random(n) < 0.1
    values[spikes] *= 10.0
    return measure.make_function(space, values.tolist())


def _draw_mp(rng: np.random.Generator) -> tuple[float, float]:
    m = float(rng.uniform(0.1, 10.0))
    p = float(rng.choice([1.0, 1.5, 2.0]))
    return m, p


def _instance_dump(space, fs, **extra) -> dict:
    dump = {"weights": list(space.weights)}
    for i, f in enumerate(fs):
        dump[f"values_{i}"] = list(f.values)
    dump.update(extra)
    return dump


def check_clamp_contraction(rng: np.random.Generator, trials: int) -> CheckResult:
    """Clamping never increases the bounded distance."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f, g = _function(rng, space, n), _function(rng, space, n)
        m, p = _draw_mp(rng)
        before = metrics.lambda_distance(space, f, g, p)
        after = metrics.lambda_distance(
            space, truncation.truncate(f, m), truncation.truncate(g, m), p
        )
        if not metrics.tolerant_leq(after, before):
            ce = _instance_dump(space, (f, g), m=m, p=p, clamped=after, unclamped=before)
            return CheckResult("clamp-contraction", False, t + 1, ce)
    return CheckResult("clamp-contraction", True, trials, None)


def check_bounded_pair_comparison(rng: np.random.Generator, trials: int) -> CheckResult:
    """On pairs bounded by M, the L^p distance sits between the bounded
    distance and max{1, 2M} times it."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        m, p = _draw_mp(rng)
        u = measure.make_function(space, rng.uniform(-m, m, size=n).tolist())
        v = measure.make_function(space, rng.uniform(-m, m, size=n).tolist())
        bounded = metrics.lambda_distance(space, u, v, p)
        full = metrics.lp_distance(space, u, v, p)
        cm = truncation.lipschitz_constant_cm(m)
        if not (metrics.tolerant_leq(bounded, full) and metrics.tolerant_leq(full, cm * bounded)):
            ce = _instance_dump(space, (u, v), m=m, p=p, cm=cm, bounded=bounded, full=full)
            return CheckResult("bounded-pair-comparison", False, t + 1, ce)
    return CheckResult("bounded-pair-comparison", True, trials, None)


def check_clamp_membership_bound(rng: np.random.Generator, trials: int) -> CheckResult:
    """||clamp(f)||_p <= max{1, M} * fnorm(f)."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f = _function(rng, space, n)
        m, p = _draw_mp(rng)
        lhs = metrics.lp_norm(space, truncation.truncate(f, m), p)
        rhs = max(1.0, m) * metrics.fnorm(space, f, p)
        if not metrics.tolerant_leq(lhs, rhs):
            ce = _instance_dump(space, (f,), m=m, p=p, lhs=lhs, rhs=rhs)
            return CheckResult("clamp-membership-bound", False, t + 1, ce)
    return CheckResult("clamp-membership-bound", True, trials, None)


def check_level_set_sandwich(rng: np.random.Generator, trials: int) -> CheckResult:
    """mu(|f| > M+1) <= clamp error^p <= mu(|f| > M)."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f = _function(rng, space, n)
        m, p = _draw_mp(rng)
        err_p = truncation.truncation_error_fnorm(space, f, m, p) ** p
        above = measure.level_set_measure(space, f, m + 1.0)
        below = measure.level_set_measure(space, f, m)
        if not (metrics.tolerant_leq(above, err_p) and metrics.tolerant_leq(err_p, below)):
            ce = _instance_dump(space, (f,), m=m, p=p, err_p=err_p, mu_above=above, mu_below=below)
            return CheckResult("level-set-sandwich", False, t + 1, ce)
    return CheckResult("level-set-sandwich", True, trials, None)


def check_clamp_error_route_agreement(rng: np.random.Generator, trials: int) -> CheckResult:
    """The (|f| - M)_+ route and fnorm(f - clamp(f)) agree bit for bit."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f = _function(rng, space, n)
        m, p = _draw_mp(rng)
        direct = truncation.truncation_error_fnorm(space, f, m, p)
        generic = metrics.fnorm(space, f - truncation.truncate(f, m), p)
        if direct != generic:
            ce = _instance_dump(space, (f,), m=m, p=p, direct=direct, generic=generic)
            return CheckResult("clamp-error-route-agreement", False, t + 1, ce)
    return CheckResult("clamp-error-route-agreement", True, trials, None)


def check_clamp_error_vanishing(rng: np.random.Generator, trials: int) -> CheckResult:
    """Clamp error is nonincreasing in M and zero once M >= sup |f|."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f = _function(rng, space, n)
        _, p = _draw_mp(rng)
        m1 = float(rng.uniform(0.1, 10.0))
        m2 = m1 + float(rng.uniform(0.0, 10.0))
        lo = truncation.truncation_error_fnorm(space, f, m2, p) if m2 > m1 else None
        hi = truncation.truncation_error_fnorm(space, f, m1, p)
        at_sup = truncation.truncation_error_fnorm(space, f, max(f.sup_abs(), 1e-9), p)
        ok = at_sup == 0.0 and (lo is None or metrics.tolerant_leq(lo, hi))
        if not ok:
            ce = _instance_dump(space, (f,), m1=m1, m2=m2, p=p, err_m1=hi, err_m2=lo, at_sup=at_sup)
            return CheckResult("clamp-error-vanishing", False, t + 1, ce)
    return CheckResult("clamp-error-vanishing", True, trials, None)


def check_clamp_composition_identity(rng: np.random.Generator, trials: int) -> CheckResult:
    """clamp(clamp(f, M2), M1) == clamp(f, min(M1, M2)), exactly."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f = _function(rng, space, n)
        m1 = float(rng.uniform(0.05, 12.0))
        m2 = float(rng.uniform(0.05, 12.0))
        composed = truncation.compose_truncations(f, m1, m2)
        single = truncation.truncate(f, min(m1, m2))
        if composed.values != single.values:
            ce = _instance_dump(space, (f,), m1=m1, m2=m2,
                                composed=list(composed.values), single=list(single.values))
            return CheckResult("clamp-composition-identity", False, t + 1, ce)
    return CheckResult("clamp-composition-identity", True, trials, None)


def check_fnorm_below_lp(rng: np.random.Generator, trials: int) -> CheckResult:
    """fnorm(f) <= lp_norm(f)."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f = _function(rng, space, n)
        _, p = _draw_mp(rng)
        a, b = metrics.fnorm(space, f, p), metrics.lp_norm(space, f, p)
        if not metrics.tolerant_leq(a, b):
            return CheckResult("fnorm-below-lp", False, t + 1,
                               _instance_dump(space, (f,), p=p, fnorm=a, lp=b))
    return CheckResult("fnorm-below-lp", True, trials, None)


def check_fnorm_below_total_measure(rng: np.random.Generator, trials: int) -> CheckResult:
    """fnorm(f) <= mu(X)^(1/p): the clipped integrand never exceeds one."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f = _function(rng, space, n)
        _, p = _draw_mp(rng)
        a = metrics.fnorm(space, f, p)
        b = space.total_measure ** (1.0 / p)
        if not metrics.tolerant_leq(a, b):
            return CheckResult("fnorm-below-total-measure", False, t + 1,
                               _instance_dump(space, (f,), p=p, fnorm=a, bound=b))
    return CheckResult("fnorm-below-total-measure", True, trials, None)


def check_triangle_inequality(rng: np.random.Generator, trials: int) -> CheckResult:
    """Bounded distance triangle inequality on random triples."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f, g, h = (_function(rng, space, n) for _ in range(3))
        _, p = _draw_mp(rng)
        fg = metrics.lambda_distance(space, f, g, p)
        gh = metrics.lambda_distance(space, g, h, p)
        fh = metrics.lambda_distance(space, f, h, p)
        if not metrics.tolerant_leq(fh, fg + gh):
            return CheckResult("triangle-inequality", False, t + 1,
                               _instance_dump(space, (f, g, h), p=p, fh=fh, fg=fg, gh=gh))
    return CheckResult("triangle-inequality", True, trials, None)


def check_distance_below_lp_distance(rng: np.random.Generator, trials: int) -> CheckResult:
    """Bounded distance never exceeds the L^p distance."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        f, g = _function(rng, space, n), _function(rng, space, n)
        _, p = _draw_mp(rng)
        a = metrics.lambda_distance(space, f, g, p)
        b = metrics.lp_distance(space, f, g, p)
        if not metrics.tolerant_leq(a, b):
            return CheckResult("distance-below-lp-distance", False, t + 1,
                               _instance_dump(space, (f, g), p=p, bounded=a, full=b))
    return CheckResult("distance-below-lp-distance", True, trials, None)


def check_measure_bridge_sandwich(rng: np.random.Generator, trials: int) -> CheckResult:
    """Level-set bounds sandwich fnorm(g)^p for every delta in (0, 1]."""
    for t in range(trials):
        space, n = _space_and_values(rng)
        g = _function(rng, space, n)
        _, p = _draw_mp(rng)
        delta = float(rng.uniform(1e-6, 1.0))
        lower, upper = metrics.measure_bridge_bounds(space, g, p, delta)
        mid = metrics.fnorm(space, g, p) ** p
        if not (metrics.tolerant_leq(lower, mid) and metrics.tolerant_leq(mid, upper)):
            return CheckResult("measure-bridge-sandwich", False, t + 1,
                               _instance_dump(space, (g,), p=p, delta=delta,
                                              lower=lower, mid=mid, upper=upper))
    return CheckResult("measure-bridge-sandwich", True, trials, None)


def _random_family(rng: np.random.Generator):
    n_members = int(rng.integers(2, 17))
    atoms = int(rng.integers(1, 9))
    weights = rng.uniform(0.1, 2.0, size=atoms)
    space = measure.make_space(weights.tolist())
    members = tuple(
        measure.make_function(space, rng.uniform(-3.0, 3.0, size=atoms).tolist())
        for _ in range(n_members)
    )
    return measure.FunctionFamily(space, members, label="random")


def check_cover_packing_duality(rng: np.random.Generator, trials: int) -> CheckResult:
    """Packing size at 2*eps never exceeds greedy cover size at eps, under
    both the bounded-distance and L^p oracles.  Quadratic cost, so this
    check runs trials/10 rounds."""
    rounds = max(1, trials // 10)
    for t in range(rounds):
        family = _random_family(rng)
        _, p = _draw_mp(rng)
        eps = float(rng.uniform(0.05, 1.5))
        for make_oracle in (covering.lambda_distance_oracle, covering.lp_distance_oracle):
            oracle = make_oracle(family.space, family, p)
            cover = covering.greedy_cover(family, oracle, eps)
            packing = covering.greedy_packing(family, oracle, 2.0 * eps)
            if packing.size > cover.size:
                ce = {"oracle": oracle.tag, "epsilon": eps, "p": p,
                      "packing_size": packing.size, "cover_size": cover.size,
                      "weights": list(family.space.weights)}
                return CheckResult("cover-packing-duality", False, t + 1, ce)
    return CheckResult("cover-packing-duality", True, rounds, None)


def check_greedy_determinism(rng: np.random.Generator, trials: int) -> CheckResult:
    """Identical inputs yield identical certificates.  Runs trials/10."""
    rounds = max(1, trials // 10)
    for t in range(rounds):
        family = _random_family(rng)
        _, p = _draw_mp(rng)
        eps = float(rng.uniform(0.05, 1.5))
        a = covering.lambda_distance_oracle(family.space, family, p)
        b = covering.lambda_distance_oracle(family.space, family, p)
        same_cover = covering.greedy_cover(family, a, eps) == covering.greedy_cover(family, b, eps)
        same_packing = covering.greedy_packing(family, a, eps) == covering.greedy_packing(family, b, eps)
        if not (same_cover and same_packing):
            return CheckResult("greedy-determinism", False, t + 1,
                               {"epsilon": eps, "p": p, "weights": list(family.space.weights)})
    return CheckResult("greedy-determinism", True, rounds, None)


def check_equibounded_equivalence_on_generators(
    rng: np.random.Generator, trials: int
) -> CheckResult:
    """Level-set sandwich inequalities hold on every profile produced from
    the built-in generators across the {8, 16, 32} ladder.  Fixed workload;
    the trial budget is ignored."""
    grid = compactness.default_level_grid(16.0)
    seed = int(rng.integers(0, 2**31))
    runs = 0
    for kind in ("vanishing-spike", "escaping-indicator", "constants", "bounded-random"):
        for n in (8, 16, 32):
            family = families.generate(families.GeneratorSpec(kind=kind, n=n, seed=seed))
            for p in (1.0, 2.0):
                profile = compactness.condition_i_profile(family, p, grid)
                runs += 1
                if not compactness.check_almost_equibounded_equivalence(profile):
                    ce = {"kind": kind, "n": n, "p": p, "seed": seed,
                          "profile": profile.to_json()}
                    return CheckResult("equibounded-equivalence-on-generators", False, runs, ce)
    return CheckResult("equibounded-equivalence-on-generators", True, runs, None)


ALL_CHECKS: dict[str, Callable[[np.random.Generator, int], CheckResult]] = {
    "clamp-contraction": check_clamp_contraction,
    "bounded-pair-comparison": check_bounded_pair_comparison,
    "clamp-membership-bound": check_clamp_membership_bound,
    "level-set-sandwich": check_level_set_sandwich,
    "clamp-error-route-agreement": check_clamp_error_route_agreement,
    "clamp-error-vanishing": check_clamp_error_vanishing,
    "clamp-composition-identity": check_clamp_composition_identity,
    "fnorm-below-lp": check_fnorm_below_lp,
    "fnorm-below-total-measure": check_fnorm_below_total_measure,
    "triangle-inequality": check_triangle_inequality,
    "distance-below-lp-distance": check_distance_below_lp_distance,
    "measure-bridge-sandwich": check_measure_bridge_sandwich,
    "cover-packing-duality": check_cover_packing_duality,
    "greedy-determinism": check_greedy_determinism,
    "equibounded-equivalence-on-generators": check_equibounded_equivalence_on_generators,
}


def run_all(seed: int, trials: int) -> list[CheckResult]:
    """Run every registered check on its own PCG64 stream."""
    if trials < 1:
        raise ValueError("trial count must be >= 1")
    results = []
    for k, (name, fn) in enumerate(ALL_CHECKS.items()):
        stream = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(k,)))
        )
        results.append(fn(stream, trials))
    return results


def summary_json(seed: int, trials: int, results: list[CheckResult]) -> dict:
    return {
        "seed": seed,
        "trials": trials,
        "all_passed": all(r.passed for r in results),
        "results": [
            {
                "name": r.name,
                "passed": r.passed,
                "trials": r.trials,
                "counterexample": r.counterexample,
            }
            for r in results
        ],
    }
