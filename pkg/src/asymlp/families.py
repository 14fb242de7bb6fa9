"""Deterministic instance generators for the covering engine.

Four built-in kinds, each parameterized by a growth index n:

- ``vanishing-spike``: weights 2^-i on atoms i = 1..n, member k is the
  spike k * indicator(atom k).  Clamp errors and level sets vanish along
  the grid and the clamped families stay coverable (positive instance).
- ``escaping-indicator``: n unit atoms, member k = indicator(atom k).
  Pairwise bounded distance is 2^(1/p), so the family is epsilon-separated
  at any epsilon < 2^(1/p) (negative instance via coverability).
- ``constants``: member k is the constant k on a fixed two-atom space of
  total measure 2; sup mu(|f| > M) is pinned at mu(X) (negative instance
  via almost equiboundedness).
- ``bounded-random``: seeded values uniform in [-bound, bound] on ``atoms``
  atoms with uniform(0.5, 1.5) * weight_scale weights; fodder for the
  bounded-family equivalence checks.

Pseudo-randomness is pinned to numpy's PCG64 seeded through SeedSequence
(entropy = seed, spawn key = growth index), so identical specs reproduce
byte-identical families on any platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .measure import FunctionFamily, MeasureSpace, make_function, make_space

KINDS = (
    "vanishing-spike",
    "escaping-indicator",
    "constants",
    "bounded-random",
    "custom-json",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one family: kind, growth index, and value/weight laws."""

    kind: str
    n: int
    seed: int = 0
    bound: float = 2.0
    atoms: int = 16
    weight_scale: float = 1.0
    path: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ValueError("growth index must be >= 1")
        if self.bound <= 0.0:
            raise ValueError("value bound must be positive")
        if self.atoms < 1:
            raise ValueError("atom count must be >= 1")
        if self.weight_scale <= 0.0:
            raise ValueError("weight scale must be positive")
        if self.kind == "custom-json" and not self.path:
            raise ValueError("custom-json generator needs a file path")


def _vanishing_spike(n: int) -> FunctionFamily:
    space = make_space([2.0**-i for i in range(1, n + 1)])
    members = []
    for k in range(1, n + 1):
        values = [0.0] * n
        values[k - 1] = float(k)
        members.append(make_function(space, values))
    return FunctionFamily(space, tuple(members), label=f"vanishing-spike-{n}", growth_index=n)


def _escaping_indicator(n: int) -> FunctionFamily:
    space = make_space([1.0] * n)
    members = []
    for k in range(n):
        values = [0.0] * n
        values[k] = 1.0
        members.append(make_function(space, values))
    return FunctionFamily(space, tuple(members), label=f"escaping-indicator-{n}", growth_index=n)


def _constants(n: int) -> FunctionFamily:
    space = make_space([1.0, 1.0])
    members = tuple(make_function(space, [float(k), float(k)]) for k in range(1, n + 1))
    return FunctionFamily(space, members, label=f"constants-{n}", growth_index=n)


def _bounded_random(spec: GeneratorSpec) -> FunctionFamily:
    seq = np.random.SeedSequence(entropy=spec.seed, spawn_key=(spec.n,))
    rng = np.random.Generator(np.random.PCG64(seq))
    weights = spec.weight_scale * rng.uniform(0.5, 1.5, size=spec.atoms)
    space = make_space(weights.tolist())
    values = rng.uniform(-spec.bound, spec.bound, size=(spec.n, spec.atoms))
    members = tuple(make_function(space, row.tolist()) for row in values)
    label = f"bounded-random-{spec.n}-seed{spec.seed}"
    return FunctionFamily(space, members, label=label, growth_index=spec.n)


def load_family_file(path: "str | Path") -> FunctionFamily:
    """Read a {"space": {...}, "family": {...}} JSON document."""
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or "space" not in obj or "family" not in obj:
        raise ValueError("family file must be an object with 'space' and 'family' keys")
    space = MeasureSpace.from_json(obj["space"])
    return FunctionFamily.from_json(obj["family"], space)


def generate(spec: GeneratorSpec) -> FunctionFamily:
    """Produce the family described by ``spec``; identical specs yield
    byte-identical families."""
    if spec.kind == "vanishing-spike":
        return _vanishing_spike(spec.n)
    if spec.kind == "escaping-indicator":
        return _escaping_indicator(spec.n)
    if spec.kind == "constants":
        return _constants(spec.n)
    if spec.kind == "bounded-random":
        return _bounded_random(spec)
    assert spec.kind == "custom-json"
    return load_family_file(spec.path)


def family_generator(spec: GeneratorSpec) -> Callable[[int], FunctionFamily]:
    """Curry a spec into an index -> family map for ladder runs."""

    def produce(index: int) -> FunctionFamily:
        return generate(replace(spec, n=index))

    return produce
