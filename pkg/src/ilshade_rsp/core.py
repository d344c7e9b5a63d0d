"""Shared domain types: search bounds, objective functions, populations and
the seeded random stream every stochastic operator draws from."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class RngStream:
    """Seeded pseudo-random stream with a fixed, minimal draw vocabulary.

    Every stochastic operation in this package takes an explicit RngStream;
    there is no global randomness. Identical seeds give bit-identical draw
    sequences, which the reproducibility tests rely on. Tests may substitute
    any object exposing the same four methods (a "scripted" stream).
    """

    def __init__(self, seed=None):
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def uniform(self) -> float:
        """One float from uniform [0, 1)."""
        return float(self._gen.random())

    def uniforms(self, n: int) -> np.ndarray:
        """n floats from uniform [0, 1); consumes the stream exactly like n
        successive uniform() calls."""
        return self._gen.random(n)

    def integers(self, low: int, high: int) -> int:
        """One integer from uniform [low, high)."""
        return int(self._gen.integers(low, high))

    def normal(self) -> float:
        """One standard normal draw."""
        return float(self._gen.standard_normal())

    def exponential(self) -> float:
        """One standard exponential draw (mean 1)."""
        return float(self._gen.standard_exponential())


@dataclass(frozen=True)
class Bounds:
    """Box constraints [lower, upper]^D of a search space."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.ndim != 1 or upper.shape != lower.shape:
            raise ValueError("lower and upper must be 1-D vectors of equal length")
        if lower.size < 1:
            raise ValueError("dimension must be at least 1")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")

    @property
    def dimension(self) -> int:
        return self.lower.size

    @staticmethod
    def symmetric(dimension: int, half_width: float = 100.0) -> "Bounds":
        return Bounds(np.full(dimension, -half_width), np.full(dimension, half_width))

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass(frozen=True)
class ObjectiveFunction:
    """A bounded D-dimensional minimization problem.

    `evaluate` must be deterministic and stateless: the engine caches values
    and never re-evaluates an unchanged vector, and concurrent runs share the
    same instance.
    """

    name: str
    dimension: int
    bounds: Bounds
    evaluate: Callable[[np.ndarray], float]
    optimum_value: Optional[float] = None
    optimizer: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.bounds.dimension != self.dimension:
            raise ValueError(
                f"bounds dimension {self.bounds.dimension} != declared {self.dimension}"
            )

    def __call__(self, x: np.ndarray) -> float:
        return float(self.evaluate(np.asarray(x, dtype=float)))


@dataclass
class Population:
    """Per-run evolving state: member vectors, cached objective values,
    per-member control parameters, the external archive and budget counters."""

    xs: np.ndarray              # (NP, D) decision vectors
    fs: np.ndarray              # (NP,) cached objective values
    Fs: np.ndarray              # (NP,) per-member scale factors
    CRs: np.ndarray             # (NP,) per-member crossover rates
    archive_x: list = field(default_factory=list)
    archive_f: list = field(default_factory=list)
    generation: int = 0
    nfe: int = 0
    nfe_max: int = 0

    @property
    def size(self) -> int:
        return self.xs.shape[0]

    @property
    def dimension(self) -> int:
        return self.xs.shape[1]

    def sort_by_fitness(self):
        """Reorder members best-first (stable on ties)."""
        order = np.argsort(self.fs, kind="stable")
        self.xs = self.xs[order]
        self.fs = self.fs[order]
        self.Fs = self.Fs[order]
        self.CRs = self.CRs[order]


def initialize_population(np_init, obj: ObjectiveFunction, rng) -> Population:
    """Spread np_init members uniformly over the search box and evaluate them.

    Component j of member i is lower[j] + u * (upper[j] - lower[j]) with an
    independent u ~ uniform[0, 1) per component, drawn member-major.
    """
    if np_init < 4:
        raise ValueError("initial population size must be at least 4")
    d = obj.dimension
    lo, hi = obj.bounds.lower, obj.bounds.upper
    xs = np.empty((np_init, d))
    for i in range(np_init):
        xs[i] = lo + rng.uniforms(d) * (hi - lo)
    fs = np.array([obj(x) for x in xs])
    return Population(
        xs=xs,
        fs=fs,
        Fs=np.full(np_init, np.nan),
        CRs=np.full(np_init, np.nan),
        nfe=np_init,
    )


def repair_bounds(x: np.ndarray, parent: np.ndarray, bounds: Bounds) -> np.ndarray:
    """Pull each out-of-bounds component to the midpoint between the violated
    bound and the (feasible) parent; feasible components pass through."""
    lo, hi = bounds.lower, bounds.upper
    out = np.array(x, dtype=float, copy=True)
    below = out < lo
    above = out > hi
    out[below] = (lo[below] + parent[below]) / 2.0
    out[above] = (hi[above] + parent[above]) / 2.0
    return out
