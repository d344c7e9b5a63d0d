"""Benchmark problems: classic analytic test functions plus a shifted/rotated
wrapper that loads externally supplied transform data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import Bounds, ObjectiveFunction

DEFAULT_HALF_WIDTH = 100.0


def _sphere(x):
    return float(np.sum(x * x))


def _ellipsoid(x):
    # Rotated hyper-ellipsoid: nested cumulative sums squared.
    c = np.cumsum(x)
    return float(np.sum(c * c))


def _rastrigin(x):
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * math.pi * x)))


def _rosenbrock(x):
    return float(
        np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2)
    )


def _ackley(x):
    d = x.size
    s1 = np.sum(x * x) / d
    s2 = np.sum(np.cos(2.0 * math.pi * x)) / d
    return float(20.0 + math.e - 20.0 * math.exp(-0.2 * math.sqrt(s1)) - math.exp(s2))


def _griewank(x):
    idx = np.sqrt(np.arange(1, x.size + 1))
    return float(1.0 + np.sum(x * x) / 4000.0 - np.prod(np.cos(x / idx)))


@lru_cache(maxsize=None)
def _trig_data(dim: int):
    # Fixed per-dimension data so the function is deterministic across runs.
    gen = np.random.Generator(np.random.PCG64(20200617 + dim))
    a = gen.integers(-100, 101, size=(dim, dim)).astype(float)
    b = gen.integers(-100, 101, size=(dim, dim)).astype(float)
    alpha = gen.uniform(-math.pi, math.pi, size=dim)
    target = a @ np.sin(alpha) + b @ np.cos(alpha)
    return a, b, alpha, target


def _trig_optimum(dim: int):
    return _trig_data(dim)[2]


def _trig(x):
    # Schwefel 2.13 style: squared residuals of a trigonometric system whose
    # solution is a fixed random angle vector.
    a, b, _, target = _trig_data(x.size)
    cur = a @ np.sin(x) + b @ np.cos(x)
    r = target - cur
    return float(np.sum(r * r))


# id -> (evaluate, canonical optimizer factory)
_BASE_FUNCTIONS = {
    "sphere": (_sphere, lambda d: np.zeros(d)),
    "ellipsoid": (_ellipsoid, lambda d: np.zeros(d)),
    "rastrigin": (_rastrigin, lambda d: np.zeros(d)),
    "rosenbrock": (_rosenbrock, lambda d: np.ones(d)),
    "ackley": (_ackley, lambda d: np.zeros(d)),
    "griewank": (_griewank, lambda d: np.zeros(d)),
    "trig": (_trig, _trig_optimum),
}


def list_problems():
    return sorted(_BASE_FUNCTIONS)


def evaluate_base(base_id: str, x) -> float:
    if base_id not in _BASE_FUNCTIONS:
        raise KeyError(f"unknown base function {base_id!r}")
    return _BASE_FUNCTIONS[base_id][0](np.asarray(x, dtype=float))


def base_optimizer(base_id: str, dimension: int) -> np.ndarray:
    if base_id not in _BASE_FUNCTIONS:
        raise KeyError(f"unknown base function {base_id!r}")
    return np.asarray(_BASE_FUNCTIONS[base_id][1](dimension), dtype=float)


def get_problem(base_id: str, dimension: int, half_width: float = DEFAULT_HALF_WIDTH) -> ObjectiveFunction:
    """Untransformed base problem on the symmetric default box."""
    if dimension < 1:
        raise ValueError("dimension must be positive")
    evaluate = _BASE_FUNCTIONS.get(base_id)
    if evaluate is None:
        raise KeyError(f"unknown base function {base_id!r}")
    fn = evaluate[0]
    return ObjectiveFunction(
        name=base_id,
        dimension=dimension,
        bounds=Bounds.symmetric(dimension, half_width),
        evaluate=lambda x, _fn=fn: _fn(np.asarray(x, dtype=float)),
        optimum_value=0.0,
        optimizer=base_optimizer(base_id, dimension),
    )


@dataclass(frozen=True)
class ProblemSpec:
    """Shifted/rotated composition f_base(M (x - shift)) + bias."""

    name: str
    base_id: str
    dimension: int
    bounds: Bounds
    shift: np.ndarray
    rotation: np.ndarray
    bias: float = 0.0

    def __post_init__(self):
        d = self.dimension
        shift = np.asarray(self.shift, dtype=float)
        rotation = np.asarray(self.rotation, dtype=float)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "rotation", rotation)
        if shift.shape != (d,):
            raise ValueError("shift vector has wrong length")
        if rotation.shape != (d, d):
            raise ValueError("rotation matrix has wrong shape")
        if not np.allclose(rotation.T @ rotation, np.eye(d), atol=1e-9):
            raise ValueError("rotation matrix is not orthogonal within 1e-9")
        if not self.bounds.contains(shift):
            raise ValueError("shift vector lies outside the search bounds")
        if self.base_id not in _BASE_FUNCTIONS:
            raise KeyError(f"unknown base function {self.base_id!r}")

    @property
    def optimum_value(self) -> float:
        return self.bias

    @property
    def optimizer(self) -> np.ndarray:
        z_star = base_optimizer(self.base_id, self.dimension)
        return self.shift + self.rotation.T @ z_star

    def to_objective(self) -> ObjectiveFunction:
        return ObjectiveFunction(
            name=self.name,
            dimension=self.dimension,
            bounds=self.bounds,
            evaluate=lambda x: evaluate_transformed(self, x),
            optimum_value=self.optimum_value,
            optimizer=self.optimizer,
        )


def evaluate_transformed(spec: ProblemSpec, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dimension,):
        raise ValueError(f"expected a vector of length {spec.dimension}")
    z = spec.rotation @ (x - spec.shift)
    return evaluate_base(spec.base_id, z) + spec.bias


class ProblemDataError(ValueError):
    """Malformed problem data file."""


def load_problem_data(path, half_width: float = DEFAULT_HALF_WIDTH) -> ProblemSpec:
    """Parse a plain-text problem file.

    Layout: `name <string>`, `id <base-id>`, `dim <D>`, `bias <real>`, a
    shift line of D reals, then D rotation rows of D reals each. UTF-8,
    `.` decimal separator, scientific notation accepted.
    """
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]

    def want(lineno, prefix):
        if lineno > len(lines):
            raise ProblemDataError(f"{path}: line {lineno}: missing `{prefix}` line")
        parts = lines[lineno - 1].split(None, 1)
        if len(parts) != 2 or parts[0] != prefix:
            raise ProblemDataError(f"{path}: line {lineno}: expected `{prefix} <value>`")
        return parts[1]

    name = want(1, "name")
    base_id = want(2, "id")
    try:
        dim = int(want(3, "dim"))
        bias = float(want(4, "bias"))
    except ValueError as exc:
        raise ProblemDataError(f"{path}: bad numeric header: {exc}") from exc
    if dim < 1:
        raise ProblemDataError(f"{path}: line 3: dimension must be positive")

    def row(lineno, expect_len):
        if lineno > len(lines):
            raise ProblemDataError(f"{path}: line {lineno}: missing data row")
        try:
            vals = [float(tok) for tok in lines[lineno - 1].split()]
        except ValueError as exc:
            raise ProblemDataError(f"{path}: line {lineno}: bad real number: {exc}") from exc
        if len(vals) != expect_len:
            raise ProblemDataError(
                f"{path}: line {lineno}: expected {expect_len} values, got {len(vals)}"
            )
        return vals

    shift = np.array(row(5, dim))
    rotation = np.array([row(6 + k, dim) for k in range(dim)])
    try:
        return ProblemSpec(
            name=name,
            base_id=base_id,
            dimension=dim,
            bounds=Bounds.symmetric(dim, half_width),
            shift=shift,
            rotation=rotation,
            bias=bias,
        )
    except (ValueError, KeyError) as exc:
        raise ProblemDataError(f"{path}: {exc}") from exc
