"""Heavy-tailed variate generation: Cauchy density/CDF/sampling and the
general Levy alpha-stable sampler (Chambers-Mallows-Stuck transform)."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CauchyParams:
    x0: float = 0.0     # location
    gamma: float = 1.0  # scale

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("scale gamma must be positive")


@dataclass(frozen=True)
class StableParams:
    alpha: float        # stability, in (0, 2]
    beta: float = 0.0   # skewness, in [-1, 1]
    c: float = 1.0      # scale, positive
    mu: float = 0.0     # location

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ValueError("alpha must lie in (0, 2]")
        if not (-1.0 <= self.beta <= 1.0):
            raise ValueError("beta must lie in [-1, 1]")
        if not self.c > 0:
            raise ValueError("scale c must be positive")


def cauchy_pdf(x: float, p: CauchyParams) -> float:
    d = x - p.x0
    return p.gamma / (math.pi * (d * d + p.gamma * p.gamma))


def cauchy_cdf(x: float, p: CauchyParams) -> float:
    return math.atan((x - p.x0) / p.gamma) / math.pi + 0.5


def cauchy_sample(p: CauchyParams, rng) -> float:
    """Inverse-CDF draw: x0 + gamma * tan(pi * (u - 1/2)).

    u = 0 would land on the tangent singularity, so exact-zero draws are
    redrawn (uniform() already excludes 1).
    """
    u = rng.uniform()
    while u == 0.0:
        u = rng.uniform()
    return p.x0 + p.gamma * math.tan(math.pi * (u - 0.5))


def stable_sample(p: StableParams, rng) -> float:
    """One draw from the alpha-stable law S_alpha(beta, c, mu).

    Chambers-Mallows-Stuck: V ~ uniform(-pi/2, pi/2) and W ~ exp(1) are
    combined into a standard S_alpha(beta, 1, 0) variate, then rescaled.
    The alpha = 1 rescale carries the extra (2/pi) * beta * c * log(c) term.
    """
    u = rng.uniform()
    while u == 0.0:
        u = rng.uniform()
    v = math.pi * (u - 0.5)
    w = rng.exponential()
    while w == 0.0:
        w = rng.exponential()
    x = _cms_standard(p.alpha, p.beta, v, w)
    if p.alpha != 1.0:
        return p.c * x + p.mu
    return p.c * x + (2.0 / math.pi) * p.beta * p.c * math.log(p.c) + p.mu


def _cms_standard(alpha: float, beta: float, v: float, w: float) -> float:
    """CMS transform of (V, W) into a standard S_alpha(beta, 1, 0) draw."""
    if alpha == 1.0:
        half_pi = math.pi / 2.0
        a = half_pi + beta * v
        x = a * math.tan(v)
        if beta != 0.0:
            x -= beta * math.log((half_pi * w * math.cos(v)) / a)
        return (2.0 / math.pi) * x
    t = beta * math.tan(math.pi * alpha / 2.0)
    b = math.atan(t) / alpha
    s = (1.0 + t * t) ** (1.0 / (2.0 * alpha))
    return (
        s
        * math.sin(alpha * (v + b))
        / math.cos(v) ** (1.0 / alpha)
        * (math.cos(v - alpha * (v + b)) / w) ** ((1.0 - alpha) / alpha)
    )
