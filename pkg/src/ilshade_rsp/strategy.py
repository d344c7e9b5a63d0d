"""Mutation and recombination operators.

Six classical DE mutation strategies, the rank-pressure strategy
DE/current-to-pbest/r, binomial and exponential crossover, and the two fused
recombination operators (plain, and with heavy-tailed perturbation of the
non-crossover components of the target vector).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .sampling import CauchyParams, StableParams, cauchy_sample, stable_sample

CLASSICAL_KINDS = (
    "rand/1",
    "rand/2",
    "best/1",
    "best/2",
    "current-to-best/1",
    "current-to-rand/1",
)

# Index demand per strategy (distinct donors, excluding i itself).
_DONOR_COUNT = {
    "rand/1": 3,
    "rand/2": 5,
    "best/1": 2,
    "best/2": 4,
    "current-to-best/1": 2,
    "current-to-rand/1": 3,
}


class IndexSamplingError(RuntimeError):
    """Raised when distinct donor indices cannot be drawn."""


def sample_distinct(rng, n: int, count: int, exclude=()) -> list:
    """Draw `count` mutually distinct indices from [0, n), avoiding `exclude`.

    Rejection sampling with a hard cap of 100 * n attempts so a scripted or
    degenerate stream terminates deterministically.
    """
    if n - len(set(exclude)) < count:
        raise IndexSamplingError(
            f"cannot draw {count} distinct indices from {n} excluding {len(exclude)}"
        )
    chosen: list = []
    taken = set(exclude)
    attempts = 0
    cap = 100 * n
    while len(chosen) < count:
        r = rng.integers(0, n)
        attempts += 1
        if r not in taken:
            chosen.append(r)
            taken.add(r)
        elif attempts >= cap:
            raise IndexSamplingError("distinct-index sampling exceeded attempt cap")
    return chosen


def classical_mutation(kind: str, i: int, xs: np.ndarray, fs: np.ndarray, F: float, rng) -> np.ndarray:
    """One of the six classical DE mutants for target index i."""
    if kind not in _DONOR_COUNT:
        raise ValueError(f"unknown mutation strategy {kind!r}")
    n = xs.shape[0]
    need = _DONOR_COUNT[kind]
    if n < need + 1:
        raise IndexSamplingError(f"{kind} needs at least {need + 1} members, got {n}")
    r = sample_distinct(rng, n, need, exclude=(i,))
    best = xs[int(np.argmin(fs))]
    if kind == "rand/1":
        return xs[r[0]] + F * (xs[r[1]] - xs[r[2]])
    if kind == "rand/2":
        return xs[r[0]] + F * (xs[r[1]] - xs[r[2]]) + F * (xs[r[3]] - xs[r[4]])
    if kind == "best/1":
        return best + F * (xs[r[0]] - xs[r[1]])
    if kind == "best/2":
        return best + F * (xs[r[0]] - xs[r[1]]) + F * (xs[r[2]] - xs[r[3]])
    if kind == "current-to-best/1":
        return xs[i] + F * (best - xs[i]) + F * (xs[r[0]] - xs[r[1]])
    # current-to-rand/1
    k = rng.uniform()
    return xs[i] + k * (xs[r[0]] - xs[i]) + F * (xs[r[1]] - xs[r[2]])


def rank_probabilities(np_size: int, k: float) -> np.ndarray:
    """Selection probabilities over a best-first sorted population.

    Member i (0-based, best first) carries rank weight k * (NP - 1 - i) + 1,
    normalized to sum to one; the best member is the most likely donor.
    """
    if np_size < 1:
        raise ValueError("population size must be positive")
    if not k > 0:
        raise ValueError("rank greediness factor must be positive")
    ranks = k * (np_size - 1 - np.arange(np_size)) + 1.0
    return ranks / ranks.sum()


def fw_multiplier(nfe: int, nfe_max: int) -> float:
    """Three-phase weight applied to F for the pbest attraction term."""
    frac = nfe / nfe_max
    if frac < 0.2:
        return 0.7
    if frac < 0.4:
        return 0.8
    return 1.2


def pbest_fraction(nfe: int, nfe_max: int) -> float:
    """Linearly growing pbest pool fraction, 0.085 up to 0.17."""
    return 0.085 * (1.0 + nfe / nfe_max)


@dataclass
class MutationContext:
    """Per-generation inputs of DE/current-to-pbest/r.

    `xs` is sorted best-first; `pop_cum`/`both_cum` are cumulative rank weights
    over the population alone and over population + archive (each archive slot
    weighted like the worst-ranked member). F and F_w vary per individual and
    are filled in via `with_f`.
    """

    xs: np.ndarray
    archive_x: list
    p: float
    pop_cum: np.ndarray
    both_cum: np.ndarray
    F: float = np.nan
    F_w: float = np.nan
    nfe: int = 0
    nfe_max: int = 1
    perturb_scale: float = 0.1
    perturb_alpha: Optional[float] = None  # None -> Cauchy draws

    @staticmethod
    def build(xs, archive_x, p, k, nfe, nfe_max, perturb_scale=0.1, perturb_alpha=None):
        n = xs.shape[0]
        ranks = k * (n - 1 - np.arange(n)) + 1.0
        weights = np.concatenate([ranks, np.full(len(archive_x), ranks[-1])])
        pop_cum = np.cumsum(ranks)
        pop_cum /= pop_cum[-1]
        both_cum = np.cumsum(weights)
        both_cum /= both_cum[-1]
        return MutationContext(
            xs=xs,
            archive_x=archive_x,
            p=p,
            pop_cum=pop_cum,
            both_cum=both_cum,
            nfe=nfe,
            nfe_max=nfe_max,
            perturb_scale=perturb_scale,
            perturb_alpha=perturb_alpha,
        )

    def with_f(self, F: float, F_w: float) -> "MutationContext":
        return replace(self, F=F, F_w=F_w)


def _weighted_index(cum: np.ndarray, u: float) -> int:
    return int(np.searchsorted(cum, u, side="right"))


def draw_donors(i: int, ctx: MutationContext, rng):
    """Draw (pbest vector, pr1 vector, pr2 vector) for target i.

    pbest is uniform over the top max(2, ceil(p * NP)) members, pr1 is
    rank-weighted over the population, pr2 is rank-weighted over population
    plus archive. Rejected draws: pbest = i, pr1 = i, pr2 = i, pr2 = pr1.
    """
    n = ctx.xs.shape[0]
    pool = max(2, int(np.ceil(ctx.p * n)))
    pool = min(pool, n)
    cap = 100 * n

    pb = rng.integers(0, pool)
    attempts = 1
    while pb == i:
        if attempts >= cap:
            raise IndexSamplingError("pbest sampling exceeded attempt cap")
        pb = rng.integers(0, pool)
        attempts += 1

    pr1 = _weighted_index(ctx.pop_cum, rng.uniform())
    attempts = 1
    while pr1 == i:
        if attempts >= cap:
            raise IndexSamplingError("pr1 sampling exceeded attempt cap")
        pr1 = _weighted_index(ctx.pop_cum, rng.uniform())
        attempts += 1

    pr2 = _weighted_index(ctx.both_cum, rng.uniform())
    attempts = 1
    while pr2 == i or pr2 == pr1:
        if attempts >= cap:
            raise IndexSamplingError("pr2 sampling exceeded attempt cap")
        pr2 = _weighted_index(ctx.both_cum, rng.uniform())
        attempts += 1

    x_pr2 = ctx.xs[pr2] if pr2 < n else np.asarray(ctx.archive_x[pr2 - n])
    return ctx.xs[pb], ctx.xs[pr1], x_pr2, pb, pr1, pr2


def current_to_pbest_r(i: int, ctx: MutationContext, rng) -> np.ndarray:
    """v = x_i + F_w * (x_pbest - x_i) + F * (x_pr1 - x_pr2)."""
    x_pb, x_pr1, x_pr2, *_ = draw_donors(i, ctx, rng)
    xi = ctx.xs[i]
    return xi + ctx.F_w * (x_pb - xi) + ctx.F * (x_pr1 - x_pr2)


def binomial_crossover(target: np.ndarray, mutant: np.ndarray, CR: float, rng) -> np.ndarray:
    """Componentwise mix keeping at least the forced index from the mutant."""
    d = target.size
    j_rand = rng.integers(0, d)
    cross = rng.uniforms(d) < CR
    cross[j_rand] = True
    return np.where(cross, mutant, target)


def exponential_crossover(target: np.ndarray, mutant: np.ndarray, CR: float, rng) -> np.ndarray:
    """Copy a contiguous (mod D) block of mutant components of random length.

    Block length L follows the classic do-while: grow while a fresh uniform
    stays below CR, up to D.
    """
    d = target.size
    n = rng.integers(0, d)
    length = 0
    while True:
        length += 1
        if not (rng.uniform() < CR and length < d):
            break
    trial = np.array(target, copy=True)
    for off in range(length):
        j = (n + off) % d
        trial[j] = mutant[j]
    return trial


def _perturb_draw(ctx: MutationContext, location: float, rng) -> float:
    if ctx.perturb_alpha is None:
        return cauchy_sample(CauchyParams(location, ctx.perturb_scale), rng)
    return stable_sample(
        StableParams(ctx.perturb_alpha, 0.0, ctx.perturb_scale, location), rng
    )


def _recombine(i: int, ctx: MutationContext, CR: float, rng, perturb: bool) -> np.ndarray:
    """Fused mutation + binomial crossover of DE/current-to-pbest/r.

    Draw order (fixed so scripted-stream tests are bit-exact): j_rand, then D
    crossover uniforms, then one heavy-tailed draw per non-crossover component
    (perturbed variant only, ascending j), then donor indices.
    """
    d = ctx.xs.shape[1]
    xi = ctx.xs[i]
    j_rand = rng.integers(0, d)
    cross = rng.uniforms(d) < CR
    cross[j_rand] = True
    trial = np.array(xi, copy=True)
    if perturb:
        for j in range(d):
            if not cross[j]:
                trial[j] = _perturb_draw(ctx, xi[j], rng)
    x_pb, x_pr1, x_pr2, *_ = draw_donors(i, ctx, rng)
    mutant = xi + ctx.F_w * (x_pb - xi) + ctx.F * (x_pr1 - x_pr2)
    trial[cross] = mutant[cross]
    return trial


def recombine_original(i: int, ctx: MutationContext, CR: float, rng) -> np.ndarray:
    """Crossover positions take the mutant expression, the rest keep x_i."""
    return _recombine(i, ctx, CR, rng, perturb=False)


def recombine_cauchy(i: int, ctx: MutationContext, CR: float, rng) -> np.ndarray:
    """Like recombine_original, but non-crossover positions are replaced by an
    independent heavy-tailed draw located at the target component."""
    return _recombine(i, ctx, CR, rng, perturb=True)
