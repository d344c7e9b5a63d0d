"""Optimization drivers: the full iLSHADE-RSP generation loop and the classic
DE/rand/1/bin baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .adapt import HistoricalMemory, SuccessSet, assign_parameters, update_memory
from .core import (
    ObjectiveFunction,
    Population,
    RngStream,
    initialize_population,
    repair_bounds,
)
from .strategy import (
    MutationContext,
    binomial_crossover,
    classical_mutation,
    fw_multiplier,
    pbest_fraction,
    recombine_cauchy,
    recombine_original,
)


def default_np_init(dimension: int) -> int:
    """round(sqrt(D) * ln(D) * 25); natural log."""
    return int(round(math.sqrt(dimension) * math.log(dimension) * 25))


@dataclass(frozen=True)
class RunConfig:
    """Knobs of one optimization run. Defaults match the tuned settings."""

    np_init: Optional[int] = None        # None -> round(sqrt(D) ln(D) 25)
    np_fin: int = 4
    nfe_max: Optional[int] = None        # None -> 10000 * D
    jumping_rate: float = 0.2
    rank_greediness: float = 3.0
    memory_size: int = 5
    archive_capacity_factor: float = 1.0
    perturb_scale: float = 0.1
    perturb_alpha: Optional[float] = None  # None -> Cauchy perturbation
    target_fev: float = 1e-8             # early stop when optimum is known
    seed: Optional[int] = None

    def resolve(self, dimension: int) -> "RunConfig":
        np_init = self.np_init if self.np_init is not None else default_np_init(dimension)
        nfe_max = self.nfe_max if self.nfe_max is not None else 10000 * dimension
        cfg = replace(self, np_init=np_init, nfe_max=nfe_max)
        if cfg.np_init < cfg.np_fin or cfg.np_fin < 4:
            raise ValueError("population sizes must satisfy np_init >= np_fin >= 4")
        if cfg.nfe_max < cfg.np_init:
            raise ValueError("budget smaller than the initial population")
        if not (0.0 <= cfg.jumping_rate <= 1.0):
            raise ValueError("jumping rate must lie in [0, 1]")
        return cfg


@dataclass
class RunRecord:
    """Outcome of one run: best value, error against the known optimum (or the
    raw best value when no optimum is registered), budget used, and the
    per-generation convergence trace as (nfe, best_fev) pairs."""

    best_f: float
    fev: float
    fev_is_absolute: bool
    nfe_used: int
    trace: list
    seed: Optional[int]
    config: RunConfig
    best_x: Optional[np.ndarray] = None
    perturb_branch_count: int = 0


def compute_fev(best_f: float, optimum: float) -> float:
    return best_f - optimum


def lpsr_next_size(np_init: int, np_fin: int, nfe: int, nfe_max: int) -> int:
    """Linear population shrink: np_init at nfe = 0 down to np_fin at budget."""
    if not (0 <= nfe <= nfe_max):
        raise ValueError("nfe outside [0, nfe_max]")
    size = int(round(np_init - (nfe / nfe_max) * (np_init - np_fin)))
    return max(np_fin, min(np_init, size))


class IlshadeRsp:
    """Stateful driver exposing single-generation steps for oracle tests.

    RNG draw order per generation, fixed for bit-exact scripted replay:
    for each member i (population sorted best-first): memory slot, F Cauchy
    draws (redrawn while F <= 0), CR normal draw (skipped on terminal slot),
    jump-gate uniform, j_rand, D crossover uniforms, heavy-tailed draws for
    the non-crossover components (perturbed branch only), donor indices
    (pbest, pr1, pr2). Then the selection sweep, archive shrink draws and the
    memory update.
    """

    def __init__(self, cfg: RunConfig, obj: ObjectiveFunction, rng=None):
        cfg = cfg.resolve(obj.dimension)
        self.cfg = cfg
        self.obj = obj
        self.rng = rng if rng is not None else RngStream(cfg.seed)
        self.pop = initialize_population(cfg.np_init, obj, self.rng)
        self.pop.nfe_max = cfg.nfe_max
        self.memory = HistoricalMemory(cfg.memory_size)
        self.perturb_branch_count = 0
        best = int(np.argmin(self.pop.fs))
        self.best_f = float(self.pop.fs[best])
        self.best_x = self.pop.xs[best].copy()
        self.trace = [(self.pop.nfe, self._fev(self.best_f))]

    def _fev(self, f: float) -> float:
        if self.obj.optimum_value is None:
            return f
        return compute_fev(f, self.obj.optimum_value)

    def can_step(self) -> bool:
        if self.pop.nfe + self.pop.size > self.cfg.nfe_max:
            return False
        if self.obj.optimum_value is not None and self._fev(self.best_f) <= self.cfg.target_fev:
            return False
        return True

    def step_generation(self):
        """One full generation: trials, selection, LPSR, archive shrink,
        memory update."""
        cfg, pop, rng = self.cfg, self.pop, self.rng
        pop.sort_by_fitness()
        n = pop.size
        p = pbest_fraction(pop.nfe, cfg.nfe_max)
        fw = fw_multiplier(pop.nfe, cfg.nfe_max)
        ctx0 = MutationContext.build(
            pop.xs,
            pop.archive_x,
            p,
            cfg.rank_greediness,
            pop.nfe,
            cfg.nfe_max,
            perturb_scale=cfg.perturb_scale,
            perturb_alpha=cfg.perturb_alpha,
        )

        trials = np.empty_like(pop.xs)
        for i in range(n):
            F, CR = assign_parameters(self.memory, pop.nfe, cfg.nfe_max, rng)
            pop.Fs[i] = F
            pop.CRs[i] = CR
            ctx = ctx0.with_f(F, F * fw)
            u_jump = rng.uniform()
            # Measure-zero guard: u = 0.0 at jumping_rate 0 would otherwise
            # take the perturbed branch, breaking the exact-equivalence contract.
            if cfg.jumping_rate > 0.0 and u_jump <= cfg.jumping_rate:
                self.perturb_branch_count += 1
                trial = recombine_cauchy(i, ctx, CR, rng)
            else:
                trial = recombine_original(i, ctx, CR, rng)
            trials[i] = repair_bounds(trial, pop.xs[i], self.obj.bounds)

        success = SuccessSet()
        for i in range(n):
            fu = self.obj(trials[i])
            pop.nfe += 1
            if fu <= pop.fs[i]:
                if fu < pop.fs[i]:
                    success.add(pop.Fs[i], pop.CRs[i], pop.fs[i] - fu)
                pop.archive_x.append(pop.xs[i].copy())
                pop.archive_f.append(pop.fs[i])
                pop.xs[i] = trials[i]
                pop.fs[i] = fu
                if fu < self.best_f:
                    self.best_f = fu
                    self.best_x = trials[i].copy()

        next_size = lpsr_next_size(cfg.np_init, cfg.np_fin, pop.nfe, cfg.nfe_max)
        if next_size < pop.size:
            pop.sort_by_fitness()
            pop.xs = pop.xs[:next_size]
            pop.fs = pop.fs[:next_size]
            pop.Fs = pop.Fs[:next_size]
            pop.CRs = pop.CRs[:next_size]

        capacity = int(round(cfg.archive_capacity_factor * next_size))
        while len(pop.archive_x) > capacity:
            drop = rng.integers(0, len(pop.archive_x))
            pop.archive_x.pop(drop)
            pop.archive_f.pop(drop)

        update_memory(self.memory, success)
        self.last_success = success
        pop.generation += 1
        self.trace.append((pop.nfe, self._fev(self.best_f)))

    def run(self) -> RunRecord:
        while self.can_step():
            self.step_generation()
        return RunRecord(
            best_f=self.best_f,
            fev=self._fev(self.best_f),
            fev_is_absolute=self.obj.optimum_value is None,
            nfe_used=self.pop.nfe,
            trace=self.trace,
            seed=self.cfg.seed,
            config=self.cfg,
            best_x=self.best_x,
            perturb_branch_count=self.perturb_branch_count,
        )


def run_ilshade_rsp(cfg: RunConfig, obj: ObjectiveFunction, rng=None) -> RunRecord:
    return IlshadeRsp(cfg, obj, rng).run()


def run_classic_de(
    cfg: RunConfig,
    obj: ObjectiveFunction,
    rng=None,
    F: float = 0.5,
    CR: float = 0.9,
) -> RunRecord:
    """DE/rand/1/bin with constant F, CR and fixed population size np_init."""
    if not (0.0 < F <= 1.0):
        raise ValueError("F must lie in (0, 1]")
    if not (0.0 <= CR <= 1.0):
        raise ValueError("CR must lie in [0, 1]")
    cfg = cfg.resolve(obj.dimension)
    rng = rng if rng is not None else RngStream(cfg.seed)
    pop = initialize_population(cfg.np_init, obj, rng)
    n = pop.size
    best = int(np.argmin(pop.fs))
    best_f = float(pop.fs[best])
    best_x = pop.xs[best].copy()
    trace = [(pop.nfe, best_f if obj.optimum_value is None else best_f - obj.optimum_value)]

    def done():
        if pop.nfe + n > cfg.nfe_max:
            return True
        return (
            obj.optimum_value is not None
            and best_f - obj.optimum_value <= cfg.target_fev
        )

    while not done():
        trials = np.empty_like(pop.xs)
        for i in range(n):
            mutant = classical_mutation("rand/1", i, pop.xs, pop.fs, F, rng)
            trial = binomial_crossover(pop.xs[i], mutant, CR, rng)
            trials[i] = repair_bounds(trial, pop.xs[i], obj.bounds)
        for i in range(n):
            fu = obj(trials[i])
            pop.nfe += 1
            if fu <= pop.fs[i]:
                pop.xs[i] = trials[i]
                pop.fs[i] = fu
                if fu < best_f:
                    best_f = fu
                    best_x = trials[i].copy()
        pop.generation += 1
        trace.append((pop.nfe, best_f if obj.optimum_value is None else best_f - obj.optimum_value))

    return RunRecord(
        best_f=best_f,
        fev=best_f if obj.optimum_value is None else best_f - obj.optimum_value,
        fev_is_absolute=obj.optimum_value is None,
        nfe_used=pop.nfe,
        trace=trace,
        seed=cfg.seed,
        config=cfg,
        best_x=best_x,
    )
