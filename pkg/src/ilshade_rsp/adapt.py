"""Success-history adaptation of the control parameters F and CR.

A circular memory of weighted Lehmer means of successful parameter values
seeds per-individual draws; staged clamps keep early generations exploring
with high CR and moderate F.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sampling import CauchyParams, cauchy_sample

TERMINAL_CR = -1.0  # marker: slot only ever emits CR = 0 from now on


@dataclass
class HistoricalMemory:
    """Circular stores of successful-parameter means.

    Slots 0..H-2 start at (0.3, 0.8) and are overwritten cyclically; the last
    slot holds (0.9, 0.9) permanently and is never written.
    """

    size: int = 5
    m_f: np.ndarray = field(init=False)
    m_cr: np.ndarray = field(init=False)
    update_pos: int = field(init=False, default=0)

    def __post_init__(self):
        if self.size < 2:
            raise ValueError("memory needs at least one writable slot plus the fixed one")
        self.m_f = np.full(self.size, 0.3)
        self.m_cr = np.full(self.size, 0.8)
        self.m_f[-1] = 0.9
        self.m_cr[-1] = 0.9


@dataclass
class SuccessSet:
    """Control parameters of successful replacements and their fitness gains."""

    s_f: list = field(default_factory=list)
    s_cr: list = field(default_factory=list)
    deltas: list = field(default_factory=list)

    def add(self, F: float, CR: float, delta: float):
        # Ties (delta = 0) carry zero Lehmer weight and are dropped upstream.
        if delta <= 0:
            raise ValueError("fitness improvement must be strictly positive")
        self.s_f.append(F)
        self.s_cr.append(CR)
        self.deltas.append(delta)

    def __len__(self):
        return len(self.s_f)


def assign_parameters(mem: HistoricalMemory, nfe: int, nfe_max: int, rng):
    """Draw one (F, CR) pair for an individual.

    A uniform slot r seeds F ~ Cauchy(m_f[r], 0.1) (redrawn while <= 0,
    truncated at 1) and CR ~ Normal(m_cr[r], 0.1) clipped to [0, 1], or CR = 0
    without a draw if the slot is terminal. Early-phase clamps: F capped at
    0.7 before 60% of the budget; CR floored at 0.7 before 25% and at 0.6
    before 50%.
    """
    r = rng.integers(0, mem.size)
    mf = mem.m_f[r]
    mcr = mem.m_cr[r]

    F = cauchy_sample(CauchyParams(mf, 0.1), rng)
    while F <= 0.0:
        F = cauchy_sample(CauchyParams(mf, 0.1), rng)
    if F > 1.0:
        F = 1.0
    if nfe < 0.6 * nfe_max and F > 0.7:
        F = 0.7

    if mcr < 0.0:
        CR = 0.0
    else:
        CR = mcr + 0.1 * rng.normal()
        CR = min(1.0, max(0.0, CR))
    if nfe < 0.25 * nfe_max:
        CR = max(CR, 0.7)
    elif nfe < 0.5 * nfe_max:
        CR = max(CR, 0.6)
    return F, CR


def weighted_lehmer_mean(values, weights) -> float:
    """Sum(w v^2) / Sum(w v) with nonnegative, not-all-zero weights."""
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if values.size == 0:
        raise ValueError("weighted Lehmer mean of an empty set")
    if np.any(weights < 0) or not np.any(weights > 0):
        raise ValueError("weights must be nonnegative and not all zero")
    num = float(np.sum(weights * values * values))
    den = float(np.sum(weights * values))
    if den == 0.0:
        return 0.0
    return num / den


def update_memory(mem: HistoricalMemory, s: SuccessSet) -> HistoricalMemory:
    """Write the current slot from a nonempty success set and advance.

    Weights are the fitness improvements (normalization cancels in the Lehmer
    ratio). A batch whose best CR is zero marks the slot terminal. An empty
    set leaves memory and position untouched. The fixed last slot is skipped
    by the cycle.
    """
    if len(s) == 0:
        return mem
    deltas = np.asarray(s.deltas, dtype=float)
    w = deltas / deltas.sum()
    pos = mem.update_pos
    mem.m_f[pos] = weighted_lehmer_mean(s.s_f, w)
    if max(s.s_cr) == 0.0:
        mem.m_cr[pos] = TERMINAL_CR
    else:
        mem.m_cr[pos] = weighted_lehmer_mean(s.s_cr, w)
    mem.update_pos = (pos + 1) % (mem.size - 1)
    return mem
