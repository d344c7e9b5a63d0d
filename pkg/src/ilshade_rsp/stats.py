"""Nonparametric comparison protocol: two-sample Wilcoxon rank-sum, Friedman
average ranks with the chi-square statistic, and Hochberg step-up adjustment."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

EXACT_LIMIT = 10  # exact rank-sum enumeration below this per-sample size


@dataclass(frozen=True)
class RankSumResult:
    verdict: str      # "better" | "worse" | "indistinguishable" (for sample a)
    p_value: float
    statistic: float  # rank sum of sample a


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties sharing the average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    return ranks


def wilcoxon_rank_sum(a, b, alpha: float = 0.05) -> RankSumResult:
    """Two-sided rank-sum test of samples a and b.

    Smaller values rank lower; `better` means a is significantly smaller
    (minimization). Small samples use exact enumeration over all index
    splits of the pooled (tie-averaged) ranks; larger ones use the normal
    approximation with tie-corrected variance, no continuity correction.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    pooled = np.concatenate([a, b])
    if np.all(pooled == pooled[0]):
        return RankSumResult("indistinguishable", 1.0, float(a.size * (a.size + b.size + 1) / 2.0))

    n, m = a.size, b.size
    ranks = _average_ranks(pooled)
    w = float(np.sum(ranks[:n]))

    if min(n, m) < EXACT_LIMIT:
        p = _exact_two_sided_p(ranks, n, w)
    else:
        total = n + m
        mean = n * (total + 1) / 2.0
        _, counts = np.unique(pooled, return_counts=True)
        tie_term = float(np.sum(counts**3 - counts))
        var = n * m / 12.0 * ((total + 1) - tie_term / (total * (total - 1)))
        if var <= 0:
            return RankSumResult("indistinguishable", 1.0, w)
        z = (w - mean) / math.sqrt(var)
        p = math.erfc(abs(z) / math.sqrt(2.0))
    p = min(1.0, p)

    if p >= alpha:
        return RankSumResult("indistinguishable", p, w)
    mean = n * (n + m + 1) / 2.0
    return RankSumResult("better" if w < mean else "worse", p, w)


def _exact_two_sided_p(ranks: np.ndarray, n: int, w: float) -> float:
    total = len(ranks)
    count_le = 0
    count_ge = 0
    count = 0
    eps = 1e-9
    for combo in itertools.combinations(range(total), n):
        s = sum(ranks[k] for k in combo)
        count += 1
        if s <= w + eps:
            count_le += 1
        if s >= w - eps:
            count_ge += 1
    return 2.0 * min(count_le, count_ge) / count


def chi_square_sf(x: float, df: int) -> float:
    """Upper tail of the chi-square distribution (regularized incomplete gamma)."""
    if x <= 0:
        return 1.0
    return float(gammaincc(df / 2.0, x / 2.0))


@dataclass(frozen=True)
class FriedmanResult:
    avg_ranks: np.ndarray
    chi_square: float
    p_value: float
    n: int
    k: int

    def pairwise_z(self, i: int, j: int) -> float:
        """Standardized rank difference between algorithms i and j."""
        se = math.sqrt(self.k * (self.k + 1) / (6.0 * self.n))
        return float((self.avg_ranks[i] - self.avg_ranks[j]) / se)


def friedman(scores) -> FriedmanResult:
    """Friedman test over an n problems x k algorithms score matrix.

    Scores are ranked per problem (smaller is better, ties averaged); the
    chi-square statistic has k - 1 degrees of freedom.
    """
    scores = np.asarray(scores, dtype=float)
    if scores.ndim != 2:
        raise ValueError("expected an n x k matrix")
    n, k = scores.shape
    if n < 2 or k < 2:
        raise ValueError("need at least 2 problems and 2 algorithms")
    rank_matrix = np.vstack([_average_ranks(row) for row in scores])
    return friedman_from_avg_ranks(rank_matrix.mean(axis=0), n)


def friedman_from_avg_ranks(avg_ranks, n: int) -> FriedmanResult:
    """Friedman statistic from already-averaged per-algorithm ranks."""
    avg_ranks = np.asarray(avg_ranks, dtype=float)
    k = avg_ranks.size
    if k < 2 or n < 2:
        raise ValueError("need at least 2 algorithms and 2 problems")
    center = (k + 1) / 2.0
    chi2 = 12.0 * n / (k * (k + 1)) * float(np.sum((avg_ranks - center) ** 2))
    p = chi_square_sf(chi2, k - 1)
    return FriedmanResult(avg_ranks=avg_ranks, chi_square=chi2, p_value=p, n=n, k=k)


def normal_two_sided_p(z: float) -> float:
    return math.erfc(abs(z) / math.sqrt(2.0))


def hochberg_adjust(p_values) -> list:
    """Step-up multiplicity adjustment.

    With p(1) <= ... <= p(m) ascending, adjusted(i) = min over j >= i of
    (m - j + 1) * p(j), clamped to 1; returned in the input order.
    """
    p_values = list(p_values)
    m = len(p_values)
    for p in p_values:
        if not (0.0 <= p <= 1.0):
            raise ValueError("p-values must lie in [0, 1]")
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = math.inf
    for pos in range(m - 1, -1, -1):
        idx = order[pos]
        running = min(running, (m - pos) * p_values[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted
