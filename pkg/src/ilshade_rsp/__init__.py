"""iLSHADE-RSP: rank-based selective pressure differential evolution with
Cauchy perturbation of target vectors, plus benchmark problems and the
nonparametric comparison toolkit (Wilcoxon, Friedman, Hochberg)."""

from .core import Bounds, ObjectiveFunction, Population, RngStream
from .engine import RunConfig, RunRecord, run_classic_de, run_ilshade_rsp
from .bench import get_problem, list_problems

__all__ = [
    "Bounds",
    "ObjectiveFunction",
    "Population",
    "RngStream",
    "RunConfig",
    "RunRecord",
    "run_classic_de",
    "run_ilshade_rsp",
    "get_problem",
    "list_problems",
]
