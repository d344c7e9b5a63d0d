"""Experiment runner and comparison CLI.

Verbs:
  de-bench run <plan-file>
  de-bench compare <results.csv ...> --alpha 0.05 --control <algorithm>
  de-bench list-problems
  de-bench list-algorithms

Plan files are INI-style: an [experiment] section plus one section per cell
(algorithm x problem x seeds). The default output directory can be set via
the DE_BENCH_OUTDIR environment variable.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bench
from .engine import RunConfig, run_classic_de, run_ilshade_rsp

ALGORITHMS = ("ilshade-rsp", "lshade-rsp", "classic-de")

RESULT_COLUMNS = ["algorithm", "problem", "D", "seed", "nfe_used", "best_f", "fev"]

ENV_OUTDIR = "DE_BENCH_OUTDIR"

DEFAULT_CHECKPOINTS = [i / 100.0 for i in range(1, 101)]


@dataclass(frozen=True)
class PlanCell:
    name: str
    algorithm: str
    problem: str
    dimension: int
    seeds: tuple
    budget: int
    overrides: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentPlan:
    cells: tuple
    output_dir: Path
    checkpoints: tuple
    workers: int = 1


class PlanError(ValueError):
    """Invalid experiment plan."""


def _resolve_problem(problem: str, dimension: int):
    if problem in bench.list_problems():
        return bench.get_problem(problem, dimension)
    path = Path(problem)
    if path.exists():
        spec = bench.load_problem_data(path)
        if spec.dimension != dimension:
            raise PlanError(
                f"problem file {problem} has dimension {spec.dimension}, plan says {dimension}"
            )
        return spec.to_objective()
    raise PlanError(f"unknown problem {problem!r}")


def load_plan(path) -> ExperimentPlan:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise PlanError(f"cannot read plan file {path}")

    output_dir = Path(os.environ.get(ENV_OUTDIR, "results"))
    checkpoints = tuple(DEFAULT_CHECKPOINTS)
    workers = 1
    if parser.has_section("experiment"):
        exp = parser["experiment"]
        output_dir = Path(exp.get("output_dir", str(output_dir)))
        if "checkpoints" in exp:
            checkpoints = tuple(float(tok) for tok in exp["checkpoints"].split())
        workers = int(exp.get("workers", "1"))

    cells = []
    for section in parser.sections():
        if section == "experiment":
            continue
        raw = dict(parser[section])
        try:
            algorithm = raw.pop("algorithm")
            problem = raw.pop("problem")
            dimension = int(raw.pop("dimension"))
            seeds = tuple(int(tok) for tok in raw.pop("seeds").split())
        except KeyError as exc:
            raise PlanError(f"[{section}] missing required key {exc}") from exc
        if algorithm not in ALGORITHMS:
            raise PlanError(f"[{section}] unknown algorithm {algorithm!r}")
        if len(set(seeds)) != len(seeds):
            raise PlanError(f"[{section}] duplicate seeds")
        budget = int(raw.pop("budget", 10000 * dimension))
        overrides = {}
        for key, value in raw.items():
            overrides[key] = value
        _resolve_problem(problem, dimension)  # fail fast before any run
        cells.append(
            PlanCell(
                name=section,
                algorithm=algorithm,
                problem=problem,
                dimension=dimension,
                seeds=seeds,
                budget=budget,
                overrides=overrides,
            )
        )
    if not cells:
        raise PlanError("plan defines no cells")
    return ExperimentPlan(
        cells=tuple(cells),
        output_dir=output_dir,
        checkpoints=checkpoints,
        workers=workers,
    )


def _build_config(cell: PlanCell, seed: int) -> RunConfig:
    kwargs = {"nfe_max": cell.budget, "seed": seed}
    numeric = {
        "np_init": int,
        "np_fin": int,
        "jumping_rate": float,
        "rank_greediness": float,
        "memory_size": int,
        "archive_capacity_factor": float,
        "perturb_scale": float,
        "perturb_alpha": float,
        "target_fev": float,
    }
    for key, conv in numeric.items():
        if key in cell.overrides:
            kwargs[key] = conv(cell.overrides[key])
    if cell.algorithm == "lshade-rsp":
        kwargs["jumping_rate"] = 0.0
    if cell.algorithm == "classic-de":
        kwargs.setdefault("np_init", 100)
    return RunConfig(**kwargs)


def execute_run(cell: PlanCell, seed: int):
    """Run one cell/seed pair; returns (result row values, trace)."""
    obj = _resolve_problem(cell.problem, cell.dimension)
    if cell.algorithm == "classic-de":
        record = run_classic_de(
            _build_config(cell, seed),
            obj,
            F=float(cell.overrides.get("f", 0.5)),
            CR=float(cell.overrides.get("cr", 0.9)),
        )
    else:
        record = run_ilshade_rsp(_build_config(cell, seed), obj)
    row = [
        cell.algorithm,
        cell.problem,
        cell.dimension,
        seed,
        record.nfe_used,
        repr(record.best_f),
        repr(record.fev),
    ]
    return row, record.trace


def _trace_value(trace, nfe_limit):
    """Best FEV achieved by the time nfe_limit evaluations were spent."""
    value = trace[0][1]
    for nfe, fev in trace:
        if nfe <= nfe_limit:
            value = fev
        else:
            break
    return value


def run_experiment(plan: ExperimentPlan):
    """Execute every (cell, seed) pair and write result and trace CSVs.

    Rows are written in plan order regardless of worker completion order so
    reruns are byte-identical.
    """
    plan.output_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(cell, seed) for cell in plan.cells for seed in cell.seeds]

    if plan.workers > 1:
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            futures = [pool.submit(execute_run, cell, seed) for cell, seed in jobs]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [execute_run(cell, seed) for cell, seed in jobs]

    results_path = plan.output_dir / "results.csv"
    with open(results_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for (_, _), row in zip(jobs, (o[0] for o in outcomes)):
            writer.writerow(row)

    # One trace file per (problem, dimension) cell group, columns per algorithm.
    groups = {}
    for (cell, seed), (_, trace) in zip(jobs, outcomes):
        groups.setdefault((cell.problem, cell.dimension), {}).setdefault(
            cell.algorithm, []
        ).append((trace, cell.budget))

    trace_paths = []
    for (problem, dim), algos in sorted(groups.items()):
        budget = max(b for traces in algos.values() for _, b in traces)
        path = plan.output_dir / f"trace_{Path(problem).stem}_{dim}D.csv"
        header = ["nfe"]
        names = sorted(algos)
        for name in names:
            header += [f"{name}_median", f"{name}_q1", f"{name}_q3"]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for frac in plan.checkpoints:
                nfe_limit = int(round(frac * budget))
                row = [nfe_limit]
                for name in names:
                    vals = [_trace_value(t, nfe_limit) for t, _ in algos[name]]
                    q1, med, q3 = np.percentile(vals, [25, 50, 75])
                    row += [repr(float(med)), repr(float(q1)), repr(float(q3))]
                writer.writerow(row)
        trace_paths.append(path)
    return results_path, trace_paths


def read_results(paths):
    """Parse result CSVs into {(algorithm, problem, D): {seed: fev}}."""
    table = {}
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            missing = set(RESULT_COLUMNS) - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"{path}: missing columns {sorted(missing)}")
            for row in reader:
                key = (row["algorithm"], row["problem"], int(row["D"]))
                table.setdefault(key, {})[int(row["seed"])] = float(row["fev"])
    return table


@dataclass
class ComparisonTable:
    control: str
    algorithms: list
    problems: list
    verdicts: dict          # (algorithm, problem) -> "+", "=", "-"
    counts: dict            # algorithm -> (plus, equal, minus)
    avg_ranks: dict         # algorithm -> float
    z_values: dict          # algorithm -> float (vs control)
    raw_p: dict             # algorithm -> float
    adjusted_p: dict        # algorithm -> float
    chi_square: float
    friedman_p: float

    def format(self) -> str:
        lines = [
            f"control: {self.control}",
            f"Friedman chi-square {self.chi_square:.4g}  p {self.friedman_p:.4g}",
            "",
            "algorithm        avg-rank  z-value    p-value    adj-p      +/=/-",
        ]
        for name in self.algorithms:
            plus, eq, minus = self.counts.get(name, ("-", "-", "-"))
            if name == self.control:
                lines.append(f"{name:16s} {self.avg_ranks[name]:8.3f}  (control)")
            else:
                lines.append(
                    f"{name:16s} {self.avg_ranks[name]:8.3f}  {self.z_values[name]:+9.3f}"
                    f"  {self.raw_p[name]:9.3g}  {self.adjusted_p[name]:9.3g}"
                    f"  {plus}/{eq}/{minus}"
                )
        return "\n".join(lines)


def compare(result_paths, alpha: float = 0.05, control: str | None = None) -> ComparisonTable:
    from .stats import friedman, hochberg_adjust, normal_two_sided_p, wilcoxon_rank_sum

    table = read_results(result_paths)
    algorithms = sorted({alg for alg, _, _ in table})
    problems = sorted({(prob, d) for _, prob, d in table})
    if len(algorithms) < 2:
        raise ValueError("comparison needs at least two algorithms")
    if control is None:
        control = algorithms[0]
    if control not in algorithms:
        raise ValueError(f"control algorithm {control!r} not present in the results")

    def fevs(alg, prob, d):
        cell = table.get((alg, prob, d))
        if cell is None:
            raise ValueError(f"missing results for {alg} on {prob} D={d}")
        return [cell[s] for s in sorted(cell)]

    verdicts = {}
    counts = {}
    symbol = {"better": "+", "indistinguishable": "=", "worse": "-"}
    for alg in algorithms:
        if alg == control:
            continue
        plus = eq = minus = 0
        for prob, d in problems:
            res = wilcoxon_rank_sum(fevs(alg, prob, d), fevs(control, prob, d), alpha)
            verdicts[(alg, (prob, d))] = symbol[res.verdict]
            plus += res.verdict == "better"
            eq += res.verdict == "indistinguishable"
            minus += res.verdict == "worse"
        counts[alg] = (plus, eq, minus)

    run_counts = {
        len(table[(alg, prob, d)]) for alg in algorithms for prob, d in problems
    }
    if len(run_counts) != 1:
        raise ValueError("Friedman requires equal run counts across all cells")

    scores = np.array(
        [[float(np.mean(fevs(alg, prob, d))) for alg in algorithms] for prob, d in problems]
    )
    fr = friedman(scores)
    avg_ranks = dict(zip(algorithms, fr.avg_ranks))
    ci = algorithms.index(control)
    z_values = {}
    raw_p = {}
    others = [a for a in algorithms if a != control]
    for alg in others:
        z = fr.pairwise_z(ci, algorithms.index(alg))
        z_values[alg] = z
        raw_p[alg] = normal_two_sided_p(z)
    adj = hochberg_adjust([raw_p[a] for a in others])
    adjusted_p = dict(zip(others, adj))

    return ComparisonTable(
        control=control,
        algorithms=algorithms,
        problems=problems,
        verdicts=verdicts,
        counts=counts,
        avg_ranks=avg_ranks,
        z_values=z_values,
        raw_p=raw_p,
        adjusted_p=adjusted_p,
        chi_square=fr.chi_square,
        friedman_p=fr.p_value,
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="de-bench", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="execute an experiment plan")
    p_run.add_argument("plan", type=Path)

    p_cmp = sub.add_parser("compare", help="compare result CSVs")
    p_cmp.add_argument("results", nargs="+", type=Path)
    p_cmp.add_argument("--alpha", type=float, default=0.05)
    p_cmp.add_argument("--control", default=None)

    sub.add_parser("list-problems", help="list registered base problems")
    sub.add_parser("list-algorithms", help="list runnable algorithms")

    args = parser.parse_args(argv)
    if args.verb == "run":
        results_path, trace_paths = run_experiment(load_plan(args.plan))
        print(results_path)
        for path in trace_paths:
            print(path)
    elif args.verb == "compare":
        print(compare(args.results, alpha=args.alpha, control=args.control).format())
    elif args.verb == "list-problems":
        for name in bench.list_problems():
            print(name)
    elif args.verb == "list-algorithms":
        for name in ALGORITHMS:
            print(name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
