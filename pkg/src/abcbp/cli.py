"""Experiment orchestration: run a trainer on a dataset, emit report and
curve files, or build a seed-aggregated comparison table.

Exit codes: 0 success, 1 configuration error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
from dataclasses import asdict

import numpy as np

from . import colony, data as datamod, ga, metrics
from . import network as nn
from .errors import ConfigError, DataError, NumericOverflowError

ALGOS = ("abc", "ga", "bp")


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit code 1)."""

    def error(self, message):
        raise ConfigError(f"{message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="abcbp", description=__doc__)
    p.add_argument("--dataset", required=True,
                   help="builtin name (iris|wine|glass|soybean|all) or a CSV path")
    p.add_argument("--algo", choices=ALGOS, default="abc")
    p.add_argument("--pop", type=int, default=10, help="population size")
    p.add_argument("--mcn", type=int, default=100, help="maximum cycle number")
    p.add_argument("--lr", type=float, default=0.5, help="learning rate")
    p.add_argument("--threshold", type=float, default=95.0,
                   help="terminate when the average classification rate exceeds this")
    p.add_argument("--hidden", default="5",
                   help="comma-separated hidden layer sizes, e.g. 5 or 8,4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", default=None,
                   help="comma-separated seed list; overrides --seed")
    p.add_argument("--step-mode", choices=("stochastic", "literal"),
                   default="stochastic")
    p.add_argument("--prob-mode", choices=("classic", "literal"), default="classic")
    p.add_argument("--hybrid-bp", action=argparse.BooleanOptionalAction, default=True,
                   help="guarded descent sweeps per source each cycle")
    p.add_argument("--hybrid-batch", type=int, default=8,
                   help="batch size of the hybrid descent sweeps")
    p.add_argument("--hybrid-sweeps", type=int, default=2,
                   help="descent sweeps per source per cycle")
    p.add_argument("--no-move", action="store_true",
                   help="disable movement (stability diagnostics)")
    p.add_argument("--no-normalize", action="store_true",
                   help="keep raw feature values")
    p.add_argument("--crossover-rate", type=float, default=0.9)
    p.add_argument("--mutation-rate", type=float, default=0.01)
    p.add_argument("--mutation-sigma", type=float, default=0.1)
    p.add_argument("--elitism", type=int, default=1)
    p.add_argument("--stability-window", type=int, default=10)
    p.add_argument("--parallel", action="store_true",
                   help="evaluate solutions concurrently (same output)")
    p.add_argument("--compare", action="store_true",
                   help="run abc and ga over all seeds and print a comparison table")
    p.add_argument("--data-dir", default=None,
                   help=f"dataset directory (default $" + datamod.DATA_DIR_ENV + " or ./data)")
    p.add_argument("--class-column", default="last",
                   help="for CSV paths: first, last or a zero-based index")
    p.add_argument("--id-columns", default="",
                   help="for CSV paths: comma-separated column indexes to drop")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--header", action="store_true",
                   help="for CSV paths: skip the first line")
    p.add_argument("--out", default=None, help="report path (JSON); a directory "
                   "when several runs are produced")
    p.add_argument("--curves", default=None, help="curves path (CSV); a directory "
                   "when several runs are produced")
    return p


def _parse_seeds(args) -> list[int]:
    if args.seeds:
        try:
            return [int(s) for s in args.seeds.split(",") if s.strip() != ""]
        except ValueError:
            raise ConfigError(f"invalid --seeds value {args.seeds!r}") from None
    return [args.seed]


def _parse_hidden(raw) -> list[int]:
    try:
        sizes = [int(s) for s in str(raw).split(",") if s.strip() != ""]
    except ValueError:
        raise ConfigError(f"invalid --hidden value {raw!r}") from None
    if not sizes or any(s < 1 for s in sizes):
        raise ConfigError(f"hidden layer sizes must be positive, got {raw!r}")
    return sizes


def load_dataset(args, name: str | None = None) -> datamod.Dataset:
    """Resolve --dataset into a Dataset (builtin name or CSV path)."""
    target = name if name is not None else args.dataset
    normalize = not args.no_normalize
    if target in datamod.BUILTIN_FILES:
        return datamod.load_builtin(target, args.data_dir, normalize=normalize)
    if os.path.exists(target):
        ids = tuple(int(c) for c in args.id_columns.split(",") if c.strip() != "")
        spec = datamod.DatasetSpec(
            class_column=args.class_column if args.class_column in ("first", "last")
            else int(args.class_column),
            id_columns=ids,
            delimiter=args.delimiter,
            header=args.header,
        )
        return datamod.load_csv(target, spec, normalize=normalize)
    raise ConfigError(
        f"unknown dataset {target!r}; valid names are "
        f"{sorted(datamod.BUILTIN_FILES)} or an existing CSV path"
    )


def architecture(data: datamod.Dataset, hidden) -> tuple[int, ...]:
    return (data.n_features, *hidden, data.n_classes)


def run_bp(arch, data, eta: float, iterations: int, threshold: float = 95.0,
           seed: int = 0, sink=None,
           stability_window: int = metrics.DEFAULT_STABILITY_WINDOW) -> metrics.RunReport:
    """Plain full-batch gradient-descent training, same report schema."""
    if iterations < 1:
        raise ConfigError("iterations must be at least 1")
    rng = np.random.default_rng(seed)
    net = nn.network_from_params(arch, rng.random(nn.param_count(arch)))
    records = []
    terminated_by = "mcn"
    for it in range(1, iterations + 1):
        net = nn.bp_sweep(net, data, eta)
        sse = nn.total_sse(net, data) / data.n_samples
        ccr = metrics.correct_classification_rate(net, data)
        record = metrics.IterationRecord(
            cycle=it, sse_best=sse, sse_avg=sse, ccr_avg=ccr,
            n_employed=1, n_scout=0,
        )
        records.append(record)
        if sink is not None:
            sink(record)
        if ccr > threshold:
            terminated_by = "threshold"
            break
    summary = metrics.summarize(records, stability_window, terminated_by)
    return metrics.RunReport(
        algo="bp",
        dataset=metrics.dataset_meta(data, arch),
        config={"learning_rate": eta, "iterations": iterations,
                "ccr_threshold": threshold, "seed": seed},
        records=tuple(records),
        summary=summary,
    )


def _abc_config(args, seed: int) -> colony.AbcConfig:
    return colony.AbcConfig(
        population=args.pop,
        max_cycles=args.mcn,
        learning_rate=args.lr,
        ccr_threshold=args.threshold,
        step_mode=args.step_mode,
        prob_mode=args.prob_mode,
        seed=seed,
        hybrid_bp=args.hybrid_bp,
        hybrid_batch=args.hybrid_batch,
        hybrid_sweeps=args.hybrid_sweeps,
        move_enabled=not args.no_move,
    )


def _ga_config(args, seed: int) -> ga.GaConfig:
    return ga.GaConfig(
        population=args.pop,
        generations=args.mcn,
        crossover_rate=args.crossover_rate,
        mutation_rate=args.mutation_rate,
        mutation_sigma=args.mutation_sigma,
        elitism=args.elitism,
        seed=seed,
    )


def run_one(algo: str, args, dataset: datamod.Dataset, seed: int) -> metrics.RunReport:
    arch = architecture(dataset, _parse_hidden(args.hidden))
    if algo == "abc":
        return colony.run(_abc_config(args, seed), arch, dataset,
                          parallel=args.parallel,
                          stability_window=args.stability_window)
    if algo == "ga":
        return ga.run_ga(_ga_config(args, seed), arch, dataset,
                         parallel=args.parallel,
                         stability_window=args.stability_window)
    if algo == "bp":
        return run_bp(arch, dataset, args.lr, args.mcn, args.threshold, seed,
                      stability_window=args.stability_window)
    raise ConfigError(f"unknown algorithm {algo!r}")


def _fmt_stable(value) -> str:
    return f"{value:.2f}" if value is not None else "not stable"


def summary_line(report: metrics.RunReport) -> str:
    s = report.summary
    return (
        f"{report.algo} {report.dataset['name']} seed={report.config.get('seed')} "
        f"cycles={s.cycles_run} terminated_by={s.terminated_by} "
        f"final_sse={s.final_sse:.4f} ccr_max={s.ccr_max:.2f} "
        f"ccr_min={s.ccr_min:.2f} ccr_stable={_fmt_stable(s.ccr_stable)}"
    )


def _output_path(base, report, suffix, multiple) -> str:
    if not multiple and not os.path.isdir(base):
        return base
    os.makedirs(base, exist_ok=True)
    name = f"{report.algo}_{report.dataset['name']}_seed{report.config.get('seed')}{suffix}"
    return os.path.join(base, name)


def compare(args, dataset_names, seeds) -> dict:
    """Fill the comparison structure: one row per (dataset, algorithm)."""
    rows = []
    for name in dataset_names:
        dataset = load_dataset(args, name)
        for algo in ("abc", "ga"):
            reports = [run_one(algo, args, dataset, seed) for seed in seeds]
            finals = [r.summary.final_sse for r in reports]
            best_i = min(range(len(reports)), key=lambda i: finals[i])
            rows.append({
                "dataset": dataset.name,
                "algo": algo,
                "seeds": list(seeds),
                "final_sse_median": statistics.median(finals),
                "final_sse_best": finals[best_i],
                "ccr_max": max(r.summary.ccr_max for r in reports),
                "ccr_min": min(r.summary.ccr_min for r in reports),
                "ccr_stable": reports[best_i].summary.ccr_stable,
            })
    return {"schema_version": metrics.SCHEMA_VERSION, "rows": rows}


def render_comparison(table: dict) -> str:
    headers = ["dataset", "algo", "sse_median", "sse_best",
               "ccr_max", "ccr_min", "ccr_stable"]
    lines = [["%s" % h for h in headers]]
    for row in table["rows"]:
        lines.append([
            row["dataset"], row["algo"],
            f"{row['final_sse_median']:.4f}", f"{row['final_sse_best']:.4f}",
            f"{row['ccr_max']:.2f}", f"{row['ccr_min']:.2f}",
            _fmt_stable(row["ccr_stable"]),
        ])
    widths = [max(len(line[c]) for line in lines) for c in range(len(headers))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip()
        for line in lines
    )


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        seeds = _parse_seeds(args)
        if args.compare:
            names = (sorted(datamod.BUILTIN_FILES) if args.dataset == "all"
                     else [args.dataset])
            table = compare(args, names, seeds)
            print(render_comparison(table))
            if args.out:
                import json
                with open(args.out, "w", encoding="utf-8") as fh:
                    json.dump(table, fh, indent=2)
                    fh.write("\n")
            return 0
        if args.dataset == "all":
            raise ConfigError("--dataset all is only valid with --compare")
        dataset = load_dataset(args)
        multiple = len(seeds) > 1
        for seed in seeds:
            report = run_one(args.algo, args, dataset, seed)
            print(summary_line(report))
            if args.out:
                metrics.write_report(report, _output_path(args.out, report,
                                                          ".json", multiple))
            if args.curves:
                metrics.write_curves(report.records,
                                     _output_path(args.curves, report,
                                                  ".csv", multiple))
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericOverflowError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
