"""Classification-rate metric, per-cycle records, run summaries and their
serialized forms (JSON report + CSV curves).

Reports are byte-stable: identical runs serialize to identical files.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from . import network as nn
from .errors import ShapeError, StateError

SCHEMA_VERSION = 1
CURVES_HEADER = "cycle,sse_best,sse_avg,ccr_avg"

# How many trailing cycles must repeat the same classification rate before a
# run counts as stable.
DEFAULT_STABILITY_WINDOW = 10


@dataclass(frozen=True)
class IterationRecord:
    cycle: int
    sse_best: float  # population-minimum average squared error
    sse_avg: float  # population-average average squared error
    ccr_avg: float  # population-average correct-classification rate, percent
    n_employed: int
    n_scout: int


@dataclass(frozen=True)
class RunSummary:
    final_sse: float
    ccr_max: float
    ccr_min: float
    ccr_stable: float | None  # None marks "not stable"
    cycles_run: int
    terminated_by: str  # "threshold" | "mcn"


@dataclass(frozen=True)
class RunReport:
    algo: str
    dataset: dict
    config: dict
    records: tuple[IterationRecord, ...]
    summary: RunSummary
    schema_version: int = SCHEMA_VERSION


def ccr_from_predictions(P: np.ndarray, T: np.ndarray) -> float:
    """Percent of rows whose arg-max prediction matches the arg-max target.

    Ties resolve to the lowest index on both sides.
    """
    if P.shape != T.shape:
        raise ShapeError(f"predictions {P.shape} do not match targets {T.shape}")
    correct = int(np.count_nonzero(np.argmax(P, axis=1) == np.argmax(T, axis=1)))
    return 100.0 * correct / P.shape[0]


def correct_classification_rate(net: nn.Network, data) -> float:
    """Classification rate of a network over a whole dataset, in percent."""
    X, T = data.features, data.targets
    if T.shape[1] != net.output_width:
        raise ShapeError("dataset shape does not match network")
    return ccr_from_predictions(nn.predictions(net, X), T)


def summarize(records, stability_window: int = DEFAULT_STABILITY_WINDOW,
              terminated_by: str = "mcn") -> RunSummary:
    """Collapse a record sequence into the max/min/stable view of a run.

    The final rate counts as stable only when the run is at least
    ``stability_window`` cycles long and the rate is bit-identical over the
    last ``stability_window`` of them.
    """
    records = tuple(records)
    if not records:
        raise StateError("cannot summarize an empty record sequence")
    ccrs = [r.ccr_avg for r in records]
    stable = None
    if len(ccrs) >= stability_window:
        tail = ccrs[-stability_window:]
        if all(c == tail[0] for c in tail):
            stable = tail[-1]
    return RunSummary(
        final_sse=records[-1].sse_avg,
        ccr_max=max(ccrs),
        ccr_min=min(ccrs),
        ccr_stable=stable,
        cycles_run=len(records),
        terminated_by=terminated_by,
    )


def dataset_meta(data, arch) -> dict:
    """Dataset block embedded in every report, architecture included."""
    return {
        "name": data.name,
        "n_samples": data.n_samples,
        "n_features": data.n_features,
        "n_classes": data.n_classes,
        "normalized": data.normalized,
        "class_counts": list(data.class_counts),
        "architecture": [int(s) for s in arch],
    }


# -- serialization -------------------------------------------------------------


def report_to_dict(report: RunReport) -> dict:
    return {
        "schema_version": report.schema_version,
        "algo": report.algo,
        "dataset": dict(report.dataset),
        "config": dict(report.config),
        "records": [asdict(r) for r in report.records],
        "summary": asdict(report.summary),
    }


def report_from_dict(d: dict) -> RunReport:
    return RunReport(
        schema_version=d["schema_version"],
        algo=d["algo"],
        dataset=dict(d["dataset"]),
        config=dict(d["config"]),
        records=tuple(IterationRecord(**r) for r in d["records"]),
        summary=RunSummary(**d["summary"]),
    )


def write_report(report: RunReport, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report_to_dict(report), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def read_report(path) -> RunReport:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return report_from_dict(json.load(fh))
    except OSError as exc:
        raise OSError(f"cannot read report from {path}: {exc}") from exc


def write_curves(records, path) -> None:
    """One CSV row per cycle, suitable for any plotting tool."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(CURVES_HEADER + "\n")
            for r in records:
                fh.write(f"{r.cycle},{r.sse_best!r},{r.sse_avg!r},{r.ccr_avg!r}\n")
    except OSError as exc:
        raise OSError(f"cannot write curves to {path}: {exc}") from exc
