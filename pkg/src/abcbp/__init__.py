"""Bee-colony and genetic trainers for small feed-forward classifiers."""

from .colony import AbcConfig, Colony, Solution, run
from .data import Dataset, DatasetSpec, builtin_spec, load_builtin, load_csv, shuffle
from .ga import GaConfig, run_ga
from .metrics import (
    IterationRecord,
    RunReport,
    RunSummary,
    correct_classification_rate,
    read_report,
    summarize,
    write_curves,
    write_report,
)
from .network import (
    LINEAR,
    LOGISTIC,
    LayerParams,
    Network,
    TransferFunction,
    bp_step,
    forward,
    gradient,
    network_from_params,
    network_params,
    param_count,
    predict,
    sample_sse,
    total_sse,
)

__version__ = "0.1.0"
