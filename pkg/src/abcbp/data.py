"""Loading, validation and encoding of delimited classification data.

Feature columns are min-max normalized to [0, 1] (column-wise) and targets are
one-hot encoded, with class order fixed by first appearance in the file.
Built-in layouts cover the four UCI benchmark files used by the CLI.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, EmptyDatasetError, ParseError, ShapeError

DATA_DIR_ENV = "ABCBP_DATA_DIR"

BUILTIN_FILES = {
    "iris": "iris.data",
    "wine": "wine.data",
    "glass": "glass.data",
    "soybean": "soybean-small.data",
}


@dataclass(frozen=True)
class DatasetSpec:
    """Column layout of a delimited file: where the class lives, what to drop."""

    class_column: int | str = "last"  # "first" | "last" | zero-based index
    id_columns: tuple[int, ...] = ()
    delimiter: str = ","
    header: bool = False

    def resolve_class_index(self, width: int) -> int:
        if self.class_column == "first":
            idx = 0
        elif self.class_column == "last":
            idx = width - 1
        else:
            idx = int(self.class_column)
        if not 0 <= idx < width:
            raise ParseError(f"class column {self.class_column} out of range for width {width}")
        return idx


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix + one-hot targets + label bookkeeping."""

    name: str
    features: np.ndarray  # (n_samples, n_features)
    targets: np.ndarray  # (n_samples, n_classes), one-hot rows
    class_names: tuple[str, ...]
    normalized: bool = True
    class_counts: tuple[int, ...] = ()  # per class, as found in the file

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return self.targets.shape[1]


def builtin_spec(name: str) -> DatasetSpec:
    """Column layout for one of the four built-in UCI files."""
    specs = {
        "iris": DatasetSpec(class_column="last"),
        "wine": DatasetSpec(class_column="first"),
        "glass": DatasetSpec(class_column="last", id_columns=(0,)),
        "soybean": DatasetSpec(class_column="last"),
    }
    try:
        return specs[name]
    except KeyError:
        raise ConfigError(
            f"unknown dataset {name!r}; choose from {sorted(specs)}"
        ) from None


def normalize_minmax(features: np.ndarray) -> np.ndarray:
    """Column-wise map onto [0, 1]; constant columns map to 0."""
    lo = features.min(axis=0)
    hi = features.max(axis=0)
    span = hi - lo
    out = np.zeros_like(features)
    nonconst = span > 0
    out[:, nonconst] = (features[:, nonconst] - lo[nonconst]) / span[nonconst]
    return out


def load_csv(path, spec: DatasetSpec | None = None, name: str | None = None,
             normalize: bool = True) -> Dataset:
    """Parse a delimited file into a Dataset.

    Drops ``spec.id_columns``, pulls class labels from ``spec.class_column``
    (first-appearance order), min-max normalizes features unless disabled.
    """
    spec = spec or DatasetSpec()
    rows, labels = [], []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    start = 1 if spec.header else 0
    width = None
    for lineno, line in enumerate(lines, start=1):
        if lineno <= start:
            continue
        line = line.strip()
        if not line:
            continue  # UCI files end with a blank line
        cells = [c.strip() for c in line.split(spec.delimiter)]
        if width is None:
            width = len(cells)
            class_idx = spec.resolve_class_index(width)
            drop = set(spec.id_columns) | {class_idx}
            if any(not 0 <= c < width for c in spec.id_columns):
                raise ParseError("id column out of range", path=path, line=lineno)
        elif len(cells) != width:
            raise ParseError(
                f"expected {width} columns, found {len(cells)}", path=path, line=lineno
            )
        feature_cells = [c for i, c in enumerate(cells) if i not in drop]
        values = []
        for cell in feature_cells:
            if cell == "" or cell == "?":
                raise ParseError("missing value", path=path, line=lineno)
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(
                    f"non-numeric feature value {cell!r}", path=path, line=lineno
                ) from None
        label = cells[class_idx]
        if label == "":
            raise ParseError("empty class label", path=path, line=lineno)
        rows.append(values)
        labels.append(label)
    if not rows:
        raise EmptyDatasetError(f"{path}: no data rows")

    class_names: list[str] = []
    for lab in labels:
        if lab not in class_names:
            class_names.append(lab)
    index = {lab: i for i, lab in enumerate(class_names)}
    features = np.asarray(rows, dtype=float)
    if not np.isfinite(features).all():
        raise ParseError("non-finite feature value", path=path)
    targets = np.zeros((len(rows), len(class_names)))
    for r, lab in enumerate(labels):
        targets[r, index[lab]] = 1.0
    counts = tuple(int(targets[:, c].sum()) for c in range(len(class_names)))
    if normalize:
        features = normalize_minmax(features)
    features.setflags(write=False)
    targets.setflags(write=False)
    if name is None:
        name = os.path.splitext(os.path.basename(str(path)))[0]
    return Dataset(
        name=name,
        features=features,
        targets=targets,
        class_names=tuple(class_names),
        normalized=normalize,
        class_counts=counts,
    )


def resolve_data_dir(data_dir=None) -> str:
    return str(data_dir) if data_dir else os.environ.get(DATA_DIR_ENV, "data")


def load_builtin(name: str, data_dir=None, normalize: bool = True) -> Dataset:
    """Load one of the built-in UCI datasets from the data directory."""
    spec = builtin_spec(name)
    path = os.path.join(resolve_data_dir(data_dir), BUILTIN_FILES[name])
    return load_csv(path, spec, name=name, normalize=normalize)


def shuffle(data: Dataset, seed: int) -> Dataset:
    """Deterministic row permutation; features and targets move together."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(data.n_samples)
    features = data.features[perm].copy()
    targets = data.targets[perm].copy()
    features.setflags(write=False)
    targets.setflags(write=False)
    return Dataset(
        name=data.name,
        features=features,
        targets=targets,
        class_names=data.class_names,
        normalized=data.normalized,
        class_counts=data.class_counts,
    )
