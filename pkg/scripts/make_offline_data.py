#!/usr/bin/env python3
"""Populate the data directory without network access.

iris.data and wine.data are regenerated from scikit-learn's bundled copies of
the same UCI files, so their contents are the real measurements. glass.data
and soybean-small.data have no offline source here; for those this script
writes deterministic stand-ins that follow the exact UCI file layout (column
structure, row counts, class codes and class frequencies) so that loaders,
trainers and tests exercise the real code paths. Replace them with the
canonical files via scripts/fetch_uci.py whenever network access exists.
See data/README.md for per-file provenance.
"""

from __future__ import annotations

import argparse
import hashlib
import os

import numpy as np


def fmt(v: float) -> str:
    return np.format_float_positional(float(v), trim="-")


def write_iris(path: str) -> None:
    from sklearn.datasets import load_iris

    bunch = load_iris()
    lines = []
    for row, t in zip(bunch.data, bunch.target):
        label = "Iris-" + bunch.target_names[t]
        lines.append(",".join(f"{v:.1f}" for v in row) + f",{label}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_wine(path: str) -> None:
    from sklearn.datasets import load_wine

    bunch = load_wine()
    lines = []
    for row, t in zip(bunch.data, bunch.target):
        lines.append(f"{t + 1}," + ",".join(fmt(v) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


# Class codes and frequencies of the UCI glass file (type 4 is absent there).
GLASS_CLASS_COUNTS = [(1, 70), (2, 76), (3, 17), (5, 13), (6, 9), (7, 29)]

# Rough per-class feature centers (RI, Na, Mg, Al, Si, K, Ca, Ba, Fe) chosen
# to give separable, realistically scaled columns.
GLASS_CENTERS = {
    1: (1.5185, 13.2, 3.5, 1.2, 72.6, 0.45, 8.8, 0.0, 0.05),
    2: (1.5182, 13.1, 3.1, 1.4, 72.6, 0.55, 9.1, 0.05, 0.08),
    3: (1.5187, 13.4, 3.5, 1.2, 72.4, 0.40, 8.8, 0.0, 0.06),
    5: (1.5190, 12.8, 0.8, 2.0, 72.4, 1.00, 10.1, 0.2, 0.06),
    6: (1.5175, 14.6, 1.3, 1.4, 73.2, 0.05, 9.4, 0.0, 0.0),
    7: (1.5172, 14.4, 0.5, 2.1, 72.9, 0.30, 8.6, 1.0, 0.01),
}
GLASS_SPREAD = (0.0015, 0.5, 0.35, 0.25, 0.45, 0.2, 0.6, 0.25, 0.05)


def write_glass_standin(path: str, seed: int = 20260809) -> None:
    rng = np.random.default_rng(seed)
    lines = []
    ident = 1
    for code, count in GLASS_CLASS_COUNTS:
        center = np.array(GLASS_CENTERS[code])
        for _ in range(count):
            row = center + rng.normal(0.0, GLASS_SPREAD, 9)
            row[1:] = np.clip(row[1:], 0.0, None)
            cells = [str(ident), f"{row[0]:.5f}"] + [f"{v:.2f}" for v in row[1:]]
            lines.append(",".join(cells) + f",{code}")
            ident += 1
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


# Class labels and frequencies of the UCI soybean-small file.
SOYBEAN_CLASS_COUNTS = [("D1", 10), ("D2", 10), ("D3", 10), ("D4", 17)]
SOYBEAN_N_ATTRS = 35


def write_soybean_standin(path: str, seed: int = 20260810) -> None:
    rng = np.random.default_rng(seed)
    # One ordinal prototype per class, attributes in 0..6 like the UCI file.
    prototypes = {
        name: rng.integers(0, 7, SOYBEAN_N_ATTRS)
        for name, _ in SOYBEAN_CLASS_COUNTS
    }
    lines = []
    for name, count in SOYBEAN_CLASS_COUNTS:
        proto = prototypes[name]
        for _ in range(count):
            row = proto.copy()
            flips = rng.random(SOYBEAN_N_ATTRS) < 0.15
            row[flips] = rng.integers(0, 7, int(flips.sum()))
            lines.append(",".join(str(int(v)) for v in row) + f",{name}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", default="data")
    ap.add_argument("--force", action="store_true", help="overwrite existing files")
    args = ap.parse_args()
    os.makedirs(args.data_dir, exist_ok=True)

    jobs = [
        ("iris.data", write_iris),
        ("wine.data", write_wine),
        ("glass.data", write_glass_standin),
        ("soybean-small.data", write_soybean_standin),
    ]
    sums = []
    for name, writer in jobs:
        path = os.path.join(args.data_dir, name)
        if os.path.exists(path) and not args.force:
            print(f"keep   {path}")
        else:
            writer(path)
            print(f"wrote  {path}")
        sums.append(f"{sha256(path)}  {name}")
    with open(os.path.join(args.data_dir, "SHA256SUMS"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(sums) + "\n")
    print("updated SHA256SUMS")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
