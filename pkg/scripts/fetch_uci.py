#!/usr/bin/env python3
"""Download the four canonical UCI benchmark files into the data directory.

The library itself never touches the network; this helper does, verifying
every download structurally (row count, column count, class labels) and
recording SHA-256 digests in data/SHA256SUMS. If a digest is already present
in the manifest the download must match it.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import urllib.request

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases"

FILES = {
    "iris.data": {
        "url": f"{BASE}/iris/iris.data",
        "rows": 150,
        "columns": 5,
        "classes": {"Iris-setosa", "Iris-versicolor", "Iris-virginica"},
        "class_index": -1,
    },
    "wine.data": {
        "url": f"{BASE}/wine/wine.data",
        "rows": 178,
        "columns": 14,
        "classes": {"1", "2", "3"},
        "class_index": 0,
    },
    "glass.data": {
        "url": f"{BASE}/glass/glass.data",
        "rows": 214,
        "columns": 11,
        "classes": {"1", "2", "3", "5", "6", "7"},
        "class_index": -1,
    },
    "soybean-small.data": {
        "url": f"{BASE}/soybean/soybean-small.data",
        "rows": 47,
        "columns": 36,
        "classes": {"D1", "D2", "D3", "D4"},
        "class_index": -1,
    },
}


def sha256(blob: bytes) -> str:
    return hashlib.sha256(blob).hexdigest()


def validate(name: str, blob: bytes) -> None:
    info = FILES[name]
    rows = [ln for ln in blob.decode("utf-8").splitlines() if ln.strip()]
    if len(rows) != info["rows"]:
        raise SystemExit(f"{name}: expected {info['rows']} rows, got {len(rows)}")
    widths = {len(r.split(",")) for r in rows}
    if widths != {info["columns"]}:
        raise SystemExit(f"{name}: expected {info['columns']} columns, got {widths}")
    labels = {r.split(",")[info["class_index"]].strip() for r in rows}
    if labels != info["classes"]:
        raise SystemExit(f"{name}: unexpected class labels {sorted(labels)}")


def read_manifest(path: str) -> dict[str, str]:
    out = {}
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                parts = line.split()
                if len(parts) == 2:
                    out[parts[1]] = parts[0]
    return out


def write_manifest(path: str, entries: dict[str, str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for name in sorted(entries):
            fh.write(f"{entries[name]}  {name}\n")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", default="data")
    ap.add_argument("--only", choices=sorted(FILES), default=None)
    args = ap.parse_args()
    os.makedirs(args.data_dir, exist_ok=True)
    manifest_path = os.path.join(args.data_dir, "SHA256SUMS")
    manifest = read_manifest(manifest_path)

    names = [args.only] if args.only else sorted(FILES)
    for name in names:
        url = FILES[name]["url"]
        print(f"fetching {url}")
        try:
            with urllib.request.urlopen(url, timeout=30) as resp:
                blob = resp.read()
        except OSError as exc:
            print(f"  download failed: {exc}", file=sys.stderr)
            print("  no network? scripts/make_offline_data.py builds a local "
                  "substitute set", file=sys.stderr)
            return 1
        validate(name, blob)
        digest = sha256(blob)
        if name in manifest and manifest[name] != digest:
            print(f"  {name}: digest {digest} does not match the manifest entry "
                  f"{manifest[name]} (refusing to overwrite)", file=sys.stderr)
            return 1
        with open(os.path.join(args.data_dir, name), "wb") as fh:
            fh.write(blob)
        manifest[name] = digest
        print(f"  ok ({digest})")
    write_manifest(manifest_path, manifest)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
