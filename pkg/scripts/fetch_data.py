#!/usr/bin/env python3
"""Fetch or regenerate the UCI benchmark data files used by the harness.

Downloads iris.data, car.data, and abalone.data into --dest when the UCI
repository is reachable.  Without network access the iris file can still be
regenerated locally from scikit-learn's bundled copy: scikit-learn ships the
corrected measurements, so the two rows the UCI distribution is known to
list differently (rows 35 and 38) are patched back to the distributed
values, yielding the file byte-content users download from UCI.  The car
and abalone files contain real measurements and labels that cannot be
regenerated; they must be downloaded.
"""

from __future__ import annotations

import argparse
import sys
import urllib.request
from pathlib import Path

URLS = {
    "iris": "https://archive.ics.uci.edu/ml/machine-learning-databases/iris/iris.data",
    "car": "https://archive.ics.uci.edu/ml/machine-learning-databases/car/car.data",
    "abalone": "https://archive.ics.uci.edu/ml/machine-learning-databases/abalone/abalone.data",
}
EXPECTED_ROWS = {"iris": 150, "car": 1728, "abalone": 4177}

# Rows of the distributed iris.data that differ from the corrected values
# scikit-learn ships (0-based row -> the distributed feature quadruple).
UCI_IRIS_DIVERGENT_ROWS = {
    34: (4.9, 3.1, 1.5, 0.1),
    37: (4.9, 3.1, 1.5, 0.1),
}


def iris_lines_from_sklearn() -> list[str]:
    from sklearn.datasets import load_iris

    bundle = load_iris()
    lines = []
    for i, (row, target) in enumerate(zip(bundle.data, bundle.target)):
        values = UCI_IRIS_DIVERGENT_ROWS.get(i, tuple(row))
        species = "Iris-" + bundle.target_names[target]
        lines.append(",".join(f"{v:.1f}" for v in values) + f",{species}")
    return lines


def write_iris_from_sklearn(path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(iris_lines_from_sklearn()) + "\n", encoding="utf-8")


def _validate(name: str, path: Path) -> None:
    rows = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    if len(rows) != EXPECTED_ROWS[name]:
        raise ValueError(f"{path}: expected {EXPECTED_ROWS[name]} rows, found {len(rows)}")
    try:
        from sing.data import load_abalone, load_car, load_iris

        {"iris": load_iris, "car": load_car, "abalone": load_abalone}[name](path)
    except ImportError:
        pass  # package not installed; row count check only


def download(name: str, path: Path, timeout: float = 30.0) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with urllib.request.urlopen(URLS[name], timeout=timeout) as response:
        path.write_bytes(response.read())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="data", help="directory for the data files")
    parser.add_argument("--only", default="iris,car,abalone", help="comma-separated subset")
    parser.add_argument("--force", action="store_true", help="overwrite existing files")
    args = parser.parse_args(argv)
    dest = Path(args.dest)
    failures = 0
    for name in [tok.strip() for tok in args.only.split(",") if tok.strip()]:
        if name not in URLS:
            print(f"unknown dataset {name!r}", file=sys.stderr)
            return 2
        path = dest / f"{name}.data"
        if path.exists() and not args.force:
            print(f"{path}: already present")
            continue
        try:
            download(name, path)
            _validate(name, path)
            print(f"{path}: downloaded")
            continue
        except Exception as exc:
            print(f"{path}: download failed ({exc})", file=sys.stderr)
        if name == "iris":
            try:
                write_iris_from_sklearn(path)
                _validate(name, path)
                print(f"{path}: regenerated from scikit-learn's bundled copy")
                continue
            except Exception as exc:  # pragma: no cover - needs sklearn
                print(f"{path}: regeneration failed ({exc})", file=sys.stderr)
        failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
