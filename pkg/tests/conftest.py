"""Shared fixtures: benchmark data files and loaded datasets.

The iris file is regenerated locally (scikit-learn's bundled copy patched to
the two rows the UCI distribution lists differently) when data/iris.data is
absent.  The car and abalone files cannot be regenerated; tests needing them
skip with a pointer to scripts/fetch_data.py.
"""

from __future__ import annotations

import importlib.util
from pathlib import Path

import pytest

from sing.data import load_abalone, load_car, load_iris

ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = ROOT / "data"


def _fetch_module():
    spec = importlib.util.spec_from_file_location("fetch_data", ROOT / "scripts" / "fetch_data.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="session")
def iris_path(tmp_path_factory) -> Path:
    bundled = DATA_DIR / "iris.data"
    if bundled.exists():
        return bundled
    path = tmp_path_factory.mktemp("data") / "iris.data"
    _fetch_module().write_iris_from_sklearn(path)
    return path


@pytest.fixture(scope="session")
def iris_dataset(iris_path):
    return load_iris(iris_path)


def _require(name: str) -> Path:
    path = DATA_DIR / f"{name}.data"
    if not path.exists():
        pytest.skip(f"{path} not present; run scripts/fetch_data.py (needs network access to the UCI repository)")
    return path


@pytest.fixture(scope="session")
def car_path() -> Path:
    return _require("car")


@pytest.fixture(scope="session")
def car_dataset(car_path):
    return load_car(car_path)


@pytest.fixture(scope="session")
def abalone_path() -> Path:
    return _require("abalone")


@pytest.fixture(scope="session")
def abalone_dataset(abalone_path):
    return load_abalone(abalone_path)
