"""Benchmark suite: file names, schemas, iteration caps and reference results.

A suite directory holds the dataset files under the names below. The
checksums are those of the files produced by ``scripts/prepare_suite.py``;
a mismatch (e.g. a different UCI revision) is reported, not fatal.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .dataset import DatasetSchema


@dataclass(frozen=True)
class ReferenceResult:
    correct: int
    total: int
    margin_pct: int
    average_error: float


@dataclass(frozen=True)
class SuiteEntry:
    name: str
    group: int  # 1: scored on the training data, 2: separate test rows
    train_file: str
    schema_name: str
    max_layers: int
    reference: ReferenceResult
    test_file: str | None = None
    split_at: int | None = None  # single file: first rows train, rest test
    count_tolerance: int = 2
    time_limit_s: float = 2.0

    @property
    def schema(self) -> DatasetSchema:
        return load_bundled_schema(self.schema_name)

    @property
    def files(self) -> list[str]:
        return [self.train_file] + ([self.test_file] if self.test_file else [])

    @property
    def has_test_split(self) -> bool:
        return self.test_file is not None or self.split_at is not None


def load_bundled_schema(name: str) -> DatasetSchema:
    text = resources.files("oscerr").joinpath("schemas", f"{name}.json").read_text()
    return DatasetSchema.from_dict(json.loads(text))


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


SUITE: tuple[SuiteEntry, ...] = (
    SuiteEntry("Wine", 1, "wine.data", "wine", 10, ReferenceResult(178, 178, 25, 0.004)),
    SuiteEntry("Iris", 1, "iris.data", "iris", 10, ReferenceResult(149, 150, 45, 0.005)),
    SuiteEntry("Zoo", 1, "zoo.data", "zoo", 10, ReferenceResult(101, 101, 45, -0.004)),
    SuiteEntry(
        "Abalone", 1, "abalone.data", "abalone", 20, ReferenceResult(3410, 4177, 49, 0.007),
        count_tolerance=41,  # 1 % of 4177
    ),
    SuiteEntry("Hayes-Roth", 1, "hayes-roth.data", "hayes-roth", 10, ReferenceResult(131, 132, 25, -0.007)),
    SuiteEntry("Liver", 1, "bupa.data", "liver", 2, ReferenceResult(345, 345, 35, 0.02)),
    SuiteEntry(
        "UM", 2, "um_train.csv", "um", 10, ReferenceResult(143, 145, 49, 0.02), test_file="um_test.csv"
    ),
    SuiteEntry(
        "Banknote", 2, "banknote_train.csv", "banknote", 10, ReferenceResult(100, 100, 35, -0.05),
        test_file="banknote_test.csv",
    ),
    SuiteEntry(
        "SPECT Heart", 2, "SPECT.train", "spect", 10, ReferenceResult(187, 187, 35, 0.13), test_file="SPECT.test"
    ),
    SuiteEntry(
        "Letters", 2, "letter-recognition.data", "letters", 10, ReferenceResult(3692, 4000, 49, 0.002),
        split_at=16000, time_limit_s=10.0,
    ),
)

_CHECKSUMS_FILE = "checksums.json"


def _load_checksums() -> dict:
    try:
        text = resources.files("oscerr").joinpath("schemas", _CHECKSUMS_FILE).read_text()
    except FileNotFoundError:
        return {}
    return json.loads(text)


CHECKSUMS: dict[str, str] = _load_checksums()


def entry(name: str) -> SuiteEntry:
    for e in SUITE:
        if e.name.lower() == name.lower():
            return e
    raise KeyError(f"no suite entry named {name!r}")


def verify_checksums(suite_dir: str | Path, e: SuiteEntry) -> list[str]:
    """Names of present files whose sha256 differs from the recorded one."""
    bad = []
    for fname in e.files:
        path = Path(suite_dir) / fname
        expected = CHECKSUMS.get(fname)
        if expected and path.exists() and sha256_file(path) != expected:
            bad.append(fname)
    return bad
