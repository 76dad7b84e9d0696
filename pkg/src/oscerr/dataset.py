"""Delimited-text ingest, nominal encoding, min-max scaling and the category codec."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np


class DatasetError(ValueError):
    """Raised for malformed input files, schemas or label sets."""


@dataclass(frozen=True)
class DatasetSchema:
    delimiter: str | None = ","  # None splits on runs of whitespace
    has_header: bool = False
    label_column: int = -1
    ignore_columns: frozenset[int] = frozenset()
    nominal_columns: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "ignore_columns", frozenset(self.ignore_columns))
        object.__setattr__(self, "nominal_columns", frozenset(self.nominal_columns))
        if self.label_column in self.ignore_columns:
            raise DatasetError(f"label column {self.label_column} is also ignored")

    @classmethod
    def from_dict(cls, d: Mapping) -> "DatasetSchema":
        known = {"delimiter", "has_header", "label_column", "ignore_columns", "nominal_columns"}
        unknown = set(d) - known
        if unknown:
            raise DatasetError(f"unknown schema fields: {sorted(unknown)}")
        kw = dict(d)
        if kw.get("delimiter") == "whitespace":
            kw["delimiter"] = None
        for key in ("ignore_columns", "nominal_columns"):
            if key in kw:
                kw[key] = frozenset(int(c) for c in kw[key])
        return cls(**kw)

    def to_dict(self) -> dict:
        return {
            "delimiter": "whitespace" if self.delimiter is None else self.delimiter,
            "has_header": self.has_header,
            "label_column": self.label_column,
            "ignore_columns": sorted(self.ignore_columns),
            "nominal_columns": sorted(self.nominal_columns),
        }


def load_schema(path: str | os.PathLike) -> DatasetSchema:
    with open(path) as fh:
        return DatasetSchema.from_dict(json.load(fh))


def _as_number(s: str) -> float | None:
    try:
        return float(s)
    except ValueError:
        return None


def sorted_levels(values: Iterable[str]) -> list[str]:
    """Distinct strings, numerically ordered when every one parses as a number."""
    distinct = set(values)
    if all(_as_number(v) is not None for v in distinct):
        return sorted(distinct, key=lambda v: (float(v), v))
    return sorted(distinct)


def even_spacing(k: int) -> np.ndarray:
    if k == 1:
        return np.zeros(1)
    return np.arange(k, dtype=np.float64) / (k - 1)


@dataclass(frozen=True)
class CategoryCodec:
    """Bijection between label strings, category indices and output values.

    Output values are spread evenly over [0, 1], so three categories get
    0, 0.5 and 1.0 and the spacing (``gap``) is ``1 / (C - 1)``.
    """

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) < 2:
            raise DatasetError("at least two categories are required")
        if len(set(self.labels)) != len(self.labels):
            raise DatasetError("duplicate category labels")

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "CategoryCodec":
        return cls(tuple(sorted_levels(labels)))

    @property
    def n_categories(self) -> int:
        return len(self.labels)

    @property
    def output_values(self) -> np.ndarray:
        return even_spacing(len(self.labels))

    @property
    def gap(self) -> float:
        return 1.0 / (len(self.labels) - 1)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DatasetError(f"label {label!r} is not one of the known categories") from None

    def output_value(self, category: int) -> float:
        return float(self.output_values[category])


@dataclass(frozen=True)
class NumericDataset:
    rows: np.ndarray  # (n_rows, n) float64
    labels: np.ndarray  # (n_rows,) category indices
    nominal_levels: Mapping[int, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim == 1:
            rows = rows.reshape(-1, 1) if rows.size else rows.reshape(0, 0)
        labels = np.asarray(self.labels, dtype=np.int64)
        if rows.ndim != 2:
            raise DatasetError("rows must be a 2-D array")
        if labels.shape != (rows.shape[0],):
            raise DatasetError(f"{labels.shape[0]} labels for {rows.shape[0]} rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return self.rows.shape[0]

    def by_category(self, category: int) -> np.ndarray:
        return self.rows[self.labels == category]


def _read_records(text: str, schema: DatasetSchema) -> list[list[str]]:
    if schema.delimiter is None:
        records = [line.split() for line in text.splitlines()]
    else:
        records = list(csv.reader(io.StringIO(text), delimiter=schema.delimiter, skipinitialspace=True))
    records = [[cell.strip() for cell in rec] for rec in records if any(c.strip() for c in rec)]
    if schema.has_header and records:
        records = records[1:]
    return records


def load_dataset(
    source: str | os.PathLike | io.TextIOBase,
    schema: DatasetSchema,
    codec: CategoryCodec | None = None,
    nominal_levels: Mapping[int, Sequence[str]] | None = None,
) -> tuple[NumericDataset, CategoryCodec]:
    """Parse delimited text into a dataset plus its category codec.

    ``source`` is a path or an open text stream. Pass ``codec`` (and the
    training set's ``nominal_levels``) when loading a test split so labels and
    nominal columns are encoded the same way as the training data.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    records = _read_records(text, schema)
    if not records:
        raise DatasetError("dataset is empty")

    width = len(records[0])
    first_line = 2 if schema.has_header else 1
    for i, rec in enumerate(records):
        if len(rec) != width:
            raise DatasetError(
                f"row {i + first_line}: expected {width} columns, found {len(rec)}"
            )
        if any(c == "" or c == "?" for c in rec):
            raise DatasetError(f"row {i + first_line}: missing value")

    label_col = schema.label_column % width if -width <= schema.label_column < width else None
    if label_col is None:
        raise DatasetError(f"label column {schema.label_column} out of range for {width} columns")
    for c in schema.ignore_columns | schema.nominal_columns:
        if not -width <= c < width:
            raise DatasetError(f"column {c} out of range for {width} columns")
    ignored = {c % width for c in schema.ignore_columns}
    if label_col in ignored:
        raise DatasetError(f"label column {schema.label_column} is also ignored")
    nominal = {c % width for c in schema.nominal_columns}
    feature_cols = [c for c in range(width) if c != label_col and c not in ignored]
    if not feature_cols:
        raise DatasetError("no feature columns left after dropping label and ignored columns")

    raw_labels = [rec[label_col] for rec in records]
    if codec is None:
        codec = CategoryCodec.from_labels(raw_labels)
    labels = np.array([codec.index(lab) for lab in raw_labels], dtype=np.int64)

    given = {int(k) % width: tuple(v) for k, v in (nominal_levels or {}).items()}
    levels: dict[int, tuple[str, ...]] = {}
    rows = np.empty((len(records), len(feature_cols)), dtype=np.float64)
    for j, col in enumerate(feature_cols):
        cells = [rec[col] for rec in records]
        if col in nominal:
            lv = given.get(col) or tuple(sorted_levels(cells))
            levels[col] = lv
            codes = even_spacing(len(lv))
            lookup = {v: codes[k] for k, v in enumerate(lv)}
            try:
                rows[:, j] = [lookup[c] for c in cells]
            except KeyError as exc:
                raise DatasetError(f"column {col}: unseen nominal value {exc.args[0]!r}") from None
        else:
            for i, c in enumerate(cells):
                v = _as_number(c)
                if v is None:
                    raise DatasetError(
                        f"row {i + first_line}, column {col}: {c!r} is not numeric "
                        "(declare the column nominal?)"
                    )
                rows[i, j] = v
    return NumericDataset(rows, labels, levels), codec


@dataclass(frozen=True)
class Normalizer:
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mins", np.asarray(self.mins, dtype=np.float64))
        object.__setattr__(self, "maxs", np.asarray(self.maxs, dtype=np.float64))
        if self.mins.shape != self.maxs.shape:
            raise DatasetError("min/max length mismatch")
        if np.any(self.mins > self.maxs):
            raise DatasetError("min exceeds max")

    def __len__(self) -> int:
        return self.mins.shape[0]

    def apply(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.float64)
        if rows.shape[-1] != len(self):
            raise DatasetError(f"data has {rows.shape[-1]} columns, normalizer has {len(self)}")
        span = self.maxs - self.mins
        constant = span == 0
        out = (rows - self.mins) / np.where(constant, 1.0, span)
        out[..., constant] = 0.0
        return out


def fit_normalizer(data: NumericDataset) -> Normalizer:
    if len(data) == 0:
        raise DatasetError("cannot fit a normalizer on an empty dataset")
    return Normalizer(data.rows.min(axis=0), data.rows.max(axis=0))


def normalize(data: NumericDataset, norm: Normalizer) -> NumericDataset:
    """Scale every column to [0, 1] using the training min/max.

    Values outside the fitted range are left unclamped; constant columns map
    to 0.0.
    """
    return NumericDataset(norm.apply(data.rows), data.labels, data.nominal_levels)
