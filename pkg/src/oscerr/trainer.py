"""Layer-stack construction from per-category averaged rows."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import CorrectionLayer, absolute_error, transpose_row
from .dataset import CategoryCodec, DatasetError, Normalizer, NumericDataset

TINY = 1e-300


@dataclass(frozen=True)
class TrainConfig:
    max_layers: int = 10
    plateau_threshold: float = 1e-9
    plateau_enabled: bool = True

    def __post_init__(self):
        if self.max_layers < 1:
            raise ValueError("max_layers must be >= 1")
        if self.plateau_threshold < 0:
            raise ValueError("plateau_threshold must be >= 0")


@dataclass
class TrainingState:
    """Current transposed prototype per category plus the error record."""

    rows: np.ndarray  # (C, n)
    targets: np.ndarray  # (C,)
    corrections: list[np.ndarray] = field(default_factory=list)  # one (C, n) array per layer
    total_error: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class ClassifierModel:
    layers: tuple[CorrectionLayer, ...]
    codec: CategoryCodec
    normalizer: Normalizer | None
    prototypes: np.ndarray  # (C, n) normalized per-category averages
    error_history: tuple[float, ...]
    category_corrections: tuple[np.ndarray, ...] = ()
    nominal_levels: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.layers:
            raise ValueError("a model needs at least one layer")
        n = self.layers[0].shape[0]
        if any(layer.shape != (n,) for layer in self.layers):
            raise ValueError("all layers must have the same length")

    @property
    def n(self) -> int:
        return self.layers[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.layers)

    @property
    def iterations(self) -> int:
        return len(self.layers)

    @property
    def final_error(self) -> float:
        return self.error_history[-1]


def build_prototypes(data: NumericDataset, codec: CategoryCodec | None = None, n_categories: int | None = None):
    """One column-wise averaged row per category, as (index, row) pairs."""
    if n_categories is None:
        n_categories = codec.n_categories if codec is not None else int(data.labels.max()) + 1
    out = []
    for c in range(n_categories):
        members = data.by_category(c)
        if len(members) == 0:
            label = codec.labels[c] if codec is not None else c
            raise DatasetError(f"category {label!r} has no rows")
        out.append((c, members.mean(axis=0)))
    return out


def total_error(corrections) -> float:
    return math.fsum(np.asarray(corrections, dtype=np.float64).ravel().tolist())


def category_mean(per_cat: np.ndarray) -> CorrectionLayer:
    """Element-wise mean over categories.

    Where every category holds the same value that value is returned as is;
    a plain sum/C can be off by an ulp (0.1 * 3 / 3 != 0.1).
    """
    base = per_cat[0]
    same = (per_cat == base).all(axis=0)
    return np.where(same, base, per_cat.sum(axis=0) / per_cat.shape[0])


def initial_state(prototypes: np.ndarray, targets: np.ndarray) -> tuple[CorrectionLayer, TrainingState]:
    """First stored layer: the category-averaged absolute error of the raw prototypes."""
    prototypes = np.asarray(prototypes, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    per_cat = absolute_error(prototypes, targets)
    state = TrainingState(prototypes.copy(), targets, [per_cat], [total_error(per_cat)])
    return category_mean(per_cat), state


def train_iteration(state: TrainingState, prev_layer: CorrectionLayer, codec: CategoryCodec | None = None):
    """Transpose every category row through ``prev_layer`` and average the new errors.

    Each category is driven towards its own output value. The per-category
    absolute errors become that category's correction set; their element-wise
    mean is the new stored layer. ``state`` is not modified.
    """
    moved = transpose_row(state.rows, prev_layer, state.targets)
    per_cat = absolute_error(moved, state.targets)
    new_state = replace(
        state,
        rows=moved,
        corrections=state.corrections + [per_cat],
        total_error=state.total_error + [total_error(per_cat)],
    )
    return category_mean(per_cat), new_state


def _plateaued(history: list[float], threshold: float) -> bool:
    if history[-1] == 0.0:
        return True
    if len(history) < 2:
        return False
    prev, cur = history[-2], history[-1]
    return (prev - cur) / max(prev, TINY) < threshold


def train_prototypes(prototypes, targets, config: TrainConfig):
    """Run the layer loop on already averaged rows. Returns (layers, final state)."""
    layer, state = initial_state(prototypes, targets)
    layers = [layer]
    stop = config.plateau_enabled and state.total_error[-1] == 0.0
    while len(layers) < config.max_layers and not stop:
        layer, state = train_iteration(state, layers[-1])
        layers.append(layer)
        stop = config.plateau_enabled and _plateaued(state.total_error, config.plateau_threshold)
    return layers, state


def train(
    data: NumericDataset,
    codec: CategoryCodec,
    config: TrainConfig = TrainConfig(),
    normalizer: Normalizer | None = None,
) -> ClassifierModel:
    """Build a classifier from (normalized) training data."""
    if len(data) == 0:
        raise DatasetError("cannot train on an empty dataset")
    protos = build_prototypes(data, codec)
    proto_rows = np.stack([row for _, row in protos])
    layers, state = train_prototypes(proto_rows, codec.output_values, config)
    return ClassifierModel(
        layers=tuple(layers),
        codec=codec,
        normalizer=normalizer,
        prototypes=proto_rows,
        error_history=tuple(state.total_error),
        category_corrections=tuple(state.corrections),
        nominal_levels=dict(data.nominal_levels),
    )
