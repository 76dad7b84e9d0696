"""The add/subtract correction rule and the per-row transforms built on it.

A correction layer is a 1-D float64 array with one non-negative entry per
variable. Passing a row through a layer moves every variable towards the
target output ``o`` by that variable's correction: values at or below the
target get the correction added, values above it get it subtracted. A value
near the target can therefore overshoot and oscillate around it while a
distant value keeps moving in one direction.

All functions here accept a single row (1-D) or a batch of rows (2-D) with
``o`` broadcast per row, so training and inference share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CorrectionLayer = np.ndarray


def rule_step(x: float, ec: float, o: float) -> float:
    if ec < 0:
        raise ValueError("correction must be non-negative")
    return x + ec if x <= o else x - ec


def _targets(o, rows: np.ndarray) -> np.ndarray:
    o = np.asarray(o, dtype=np.float64)
    if rows.ndim == 2 and o.ndim == 1:
        return o[:, None]
    return o


def transpose_row(row, layer: CorrectionLayer, o) -> np.ndarray:
    """Apply one correction layer to a row (or batch of rows)."""
    row = np.asarray(row, dtype=np.float64)
    layer = np.asarray(layer, dtype=np.float64)
    if row.shape[-1] != layer.shape[0]:
        raise ValueError(f"row has {row.shape[-1]} variables, layer has {layer.shape[0]}")
    target = _targets(o, row)
    return np.where(row <= target, row + layer, row - layer)


def absolute_error(row, o) -> CorrectionLayer:
    row = np.asarray(row, dtype=np.float64)
    return np.abs(_targets(o, row) - row)


def aggregate_output(row) -> float | np.ndarray:
    """Mean of the final variable values.

    Values are summed in ascending order so the result does not depend on
    column order and a batch gives bit-identical results to single rows.
    """
    row = np.asarray(row, dtype=np.float64)
    n = row.shape[-1]
    if n == 0:
        raise ValueError("cannot aggregate an empty row")
    ordered = np.sort(row, axis=-1)
    if ordered.ndim == 1:
        return float(sum(ordered.tolist()) / n)
    # sequential left-to-right sum, matching the scalar path bit-for-bit
    total = np.zeros(ordered.shape[:-1])
    for j in range(n):
        total = total + ordered[..., j]
    return total / n


@dataclass(frozen=True)
class ForwardTrace:
    states: tuple[np.ndarray, ...]  # states[0] is the input row
    final_output: float

    @property
    def n_layers(self) -> int:
        return len(self.states) - 1


def run_layers(row, layers, o) -> list[np.ndarray]:
    """Every intermediate state of ``row`` passed through ``layers``."""
    states = [np.asarray(row, dtype=np.float64)]
    for layer in layers:
        states.append(transpose_row(states[-1], layer, o))
    return states
