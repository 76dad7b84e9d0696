"""The five-variable, single-category walk-through used as a golden check."""

from __future__ import annotations

import numpy as np

from .core import absolute_error, aggregate_output, transpose_row
from .trainer import TrainConfig, train_prototypes

TRACE_ROW = (3.0, 8.0, 5.0, 10.0, 2.0)
TRACE_TARGET = 4.0
EXPECTED_FIRST_ERROR = (1.0, 4.0, 1.0, 6.0, 2.0)
EXPECTED_CONVERGED = (4.0, 4.0, 4.0, 4.0, 4.0)


def _fmt(values) -> str:
    return ", ".join(f"{v:g}" for v in values)


def demo_trace(max_layers: int = 10) -> tuple[list[str], list[str]]:
    """Run the walk-through; returns (printed lines, mismatch messages)."""
    row = np.array(TRACE_ROW)
    lines, problems = [], []

    lines.append(f"Averaged Input row values to layer 1: {_fmt(row)}")
    lines.append(f"Output category value: {TRACE_TARGET:g}")
    err = absolute_error(row, TRACE_TARGET)
    lines.append(f"Absolute error = {_fmt(err)}")
    if tuple(err) != EXPECTED_FIRST_ERROR:
        problems.append(f"first absolute error {tuple(err)} != {EXPECTED_FIRST_ERROR}")

    moved = transpose_row(row, err, TRACE_TARGET)
    lines.append(f"Input plus/minus error correction to layer 2: {_fmt(moved)}")
    if tuple(moved) != EXPECTED_CONVERGED:
        problems.append(f"converged row {tuple(moved)} != {EXPECTED_CONVERGED}")
    err2 = absolute_error(moved, TRACE_TARGET)
    lines.append(f"Absolute error = {_fmt(err2)}")

    layers, state = train_prototypes(row[None, :], np.array([TRACE_TARGET]), TrainConfig(max_layers=max_layers))
    lines.append(f"Stored layers: {[list(map(float, layer)) for layer in layers]}")
    lines.append(f"Total error history: {state.total_error}")
    lines.append(f"Final output: {aggregate_output(state.rows[0]):g}")
    if [tuple(layer) for layer in layers] != [EXPECTED_FIRST_ERROR, (0.0,) * 5]:
        problems.append("stored layers differ from the expected two layers")
    if state.total_error != [14.0, 0.0]:
        problems.append(f"error history {state.total_error} != [14.0, 0.0]")
    return lines, problems
