"""Running rows through a trained layer stack.

Two scoring modes exist because the correction rule needs a target output
even when classifying:

* ``oracle``: the row is driven towards its true category's output value and
  judged on how close it lands. Needs the label.
* ``hypothesis``: the row is run once per category with that category's
  output value as the target; the category whose run lands closest to its own
  target wins (lowest index on ties). Needs no label.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ForwardTrace, aggregate_output, run_layers, transpose_row
from .trainer import ClassifierModel

ORACLE = "oracle"
HYPOTHESIS = "hypothesis"
MODES = (ORACLE, HYPOTHESIS)


@dataclass(frozen=True)
class Prediction:
    category: int
    output: float
    residual: float
    mode: str
    hypothesis_residuals: tuple[float, ...] | None = None


def _check(rows: np.ndarray, model: ClassifierModel) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.float64)
    if rows.shape[-1] != model.n:
        raise ValueError(f"row has {rows.shape[-1]} variables, model expects {model.n}")
    return rows


def forward(row, model: ClassifierModel, o: float) -> ForwardTrace:
    row = _check(row, model)
    states = run_layers(row, model.layers, o)
    return ForwardTrace(tuple(states), aggregate_output(states[-1]))


def forward_batch(rows, model: ClassifierModel, targets) -> np.ndarray:
    """Final outputs for many rows at once; ``targets`` holds one o per row."""
    x = _check(rows, model)
    targets = np.broadcast_to(np.asarray(targets, dtype=np.float64), (x.shape[0],))
    for layer in model.layers:
        x = transpose_row(x, layer, targets)
    return aggregate_output(x)


def nearest_category(x: float, model: ClassifierModel) -> int:
    return int(np.argmin(np.abs(model.codec.output_values - x)))


def hypothesis_outputs(rows, model: ClassifierModel) -> np.ndarray:
    """(n_rows, C) final outputs, one column per hypothesised category."""
    rows = _check(np.atleast_2d(rows), model)
    outs = model.codec.output_values
    return np.stack([forward_batch(rows, model, o) for o in outs], axis=1)


def classify_hypothesis(row, model: ClassifierModel) -> Prediction:
    x = hypothesis_outputs(row, model)[0]
    residuals = np.abs(x - model.codec.output_values)
    best = int(np.argmin(residuals))  # first minimum = lowest index
    return Prediction(best, float(x[best]), float(residuals[best]), HYPOTHESIS, tuple(residuals.tolist()))


def score_oracle(row, model: ClassifierModel, true_category: int) -> Prediction:
    o = model.codec.output_value(true_category)
    x = forward(row, model, o).final_output
    return Prediction(nearest_category(x, model), x, abs(x - o), ORACLE)


def margin_width(gap: float, margin_pct: float) -> float:
    return gap * margin_pct / 100


def margin_band(o_c: float, gap: float, margin_pct: float) -> tuple[float, float]:
    w = margin_width(gap, margin_pct)
    return o_c - w, o_c + w


def within_margin(x, o_c, gap: float, margin_pct: float):
    """True where ``x`` lies in the closed band ``o_c -/+ gap * margin_pct / 100``.

    Compared against the band endpoints rather than ``|x - o_c|`` so that a
    band quoted as 0.425-0.575 really contains 0.425 in floating point.
    """
    if gap <= 0:
        raise ValueError("gap must be positive")
    lo, hi = margin_band(o_c, gap, margin_pct)
    inside = (lo <= x) & (x <= hi)
    return bool(inside) if np.ndim(inside) == 0 else inside
