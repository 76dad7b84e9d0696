"""Whole-dataset column averages and difference-vector row shapes.

These are the descriptors of the older wave-shape approach. They are kept to
compare a single global average against per-category averaging.
"""

from __future__ import annotations

import numpy as np

from .dataset import NumericDataset


def column_average(data: NumericDataset | np.ndarray) -> np.ndarray:
    rows = data.rows if isinstance(data, NumericDataset) else np.asarray(data, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise ValueError("column_average needs at least one row")
    return rows.mean(axis=0)


def difference_shape(row) -> np.ndarray:
    """Consecutive differences ``row[k+1] - row[k]``; length ``len(row) - 1``."""
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1 or row.shape[0] < 2:
        raise ValueError("difference_shape needs a row of length >= 2")
    return np.diff(row)


def global_vs_category_residual(data: NumericDataset, output_values: np.ndarray) -> dict:
    """Mean absolute distance of each row's mean to its target, two ways.

    ``global`` predicts every row with the mean of the whole dataset's
    averaged row (what a single column average can offer); ``category``
    uses the row's own category average.
    """
    targets = np.asarray(output_values, dtype=np.float64)[data.labels]
    global_pred = float(column_average(data).mean())
    global_target = float(targets.mean())
    cat_means = np.array([data.by_category(c).mean() for c in range(len(output_values))])
    return {
        "averaged_target": global_target,
        "global_residual": float(np.mean(np.abs(global_target - targets))),
        "global_input_mean": global_pred,
        "category_input_means": cat_means.tolist(),
        "category_spread": float(cat_means.max() - cat_means.min()),
    }
