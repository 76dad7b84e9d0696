"""Layered add/subtract error-correction classifier for tabular data."""

from .core import absolute_error, aggregate_output, rule_step, transpose_row
from .dataset import (
    CategoryCodec,
    DatasetError,
    DatasetSchema,
    Normalizer,
    NumericDataset,
    fit_normalizer,
    load_dataset,
    normalize,
)
from .evaluation import EvaluationReport, accuracy_at_margin, average_error, margin_sweep, render_report
from .inference import classify_hypothesis, forward, score_oracle, within_margin
from .trainer import ClassifierModel, TrainConfig, build_prototypes, train

__version__ = "0.1.0"
