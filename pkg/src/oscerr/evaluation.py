"""Average output error, margin-based correctness counts and report tables."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from .dataset import CategoryCodec, NumericDataset
from .inference import HYPOTHESIS, MODES, ORACLE, forward_batch, hypothesis_outputs, margin_band
from .trainer import ClassifierModel, build_prototypes

MAX_MARGIN = 49


@dataclass(frozen=True)
class EvaluationReport:
    dataset: str
    mode: str
    average_error: float
    best_margin_pct: int
    correct: int
    total: int
    runtime_s: float = 0.0
    baseline_percent_correct: float = float("nan")

    def __post_init__(self):
        if not 0 <= self.correct <= self.total:
            raise ValueError("correct must lie in [0, total]")
        if not 0 <= self.best_margin_pct <= MAX_MARGIN:
            raise ValueError(f"margin must lie in [0, {MAX_MARGIN}]")

    @property
    def percent_correct(self) -> float:
        return 100.0 * self.correct / self.total if self.total else float("nan")


@dataclass(frozen=True)
class ScoredRows:
    """Per-row outputs for one mode; everything the margin counts need."""

    chosen: np.ndarray  # category picked per row
    output: np.ndarray  # final output X of the chosen run
    labels: np.ndarray
    gap: float
    targets: np.ndarray  # O of the true category per row

    def correct_at(self, margin_pct: int) -> int:
        lo, hi = margin_band(self.targets, self.gap, margin_pct)
        ok = (self.chosen == self.labels) & (lo <= self.output) & (self.output <= hi)
        return int(ok.sum())


def oracle_outputs(model: ClassifierModel, data: NumericDataset) -> np.ndarray:
    targets = model.codec.output_values[data.labels]
    return forward_batch(data.rows, model, targets)


def score_rows(model: ClassifierModel, data: NumericDataset, mode: str) -> ScoredRows:
    values = model.codec.output_values
    targets = values[data.labels]
    if mode == ORACLE:
        x = oracle_outputs(model, data)
        chosen = np.argmin(np.abs(x[:, None] - values[None, :]), axis=1)
    elif mode == HYPOTHESIS:
        outs = hypothesis_outputs(data.rows, model)
        residuals = np.abs(outs - values[None, :])
        chosen = np.argmin(residuals, axis=1)
        x = outs[np.arange(len(chosen)), chosen]
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return ScoredRows(chosen, x, data.labels, model.codec.gap, targets)


def average_error(model: ClassifierModel, data: NumericDataset) -> float:
    """Signed mean of (desired output - oracle output) over all rows.

    Positive means the outputs undershoot their targets on average.
    """
    if len(data) == 0:
        raise ValueError("cannot average over an empty dataset")
    diff = model.codec.output_values[data.labels] - oracle_outputs(model, data)
    return math.fsum(diff.tolist()) / len(diff)


def accuracy_at_margin(model, data, margin_pct: int, mode: str = ORACLE) -> tuple[int, int]:
    if not 0 <= margin_pct <= MAX_MARGIN:
        raise ValueError(f"margin must lie in [0, {MAX_MARGIN}]")
    return score_rows(model, data, mode).correct_at(margin_pct), len(data)


def sweep_scored(scored: ScoredRows) -> tuple[int, int]:
    counts = [scored.correct_at(m) for m in range(MAX_MARGIN + 1)]
    best = max(counts)
    return counts.index(best), best


def margin_sweep(model, data, mode: str = ORACLE) -> tuple[int, int, int]:
    """Smallest integer margin (0-49 %) reaching the highest correct count."""
    margin, correct = sweep_scored(score_rows(model, data, mode))
    return margin, correct, len(data)


def nearest_prototype_predict(prototypes: np.ndarray, rows: np.ndarray) -> np.ndarray:
    d2 = ((rows[:, None, :] - prototypes[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)


def nearest_prototype_baseline(data_train: NumericDataset, data_test: NumericDataset, codec: CategoryCodec) -> float:
    """Percent of test rows whose closest (Euclidean) category average is correct."""
    protos = np.stack([row for _, row in build_prototypes(data_train, codec)])
    pred = nearest_prototype_predict(protos, data_test.rows)
    return 100.0 * float(np.mean(pred == data_test.labels))


def evaluate(
    model: ClassifierModel,
    data: NumericDataset,
    name: str,
    mode: str = ORACLE,
    margin_pct: int | None = None,
) -> EvaluationReport:
    """Score ``data`` in one mode; sweeps margins unless ``margin_pct`` is fixed."""
    t0 = time.perf_counter()
    scored = score_rows(model, data, mode)
    if margin_pct is None:
        margin, correct = sweep_scored(scored)
    else:
        margin, correct = margin_pct, scored.correct_at(margin_pct)
    avg = average_error(model, data)
    elapsed = time.perf_counter() - t0
    pred = nearest_prototype_predict(model.prototypes, data.rows)
    baseline = 100.0 * float(np.mean(pred == data.labels))
    return EvaluationReport(name, mode, avg, margin, correct, len(data), elapsed, baseline)


COLUMNS = (
    ("Dataset", "dataset"),
    ("Average Error", "average_error"),
    ("Best % Error Margin", "best_margin_pct"),
    ("Correctly Classified", None),
    ("% Correct", "percent_correct"),
    ("Mode", "mode"),
    ("Baseline % Correct", "baseline_percent_correct"),
    ("Time (s)", "runtime_s"),
)


def _cells(r: EvaluationReport) -> list[str]:
    return [
        r.dataset,
        f"{r.average_error:.3f}",
        f"{r.best_margin_pct}%",
        f"{r.correct} from {r.total}",
        f"{r.percent_correct:.1f}%",
        r.mode,
        f"{r.baseline_percent_correct:.1f}%",
        f"{r.runtime_s:.3f}",
    ]


def render_report(reports: list[EvaluationReport]) -> str:
    """Aligned text table, columns in the order of the reference results tables."""
    header = [title for title, _ in COLUMNS]
    body = [_cells(r) for r in reports]
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header] + body]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


CSV_FIELDS = [f.name for f in fields(EvaluationReport)]


def reports_to_csv(reports: list[EvaluationReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        row = asdict(r)
        for k in ("average_error", "runtime_s", "baseline_percent_correct"):
            row[k] = repr(row[k])
        w.writerow(row)
    return buf.getvalue()


def reports_from_csv(text: str) -> list[EvaluationReport]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(
            EvaluationReport(
                dataset=row["dataset"],
                mode=row["mode"],
                average_error=float(row["average_error"]),
                best_margin_pct=int(row["best_margin_pct"]),
                correct=int(row["correct"]),
                total=int(row["total"]),
                runtime_s=float(row["runtime_s"]),
                baseline_percent_correct=float(row["baseline_percent_correct"]),
            )
        )
    return out
