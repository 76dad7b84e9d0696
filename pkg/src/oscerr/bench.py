"""Train and score every registered dataset found in a suite directory."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from .dataset import NumericDataset, fit_normalizer, load_dataset, normalize
from .evaluation import EvaluationReport, evaluate
from .inference import HYPOTHESIS, ORACLE
from .registry import SUITE, SuiteEntry, verify_checksums
from .trainer import ClassifierModel, TrainConfig, train

log = logging.getLogger(__name__)

AVERAGE_ERROR_CHECKED = ("Wine", "Iris", "Zoo")
AVERAGE_ERROR_LIMIT = 0.05
MARGIN_TOLERANCE = 10


@dataclass
class BenchResult:
    entry: SuiteEntry
    model: ClassifierModel
    reports: dict[str, EvaluationReport]
    train_s: float
    checksum_mismatches: list[str] = field(default_factory=list)

    def failures(self) -> list[str]:
        """Reasons the oracle-mode result misses the reference one."""
        e, r = self.entry, self.reports[ORACLE]
        pub = e.reference
        out = []
        if r.total != pub.total:
            out.append(f"{e.name}: {r.total} rows evaluated, reference {pub.total}")
        if abs(r.correct - pub.correct) > e.count_tolerance:
            out.append(f"{e.name}: {r.correct} correct, reference {pub.correct} (+/-{e.count_tolerance})")
        if abs(r.best_margin_pct - pub.margin_pct) > MARGIN_TOLERANCE:
            out.append(f"{e.name}: best margin {r.best_margin_pct}%, reference {pub.margin_pct}% (+/-{MARGIN_TOLERANCE})")
        if r.runtime_s > e.time_limit_s:
            out.append(f"{e.name}: {r.runtime_s:.2f}s exceeds {e.time_limit_s}s")
        if e.name in AVERAGE_ERROR_CHECKED and abs(r.average_error) > AVERAGE_ERROR_LIMIT:
            out.append(f"{e.name}: |average error| {abs(r.average_error):.4f} > {AVERAGE_ERROR_LIMIT}")
        return out


def load_entry(suite_dir: str | Path, e: SuiteEntry):
    """(train, eval, codec, normalizer) with both splits normalized on the training data."""
    suite_dir = Path(suite_dir)
    schema = e.schema
    raw, codec = load_dataset(suite_dir / e.train_file, schema)
    if e.test_file is not None:
        train_raw = raw
        eval_raw, _ = load_dataset(suite_dir / e.test_file, schema, codec, raw.nominal_levels)
    elif e.split_at is not None:
        train_raw = NumericDataset(raw.rows[: e.split_at], raw.labels[: e.split_at], raw.nominal_levels)
        eval_raw = NumericDataset(raw.rows[e.split_at :], raw.labels[e.split_at :], raw.nominal_levels)
    else:
        train_raw = eval_raw = raw
    norm = fit_normalizer(train_raw)
    return normalize(train_raw, norm), normalize(eval_raw, norm), codec, norm


def run_entry(suite_dir, e: SuiteEntry, modes=(ORACLE, HYPOTHESIS), config: TrainConfig | None = None) -> BenchResult:
    train_data, eval_data, codec, norm = load_entry(suite_dir, e)
    config = config or TrainConfig(max_layers=e.max_layers)
    t0 = time.perf_counter()
    model = train(train_data, codec, config, norm)
    train_s = time.perf_counter() - t0
    reports = {}
    for mode in modes:
        r = evaluate(model, eval_data, e.name, mode)
        reports[mode] = replace(r, runtime_s=r.runtime_s + train_s)
    return BenchResult(e, model, reports, train_s, verify_checksums(suite_dir, e))


def missing_files(suite_dir, e: SuiteEntry) -> list[str]:
    return [f for f in e.files if not (Path(suite_dir) / f).exists()]


def run_suite(suite_dir, entries=None, modes=(ORACLE, HYPOTHESIS)):
    """Returns (results, skipped entry names); ``entries`` defaults to the full registry."""
    results, skipped = [], []
    for e in SUITE if entries is None else entries:
        missing = missing_files(suite_dir, e)
        if missing:
            log.warning("skipping %s: missing %s", e.name, ", ".join(missing))
            skipped.append(e.name)
            continue
        res = run_entry(suite_dir, e, modes)
        for fname in res.checksum_mismatches:
            log.warning("%s: %s does not match the recorded checksum", e.name, fname)
        results.append(res)
    return results, skipped


HYPOTHESIS_NOTE = (
    "note: hypothesis mode drives a row towards every candidate output in turn; the "
    "stored layers shrink the residual for most targets, so the smallest residual "
    "says little about the true category. The reference figures rely on the true "
    "output value being known (oracle mode)."
)


def hypothesis_summary(results: list[BenchResult]) -> list[str]:
    """Lines comparing hypothesis mode with the nearest-prototype baseline."""
    scored = [res for res in results if HYPOTHESIS in res.reports]
    if not scored:
        return []
    wins = [res.entry.name for res in scored
            if res.reports[HYPOTHESIS].percent_correct > res.reports[HYPOTHESIS].baseline_percent_correct]
    lines = [f"hypothesis mode beats the nearest-prototype baseline on {len(wins)}/{len(scored)} datasets"]
    if 2 * len(wins) < len(scored):
        lines.append(HYPOTHESIS_NOTE)
    return lines
