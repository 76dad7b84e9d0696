"""Command line entry point: ``oscerr train | eval | bench | demo-trace``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import modelio
from .bench import hypothesis_summary, run_suite
from .dataset import DatasetError, DatasetSchema, NumericDataset, fit_normalizer, load_dataset, load_schema, normalize
from .evaluation import MAX_MARGIN, evaluate, render_report, reports_to_csv
from .inference import MODES, ORACLE
from .registry import load_bundled_schema
from .trace import demo_trace
from .trainer import TrainConfig, train

log = logging.getLogger("oscerr")

EXIT_ERROR = 1
EXIT_STRICT = 3


class CommandError(Exception):
    pass


def resolve_schema(ref: str | None) -> DatasetSchema:
    if ref is None:
        raise CommandError("--schema is required")
    path = Path(ref)
    if path.exists():
        return load_schema(path)
    try:
        return load_bundled_schema(ref)
    except FileNotFoundError:
        raise CommandError(f"schema {ref!r} is neither a file nor a bundled schema name") from None


def _require_file(path: str | None, flag: str) -> Path:
    if path is None:
        raise CommandError(f"{flag} is required")
    p = Path(path)
    if not p.is_file():
        raise CommandError(f"{flag}: {path} does not exist")
    return p


def _modes(mode: str) -> tuple[str, ...]:
    return MODES if mode == "both" else (mode,)


def _train_config(args) -> TrainConfig:
    return TrainConfig(
        max_layers=args.layers,
        plateau_threshold=args.plateau_threshold,
        plateau_enabled=not args.no_plateau,
    )


def cmd_train(args) -> int:
    schema = resolve_schema(args.schema)
    raw, codec = load_dataset(_require_file(args.data, "--data"), schema)
    norm = fit_normalizer(raw)
    model = train(normalize(raw, norm), codec, _train_config(args), norm)
    print(f"layers: {model.iterations}")
    print("total error per layer: " + ", ".join(f"{e:.6g}" for e in model.error_history))
    if args.out:
        modelio.save_model(model, args.out)
        print(f"model written to {args.out}")
    return 0


def cmd_eval(args) -> int:
    schema = resolve_schema(args.schema)
    data_path = _require_file(args.data, "--data")
    if args.model:
        model = modelio.load_model(_require_file(args.model, "--model"))
        eval_path = Path(args.test_data) if args.test_data else data_path
        raw, _ = load_dataset(_require_file(str(eval_path), "--test-data"), schema, model.codec, model.nominal_levels)
        if model.normalizer is None:
            raise CommandError("model has no normalizer; cannot scale raw data")
        eval_data = NumericDataset(model.normalizer.apply(raw.rows), raw.labels)
    else:
        raw, codec = load_dataset(data_path, schema)
        norm = fit_normalizer(raw)
        model = train(normalize(raw, norm), codec, _train_config(args), norm)
        if args.test_data:
            test_raw, _ = load_dataset(_require_file(args.test_data, "--test-data"), schema, codec, raw.nominal_levels)
            eval_data = normalize(test_raw, norm)
        else:
            eval_data = normalize(raw, norm)
    name = args.name or Path(args.test_data or args.data).stem
    reports = [evaluate(model, eval_data, name, mode, args.margin) for mode in _modes(args.mode)]
    sys.stdout.write(render_report(reports))
    if args.report:
        Path(args.report).write_text(reports_to_csv(reports))
    return 0


def cmd_bench(args) -> int:
    suite = Path(args.suite)
    if not suite.is_dir():
        raise CommandError(f"--suite: {suite} is not a directory")
    results, skipped = run_suite(suite, modes=_modes(args.mode))
    if not results:
        log.warning("no registered dataset files found in %s", suite)
    reports = [r for res in results for r in res.reports.values()]
    sys.stdout.write(render_report(reports))
    if args.report:
        Path(args.report).write_text(reports_to_csv(reports))

    failures = []
    if ORACLE in _modes(args.mode):
        for res in results:
            failures += res.failures()
    for line in hypothesis_summary(results):
        print(line)
    failures += [f"{name}: dataset files missing" for name in skipped]
    for f in failures:
        print(f"FAIL {f}")
    if args.strict and failures:
        return EXIT_STRICT
    return 0


def cmd_demo_trace(args) -> int:
    lines, problems = demo_trace()
    print("\n".join(lines))
    for p in problems:
        print(f"MISMATCH {p}", file=sys.stderr)
    return EXIT_ERROR if problems else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscerr", description=__doc__)
    parser.add_argument("--config", help="JSON run configuration supplying defaults for any flag")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = []
    parser.subcommands = subparsers

    def training_flags(p):
        p.add_argument("--layers", type=int, default=10, help="maximum number of correction layers")
        p.add_argument("--plateau-threshold", type=float, default=1e-9)
        p.add_argument("--no-plateau", action="store_true", help="stop on the layer cap only")

    p = sub.add_parser("train", help="build a model from a labelled file")
    p.add_argument("--data")
    p.add_argument("--schema", help="schema JSON file or bundled schema name")
    p.add_argument("--out", help="model file to write")
    training_flags(p)
    p.set_defaults(func=cmd_train)
    subparsers.append(p)

    p = sub.add_parser("eval", help="score a dataset and print a results table")
    p.add_argument("--data", help="training data (also the evaluation data without --test-data)")
    p.add_argument("--test-data")
    p.add_argument("--schema")
    p.add_argument("--model", help="saved model; trained from --data when omitted")
    p.add_argument("--mode", choices=MODES + ("both",), default="both")
    p.add_argument("--margin", type=int, choices=range(MAX_MARGIN + 1), metavar="0-49",
                   help="fixed margin percent instead of the sweep")
    p.add_argument("--report", help="write the machine-readable CSV report here")
    p.add_argument("--name", help="dataset name in the report")
    training_flags(p)
    p.set_defaults(func=cmd_eval)
    subparsers.append(p)

    p = sub.add_parser("bench", help="run every registered dataset in a suite directory")
    p.add_argument("--suite", default="data/suite")
    p.add_argument("--mode", choices=MODES + ("both",), default="both")
    p.add_argument("--report")
    p.add_argument("--strict", action="store_true", help="exit nonzero if any reference result is missed")
    p.set_defaults(func=cmd_bench)
    subparsers.append(p)

    p = sub.add_parser("demo-trace", help="replay the five-variable walk-through")
    p.set_defaults(func=cmd_demo_trace)
    subparsers.append(p)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        with open(pre.config) as fh:
            cfg = json.load(fh)
        # config values become defaults; explicit flags still win
        for p in parser.subcommands:
            p.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
    return parser.parse_args(argv)


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CommandError, DatasetError, modelio.ModelFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
