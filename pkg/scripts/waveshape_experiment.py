#!/usr/bin/env python3
"""Global column average versus per-category averages on the suite datasets.

For each dataset present in the suite directory this prints the target that a
single whole-dataset average would aim for and the mean distance of the true
targets from it, next to the mean oracle residual of the per-category layer
model. No pass/fail threshold; the numbers are for inspection.

    python scripts/waveshape_experiment.py [--suite data/suite]
"""

import argparse
import sys

import numpy as np

from oscerr.bench import load_entry, missing_files
from oscerr.evaluation import oracle_outputs
from oscerr.registry import SUITE
from oscerr.trainer import TrainConfig, train
from oscerr.waveshape import difference_shape, global_vs_category_residual


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--suite", default="data/suite")
    args = ap.parse_args(argv)

    print(f"{'dataset':<12} {'avg target':>10} {'global resid':>12} {'per-cat resid':>13} "
          f"{'first-row shape (head)':>24}")
    for e in SUITE:
        if missing_files(args.suite, e):
            print(f"{e.name:<12} (missing)")
            continue
        data, _, codec, norm = load_entry(args.suite, e)
        out = global_vs_category_residual(data, codec.output_values)
        model = train(data, codec, TrainConfig(max_layers=e.max_layers), norm)
        per_cat = float(np.mean(np.abs(codec.output_values[data.labels] - oracle_outputs(model, data))))
        shape = difference_shape(data.rows[0])[:3] if data.n >= 2 else []
        head = ", ".join(f"{v:+.2f}" for v in shape)
        print(f"{e.name:<12} {out['averaged_target']:>10.3f} {out['global_residual']:>12.3f} "
              f"{per_cat:>13.3f} {head:>24}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
