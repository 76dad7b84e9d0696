#!/usr/bin/env python3
"""Assemble the benchmark suite directory used by ``oscerr bench``.

Original UCI files placed in ``--uci-dir`` always take precedence. Without
them, several datasets can be rebuilt from copies that ship inside
published Python wheels (fetched with ``pip download`` into ``--wheel-dir``):

    wine.data, iris.data        scikit-learn (installed)
    zoo.data                    orange3 wheel, Orange/datasets/zoo.tab
    abalone.data                scikit-lego wheel, sklego/data/abalone.zip
    bupa.data, hayes-roth.data,
    letter-recognition.data     keel-ds wheel (KEEL copies of the UCI files)

UM, Banknote and SPECT have no such mirror and need the UCI originals:

    um_train.csv / um_test.csv  the two sheets of the UCI User Knowledge
                                Modeling workbook exported as CSV (header row)
    data_banknote_authentication.txt
    SPECT.train, SPECT.test

Usage:
    python scripts/prepare_suite.py --out data/suite [--uci-dir DIR] [--wheel-dir DIR]
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import shutil
import subprocess
import sys
import zipfile
from pathlib import Path

log = logging.getLogger("prepare_suite")

WHEELS = {
    "keel": ("keel-ds==0.2.5", "keel_ds-0.2.5-*.whl"),
    "orange": ("orange3==3.39.0", "orange3-3.39.0-*.whl"),
    "sklego": ("scikit-lego==0.9.10", "scikit_lego-0.9.10-*.whl"),
}

ZOO_TYPES = {
    "mammal": "1", "bird": "2", "reptile": "3", "fish": "4",
    "amphibian": "5", "insect": "6", "invertebrate": "7",
}
IRIS_NAMES = ["Iris-setosa", "Iris-versicolor", "Iris-virginica"]
BANKNOTE_TEST_ROWS = 100
HAYES_ROTH_TRAIN_ROWS = 132


def write_rows(path: Path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerows(rows)


def wheel(kind: str, wheel_dir: Path, download: bool) -> zipfile.ZipFile | None:
    req, pattern = WHEELS[kind]
    found = sorted(wheel_dir.glob(pattern))
    if not found and download:
        wheel_dir.mkdir(parents=True, exist_ok=True)
        cmd = [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:",
               "--timeout", "120", "-d", str(wheel_dir), req]
        log.info("fetching %s", req)
        subprocess.run(cmd, check=False, stdout=subprocess.DEVNULL)
        found = sorted(wheel_dir.glob(pattern))
    if not found:
        log.warning("wheel %s not available", req)
        return None
    return zipfile.ZipFile(found[0])


def keel_rows(z: zipfile.ZipFile, name: str) -> list[list[str]]:
    text = z.read(f"keel_ds/data/balanced/raw/{name}.dat").decode()
    return [[c.strip() for c in line.split(",")] for line in text.splitlines() if line and not line.startswith("@")]


def build_wine(out: Path, **_) -> bool:
    from sklearn.datasets import _base

    text = (Path(_base.__file__).parent / "data" / "wine_data.csv").read_text().splitlines()
    rows = [r.split(",") for r in text[1:] if r]
    write_rows(out / "wine.data", [[str(int(r[-1]) + 1)] + r[:-1] for r in rows])
    return True


def build_iris(out: Path, **_) -> bool:
    from sklearn.datasets import _base

    text = (Path(_base.__file__).parent / "data" / "iris.csv").read_text().splitlines()
    rows = [r.split(",") for r in text[1:] if r]
    write_rows(out / "iris.data", [r[:-1] + [IRIS_NAMES[int(r[-1])]] for r in rows])
    return True


def build_zoo(out: Path, wheels) -> bool:
    z = wheels("orange")
    if z is None:
        return False
    lines = z.read("Orange/datasets/zoo.tab").decode().splitlines()[3:]
    rows = [line.split("\t") for line in lines if line.strip()]
    write_rows(out / "zoo.data", [r[:-1] + [ZOO_TYPES[r[-1]]] for r in rows])
    return True


def build_abalone(out: Path, wheels) -> bool:
    z = wheels("sklego")
    if z is None:
        return False
    inner = zipfile.ZipFile(io.BytesIO(z.read("sklego/data/abalone.zip")))
    text = inner.read(inner.namelist()[0]).decode()
    rows = list(csv.reader(io.StringIO(text)))[1:]
    write_rows(out / "abalone.data", rows)
    return True


def build_liver(out: Path, wheels) -> bool:
    z = wheels("keel")
    if z is None:
        return False
    write_rows(out / "bupa.data", keel_rows(z, "bupa"))
    return True


def build_hayes_roth(out: Path, wheels) -> bool:
    # KEEL appends the 28 labelled UCI test rows after the 132 training rows
    z = wheels("keel")
    if z is None:
        return False
    rows = keel_rows(z, "hayes-roth")[:HAYES_ROTH_TRAIN_ROWS]
    write_rows(out / "hayes-roth.data", [[str(i + 1)] + r for i, r in enumerate(rows)])
    return True


def build_letters(out: Path, wheels) -> bool:
    z = wheels("keel")
    if z is None:
        return False
    write_rows(out / "letter-recognition.data", [[r[-1]] + r[:-1] for r in keel_rows(z, "letter")])
    return True


def split_banknote(src: Path, out: Path) -> None:
    """Hold out 100 rows spread evenly through the file (it is sorted by class)."""
    rows = [r for r in csv.reader(src.read_text().splitlines()) if r]
    picks = {round(k * len(rows) / BANKNOTE_TEST_ROWS) for k in range(BANKNOTE_TEST_ROWS)}
    write_rows(out / "banknote_train.csv", [r for i, r in enumerate(rows) if i not in picks])
    write_rows(out / "banknote_test.csv", [r for i, r in enumerate(rows) if i in picks])


BUILDERS = {
    "wine.data": build_wine,
    "iris.data": build_iris,
    "zoo.data": build_zoo,
    "abalone.data": build_abalone,
    "bupa.data": build_liver,
    "hayes-roth.data": build_hayes_roth,
    "letter-recognition.data": build_letters,
}
COPY_ONLY = ["um_train.csv", "um_test.csv", "SPECT.train", "SPECT.test", "banknote_train.csv", "banknote_test.csv"]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="data/suite")
    ap.add_argument("--uci-dir", help="directory holding original UCI files")
    ap.add_argument("--wheel-dir", default=str(Path.home() / ".cache" / "oscerr-wheels"))
    ap.add_argument("--no-download", action="store_true")
    ap.add_argument("--write-checksums", metavar="JSON", help="record sha256 of the produced files")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    uci = Path(args.uci_dir) if args.uci_dir else None
    cache: dict = {}

    def wheels(kind):
        if kind not in cache:
            cache[kind] = wheel(kind, Path(args.wheel_dir), not args.no_download)
        return cache[kind]

    made = []
    for fname, build in BUILDERS.items():
        if uci and (uci / fname).exists():
            shutil.copyfile(uci / fname, out / fname)
            made.append(fname)
        elif build(out, wheels=wheels):
            made.append(fname)
        else:
            log.warning("could not build %s", fname)
    if uci and (uci / "data_banknote_authentication.txt").exists():
        split_banknote(uci / "data_banknote_authentication.txt", out)
    for fname in COPY_ONLY:
        if uci and (uci / fname).exists():
            shutil.copyfile(uci / fname, out / fname)
        if (out / fname).exists():
            made.append(fname)
    missing = [f for f in COPY_ONLY if f not in made]
    for f in missing:
        log.warning("missing %s (needs the original UCI file, see --help)", f)
    log.info("suite in %s: %s", out, ", ".join(sorted(set(made))))

    if args.write_checksums:
        import hashlib

        sums = {f: hashlib.sha256((out / f).read_bytes()).hexdigest() for f in sorted(set(made))}
        Path(args.write_checksums).write_text(json.dumps(sums, indent=1, sort_keys=True) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
