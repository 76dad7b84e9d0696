"""Versioned JSON model files.

Floats are written with Python's shortest round-trip repr, so loading a
saved model reproduces every layer value bit-for-bit. Key order and layout
are fixed, so identical models give byte-identical files.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .dataset import CategoryCodec, Normalizer
from .trainer import ClassifierModel

FORMAT = "oscerr-model"
VERSION = 1


class ModelFormatError(ValueError):
    pass


def _floats(a) -> list:
    return np.asarray(a, dtype=np.float64).tolist()


def model_to_dict(model: ClassifierModel) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "categories": {
            "labels": list(model.codec.labels),
            "output_values": _floats(model.codec.output_values),
        },
        "normalizer": None
        if model.normalizer is None
        else {"min": _floats(model.normalizer.mins), "max": _floats(model.normalizer.maxs)},
        "nominal_levels": {str(k): list(v) for k, v in sorted(model.nominal_levels.items())},
        "n_variables": model.n,
        "prototypes": _floats(model.prototypes),
        "layers": [_floats(layer) for layer in model.layers],
        "training": {
            "iterations": model.iterations,
            "final_error": model.final_error,
            "error_history": list(model.error_history),
            "category_corrections": [_floats(c) for c in model.category_corrections],
        },
    }


def model_from_dict(d: dict) -> ClassifierModel:
    if d.get("format") != FORMAT:
        raise ModelFormatError("not an oscerr model file")
    if d.get("version") != VERSION:
        raise ModelFormatError(f"unsupported model version {d.get('version')!r}")
    codec = CategoryCodec(tuple(d["categories"]["labels"]))
    if _floats(codec.output_values) != d["categories"]["output_values"]:
        raise ModelFormatError("stored output values disagree with the category count")
    norm = d["normalizer"]
    layers = tuple(np.array(layer, dtype=np.float64) for layer in d["layers"])
    model = ClassifierModel(
        layers=layers,
        codec=codec,
        normalizer=None if norm is None else Normalizer(norm["min"], norm["max"]),
        prototypes=np.array(d["prototypes"], dtype=np.float64),
        error_history=tuple(float(e) for e in d["training"]["error_history"]),
        category_corrections=tuple(
            np.array(c, dtype=np.float64) for c in d["training"]["category_corrections"]
        ),
        nominal_levels={int(k): tuple(v) for k, v in d.get("nominal_levels", {}).items()},
    )
    if model.n != d["n_variables"]:
        raise ModelFormatError("layer length disagrees with n_variables")
    return model


def dumps(model: ClassifierModel) -> str:
    return json.dumps(model_to_dict(model), indent=1) + "\n"


def loads(text: str) -> ClassifierModel:
    return model_from_dict(json.loads(text))


def save_model(model: ClassifierModel, path: str | os.PathLike) -> None:
    Path(path).write_text(dumps(model))


def load_model(path: str | os.PathLike) -> ClassifierModel:
    return loads(Path(path).read_text())
