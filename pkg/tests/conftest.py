import os
from pathlib import Path

import hypothesis
import numpy as np
import pytest

from oscerr.dataset import CategoryCodec, NumericDataset
from oscerr.trainer import ClassifierModel, TrainConfig, train

ROOT = Path(__file__).resolve().parent.parent

hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.register_profile("fast", max_examples=50, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def suite_dir() -> Path:
    return Path(os.environ.get("OSCERR_SUITE", ROOT / "data" / "suite"))


@pytest.fixture
def trace_model():
    """Model holding the two layers of the five-variable walk-through."""
    layers = (np.array([1.0, 4, 1, 6, 2]), np.zeros(5))
    return ClassifierModel(layers, CategoryCodec(("lo", "hi")), None, np.zeros((2, 5)), (14.0, 0.0))


@pytest.fixture
def two_row_data():
    """One variable, A = 0.1 (O = 0) and B = 0.5 (O = 1)."""
    return NumericDataset(np.array([[0.1], [0.5]]), np.array([0, 1])), CategoryCodec(("A", "B"))


@pytest.fixture
def dyadic_data():
    """Same shape as ``two_row_data`` with values exact in binary: A = 0.125, B = 0.5."""
    return NumericDataset(np.array([[0.125], [0.5]]), np.array([0, 1])), CategoryCodec(("A", "B"))


@pytest.fixture
def dyadic_model(dyadic_data):
    data, codec = dyadic_data
    return train(data, codec, TrainConfig(max_layers=3, plateau_enabled=False))


acceptance_key = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Call with (criterion number, passed, detail); lines are printed in the summary."""
    lines = request.config.stash.setdefault(acceptance_key, [])

    def record(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(acceptance_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
