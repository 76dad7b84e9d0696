import itertools
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from oscerr.core import absolute_error, aggregate_output, rule_step, run_layers, transpose_row

finite = st.floats(-1e6, 1e6, allow_nan=False)
rows = hnp.arrays(np.float64, st.integers(1, 12), elements=finite)


def test_rule_step_adds_below_and_at_target():
    assert rule_step(3, 1, 4) == 4
    assert rule_step(4, 1, 4) == 5  # tie adds


def test_rule_step_subtracts_above_target():
    assert rule_step(8, 4, 4) == 4


def test_rule_step_rejects_negative_correction():
    with pytest.raises(ValueError):
        rule_step(1.0, -0.1, 0.0)


def test_rule_step_distance_identity_on_exact_grid():
    # quarters are exact in binary, so the identity must hold with ==
    grid = [k / 4 for k in range(-12, 13)]
    for x, ec, o in itertools.product(grid, [g for g in grid if g >= 0], grid):
        assert abs(rule_step(x, ec, o) - o) == abs(abs(x - o) - ec)


def test_transpose_row_walkthrough():
    out = transpose_row([3, 8, 5, 10, 2], [1, 4, 1, 6, 2], 4)
    assert out.tolist() == [4, 4, 4, 4, 4]


def test_transpose_row_crosses_target():
    assert transpose_row([0.1], [0.3], 0) == pytest.approx([-0.2])
    assert absolute_error([-0.2], 0).tolist() == [0.2]


def test_transpose_row_dimension_mismatch():
    with pytest.raises(ValueError, match="variables"):
        transpose_row([1, 2, 3], [0, 0], 0.5)


def test_transpose_row_batch_uses_per_row_targets():
    batch = np.array([[0.2, 0.9], [0.2, 0.9]])
    out = transpose_row(batch, [0.1, 0.1], np.array([0.0, 1.0]))
    assert out.tolist() == [[0.1, 0.8], [0.30000000000000004, 1.0]]
    for r, o in zip(batch, (0.0, 1.0)):
        np.testing.assert_array_equal(transpose_row(r, [0.1, 0.1], o), out[int(o)])


def test_absolute_error_walkthrough():
    assert absolute_error([3, 8, 5, 10, 2], 4).tolist() == [1, 4, 1, 6, 2]
    assert absolute_error([0.7, 0.7], 0.7).tolist() == [0, 0]


def test_aggregate_output_examples():
    assert aggregate_output([4, 4, 4, 4, 4]) == 4
    assert aggregate_output([0.3]) == 0.3
    assert aggregate_output([0, 1]) == 0.5
    with pytest.raises(ValueError):
        aggregate_output([])


def test_aggregate_output_batch_matches_rows():
    rng = np.random.default_rng(7)
    batch = rng.normal(size=(50, 9))
    got = aggregate_output(batch)
    assert got.tolist() == [aggregate_output(r) for r in batch]


def test_run_layers_states():
    states = run_layers([3, 8, 5, 10, 2], [np.array([1.0, 4, 1, 6, 2]), np.zeros(5)], 4)
    assert len(states) == 3
    assert states[1].tolist() == states[2].tolist() == [4] * 5


def test_transposition_is_fast():
    layer = np.array([1.0, 4, 1, 6, 2])
    t0 = time.perf_counter()
    for _ in range(1000):
        transpose_row([3, 8, 5, 10, 2], layer, 4)
    assert time.perf_counter() - t0 < 1.0


@settings(max_examples=1000)
@given(rows, finite)
def test_absolute_error_non_negative(row, o):
    assert (absolute_error(row, o) >= 0).all()


@settings(max_examples=1000)
@given(rows, finite)
def test_zero_correction_is_identity(row, o):
    np.testing.assert_array_equal(transpose_row(row, np.zeros(row.shape[0]), o), row)


@settings(max_examples=1000)
@given(
    hnp.arrays(np.float64, st.integers(1, 12), elements=st.integers(-64, 64).map(lambda k: k / 8)),
    st.integers(-64, 64).map(lambda k: k / 8),
)
def test_one_step_collapse(row, o):
    out = transpose_row(row, absolute_error(row, o), o)
    assert (out == o).all()


@settings(max_examples=1000)
@given(rows, st.randoms(use_true_random=False))
def test_aggregate_output_permutation_invariant(row, rnd):
    perm = list(range(row.shape[0]))
    rnd.shuffle(perm)
    assert aggregate_output(row[perm]) == aggregate_output(row)


@settings(max_examples=1000)
@given(finite, st.floats(0, 1e6), finite)
def test_rule_step_moves_by_exactly_ec(x, ec, o):
    y = rule_step(x, ec, o)
    assert y == (x + ec if x <= o else x - ec)
    if ec == 0:
        assert y == x
