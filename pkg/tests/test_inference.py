import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscerr.core import run_layers
from oscerr.dataset import CategoryCodec, NumericDataset
from oscerr.inference import (
    HYPOTHESIS,
    ORACLE,
    classify_hypothesis,
    forward,
    forward_batch,
    hypothesis_outputs,
    margin_band,
    score_oracle,
    within_margin,
)
from oscerr.trainer import ClassifierModel, TrainConfig, train, train_prototypes


def hand_model(layers, labels=("A", "B")):
    layers = tuple(np.array(layer, dtype=np.float64) for layer in layers)
    n = layers[0].shape[0]
    return ClassifierModel(layers, CategoryCodec(labels), None, np.zeros((len(labels), n)), (0.0,))


def test_forward_walkthrough(trace_model):
    tr = forward([3, 8, 5, 10, 2], trace_model, 4)
    assert tr.n_layers == 2
    assert tr.states[-1].tolist() == [4] * 5
    assert tr.final_output == 4


def test_forward_identity_layers():
    m = hand_model([[0, 0, 0], [0, 0, 0]])
    row = [0.2, 0.9, 0.4]
    assert forward(row, m, 1.0).final_output == pytest.approx(np.mean(row))


def test_forward_hand_trace():
    m = hand_model([[0.3], [0.2], [0.0]])
    tr = forward([0.1], m, 0.0)
    assert [s[0] for s in tr.states] == pytest.approx([0.1, -0.2, 0.0, 0.0], abs=1e-12)
    assert tr.final_output == pytest.approx(0.0, abs=1e-12)


def test_forward_dimension_mismatch(trace_model):
    with pytest.raises(ValueError):
        forward([1, 2, 3], trace_model, 0.5)


def test_hypothesis_picks_near_category():
    m = hand_model([[0.3], [0.2], [0.0]])
    p = classify_hypothesis([0.1], m)
    assert p.category == 0
    assert p.hypothesis_residuals == pytest.approx((0.0, 0.4), abs=1e-12)
    assert hypothesis_outputs([0.1], m)[0, 1] == pytest.approx(0.6)


def test_hypothesis_tie_goes_to_lowest_index(dyadic_model):
    # both hypotheses land exactly on their targets
    p = classify_hypothesis([0.5], dyadic_model)
    assert p.hypothesis_residuals == (0.0, 0.0)
    assert p.category == 0
    assert p.mode == HYPOTHESIS


def test_oracle_examples(trace_model, dyadic_model):
    # the walk-through target 4 lies outside any codec, so drive forward directly
    assert abs(forward([3, 8, 5, 10, 2], trace_model, 4).final_output - 4) == 0
    p = score_oracle([0.5], dyadic_model, 1)
    assert (p.output, p.residual, p.category, p.mode) == (1.0, 0.0, 1, ORACLE)
    identity = hand_model([[0.0, 0.0]])
    assert score_oracle([0.25, 0.5], identity, 1).residual == 0.625


def test_oracle_on_decimal_fixture(two_row_data):
    data, codec = two_row_data
    m = train(data, codec, TrainConfig(max_layers=3, plateau_enabled=False))
    p = score_oracle([0.5], m, 1)
    assert p.output == pytest.approx(1.0, abs=1e-12)


def test_within_margin_examples():
    assert within_margin(0.45, 0.5, 0.5, 20)
    assert not within_margin(0.39, 0.5, 0.5, 20)
    assert within_margin(0.7, 0.7, 0.25, 0)
    assert not within_margin(0.7000000000000001, 0.7, 0.25, 0)
    with pytest.raises(ValueError):
        within_margin(0.5, 0.5, 0.0, 10)


def test_margin_band_arithmetic():
    assert margin_band(0.5, 0.5, 20) == (0.4, 0.6)
    assert margin_band(0.5, 0.5, 15) == (0.425, 0.575)
    assert within_margin(0.425, 0.5, 0.5, 15) and within_margin(0.575, 0.5, 0.5, 15)
    assert not within_margin(0.4249999, 0.5, 0.5, 15)


def test_prototype_paths_match_training():
    protos = np.array([[0.1, 0.9, 0.4], [0.6, 0.2, 0.8], [0.3, 0.3, 0.95]])
    targets = np.array([0.0, 0.5, 1.0])
    cfg = TrainConfig(max_layers=6, plateau_enabled=False)
    layers, _ = train_prototypes(protos, targets, cfg)
    for k in range(1, len(layers)):
        _, state = train_prototypes(protos, targets, TrainConfig(max_layers=k + 1, plateau_enabled=False))
        for c in range(3):
            states = run_layers(protos[c], layers[:k], targets[c])
            np.testing.assert_array_equal(states[-1], state.rows[c])


def test_converged_prototype_residual_matches_training_error(dyadic_data):
    data, codec = dyadic_data
    m = train(data, codec, TrainConfig(max_layers=10))
    for c in range(2):
        p = score_oracle(m.prototypes[c], m, c)
        assert p.residual == m.category_corrections[-1][c].sum() == 0


def test_inference_has_no_side_effects(dyadic_model):
    before = [layer.copy() for layer in dyadic_model.layers]
    row = np.array([0.3])
    first = classify_hypothesis(row, dyadic_model)
    assert classify_hypothesis(row, dyadic_model) == first
    assert row.tolist() == [0.3]
    for a, b in zip(before, dyadic_model.layers):
        np.testing.assert_array_equal(a, b)


@st.composite
def model_and_row(draw):
    c = draw(st.integers(2, 6))
    n = draw(st.integers(1, 6))
    m = draw(st.integers(1, 6))
    layers = [[draw(st.floats(0, 1)) for _ in range(n)] for _ in range(m)]
    row = [draw(st.floats(-0.5, 1.5)) for _ in range(n)]
    return hand_model(layers, tuple(map(str, range(c)))), np.array(row)


@settings(max_examples=1000)
@given(model_and_row())
def test_hypothesis_choice_is_first_minimum(case):
    model, row = case
    outs = model.codec.output_values
    # evaluate the hypotheses independently, in reverse order
    residuals = {c: abs(forward(row, model, outs[c]).final_output - outs[c]) for c in reversed(range(len(outs)))}
    p = classify_hypothesis(row, model)
    best = min(residuals.values())
    assert p.residual == best
    assert p.category == min(c for c, r in residuals.items() if r == best)
    assert p.hypothesis_residuals == tuple(residuals[c] for c in range(len(outs)))
    assert all(r >= 0 for r in p.hypothesis_residuals)


@settings(max_examples=1000)
@given(model_and_row(), st.integers(0, 5))
def test_batch_matches_single_rows(case, c):
    model, row = case
    c = min(c, model.codec.n_categories - 1)
    o = model.codec.output_value(c)
    batch = np.stack([row, row[::-1], row * 0.5])
    got = forward_batch(batch, model, o)
    assert got.tolist() == [forward(r, model, o).final_output for r in batch]


@settings(max_examples=1000)
@given(st.floats(-2, 2), st.floats(-2, 2), st.sampled_from([1.0, 0.5, 0.25, 1 / 3, 1 / 25]), st.integers(0, 49))
def test_within_margin_is_the_closed_band(x, o, gap, pct):
    lo, hi = margin_band(o, gap, pct)
    assert within_margin(x, o, gap, pct) == (lo <= x <= hi)
    if within_margin(x, o, gap, pct):
        assert within_margin(x, o, gap, min(pct + 1, 49))


def test_batch_dataset_targets():
    m = hand_model([[0.25], [0.125]])
    data = NumericDataset(np.array([[0.0], [1.0]]), np.array([0, 1]))
    out = forward_batch(data.rows, m, m.codec.output_values[data.labels])
    assert out.tolist() == [forward(data.rows[0], m, 0.0).final_output, forward(data.rows[1], m, 1.0).final_output]
