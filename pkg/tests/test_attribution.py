import itertools
import math

import numpy as np
import pytest

from conftest import matrix, noisy_classification
from satcause.attribution import gini_importance, shapley_summary, shapley_values
from satcause.learners import fit, make_spec, predict_scores

# ---------------------------------------------------------------- gini


def test_single_split_concentrates_importance():
    # feature 1 separates the classes perfectly; feature 0 is useless
    X = np.asarray([[0.3, 0.0], [0.7, 0.0], [0.4, 1.0], [0.6, 1.0]])
    y = np.asarray([0, 0, 1, 1], dtype=np.uint8)
    model = fit(make_spec("decision_tree", max_depth=3), matrix(X, y))
    table = gini_importance(model)
    assert table.normalized
    assert table.values[1] == pytest.approx(1.0)
    assert table.values[0] == 0.0
    assert table.ranked()[0][0] == "f1"


def test_depth_zero_importance_flagged_unnormalized():
    model = fit(make_spec("decision_tree", max_depth=3), matrix([[0.1], [0.2]], [1, 1]))
    table = gini_importance(model)
    assert not table.normalized
    assert np.all(table.values == 0.0)


def test_non_tree_model_rejected():
    fm = noisy_classification(40, 2, seed=0)
    model = fit(make_spec("logistic_regression", c_inverse_regularization=1.0), fm)
    with pytest.raises(ValueError, match="tree-based"):
        gini_importance(model)


def test_importance_row_order_invariant():
    fm = noisy_classification(120, 4, seed=1, flip=0.1)
    perm = np.random.default_rng(2).permutation(fm.n_rows)
    shuffled = fm.take_rows(perm)
    a = gini_importance(fit(make_spec("decision_tree", max_depth=5), fm))
    b = gini_importance(fit(make_spec("decision_tree", max_depth=5), shuffled))
    assert np.allclose(a.values, b.values, atol=1e-12)


def test_importance_sums_to_one_for_all_tree_families():
    fm = noisy_classification(150, 4, seed=3, flip=0.1)
    for spec in (
        make_spec("decision_tree", max_depth=4),
        make_spec("random_forest", max_depth=4, n_trees=5, seed=1),
        make_spec("gradient_boosting", max_depth=2, n_stages=10),
    ):
        table = gini_importance(fit(spec, fm))
        assert table.values.sum() == pytest.approx(1.0, abs=1e-9), spec.family
        assert np.all(table.values >= 0.0)


# ---------------------------------------------------------------- shapley oracle


def textbook_shapley(score_fn, x, background, j):
    """Independent oracle: the subset-sum definition, one feature at a time."""
    p = x.shape[0]
    others = [i for i in range(p) if i != j]
    total = 0.0
    for size in range(p):
        for subset in itertools.combinations(others, size):
            weight = (
                math.factorial(len(subset))
                * math.factorial(p - len(subset) - 1)
                / math.factorial(p)
            )
            v_with = _value(score_fn, x, background, set(subset) | {j})
            v_without = _value(score_fn, x, background, set(subset))
            total += weight * (v_with - v_without)
    return total


def _value(score_fn, x, background, coalition):
    hybrid = background.copy()
    for idx in coalition:
        hybrid[:, idx] = x[idx]
    return float(np.mean(score_fn(hybrid)))


def test_additive_model_exhaustive_contributions():
    score = lambda X: X[:, 0] + X[:, 1]
    background = np.zeros((1, 2))
    vec = shapley_values(score, np.asarray([1.0, 1.0]), background, mode="exhaustive")
    assert np.allclose(vec.contributions, [1.0, 1.0], atol=1e-12)
    assert vec.baseline_value == 0.0
    assert vec.instance_value == 2.0


def test_exhaustive_matches_textbook_enumeration_on_tree():
    fm = noisy_classification(80, 4, seed=5, flip=0.1)
    model = fit(make_spec("decision_tree", max_depth=3), fm)
    background = fm.X[:16]
    x = fm.X[40]
    vec = shapley_values(model, x, background, mode="exhaustive")
    score = lambda X: np.asarray(predict_scores(model, X))
    for j in range(4):
        oracle = textbook_shapley(score, x, background, j)
        assert vec.contributions[j] == pytest.approx(oracle, abs=1e-10)


def test_exhaustive_efficiency_exact():
    fm = noisy_classification(60, 5, seed=7, flip=0.1)
    model = fit(make_spec("decision_tree", max_depth=4), fm)
    background = fm.X[:10]
    for row in (0, 7, 31):
        vec = shapley_values(model, fm.X[row], background, mode="exhaustive")
        assert vec.contributions.sum() == pytest.approx(
            vec.instance_value - vec.baseline_value, abs=1e-10
        )


def test_symmetry_of_identical_features():
    # two clones of the same feature, identical in background and instance
    score = lambda X: X[:, 0] + X[:, 1] + 0.5 * X[:, 2]
    rng = np.random.default_rng(9)
    bg = rng.random((20, 3))
    bg[:, 1] = bg[:, 0]
    x = np.asarray([0.8, 0.8, 0.3])
    vec = shapley_values(score, x, bg, mode="exhaustive")
    assert vec.contributions[0] == pytest.approx(vec.contributions[1], abs=1e-10)


def test_null_player_gets_zero():
    # the model never reads feature 2
    score = lambda X: 2.0 * X[:, 0] - X[:, 1]
    bg = np.random.default_rng(11).random((15, 3))
    vec = shapley_values(score, np.asarray([0.5, 0.2, 0.9]), bg, mode="exhaustive")
    assert vec.contributions[2] == 0.0


def test_exhaustive_feature_cap():
    bg = np.zeros((1, 13))
    with pytest.raises(ValueError, match="at most 12"):
        shapley_values(lambda X: X[:, 0], np.zeros(13), bg, mode="exhaustive")


def test_empty_background_rejected():
    with pytest.raises(ValueError, match="background"):
        shapley_values(lambda X: X[:, 0], np.zeros(2), np.zeros((0, 2)))


# ---------------------------------------------------------------- sampled


def test_sampled_matches_exhaustive_on_six_features():
    fm = noisy_classification(150, 6, seed=13, flip=0.1)
    model = fit(make_spec("decision_tree", max_depth=4), fm)
    background = fm.X[:24]
    x = fm.X[77]
    exact = shapley_values(model, x, background, mode="exhaustive")
    sampled = shapley_values(model, x, background, n_samples=2000, seed=3, mode="sampled")
    assert np.allclose(sampled.contributions, exact.contributions, atol=0.02)
    assert sampled.standard_errors is not None


def test_sampled_efficiency_telescopes():
    fm = noisy_classification(90, 5, seed=17, flip=0.1)
    model = fit(make_spec("decision_tree", max_depth=4), fm)
    background = fm.X[:12]
    rng = np.random.default_rng(19)
    for _ in range(5):
        x = fm.X[int(rng.integers(0, 90))]
        vec = shapley_values(model, x, background, n_samples=51, seed=7)
        gap = vec.contributions.sum() - (vec.instance_value - vec.baseline_value)
        assert abs(gap) < 1e-8  # telescoping makes this near exact


def test_sampled_deterministic_per_seed():
    fm = noisy_classification(60, 4, seed=23, flip=0.1)
    model = fit(make_spec("decision_tree", max_depth=3), fm)
    bg = fm.X[:8]
    a = shapley_values(model, fm.X[5], bg, n_samples=40, seed=2)
    b = shapley_values(model, fm.X[5], bg, n_samples=40, seed=2)
    assert np.array_equal(a.contributions, b.contributions)


def test_summary_ranks_dominant_feature_first():
    rng = np.random.default_rng(29)
    X = rng.random((300, 3))
    y = (X[:, 2] > 0.5).astype(np.uint8)  # only feature 2 matters
    fm = matrix(X, y)
    model = fit(make_spec("decision_tree", max_depth=3), fm)
    table, rows, eval_idx = shapley_summary(
        model, fm, fm.feature_names, n_instances=20, background_size=20, n_samples=60, seed=5
    )
    assert table.method == "shapley_mean_absolute"
    assert table.ranked()[0][0] == "f2"
    assert rows.shape == (20, 3)
    assert eval_idx.shape == (20,)
