import os

import numpy as np
import pytest

from satcause.preprocess import FeatureMatrix

KAGGLE_ENV = "SATCAUSE_KAGGLE_CSV"

needs_kaggle = pytest.mark.skipif(
    not os.environ.get(KAGGLE_ENV),
    reason=f"set {KAGGLE_ENV} to the airline satisfaction train.csv to run",
)


@pytest.fixture
def kaggle_csv():
    return os.environ[KAGGLE_ENV]


def matrix(X, y, names=None) -> FeatureMatrix:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    names = tuple(names) if names else tuple(f"f{i}" for i in range(X.shape[1]))
    return FeatureMatrix(names, X, np.asarray(y, dtype=np.uint8))


def noisy_classification(n, p, seed, flip=0.05):
    """Generic continuous features with a mildly noisy linear-ish target."""
    rng = np.random.default_rng(seed)
    X = rng.random((n, p))
    clean = (X[:, 0] + 0.6 * X[:, 1 % p]) > 0.8
    y = (clean ^ (rng.random(n) < flip)).astype(np.uint8)
    return matrix(X, y)
