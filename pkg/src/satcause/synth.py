"""Confounded synthetic data with a known ground-truth treatment effect.

Structural model (x uniform on [0,1]^p, matching the scaled real pipeline):

    a ~ Bernoulli(sigmoid(intercept_treatment + alpha . x))
    y ~ Bernoulli(sigmoid(intercept_outcome + beta . x + tau * a))

Shared-sign alpha and beta confound the naive group contrast; the oracle
integrates the outcome model over fresh covariate draws to give the true
average treatment effect with a Monte-Carlo standard error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from .numerics import sigmoid
from .seeding import derive_seed
from .tabular import ColumnSpec, Dataset

_TRUE_ATE_DRAWS = 200_000

TREATMENT_COLUMN = "treatment_rating"
TARGET_COLUMN = "satisfaction"
POSITIVE_LABEL = "satisfied"
NEGATIVE_LABEL = "neutral or dissatisfied"


@dataclass(frozen=True)
class SynthConfig:
    n_rows: int
    p: int
    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    tau: float
    intercept_treatment: float = 0.0
    intercept_outcome: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if self.n_rows < 100:
            raise ValueError("n_rows must be at least 100")
        if len(self.alpha) != self.p or len(self.beta) != self.p:
            raise ValueError("alpha and beta must have length p")
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))


@dataclass
class SynthDataset:
    config: SynthConfig
    covariates: np.ndarray
    treatment: np.ndarray
    outcomes: np.ndarray
    true_ate: float
    true_ate_se: float


@dataclass(frozen=True)
class OracleAte:
    value: float
    std_error: float
    n_draws: int


def oracle_ate(config: SynthConfig, n_mc: int = _TRUE_ATE_DRAWS) -> OracleAte:
    """Monte-Carlo estimate of the population ATE from fresh covariate draws."""
    if n_mc < 10_000:
        raise ValueError("n_mc must be at least 10,000")
    rng = np.random.default_rng(derive_seed(config.seed, "oracle"))
    x = rng.random((n_mc, config.p))
    base = config.intercept_outcome + x @ np.asarray(config.beta)
    diff = sigmoid(base + config.tau) - sigmoid(base)
    value = float(diff.mean())
    se = float(diff.std(ddof=1)) / math.sqrt(n_mc)
    return OracleAte(value=value, std_error=se, n_draws=n_mc)


def generate(config: SynthConfig) -> SynthDataset:
    """Sample a dataset from the structural model; deterministic per seed."""
    rng = np.random.default_rng(config.seed)
    n, p = config.n_rows, config.p
    x = rng.random((n, p))
    p_treat = sigmoid(config.intercept_treatment + x @ np.asarray(config.alpha))
    a = (rng.random(n) < p_treat).astype(np.uint8)
    p_out = sigmoid(config.intercept_outcome + x @ np.asarray(config.beta) + config.tau * a)
    y = (rng.random(n) < p_out).astype(np.uint8)
    oracle = oracle_ate(config)
    return SynthDataset(
        config=config,
        covariates=x,
        treatment=a,
        outcomes=y,
        true_ate=oracle.value,
        true_ate_se=oracle.std_error,
    )


def covariate_names(config: SynthConfig) -> list[str]:
    return [f"x{i + 1}" for i in range(config.p)]


def to_dataset(sd: SynthDataset) -> Dataset:
    """Export in the standard CSV schema so the full pipeline can run on it.

    The binary treatment becomes an ordinal rating column (5 for treated,
    0 for control) so the default dichotomization threshold of 4 recovers
    it; the outcome becomes the labelled satisfaction target.
    """
    config = sd.config
    schema: list[ColumnSpec] = [ColumnSpec.numeric(n) for n in covariate_names(config)]
    schema.append(ColumnSpec.ordinal(TREATMENT_COLUMN, 5))
    schema.append(ColumnSpec.binary_target(TARGET_COLUMN, POSITIVE_LABEL, NEGATIVE_LABEL))

    columns: dict[str, np.ndarray] = {
        name: sd.covariates[:, i].copy() for i, name in enumerate(covariate_names(config))
    }
    columns[TREATMENT_COLUMN] = sd.treatment.astype(np.float64) * 5.0
    columns[TARGET_COLUMN] = sd.outcomes.astype(np.uint8)
    return Dataset(tuple(schema), columns, config.n_rows)


def config_from_dict(payload: dict) -> SynthConfig:
    return SynthConfig(
        n_rows=int(payload["n_rows"]),
        p=int(payload["p"]),
        alpha=tuple(float(v) for v in payload["alpha"]),
        beta=tuple(float(v) for v in payload["beta"]),
        tau=float(payload["tau"]),
        intercept_treatment=float(payload.get("intercept_treatment", 0.0)),
        intercept_outcome=float(payload.get("intercept_outcome", 0.0)),
        seed=int(payload["seed"]),
    )


def config_to_dict(config: SynthConfig) -> dict:
    return {
        "n_rows": config.n_rows,
        "p": config.p,
        "alpha": list(config.alpha),
        "beta": list(config.beta),
        "tau": config.tau,
        "intercept_treatment": config.intercept_treatment,
        "intercept_outcome": config.intercept_outcome,
        "seed": config.seed,
    }
