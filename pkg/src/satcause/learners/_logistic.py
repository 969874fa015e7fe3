"""L2-regularized logistic regression fit by gradient descent.

Objective (labels y in {-1, +1}):

    F(w, b) = 0.5 * ||w||^2 + C * sum_i log(1 + exp(-y_i (w.x_i + b)))

Full-batch gradient descent with Armijo backtracking; the intercept is
not penalized. Stops when the gradient norm reaches the tolerance or at
max_iterations. The objective trajectory is recorded so monotone descent
can be audited.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..numerics import sigmoid

_ARMIJO_C = 1e-4
_MIN_STEP = 1e-20


@dataclass
class LogisticState:
    coefficients: np.ndarray
    intercept: float
    objective_history: list[float] = field(default_factory=list)
    converged: bool = False
    final_gradient_norm: float = float("inf")
    n_iterations: int = 0


def fit_logistic(
    X: np.ndarray,
    y: np.ndarray,
    c_inverse_regularization: float,
    max_iterations: int,
    tolerance: float,
) -> LogisticState:
    n, p = X.shape
    ys = 2.0 * np.asarray(y, dtype=np.float64) - 1.0
    if np.all(ys > 0) or np.all(ys < 0):
        raise ValueError("logistic regression needs both classes in the training set")
    C = float(c_inverse_regularization)

    def evaluate(w: np.ndarray, b: float) -> tuple[float, np.ndarray]:
        """Objective plus the margins, which the gradient reuses."""
        margin = ys * (X @ w + b)
        obj = 0.5 * float(w @ w) + C * float(np.logaddexp(0.0, -margin).sum())
        return obj, margin

    w = np.zeros(p)
    b = 0.0
    obj, margin = evaluate(w, b)
    history = [obj]
    step = 1.0
    converged = False
    gnorm = float("inf")
    iterations = 0
    prev_gw: np.ndarray | None = None
    prev_gb = 0.0
    prev_t = 1.0

    for _ in range(max_iterations):
        coef = -C * ys * sigmoid(-margin)
        gw = w + X.T @ coef
        gb = float(coef.sum())
        gnorm = float(np.sqrt(gw @ gw + gb * gb))
        if gnorm <= tolerance:
            converged = True
            break

        # Barzilai-Borwein guess for the trial step (the last move was
        # -prev_t * prev_g, so dx = -prev_t * prev_g and dg = g - prev_g);
        # Armijo backtracking below keeps descent monotone regardless.
        t = step * 2.0
        if prev_gw is not None:
            dgw = gw - prev_gw
            dgb = gb - prev_gb
            dx_dg = -prev_t * (float(prev_gw @ dgw) + prev_gb * dgb)
            dx_dx = prev_t * prev_t * (float(prev_gw @ prev_gw) + prev_gb * prev_gb)
            if dx_dg > 0.0 and dx_dx > 0.0:
                t = dx_dx / dx_dg

        gsq = gnorm * gnorm
        while True:
            w_new = w - t * gw
            b_new = b - t * gb
            obj_new, margin_new = evaluate(w_new, b_new)
            if obj_new <= obj - _ARMIJO_C * t * gsq:
                break
            t *= 0.5
            if t < _MIN_STEP:
                break
        if t < _MIN_STEP:
            break  # no descent step representable; report unconverged
        prev_gw, prev_gb, prev_t = gw, gb, t
        w, b, obj, margin, step = w_new, b_new, obj_new, margin_new, t
        history.append(obj)
        iterations += 1

    return LogisticState(
        coefficients=w,
        intercept=b,
        objective_history=history,
        converged=converged,
        final_gradient_norm=gnorm,
        n_iterations=iterations,
    )


def logistic_scores(state: LogisticState, X: np.ndarray) -> np.ndarray:
    return sigmoid(X @ state.coefficients + state.intercept)
