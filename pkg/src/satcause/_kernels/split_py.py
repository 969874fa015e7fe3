"""Pure-numpy kernels: split scans and tree traversal.

Fallback for the compiled extension. Both backends evaluate the same
floating-point expressions in the same order, so they produce identical
results; tests assert this.

Split scans work on one feature column sorted ascending. Candidate
boundaries sit between adjacent distinct values; the split point is the
midpoint. To avoid recomputing impurities from scratch the scans maximize a
sufficient statistic:

* classification (Gini): s(i) = (l1^2 + l0^2)/i + (r1^2 + r0^2)/(m - i),
  where l1/l0 are positive/negative counts left of boundary i. Weighted
  child Gini equals 1 - s/m, so maximizing s minimizes child impurity.
* regression (SSE): t(i) = suml^2/i + sumr^2/(m - i). Child SSE equals
  sum(y^2) - t, so maximizing t minimizes squared error.

Ties take the first (lowest-threshold) boundary. Returns (-1.0, nan) when
no boundary exists.
"""

import numpy as np


def best_split_gini(values: np.ndarray, ones: np.ndarray) -> tuple[float, float]:
    """Best Gini split of a sorted column; ``ones`` holds 0/1 labels as float64."""
    m = values.shape[0]
    if m < 2:
        return -1.0, float("nan")
    valid = values[1:] > values[:-1]
    if not valid.any():
        return -1.0, float("nan")
    c1 = np.cumsum(ones)
    total1 = c1[-1]
    i = np.arange(1, m, dtype=np.float64)
    l1 = c1[:-1]
    l0 = i - l1
    dr = m - i
    r1 = total1 - l1
    r0 = dr - r1
    s = (l1 * l1 + l0 * l0) / i + (r1 * r1 + r0 * r0) / dr
    s = np.where(valid, s, -np.inf)
    k = int(np.argmax(s))
    thr = 0.5 * (values[k] + values[k + 1])
    if thr >= values[k + 1]:  # midpoint rounded up; keep the right side non-empty
        thr = values[k]
    return float(s[k]), float(thr)


def best_split_sse(values: np.ndarray, targets: np.ndarray) -> tuple[float, float]:
    """Best squared-error split of a sorted column with float64 targets."""
    m = values.shape[0]
    if m < 2:
        return -1.0, float("nan")
    valid = values[1:] > values[:-1]
    if not valid.any():
        return -1.0, float("nan")
    c = np.cumsum(targets)
    total = c[-1]
    i = np.arange(1, m, dtype=np.float64)
    suml = c[:-1]
    dr = m - i
    sumr = total - suml
    t = (suml * suml) / i + (sumr * sumr) / dr
    t = np.where(valid, t, -np.inf)
    k = int(np.argmax(t))
    thr = 0.5 * (values[k] + values[k + 1])
    if thr >= values[k + 1]:
        thr = values[k]
    return float(t[k]), float(thr)


def apply_tree(
    feature: np.ndarray,
    threshold: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
    X: np.ndarray,
) -> np.ndarray:
    """Route rows of ``X`` through a flattened tree; returns leaf node ids.

    ``feature`` is -1 at leaves; internal nodes send ``x[f] <= threshold``
    left. Rows advance one level per pass, so the cost is O(n * depth).
    """
    n = X.shape[0]
    node = np.zeros(n, dtype=np.int64)
    if feature[0] < 0:
        return node
    active = np.arange(n)
    while active.size:
        nd = node[active]
        f = feature[nd]
        go_left = X[active, f] <= threshold[nd]
        nxt = np.where(go_left, left[nd], right[nd])
        node[active] = nxt
        active = active[feature[nxt] >= 0]
    return node
