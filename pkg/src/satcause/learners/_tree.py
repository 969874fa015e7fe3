"""CART tree induction shared by the tree-based families.

The builder presorts each feature once and partitions the sorted row-id
lists down the tree, so a node of size m costs O(p * m) regardless of
where it sits. The per-feature threshold scan is a kernel call
(compiled or numpy, see satcause._kernels).

Split semantics: exhaustive search over midpoints between adjacent
distinct values of each candidate feature; rows with x <= threshold go
left. Ties on gain prefer the lowest feature index, then the lowest
threshold. A node splits only when it gains impurity, its size is at
least 2, and its depth is below max_depth. Split targets are assumed
bounded (labels or residuals in [-1, 1]); the minimum-gain guard is
scaled accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .._kernels import apply_tree, best_split_gini, best_split_sse

# phantom-gain guard, in units of the scan statistic (which scales with m)
_MIN_GAIN = 1e-12

GINI = "gini"
SSE = "sse"


@dataclass
class FlatTree:
    """Array-of-nodes tree; feature == -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_node: np.ndarray
    impurity: np.ndarray
    gain: np.ndarray
    depth: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def max_depth_used(self) -> int:
        return int(self.depth.max())

    def apply(self, X: np.ndarray) -> np.ndarray:
        return apply_tree(self.feature, self.threshold, self.left, self.right, X)

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]


def _node_impurity_gini(m: int, m1: float) -> float:
    q = m1 / m
    return 2.0 * q * (1.0 - q)


def grow_tree(
    X: np.ndarray,
    targets: np.ndarray,
    *,
    criterion: str,
    max_depth: int,
    leaf_value: Callable[[np.ndarray], float] | None = None,
    rng: np.random.Generator | None = None,
    features_per_split: int | None = None,
) -> FlatTree:
    """Grow one tree.

    ``targets`` are 0/1 labels for the gini criterion or regression
    targets for sse. ``leaf_value`` overrides the node value (it receives
    the member row ids); by default gini nodes store the positive
    fraction and sse nodes the target mean. When ``features_per_split``
    is set, that many features are drawn without replacement from ``rng``
    at every node.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    targets = np.ascontiguousarray(targets, dtype=np.float64)
    n, p = X.shape
    if p == 0:
        raise ValueError("cannot grow a tree with zero features")
    if n == 0:
        raise ValueError("cannot grow a tree with zero rows")
    gini_mode = criterion == GINI
    kernel = best_split_gini if gini_mode else best_split_sse

    order0 = [np.argsort(X[:, f], kind="stable").astype(np.int32) for f in range(p)]
    flags = np.empty(n, dtype=bool)

    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []
    n_node: list[int] = []
    impurity: list[float] = []
    gain: list[float] = []
    depth_list: list[int] = []

    def new_node(depth: int) -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        n_node.append(0)
        impurity.append(0.0)
        gain.append(0.0)
        depth_list.append(depth)
        return len(feature) - 1

    root = new_node(0)
    stack: list[tuple[int, int, list[np.ndarray]]] = [(root, 0, order0)]

    while stack:
        nid, depth, order = stack.pop()
        rows = order[0]
        m = rows.shape[0]
        n_node[nid] = m

        t_node = targets[rows]
        if gini_mode:
            m1 = float(t_node.sum())
            impurity[nid] = _node_impurity_gini(m, m1)
            value[nid] = m1 / m
            parent_stat = (m1 * m1 + (m - m1) * (m - m1)) / m
        else:
            tsum = float(t_node.sum())
            tsumsq = float(t_node @ t_node)
            parent_stat = (tsum * tsum) / m
            impurity[nid] = (tsumsq - parent_stat) / m
            value[nid] = tsum / m
        if leaf_value is not None:
            value[nid] = leaf_value(rows)

        if m < 2 or depth >= max_depth:
            continue

        if features_per_split is not None and features_per_split < p:
            candidates = np.sort(rng.choice(p, size=features_per_split, replace=False))
        else:
            candidates = range(p)

        best_stat = -1.0
        best_f = -1
        best_thr = 0.0
        for f in candidates:
            vals = X[order[f], f]
            stat, thr = kernel(vals, targets[order[f]])
            if stat > best_stat:
                best_stat = stat
                best_f = f
                best_thr = thr

        if best_f < 0 or best_stat - parent_stat <= _MIN_GAIN * m:
            continue

        feature[nid] = best_f
        threshold[nid] = best_thr
        gain[nid] = (best_stat - parent_stat) / m

        flags[rows] = X[rows, best_f] <= best_thr
        left_order = []
        right_order = []
        for f in range(p):
            arr = order[f]
            mask = flags[arr]
            left_order.append(arr[mask])
            right_order.append(arr[~mask])

        left_id = new_node(depth + 1)
        right_id = new_node(depth + 1)
        left[nid] = left_id
        right[nid] = right_id
        stack.append((right_id, depth + 1, right_order))
        stack.append((left_id, depth + 1, left_order))

    return FlatTree(
        feature=np.asarray(feature, dtype=np.int32),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        value=np.asarray(value, dtype=np.float64),
        n_node=np.asarray(n_node, dtype=np.int64),
        impurity=np.asarray(impurity, dtype=np.float64),
        gain=np.asarray(gain, dtype=np.float64),
        depth=np.asarray(depth_list, dtype=np.int32),
    )


def tree_to_obj(tree: FlatTree, feature_names: tuple[str, ...] | None = None) -> dict:
    """Nested-node JSON object for one tree (no recursion, linked dicts)."""
    objs: list[dict] = []
    for k in range(tree.n_nodes):
        node = {
            "n": int(tree.n_node[k]),
            "impurity": float(tree.impurity[k]),
            "value": float(tree.value[k]),
        }
        if tree.feature[k] >= 0:
            node["feature"] = int(tree.feature[k])
            if feature_names is not None:
                node["feature_name"] = feature_names[tree.feature[k]]
            node["threshold"] = float(tree.threshold[k])
            node["gain"] = float(tree.gain[k])
        objs.append(node)
    for k in range(tree.n_nodes):
        if tree.feature[k] >= 0:
            objs[k]["left"] = objs[tree.left[k]]
            objs[k]["right"] = objs[tree.right[k]]
    return objs[0]


def tree_from_obj(obj: dict) -> FlatTree:
    """Rebuild a FlatTree from its nested-node form."""
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []
    n_node: list[int] = []
    impurity: list[float] = []
    gain: list[float] = []
    depth_list: list[int] = []

    stack: list[tuple[dict, int, int, str]] = [(obj, -1, 0, "")]
    while stack:
        node, parent, depth, side = stack.pop()
        nid = len(feature)
        internal = "feature" in node
        feature.append(int(node["feature"]) if internal else -1)
        threshold.append(float(node.get("threshold", 0.0)))
        left.append(-1)
        right.append(-1)
        value.append(float(node["value"]))
        n_node.append(int(node["n"]))
        impurity.append(float(node["impurity"]))
        gain.append(float(node.get("gain", 0.0)))
        depth_list.append(depth)
        if parent >= 0:
            if side == "L":
                left[parent] = nid
            else:
                right[parent] = nid
        if internal:
            stack.append((node["right"], nid, depth + 1, "R"))
            stack.append((node["left"], nid, depth + 1, "L"))

    return FlatTree(
        feature=np.asarray(feature, dtype=np.int32),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        value=np.asarray(value, dtype=np.float64),
        n_node=np.asarray(n_node, dtype=np.int64),
        impurity=np.asarray(impurity, dtype=np.float64),
        gain=np.asarray(gain, dtype=np.float64),
        depth=np.asarray(depth_list, dtype=np.int32),
    )
