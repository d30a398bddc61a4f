"""Input validation helpers shared by the estimators and loaders."""

import numbers

import numpy as np


class InconsistentObservationError(ValueError):
    """An observation contradicts the current belief."""


class InfeasibleConfigurationError(ValueError):
    """A request that is well-formed but too large or impossible to satisfy."""


def check_cost_matrix(costs, *, allow_inf=False):
    """Return `costs` as a square float64 array, raising on malformed input."""
    arr = np.asarray(costs, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("cost matrix must have at least one node")
    if np.isnan(arr).any():
        raise ValueError("cost matrix contains NaN")
    if not allow_inf and not np.isfinite(arr).all():
        raise ValueError("cost matrix contains non-finite entries")
    if (arr < 0).any():
        raise ValueError("cost matrix contains negative entries")
    return arr


def check_prob_matrix(probs, node_count=None, *, atol=1e-9):
    """Validate a k x l matrix of per-object categorical rows."""
    arr = np.asarray(probs, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"probability matrix must be 2-D, got shape {arr.shape}")
    if node_count is not None and arr.shape[1] != node_count:
        raise ValueError(
            f"probability matrix has {arr.shape[1]} columns, graph has {node_count} nodes")
    if not np.isfinite(arr).all() or (arr < 0).any() or (arr > 1).any():
        raise ValueError("probabilities must lie in [0, 1]")
    sums = arr.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > atol)
    if bad.size:
        raise ValueError(f"row {bad[0]} sums to {sums[bad[0]]!r}, expected 1")
    return arr


def check_node(node, node_count, name="node"):
    if isinstance(node, (bool, np.bool_)) or not isinstance(node, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {node!r}")
    node = int(node)
    if not 0 <= node < node_count:
        raise ValueError(f"{name} {node} out of range for {node_count} nodes")
    return node


def check_positive_int(value, name):
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return int(value)
