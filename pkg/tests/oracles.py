"""Independent reference computations used only by the tests.

None of these share code with the package; they are deliberately naive.
"""

import itertools
import math


def floyd_warshall(raw):
    """All-pairs shortest paths with plain Python lists; None/inf mark absent edges."""
    n = len(raw)
    d = [[math.inf if raw[i][j] is None else float(raw[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        d[i][i] = 0.0
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def brute_force_path(cost, start, targets):
    """Cheapest ordering of `targets` from `start` by trying every permutation."""
    targets = [t for t in sorted(set(targets)) if t != start]
    best = (math.inf, None)
    for perm in itertools.permutations(targets):
        total, prev = 0.0, start
        for node in perm:
            total += cost[prev][node]
            prev = node
        if total < best[0]:
            best = (total, list(perm))
    if not targets:
        return 0.0, []
    return best


def joint_posterior_marginals(prior_rows, visits, truth):
    """Exact marginals after a visit sequence, by enumerating every joint location.

    A world survives if it produces the same observation (objects present)
    as `truth` at every visited node.
    """
    k, n = len(prior_rows), len(prior_rows[0])
    weights = {}
    for world in itertools.product(range(n), repeat=k):
        p = 1.0
        for o, node in enumerate(world):
            p *= prior_rows[o][node]
        if p == 0.0:
            continue
        if all({o for o in range(k) if world[o] == v} == {o for o in range(k) if truth[o] == v}
               for v in visits):
            weights[world] = p
    total = sum(weights.values())
    marg = [[0.0] * n for _ in range(k)]
    for world, p in weights.items():
        for o, node in enumerate(world):
            marg[o][node] += p / total
    return marg


def simulate_fixed_path(cost, start, path, locations):
    """Walk `path` one hop at a time, stopping once every location has been seen."""
    seen = {start}
    total, prev = 0.0, start
    for node in path:
        if set(locations) <= seen:
            break
        total += cost[prev][node]
        seen.add(node)
        prev = node
    return total


def central_difference(f, x, h=1e-5):
    """Numerical gradient of scalar f at array x (modified in place, then restored)."""
    import numpy as np

    grad = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        old = x[idx]
        x[idx] = old + h
        fp = f()
        x[idx] = old - h
        fm = f()
        x[idx] = old
        grad[idx] = (fp - fm) / (2 * h)
    return grad
