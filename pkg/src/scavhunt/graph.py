"""Weighted graphs with dense metric cost matrices.

Every graph handled by the planners is complete: absent edges are replaced
by shortest-path distances at construction time, so a planner can look up
the travel cost between any two nodes in constant time.
"""

from dataclasses import dataclass, field

import numpy as np

from .validation import check_cost_matrix, check_node, check_positive_int

__all__ = [
    "WeightedGraph",
    "metric_closure",
    "random_euclidean_graph",
    "shortest_hamiltonian_path",
    "path_cost",
]

COORD_SCALE = 100.0


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable symmetric cost matrix, optionally with node coordinates."""

    cost: np.ndarray
    coords: np.ndarray | None = field(default=None)

    def __post_init__(self):
        cost = check_cost_matrix(self.cost).copy()
        if not np.array_equal(np.diag(cost), np.zeros(len(cost))):
            raise ValueError("cost matrix diagonal must be zero")
        if not np.array_equal(cost, cost.T):
            raise ValueError("cost matrix must be symmetric")
        cost.setflags(write=False)
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "_max_cost", float(cost.max()) if cost.size else 0.0)
        if self.coords is not None:
            coords = np.array(self.coords, dtype=np.float64)
            if coords.shape != (len(cost), 2):
                raise ValueError(f"coords must have shape ({len(cost)}, 2), got {coords.shape}")
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)

    @property
    def node_count(self):
        return self.cost.shape[0]

    @property
    def max_cost(self):
        return self._max_cost

    def __len__(self):
        return self.node_count

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        same_coords = (self.coords is None and other.coords is None) or (
            self.coords is not None and other.coords is not None
            and np.array_equal(self.coords, other.coords))
        return np.array_equal(self.cost, other.cost) and same_coords

    __hash__ = None

    @classmethod
    def from_coords(cls, coords):
        coords = np.asarray(coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != 2 or len(coords) < 1:
            raise ValueError(f"coords must be an (l, 2) array, got shape {coords.shape}")
        diff = coords[:, None, :] - coords[None, :, :]
        cost = np.sqrt((diff ** 2).sum(axis=-1))
        return cls(cost, coords)

    def is_metric(self, atol=1e-9):
        c = self.cost
        # c[i, k] <= c[i, j] + c[j, k] for every triple
        return bool((c[:, None, :] <= c[:, :, None] + c[None, :, :] + atol).all())


def metric_closure(raw_costs):
    """Complete a graph by replacing every entry with its shortest-path distance.

    Absent edges may be given as ``inf`` or ``None``.  Raises ``ValueError``
    naming an unreachable pair when the input is disconnected.
    """
    raw = np.array(raw_costs, dtype=object)
    raw[np.equal(raw, None)] = np.inf
    raw = check_cost_matrix(raw.astype(np.float64), allow_inf=True)
    if not np.array_equal(raw, raw.T):
        raise ValueError("raw cost matrix must be symmetric")
    dist = raw.copy()
    np.fill_diagonal(dist, 0.0)
    for k in range(len(dist)):
        np.minimum(dist, dist[:, k:k + 1] + dist[k:k + 1, :], out=dist)
    unreachable = np.argwhere(np.isinf(dist))
    if unreachable.size:
        i, j = unreachable[0]
        raise ValueError(f"graph is disconnected: node {j} is unreachable from node {i}")
    # float rounding in the relaxation can break exact symmetry
    dist = np.minimum(dist, dist.T)
    return WeightedGraph(dist)


def random_euclidean_graph(node_count, rng_seed):
    """Nodes drawn uniformly in an m x m square, m = 100 * node_count."""
    node_count = check_positive_int(node_count, "node_count")
    rng = np.random.default_rng(rng_seed)
    side = COORD_SCALE * node_count
    coords = rng.uniform(0.0, side, size=(node_count, 2))
    return WeightedGraph.from_coords(coords)


def path_cost(graph, path, start=None):
    """Sum of consecutive hop costs, optionally starting from `start`."""
    nodes = list(path) if start is None else [start, *path]
    c = graph.cost
    return float(sum(c[a, b] for a, b in zip(nodes, nodes[1:])))


def shortest_hamiltonian_path(graph, start, targets):
    """Minimum-cost open path from `start` visiting every target once.

    Held-Karp over subsets of the targets. The returned node list does not
    include `start` unless `start` is itself a target, in which case it leads
    the path at zero cost.  Ties are broken deterministically.
    """
    n = graph.node_count
    start = check_node(start, n, "start")
    nodes = sorted({check_node(t, n, "target") for t in targets})
    prefix = []
    if start in nodes:
        nodes.remove(start)
        prefix = [start]
    m = len(nodes)
    if m == 0:
        return prefix, 0.0

    c = graph.cost.tolist()
    full = (1 << m) - 1
    inf = float("inf")
    # best[mask][j]: cost of the cheapest path covering `mask` that ends at nodes[j]
    best = [[inf] * m for _ in range(1 << m)]
    parent = [[-1] * m for _ in range(1 << m)]
    for j in range(m):
        best[1 << j][j] = c[start][nodes[j]]
    for mask in range(1, full + 1):
        row = best[mask]
        for j in range(m):
            base = row[j]
            if base == inf or not mask >> j & 1:
                continue
            cj = c[nodes[j]]
            for nxt in range(m):
                if mask >> nxt & 1:
                    continue
                new_mask = mask | (1 << nxt)
                cand = base + cj[nodes[nxt]]
                if cand < best[new_mask][nxt]:
                    best[new_mask][nxt] = cand
                    parent[new_mask][nxt] = j

    # Reconstruct each candidate ending and keep the lexicographically smallest among ties.
    best_cost = min(best[full])
    winners = []
    for end in range(m):
        if best[full][end] != best_cost:
            continue
        order, mask, j = [], full, end
        while j != -1:
            order.append(nodes[j])
            mask, j = mask ^ (1 << j), parent[mask][j]
        winners.append(order[::-1])
    return prefix + min(winners), float(best_cost)
