"""The non-learned planners: three greedy heuristics, exhaustive Bayesian
path search, and the two bounding planners (salesman tour, clairvoyant
optimum).

Every argmax/argmin excludes the current node and breaks ties toward the
lowest node index, so runs are reproducible bit for bit.
"""

import math

import numpy as np

from .base import BasePlanner
from .belief import enumerate_posterior_arrangements
from .graph import shortest_hamiltonian_path
from .validation import InconsistentObservationError, InfeasibleConfigurationError

__all__ = [
    "proximity_next",
    "probability_next",
    "prob_prox_next",
    "compute_cost",
    "expected_path_cost",
    "expected_path_cost_enumerated",
    "exhaustive_bayes_search",
    "exhaustive_bayes_next",
    "salesman_plan",
    "offline_optimal_plan",
    "ProximityPlanner",
    "ProbabilityPlanner",
    "ProbProxPlanner",
    "ExhaustiveBayesPlanner",
    "SalesmanPlanner",
    "OfflineOptimalPlanner",
]

DEFAULT_MAX_CANDIDATES = 10


def _no_candidates(current):
    return InconsistentObservationError(
        f"no node other than {current} can hold an unfound object")


def proximity_next(graph, belief, current):
    """Closest node that might hold an unfound object."""
    mask = (belief.posterior[~belief.found] > 0).any(axis=0)
    mask[current] = False
    if not mask.any():
        raise _no_candidates(current)
    dist = np.where(mask, graph.cost[current], np.inf)
    return int(np.argmin(dist))


def probability_next(graph, belief, current):
    """Node most likely to hold at least one unfound object."""
    score = belief.prob_any_unfound()
    score[current] = -np.inf
    best = int(np.argmax(score))
    if not score[best] > 0:
        raise _no_candidates(current)
    return best


def prob_prox_next(graph, belief, current):
    """Node with the best ratio of find probability to travel cost."""
    p = belief.prob_any_unfound()
    d = graph.cost[current]
    with np.errstate(divide="ignore", invalid="ignore"):
        score = np.where(p > 0, np.where(d > 0, p / d, np.inf), -np.inf)
    score[current] = -np.inf
    best = int(np.argmax(score))
    if score[best] == -np.inf:
        raise _no_candidates(current)
    return best


def compute_cost(graph, path, start, locations):
    """Cost of walking `path` from `start` until every node in `locations` is visited."""
    needed = set(int(n) for n in locations) - {int(start)}
    c = graph.cost
    total, prev = 0.0, int(start)
    for node in path:
        if not needed:
            break
        total += float(c[prev, node])
        needed.discard(int(node))
        prev = int(node)
    if needed:
        raise ValueError(f"path {list(path)} never visits nodes {sorted(needed)}")
    return total


def _candidates(belief, current, visited=None):
    """Support nodes, plus every unvisited node when `visited` is given."""
    mask = (belief.posterior[~belief.found] > 0).any(axis=0)
    if visited is not None:
        mask[:] = True
        mask[list(visited)] = False
    mask[current] = False
    return [int(n) for n in np.flatnonzero(mask)]


def _survival_table(belief, cands):
    """Probability that some unfound object lies outside each subset of `cands`.

    Indexed by bitmask over positions in `cands`.  Because objects are
    independent, P(all found within S) is the product of each object's
    mass inside S.
    """
    rows = belief.posterior[~belief.found][:, cands].tolist()
    support = [sum(1 << j for j, p in enumerate(r) if p > 0) for r in rows]
    inside = [[0.0] * len(rows)]
    surv = [1.0]
    for mask in range(1, 1 << len(cands)):
        low = (mask & -mask).bit_length() - 1
        cur = [a + r[low] for a, r in zip(inside[mask & (mask - 1)], rows)]
        inside.append(cur)
        if all(mask & s == s for s in support):
            surv.append(0.0)
        else:
            covered = 1.0
            for a in cur:
                covered *= a
            surv.append(1.0 - covered)
    if all(s == 0 for s in support):
        surv[0] = 0.0
    return surv


def expected_path_cost(graph, belief, path, start):
    """Expected cost of following `path` until every unfound object is found.

    Each hop is paid with the probability that the hunt is still running
    when it starts.  The path must list every node holding unfound mass.
    """
    cands = _candidates(belief, start)
    missing = set(cands) - set(path)
    if missing:
        raise ValueError(f"path does not visit candidate nodes {sorted(missing)}")
    pos = {n: j for j, n in enumerate(cands)}
    surv = _survival_table(belief, cands)
    c = graph.cost
    total, mask, prev = 0.0, 0, start
    for node in path:
        total = total + float(c[prev, node]) * surv[mask]
        mask |= 1 << pos[node] if node in pos else 0
        prev = node
    return total


def expected_path_cost_enumerated(graph, belief, path, start):
    """Same expectation as `expected_path_cost`, summed world by world."""
    _, worlds = enumerate_posterior_arrangements(belief)
    return sum(p * compute_cost(graph, path, start, locs) for locs, p in worlds)


def exhaustive_bayes_search(graph, belief, current, visited=None,
                            max_candidates=DEFAULT_MAX_CANDIDATES):
    """Enumerate every visiting order of the candidate nodes.

    With `visited` given, the candidates are all nodes not yet visited;
    otherwise only nodes that may hold an unfound object.  On a metric
    graph both choices pick the same first move, since a zero-mass node
    can only lengthen a path before the last object is found.

    Returns ``(best_order, expected_cost)``.  Orders are generated in
    lexicographic order and only a strictly cheaper one replaces the
    incumbent, so ties go to the lexicographically smallest order.
    """
    cands = _candidates(belief, current, visited)
    k = len(cands)
    if k == 0:
        raise _no_candidates(current)
    if k > max_candidates:
        raise InfeasibleConfigurationError(
            f"{k} candidate nodes exceed the exhaustive search limit of {max_candidates}; "
            "use a heuristic planner for graphs this large")
    surv = _survival_table(belief, cands)
    # rows 0..k-1 start from a candidate, row k starts from the current node
    cost = graph.cost.tolist()
    hop = [[cost[a][b] for b in cands] for a in cands + [current]]
    full = (1 << k) - 1
    best_cost = math.inf
    best_order = None
    order = []

    def visit(mask, last, acc):
        nonlocal best_cost, best_order
        if mask == full:
            if acc < best_cost:
                best_cost, best_order = acc, list(order)
            return
        s = surv[mask]
        row = hop[last]
        for j in range(k):
            if not mask >> j & 1:
                order.append(j)
                visit(mask | 1 << j, j, acc + row[j] * s)
                order.pop()

    visit(0, k, 0.0)
    return [cands[j] for j in best_order], best_cost


def exhaustive_bayes_next(graph, belief, current, visited=None,
                          max_candidates=DEFAULT_MAX_CANDIDATES):
    """First node of the visiting order with the lowest expected cost."""
    order, _ = exhaustive_bayes_search(graph, belief, current, visited, max_candidates)
    return order[0]


def salesman_plan(graph, prior, start):
    """Shortest path from `start` through every other node any object may occupy."""
    targets = set(prior.candidate_nodes().tolist()) - {int(start)}
    path, _ = shortest_hamiltonian_path(graph, start, targets)
    return path


def offline_optimal_plan(graph, truth, start):
    """Shortest path from `start` through the true object locations."""
    path, _ = shortest_hamiltonian_path(graph, start, set(truth.location) - {int(start)})
    return path


class ProximityPlanner(BasePlanner):
    def next_node(self, belief, current):
        return proximity_next(self.graph_, belief, current)


class ProbabilityPlanner(BasePlanner):
    def next_node(self, belief, current):
        return probability_next(self.graph_, belief, current)


class ProbProxPlanner(BasePlanner):
    def next_node(self, belief, current):
        return prob_prox_next(self.graph_, belief, current)


class ExhaustiveBayesPlanner(BasePlanner):
    """Replans the minimum-expected-cost visiting order after every observation."""

    def __init__(self, candidates="unvisited", max_candidates=DEFAULT_MAX_CANDIDATES):
        self.candidates = candidates
        self.max_candidates = max_candidates

    def start_hunt(self, truth=None):
        self._visited = set()
        return self

    def next_node(self, belief, current):
        if self.candidates not in ("unvisited", "support"):
            raise ValueError(f"candidates must be 'unvisited' or 'support', got {self.candidates!r}")
        visited = None
        if self.candidates == "unvisited":
            self._visited.add(int(current))
            visited = self._visited
        return exhaustive_bayes_next(self.graph_, belief, current, visited, self.max_candidates)


class _PlanFollower(BasePlanner):
    """Walks a fixed node sequence, skipping entries equal to the current node."""

    def start_hunt(self, truth=None):
        self._cursor = 0
        return self

    def _follow(self, plan, current):
        while self._cursor < len(plan) and plan[self._cursor] == current:
            self._cursor += 1
        if self._cursor >= len(plan):
            raise InconsistentObservationError("plan exhausted with objects still unfound")
        nxt = plan[self._cursor]
        self._cursor += 1
        return nxt


class SalesmanPlanner(_PlanFollower):
    """Fixed shortest tour through all candidate nodes, computed once in ``fit``."""

    def fit(self, env, y=None):
        super().fit(env)
        self.plan_ = salesman_plan(env.graph, env.prior, env.start)
        self._cursor = 0
        return self

    def next_node(self, belief, current):
        return self._follow(self.plan_, current)


class OfflineOptimalPlanner(_PlanFollower):
    """Clairvoyant lower bound; the executor hands it the true arrangement."""

    requires_truth = True

    def start_hunt(self, truth=None):
        if truth is None:
            raise ValueError("OfflineOptimalPlanner needs the true arrangement")
        self._check_fitted()
        self.plan_ = offline_optimal_plan(self.graph_, truth, self.env_.start)
        return super().start_hunt()

    def next_node(self, belief, current):
        return self._follow(self.plan_, current)
