"""Hunt execution: the choose / travel / observe loop and its bookkeeping."""

import csv
import time
from dataclasses import dataclass, field

from .belief import Arrangement, BeliefState, PriorModel, enumerate_posterior_arrangements
from .graph import WeightedGraph
from .validation import check_node, check_positive_int

__all__ = [
    "HuntEnvironment",
    "HuntInstance",
    "Trajectory",
    "HuntOutcome",
    "PlannerProtocolError",
    "run_hunt",
    "expected_policy_cost",
    "default_step_limit",
    "write_trace",
    "audit_trajectory",
]


class PlannerProtocolError(RuntimeError):
    """A planner returned a move the executor cannot perform."""


@dataclass(frozen=True, eq=False)
class HuntEnvironment:
    """What a planner may know before a hunt: graph, prior and start node."""

    graph: WeightedGraph
    prior: PriorModel
    start: int

    def __post_init__(self):
        if self.prior.node_count != self.graph.node_count:
            raise ValueError(
                f"prior covers {self.prior.node_count} nodes, graph has {self.graph.node_count}")
        object.__setattr__(self, "start", check_node(self.start, self.graph.node_count, "start"))

    @property
    def node_count(self):
        return self.graph.node_count

    @property
    def object_count(self):
        return self.prior.object_count

    def __eq__(self, other):
        if not isinstance(other, HuntEnvironment):
            return NotImplemented
        return (self.start == other.start and self.graph == other.graph
                and self.prior == other.prior)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class HuntInstance:
    """One sampled hunt: an environment plus the hidden arrangement."""

    graph: WeightedGraph
    prior: PriorModel
    truth: Arrangement
    start: int

    def __post_init__(self):
        env = HuntEnvironment(self.graph, self.prior, self.start)
        if not isinstance(self.truth, Arrangement):
            object.__setattr__(self, "truth", Arrangement(self.truth))
        if not self.truth.is_consistent(self.prior):
            raise ValueError(f"arrangement {self.truth.location} is outside the prior support")
        object.__setattr__(self, "start", env.start)
        object.__setattr__(self, "_env", env)

    @classmethod
    def from_environment(cls, env, truth):
        return cls(env.graph, env.prior, truth, env.start)

    @property
    def environment(self):
        return self._env


@dataclass
class Trajectory:
    start: int
    initial_found: tuple
    steps: list = field(default_factory=list)

    @property
    def nodes(self):
        return [self.start] + [s[0] for s in self.steps]

    @property
    def total_cost(self):
        return float(sum(s[2] for s in self.steps))

    @property
    def final_found(self):
        return self.steps[-1][1] if self.steps else self.initial_found


@dataclass
class HuntOutcome:
    trajectory: Trajectory
    completed: bool
    decisions: int
    per_decision_wall_times: list

    @property
    def total_cost(self):
        return self.trajectory.total_cost

    @property
    def planner_time(self):
        return float(sum(self.per_decision_wall_times))


def default_step_limit(node_count, object_count):
    return 4 * node_count * object_count


def _chooser(planner, instance):
    """Adapt an estimator-style planner or a bare callable to ``f(belief, current)``."""
    if hasattr(planner, "next_node"):
        fitted_env = getattr(planner, "env_", None)
        if fitted_env is None:
            planner.fit(instance.environment)
        elif fitted_env != instance.environment:
            raise ValueError("planner was fitted on a different environment")
        if getattr(planner, "requires_truth", False):
            planner.start_hunt(truth=instance.truth)
        else:
            planner.start_hunt()
        return planner.next_node
    graph = instance.graph
    return lambda belief, current: planner(graph, belief, current)


def run_hunt(instance, planner, step_limit=None):
    """Execute one hunt and return its outcome.

    The start node is observed before the first decision.  Only planners
    flagged with ``requires_truth`` ever see the hidden arrangement.
    """
    graph, truth = instance.graph, instance.truth
    n_nodes, n_objects = graph.node_count, instance.prior.object_count
    if step_limit is None:
        step_limit = default_step_limit(n_nodes, n_objects)
    step_limit = check_positive_int(step_limit, "step_limit")

    choose = _chooser(planner, instance)
    belief = BeliefState.from_prior(instance.prior)
    current = instance.start
    belief.observe(current, truth.objects_at(current))
    traj = Trajectory(start=current, initial_found=tuple(bool(f) for f in belief.found))
    times = []
    cost = graph.cost

    while not belief.all_found and len(times) < step_limit:
        t0 = time.perf_counter()
        nxt = choose(belief, current)
        times.append(time.perf_counter() - t0)
        try:
            nxt = check_node(nxt, n_nodes, "planner move")
        except (TypeError, ValueError) as exc:
            raise PlannerProtocolError(str(exc)) from exc
        if nxt == current:
            raise PlannerProtocolError(f"planner chose to stay at node {current}")
        step_cost = float(cost[current, nxt])
        current = nxt
        belief.observe(current, truth.objects_at(current))
        traj.steps.append((current, tuple(bool(f) for f in belief.found), step_cost))

    return HuntOutcome(traj, belief.all_found, len(times), times)


def expected_policy_cost(env, planner, step_limit=None, cap=None):
    """Exact expected realized cost of `planner` over every arrangement in the prior support."""
    belief = BeliefState.from_prior(env.prior)
    kwargs = {} if cap is None else {"cap": cap}
    _, worlds = enumerate_posterior_arrangements(belief, **kwargs)
    total = 0.0
    for locations, p in worlds:
        outcome = run_hunt(HuntInstance.from_environment(env, locations), planner, step_limit)
        if not outcome.completed:
            raise RuntimeError(f"planner did not finish arrangement {locations}")
        total += p * outcome.total_cost
    return total


def write_trace(outcome, fh):
    """Write one hunt as CSV rows: step, node, step_cost, cumulative_cost, found."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["step", "node", "step_cost", "cumulative_cost", "found"])
    traj = outcome.trajectory
    bits = "".join("1" if f else "0" for f in traj.initial_found)
    writer.writerow([0, traj.start, repr(0.0), repr(0.0), bits])
    total = 0.0
    for i, (node, found, step_cost) in enumerate(traj.steps, start=1):
        total += step_cost
        bits = "".join("1" if f else "0" for f in found)
        writer.writerow([i, node, repr(step_cost), repr(total), bits])


def audit_trajectory(graph, trajectory):
    """Recompute the trajectory cost from the node sequence alone."""
    nodes = trajectory.nodes
    c = graph.cost
    return float(sum(c[a, b] for a, b in zip(nodes, nodes[1:])))

