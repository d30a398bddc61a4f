"""Batch execution of hunts across planners, environments and node counts."""

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..belief import sample_arrangement
from ..dqn import DQNPlanner
from ..graph import shortest_hamiltonian_path
from ..hunt import HuntInstance, run_hunt
from ..planners import (
    ExhaustiveBayesPlanner,
    OfflineOptimalPlanner,
    ProbabilityPlanner,
    ProbProxPlanner,
    ProximityPlanner,
    SalesmanPlanner,
)
from ..validation import InfeasibleConfigurationError
from .environments import OBJECTS_PER_HUNT, generate_environment, hunt_seed

__all__ = [
    "PLANNER_NAMES",
    "RESULT_HEADER",
    "ExperimentSpec",
    "TrialResult",
    "make_planner",
    "run_experiment",
    "run_environment",
    "write_results",
    "read_results",
]

PLANNER_NAMES = ("proximity", "probability", "probprox", "exhaustive", "salesman",
                 "optimal", "dqn", "dqnmap")

RESULT_HEADER = ["env_id", "trial_id", "hunt_id", "planner", "cost", "optimal_cost",
                 "decisions", "planner_time_us"]

EXHAUSTIVE_MAX_NODES = 8
LEARNED = ("dqn", "dqnmap")

log = logging.getLogger(__name__)


def make_planner(name, **dqn_params):
    """Fresh planner instance for a CLI name."""
    simple = {
        "proximity": ProximityPlanner,
        "probability": ProbabilityPlanner,
        "probprox": ProbProxPlanner,
        "exhaustive": ExhaustiveBayesPlanner,
        "salesman": SalesmanPlanner,
        "optimal": OfflineOptimalPlanner,
    }
    if name in simple:
        return simple[name]()
    if name in ("dqn", "dqnmap"):
        return DQNPlanner(with_map=name == "dqnmap", **dqn_params)
    raise ValueError(f"unknown planner {name!r}; choose from {', '.join(PLANNER_NAMES)}")


@dataclass
class ExperimentSpec:
    node_counts: list
    trials: int
    hunts_per_trial: int
    planners: list
    master_seed: int = 0
    objects_per_hunt: int = OBJECTS_PER_HUNT
    exhaustive_max_nodes: int = EXHAUSTIVE_MAX_NODES
    dqn_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.planners:
            raise ValueError("at least one planner is required")
        for name in self.planners:
            if name not in PLANNER_NAMES:
                raise ValueError(f"unknown planner {name!r}")
        if min(self.node_counts, default=0) < 1 or self.trials < 1 or \
                self.hunts_per_trial < 1 or self.objects_per_hunt < 1:
            raise ValueError("counts must be positive")


@dataclass(frozen=True)
class TrialResult:
    env_id: int
    trial_id: int
    hunt_id: int
    planner: str
    cost: float | None
    optimal_cost: float
    decisions: int | None
    planner_time_us: int

    @property
    def skipped(self):
        return self.cost is None

    def sort_key(self):
        return (self.env_id, self.trial_id, self.hunt_id, PLANNER_NAMES.index(self.planner))


def run_environment(env, planners, env_id, trial_id, hunts, master_seed,
                    timing=False, skip=()):
    """Run `hunts` sampled arrangements of one environment through every planner.

    `planners` maps names to planner estimators; each is fitted once on
    `env`.  Names in `skip` produce skipped rows.
    """
    fitted = {}
    for name, planner in planners.items():
        if name not in skip:
            fitted[name] = planner if getattr(planner, "env_", None) is not None \
                else planner.fit(env)
    results = []
    for hunt_id in range(hunts):
        truth = sample_arrangement(env.prior, hunt_seed(master_seed, env_id, trial_id, hunt_id))
        instance = HuntInstance.from_environment(env, truth)
        _, optimal = shortest_hamiltonian_path(env.graph, env.start, truth.nodes() - {env.start})
        for name in planners:
            if name not in fitted:
                results.append(TrialResult(env_id, trial_id, hunt_id, name, None, optimal, None, 0))
                continue
            outcome = run_hunt(instance, fitted[name])
            if not outcome.completed:
                where = f"env {env_id} trial {trial_id} hunt {hunt_id}"
                if name not in LEARNED:
                    raise RuntimeError(f"{name} hit the step limit on {where}")
                # the learned policy has no termination guarantee; keep the cost it ran up
                log.warning("%s hit the step limit on %s", name, where)
            micros = int(round(outcome.planner_time * 1e6)) if timing else 0
            results.append(TrialResult(env_id, trial_id, hunt_id, name, outcome.total_cost,
                                       optimal, outcome.decisions, micros))
    return results


def _run_cell(args):
    spec, node_count, trial_id, timing = args
    env_id = node_count
    env = generate_environment(node_count, spec.objects_per_hunt, spec.master_seed,
                               env_id, trial_id)
    skip = set()
    if node_count > spec.exhaustive_max_nodes:
        skip.add("exhaustive")
    planners = {name: make_planner(name, **spec.dqn_params) for name in spec.planners}
    try:
        return run_environment(env, planners, env_id, trial_id, spec.hunts_per_trial,
                               spec.master_seed, timing, skip)
    except InfeasibleConfigurationError:
        skip.add("exhaustive")
        return run_environment(env, planners, env_id, trial_id, spec.hunts_per_trial,
                               spec.master_seed, timing, skip)


def run_experiment(spec, workers=1, timing=False):
    """All (node count, trial) cells of a sweep, sorted by key.

    Each trial draws its own environment; ``env_id`` is the node count.
    Output is identical for any worker count.
    """
    cells = [(spec, n, t, timing) for n in spec.node_counts for t in range(spec.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell, cells))
    else:
        chunks = [_run_cell(c) for c in cells]
    results = [r for chunk in chunks for r in chunk]
    results.sort(key=TrialResult.sort_key)
    return results


def _fmt(x):
    return "" if x is None else repr(float(x))


def write_results(results, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(RESULT_HEADER)
    for r in results:
        writer.writerow([r.env_id, r.trial_id, r.hunt_id, r.planner, _fmt(r.cost),
                         _fmt(r.optimal_cost), "" if r.decisions is None else r.decisions,
                         r.planner_time_us])


def read_results(fh):
    reader = csv.reader(fh)
    header = next(reader, None)
    if header != RESULT_HEADER:
        raise ValueError(f"unexpected results header {header}")
    results = []
    for line_no, row in enumerate(reader, start=2):
        if len(row) != len(RESULT_HEADER):
            raise ValueError(f"line {line_no}: expected {len(RESULT_HEADER)} fields")
        env_id, trial_id, hunt_id, planner, cost, opt, decisions, micros = row
        if planner not in PLANNER_NAMES:
            raise ValueError(f"line {line_no}: unknown planner {planner!r}")
        results.append(TrialResult(
            int(env_id), int(trial_id), int(hunt_id), planner,
            float(cost) if cost else None, float(opt),
            int(decisions) if decisions else None, int(micros)))
    return results
