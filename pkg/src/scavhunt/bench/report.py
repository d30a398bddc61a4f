"""Summaries of a results CSV: ratio to optimal, cost and decision time by size."""

import csv
import itertools
import math
import os
from collections import defaultdict

from .experiment import PLANNER_NAMES
from .stats import ci95, welch_t

__all__ = ["check_results", "summarize", "write_report", "REPORT_FILES"]

REPORT_FILES = ("ratio_to_optimal.csv", "mean_cost_by_size.csv",
                "decision_time_by_size.csv", "welch_tests.csv")


def check_results(results):
    """Reject files that mix incompatible runs.

    Every (env_id, trial_id, hunt_id) cell must hold at most one row per
    planner, and all rows of a cell must agree on the optimal cost.
    """
    seen = set()
    optimal = {}
    for r in results:
        key = (r.env_id, r.trial_id, r.hunt_id, r.planner)
        if key in seen:
            raise ValueError(f"duplicate row for {key}")
        seen.add(key)
        cell = key[:3]
        if optimal.setdefault(cell, r.optimal_cost) != r.optimal_cost:
            raise ValueError(f"rows of cell {cell} disagree on the optimal cost")


def _ratio(cost_mean, opt_mean):
    if opt_mean == 0:
        return 1.0 if cost_mean == 0 else math.inf
    return cost_mean / opt_mean


def summarize(results):
    """Aggregate rows into the three report tables plus pairwise Welch tests.

    Rows are sorted first, so the output does not depend on input order.
    """
    check_results(results)
    rows = sorted((r for r in results if not r.skipped),
                  key=lambda r: (r.env_id, r.trial_id, r.hunt_id, PLANNER_NAMES.index(r.planner)))
    costs = defaultdict(list)
    optimal = defaultdict(list)
    micros = defaultdict(int)
    decisions = defaultdict(int)
    for r in rows:
        key = (r.env_id, r.planner)
        costs[key].append(r.cost)
        optimal[key].append(r.optimal_cost)
        micros[key] += r.planner_time_us
        decisions[key] += r.decisions

    keys = sorted(costs, key=lambda k: (k[0], PLANNER_NAMES.index(k[1])))
    ratio_rows, cost_rows, time_rows = [], [], []
    for env_id, planner in keys:
        s = ci95(costs[env_id, planner])
        opt_mean = math.fsum(optimal[env_id, planner]) / len(optimal[env_id, planner])
        ratio = _ratio(s.mean, opt_mean)
        half = s.ci95 / opt_mean if opt_mean else 0.0
        ratio_rows.append((env_id, planner, ratio, half, s.n))
        cost_rows.append((env_id, planner, s.mean, s.se, s.ci95, s.n))
        n_dec = decisions[env_id, planner]
        per_decision = micros[env_id, planner] / n_dec if n_dec else 0.0
        time_rows.append((env_id, planner, per_decision, n_dec))

    test_rows = []
    by_env = defaultdict(list)
    for env_id, planner in keys:
        by_env[env_id].append(planner)
    for env_id, planners in sorted(by_env.items()):
        for a, b in itertools.combinations(planners, 2):
            xa, xb = costs[env_id, a], costs[env_id, b]
            if len(xa) >= 2 and len(xb) >= 2:
                t, p = welch_t(xa, xb)
                test_rows.append((env_id, a, b, t, p))
    return {
        "ratio_to_optimal.csv": (["env_id", "planner", "ratio", "ci95", "n"], ratio_rows),
        "mean_cost_by_size.csv": (["env_id", "planner", "mean_cost", "se", "ci95", "n"], cost_rows),
        "decision_time_by_size.csv": (["env_id", "planner", "mean_decision_time_us", "decisions"],
                                      time_rows),
        "welch_tests.csv": (["env_id", "planner_a", "planner_b", "t", "p"], test_rows),
    }


def _cell(x):
    return repr(float(x)) if isinstance(x, float) else str(x)


def write_report(results, out_dir):
    """Write every summary table as CSV under `out_dir`; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, (header, rows) in summarize(results).items():
        path = os.path.join(out_dir, name)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([_cell(x) for x in row] for row in rows)
        paths.append(path)
    return paths
