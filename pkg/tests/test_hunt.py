import io

import numpy as np
import pytest

from scavhunt.belief import PriorModel, sample_arrangement
from scavhunt.graph import WeightedGraph
from scavhunt.hunt import (
    HuntEnvironment,
    HuntInstance,
    PlannerProtocolError,
    audit_trajectory,
    expected_policy_cost,
    run_hunt,
    write_trace,
)
from scavhunt.planners import (
    ExhaustiveBayesPlanner,
    OfflineOptimalPlanner,
    ProbabilityPlanner,
    ProbProxPlanner,
    ProximityPlanner,
    SalesmanPlanner,
    probability_next,
)

from helpers import random_env, three_node_env, three_node_graph

ONLINE = [ProximityPlanner, ProbabilityPlanner, ProbProxPlanner, ExhaustiveBayesPlanner,
          SalesmanPlanner]


def test_everything_at_start_costs_nothing():
    env = HuntEnvironment(three_node_graph(), PriorModel.from_rows([{0: 0.5, 1: 0.5}] * 2, 3), 0)
    out = run_hunt(HuntInstance.from_environment(env, [0, 0]), ProximityPlanner())
    assert out.completed and out.total_cost == 0.0 and out.decisions == 0


@pytest.mark.parametrize("cls", ONLINE + [OfflineOptimalPlanner])
def test_two_node_single_choice(cls):
    g = WeightedGraph(np.array([[0.0, 5.0], [5.0, 0.0]]))
    env = HuntEnvironment(g, PriorModel.from_rows([{1: 1.0}], 2), 0)
    out = run_hunt(HuntInstance.from_environment(env, [1]), cls())
    assert out.total_cost == 5.0


def test_probability_hand_trace():
    # object at node 1 with prior {1: 0.3, 2: 0.7}; Probability goes to 2 first, then 1
    env = three_node_env({1: 0.3, 2: 0.7})
    out = run_hunt(HuntInstance.from_environment(env, [1]), probability_next)
    assert out.trajectory.nodes == [0, 2, 1]
    assert [s[2] for s in out.trajectory.steps] == [2.0, 1.0]
    assert [s[1] for s in out.trajectory.steps] == [(False,), (True,)]
    assert out.total_cost == 3.0


def test_protocol_errors():
    env = three_node_env({1: 0.5, 2: 0.5})
    inst = HuntInstance.from_environment(env, [2])
    with pytest.raises(PlannerProtocolError):
        run_hunt(inst, lambda g, b, c: c)
    with pytest.raises(PlannerProtocolError):
        run_hunt(inst, lambda g, b, c: 9)


def test_step_limit_gives_incomplete_outcome():
    env = three_node_env({1: 0.5, 2: 0.5})
    inst = HuntInstance.from_environment(env, [2])
    # bounce between 0 and 1 forever
    out = run_hunt(inst, lambda g, b, c: 1 if c == 0 else 0, step_limit=5)
    assert not out.completed and out.decisions == 5


def test_expected_policy_cost_point_mass_equals_single_run():
    env = three_node_env({2: 1.0})
    assert expected_policy_cost(env, ProbProxPlanner()) == \
        run_hunt(HuntInstance.from_environment(env, [2]), ProbProxPlanner()).total_cost


def test_expected_policy_cost_half_half(half_half_env):
    assert expected_policy_cost(half_half_env, ExhaustiveBayesPlanner()) == 1.5


def test_expected_policy_cost_matches_monte_carlo():
    env = random_env(np.random.default_rng(3), 5)
    planner = ProbProxPlanner().fit(env)
    exact = expected_policy_cost(env, planner)
    rng = np.random.default_rng(0)
    costs = np.array([run_hunt(HuntInstance.from_environment(env, sample_arrangement(env.prior, rng)),
                               planner).total_cost for _ in range(20_000)])
    se = costs.std(ddof=1) / np.sqrt(len(costs))
    assert abs(costs.mean() - exact) <= 3 * se



def test_online_planners_never_receive_truth():
    env = random_env(np.random.default_rng(8), 5)
    truth = sample_arrangement(env.prior, 1)
    for cls in ONLINE:
        planner = cls()
        calls = []
        original = planner.start_hunt
        planner.start_hunt = lambda truth=None, _o=original: (calls.append(truth), _o())[1]
        run_hunt(HuntInstance.from_environment(env, truth), planner)
        assert calls == [None], cls.__name__
    opt = OfflineOptimalPlanner()
    run_hunt(HuntInstance.from_environment(env, truth), opt)
    assert opt.plan_ is not None


def test_invariants_on_random_instances():
    rng = np.random.default_rng(17)
    for _ in range(40):
        n = int(rng.integers(3, 8))
        env = random_env(rng, n)
        truth = sample_arrangement(env.prior, rng)
        inst = HuntInstance.from_environment(env, truth)
        opt = run_hunt(inst, OfflineOptimalPlanner()).total_cost
        for cls in ONLINE:
            out = run_hunt(inst, cls(), step_limit=n * env.object_count + 1)
            assert out.completed
            assert out.total_cost >= opt - 1e-9
            assert audit_trajectory(env.graph, out.trajectory) == out.total_cost


def test_fitted_on_other_environment_rejected():
    env_a = three_node_env({1: 0.5, 2: 0.5})
    env_b = three_node_env({1: 0.9, 2: 0.1})
    planner = ProximityPlanner().fit(env_a)
    with pytest.raises(ValueError):
        run_hunt(HuntInstance.from_environment(env_b, [1]), planner)


def test_trace_csv():
    env = three_node_env({1: 0.3, 2: 0.7})
    out = run_hunt(HuntInstance.from_environment(env, [1]), ProbabilityPlanner())
    buf = io.StringIO()
    write_trace(out, buf)
    assert buf.getvalue().splitlines() == [
        "step,node,step_cost,cumulative_cost,found",
        "0,0,0.0,0.0,0",
        "1,2,2.0,2.0,0",
        "2,1,1.0,3.0,1",
    ]


def test_inconsistent_truth_rejected():
    env = three_node_env({1: 0.5, 2: 0.5})
    with pytest.raises(ValueError):
        HuntInstance.from_environment(env, [0])
