"""Random hunt environments and the fixed lab-robot fixture."""

import numpy as np

from ..belief import PriorModel
from ..graph import WeightedGraph, random_euclidean_graph
from ..hunt import HuntEnvironment
from ..validation import InfeasibleConfigurationError

__all__ = ["generate_environment", "robot_fixture", "env_seed", "hunt_seed",
           "OBJECTS_PER_HUNT", "MAX_LOCATIONS"]

OBJECTS_PER_HUNT = 4
MAX_LOCATIONS = 3


def env_seed(master_seed, env_id, trial_id=0):
    return np.random.SeedSequence([int(master_seed), int(env_id), int(trial_id)])


def hunt_seed(master_seed, env_id, trial_id, hunt_id):
    return np.random.SeedSequence([int(master_seed), int(env_id), int(trial_id), int(hunt_id)])


def generate_environment(node_count, object_count=OBJECTS_PER_HUNT, master_seed=0,
                         env_id=0, trial_id=0):
    """Sample a Euclidean graph, a prior and a start node.

    Each object gets 1-3 distinct locations chosen uniformly, with
    probabilities from a flat Dirichlet.  Output depends only on
    ``(master_seed, env_id, trial_id)``.
    """
    if node_count < MAX_LOCATIONS:
        raise InfeasibleConfigurationError(
            f"objects may need {MAX_LOCATIONS} distinct locations; got {node_count} nodes")
    if object_count < 1:
        raise ValueError("object_count must be >= 1")
    rng = np.random.default_rng(env_seed(master_seed, env_id, trial_id))
    graph = random_euclidean_graph(node_count, rng)
    probs = np.zeros((object_count, node_count))
    for o in range(object_count):
        n_locs = int(rng.integers(1, MAX_LOCATIONS + 1))
        locs = rng.choice(node_count, size=n_locs, replace=False)
        probs[o, locs] = rng.dirichlet(np.ones(n_locs))
        if n_locs == 1:
            probs[o, locs] = 1.0  # the draw can come out one ulp short
    start = int(rng.integers(0, node_count))
    return HuntEnvironment(graph, PriorModel(probs), start)


# Node 0 is the robot's dock; nodes 1-7 carry the lab's location labels.
# Placements are synthetic (metres); the real map distances are unpublished.
_ROBOT_COORDS = [
    (0.0, 0.0),
    (4.0, 9.0),
    (12.0, 14.0),
    (21.0, 10.0),
    (27.0, 19.0),
    (18.0, 24.0),
    (8.0, 22.0),
    (31.0, 4.0),
]

_ROBOT_OBJECTS = [
    ("A", {2: 0.1, 3: 0.8, 7: 0.1}),
    ("B", {1: 0.2, 3: 0.5, 7: 0.3}),
    ("C", {1: 0.2, 2: 0.3, 4: 0.2, 5: 0.3}),
    ("D", {4: 0.5, 5: 0.5}),
]


def robot_fixture():
    """Lab environment with the four-object occurrence model; starts at the dock."""
    graph = WeightedGraph.from_coords(_ROBOT_COORDS)
    names, rows = zip(*_ROBOT_OBJECTS)
    prior = PriorModel.from_rows(rows, graph.node_count, names)
    return HuntEnvironment(graph, prior, 0)
