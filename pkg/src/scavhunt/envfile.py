"""Reading and writing environment files (JSON)."""

import json

import numpy as np

from .belief import PriorModel
from .graph import WeightedGraph, metric_closure
from .hunt import HuntEnvironment

__all__ = ["environment_to_dict", "environment_from_dict", "load_environment", "save_environment"]

LOAD_SUM_TOLERANCE = 1e-6
# rows already valid to this tolerance are kept bit-exact
ROW_SUM_ATOL = 1e-9


def environment_to_dict(env):
    graph, prior = env.graph, env.prior
    doc = {}
    if graph.coords is not None:
        doc["nodes"] = [{"id": i, "x": float(x), "y": float(y)}
                        for i, (x, y) in enumerate(graph.coords.tolist())]
    else:
        doc["cost_matrix"] = graph.cost.tolist()
    names = prior.names or tuple(f"o{o}" for o in range(prior.object_count))
    doc["objects"] = [
        {"name": name, "locations": {str(n): float(row[n]) for n in np.flatnonzero(row > 0)}}
        for name, row in zip(names, prior.probs)
    ]
    doc["start"] = int(env.start)
    return doc


def _graph_from_dict(doc):
    has_nodes, has_matrix = "nodes" in doc, "cost_matrix" in doc
    if has_nodes == has_matrix:
        raise ValueError("environment must define exactly one of 'nodes' or 'cost_matrix'")
    if has_matrix:
        return metric_closure(doc["cost_matrix"])
    nodes = sorted(doc["nodes"], key=lambda n: n["id"])
    ids = [int(n["id"]) for n in nodes]
    if ids != list(range(len(ids))):
        raise ValueError(f"node ids must be 0..{len(ids) - 1}, got {ids}")
    return WeightedGraph.from_coords([(n["x"], n["y"]) for n in nodes])


def environment_from_dict(doc):
    graph = _graph_from_dict(doc)
    objects = doc.get("objects")
    if not objects:
        raise ValueError("environment defines no objects")
    rows, names = [], []
    for spec in objects:
        locs = {int(n): float(p) for n, p in spec["locations"].items()}
        total = sum(locs.values())
        if abs(total - 1.0) > LOAD_SUM_TOLERANCE:
            raise ValueError(f"object {spec.get('name')!r} probabilities sum to {total}")
        if abs(total - 1.0) > ROW_SUM_ATOL:
            locs = {n: p / total for n, p in locs.items()}
        rows.append(locs)
        names.append(spec.get("name", f"o{len(names)}"))
    prior = PriorModel.from_rows(rows, graph.node_count, names)
    return HuntEnvironment(graph, prior, int(doc.get("start", 0)))


def save_environment(env, path):
    with open(path, "w") as fh:
        json.dump(environment_to_dict(env), fh, indent=2)
        fh.write("\n")


def load_environment(path):
    with open(path) as fh:
        return environment_from_dict(json.load(fh))
