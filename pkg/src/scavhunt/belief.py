"""Object-location priors and the per-hunt posterior.

Each object's location is an independent categorical distribution over the
graph nodes.  Visiting a node reveals exactly which objects sit there, so
the posterior stays a product of per-object categoricals and each row can
be updated on its own.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .validation import InconsistentObservationError, check_node, check_prob_matrix

__all__ = [
    "PriorModel",
    "Arrangement",
    "BeliefState",
    "sample_arrangement",
    "update_on_visit",
    "prob_any_unfound",
    "enumerate_posterior_arrangements",
]

RENORMALIZE_FLOOR = 1e-12
DEFAULT_ENUMERATION_CAP = 10 ** 6


@dataclass(frozen=True, eq=False)
class PriorModel:
    """k x l matrix; row o is the location distribution of object o."""

    probs: np.ndarray
    names: tuple | None = None

    def __post_init__(self):
        probs = check_prob_matrix(self.probs).copy()
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if self.names is not None:
            names = tuple(str(n) for n in self.names)
            if len(names) != probs.shape[0]:
                raise ValueError(f"{len(names)} names for {probs.shape[0]} objects")
            object.__setattr__(self, "names", names)

    @property
    def object_count(self):
        return self.probs.shape[0]

    @property
    def node_count(self):
        return self.probs.shape[1]

    def support(self, obj):
        return np.flatnonzero(self.probs[obj] > 0)

    def candidate_nodes(self):
        """Nodes where at least one object may be found."""
        return np.flatnonzero((self.probs > 0).any(axis=0))

    @classmethod
    def from_rows(cls, rows, node_count, names=None):
        """Build from a list of ``{node: probability}`` mappings."""
        probs = np.zeros((len(rows), node_count))
        for o, row in enumerate(rows):
            for node, p in row.items():
                probs[o, check_node(int(node), node_count)] = p
        return cls(probs, names)

    def __eq__(self, other):
        if not isinstance(other, PriorModel):
            return NotImplemented
        return np.array_equal(self.probs, other.probs) and self.names == other.names

    __hash__ = None


@dataclass(frozen=True)
class Arrangement:
    """Hidden true location of every object."""

    location: tuple

    def __post_init__(self):
        object.__setattr__(self, "location", tuple(int(n) for n in self.location))

    def __len__(self):
        return len(self.location)

    def __getitem__(self, obj):
        return self.location[obj]

    def objects_at(self, node):
        return {o for o, n in enumerate(self.location) if n == node}

    def nodes(self):
        return set(self.location)

    def is_consistent(self, prior):
        return len(self) == prior.object_count and all(
            prior.probs[o, n] > 0 for o, n in enumerate(self.location))


def sample_arrangement(prior, rng_seed=None):
    """Draw each object's location independently from its prior row."""
    rng = np.random.default_rng(rng_seed)
    u = rng.random(prior.object_count)
    location = []
    for o, row in enumerate(prior.probs):
        cdf = np.cumsum(row)
        n = int(np.searchsorted(cdf, u[o] * cdf[-1], side="right"))
        support = np.flatnonzero(row > 0)
        location.append(min(n, int(support[-1])))
    return Arrangement(location)


class BeliefState:
    """Posterior over object locations plus the found flags of a running hunt."""

    def __init__(self, posterior, found=None, found_at=None):
        self.posterior = np.array(posterior, dtype=np.float64)
        k = self.posterior.shape[0]
        self.found = np.zeros(k, dtype=bool) if found is None else np.array(found, dtype=bool)
        self.found_at = [None] * k if found_at is None else list(found_at)

    @classmethod
    def from_prior(cls, prior):
        return cls(prior.probs)

    @property
    def object_count(self):
        return self.posterior.shape[0]

    @property
    def node_count(self):
        return self.posterior.shape[1]

    @property
    def all_found(self):
        return bool(self.found.all())

    def unfound_objects(self):
        return np.flatnonzero(~self.found)

    def copy(self):
        return BeliefState(self.posterior, self.found, self.found_at)

    def observe(self, node, present_objects):
        """Apply the observation made at `node` in place."""
        node = check_node(node, self.node_count)
        present = {int(o) for o in present_objects}
        for o in present:
            if not 0 <= o < self.object_count:
                raise ValueError(f"object {o} out of range")
            if self.found[o]:
                if self.found_at[o] != node:
                    raise InconsistentObservationError(
                        f"object {o} was already found at node {self.found_at[o]}")
                continue
            if self.posterior[o, node] <= 0:
                raise InconsistentObservationError(
                    f"object {o} observed at node {node} where its posterior is zero")
        for o in range(self.object_count):
            if self.found[o]:
                continue
            row = self.posterior[o]
            if o in present:
                row[:] = 0.0
                row[node] = 1.0
                self.found[o] = True
                self.found_at[o] = node
            elif row[node] > 0:
                row[node] = 0.0
                remaining = row.sum()
                if remaining < RENORMALIZE_FLOOR:
                    raise InconsistentObservationError(
                        f"object {o} is absent from node {node}, which held all its mass")
                row /= remaining
        return self

    def prob_any_unfound(self):
        """Per-node probability of finding at least one unfound object."""
        rows = self.posterior[~self.found]
        return 1.0 - np.prod(1.0 - rows, axis=0)

    def support_nodes(self):
        """Nodes with positive mass for some unfound object."""
        return np.flatnonzero((self.posterior[~self.found] > 0).any(axis=0))

    def check_invariants(self, atol=1e-9):
        for o in range(self.object_count):
            row = self.posterior[o]
            if self.found[o]:
                expected = np.zeros(self.node_count)
                expected[self.found_at[o]] = 1.0
                if not np.array_equal(row, expected):
                    raise AssertionError(f"found object {o} is not a point mass")
            elif abs(row.sum() - 1.0) > atol or not (row > 0).any() or (row < 0).any():
                raise AssertionError(f"row {o} is not a distribution: {row}")


def update_on_visit(belief, node, present_objects):
    """Return the posterior after observing `present_objects` at `node`."""
    return belief.copy().observe(node, present_objects)


def prob_any_unfound(belief, node):
    node = check_node(node, belief.node_count)
    rows = belief.posterior[~belief.found, node]
    return float(1.0 - np.prod(1.0 - rows))


def enumerate_posterior_arrangements(belief, cap=DEFAULT_ENUMERATION_CAP):
    """All joint locations of the unfound objects with their probabilities.

    Returns ``(objects, worlds)`` where `objects` lists the unfound object
    ids and each world is ``(locations, probability)`` with `locations`
    aligned to `objects`.
    """
    objects = [int(o) for o in belief.unfound_objects()]
    supports = [np.flatnonzero(belief.posterior[o] > 0) for o in objects]
    size = 1
    for s in supports:
        size *= len(s)
    if size > cap:
        raise ValueError(
            f"{size} joint arrangements exceed the enumeration cap of {cap}; "
            "estimate the expectation by sampling instead")
    worlds = []
    for combo in itertools.product(*supports):
        p = 1.0
        for o, n in zip(objects, combo):
            p *= belief.posterior[o, n]
        worlds.append((tuple(int(n) for n in combo), p))
    return objects, worlds
