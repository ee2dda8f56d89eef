"""Tours over clustered instances and the generalized nearest-neighbor heuristic.

All functions here are pure over immutable instances and safe to call
concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .instance import GtspInstance


class InvalidTourError(ValueError):
    """A node sequence does not visit every cluster exactly once."""


@dataclass(frozen=True)
class Tour:
    """An ordered one-node-per-cluster cycle and its closed-loop cost."""

    nodes: tuple[int, ...]
    cost: int

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "cost": self.cost}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def validate_tour(instance: GtspInstance, nodes) -> None:
    """Raise InvalidTourError naming a cluster visited more or less than once."""
    counts = np.zeros(instance.p, dtype=np.int64)
    for v in nodes:
        if not 0 <= v < instance.n:
            raise InvalidTourError(f"node {v} out of range")
        counts[instance.cluster_of[v]] += 1
    bad = np.flatnonzero(counts != 1)
    if bad.size:
        k = int(bad[0])
        raise InvalidTourError(f"cluster {k} visited {int(counts[k])} times, expected once")


def tour_cost(instance: GtspInstance, nodes) -> int:
    """Cost of the closed tour through `nodes`, including the returning edge."""
    validate_tour(instance, nodes)
    seq = np.asarray(nodes, dtype=np.int64)
    return int(instance.costs.cost[seq, np.roll(seq, -1)].sum())


def make_tour(instance: GtspInstance, nodes) -> Tour:
    return Tour(tuple(int(v) for v in nodes), tour_cost(instance, nodes))


def nn_tour(instance: GtspInstance, start: int) -> Tour:
    """Greedy tour from `start`: repeatedly hop to the cheapest node of any
    unvisited cluster (ties to the lowest node id), then close the cycle."""
    if not 0 <= start < instance.n:
        raise ValueError(f"start node {start} out of range")
    cost = instance.costs.cost
    members = instance.cluster_arrays
    open_nodes = np.ones(instance.n, dtype=bool)
    open_nodes[members[instance.cluster_of[start]]] = False
    path = [start]
    current = start
    for _ in range(instance.p - 1):
        cand = np.flatnonzero(open_nodes)
        nxt = int(cand[np.argmin(cost[current, cand])])
        path.append(nxt)
        open_nodes[members[instance.cluster_of[nxt]]] = False
        current = nxt
    return make_tour(instance, path)


def nn_reference_cost(instance: GtspInstance) -> tuple[int, Tour]:
    """Best nearest-neighbor tour over all starts in the smallest cluster.

    The start cluster is the one of minimum cardinality (ties to the lowest
    cluster index); starts are tried in ascending node id and only strict
    improvements are kept, so the result is deterministic.
    """
    sizes = [len(c) for c in instance.clusters]
    k = sizes.index(min(sizes))
    best: Tour | None = None
    for start in instance.clusters[k]:
        tour = nn_tour(instance, start)
        if best is None or tour.cost < best.cost:
            best = tour
    assert best is not None
    return best.cost, best
