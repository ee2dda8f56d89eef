"""Exact GTSP search.

For a fixed cluster visiting order, the optimal tour is a shortest path in a
layered DAG: one layer per cluster in order, closed by a final layer that
duplicates the first cluster. The global optimum enumerates every visiting
order that starts at a designated first cluster.
"""

from __future__ import annotations

import math

import numpy as np

from .construct import Tour, make_tour
from .instance import GtspInstance

DEFAULT_SEQUENCE_CAP = 4_000_000  # admits p <= 11 (10! orders), refuses p >= 12


class SequenceCapExceeded(RuntimeError):
    """Enumerating (p-1)! cluster orders would exceed the configured cap."""

    def __init__(self, sequence_count: int, cap: int):
        self.sequence_count = sequence_count
        self.cap = cap
        super().__init__(
            f"refusing to enumerate {sequence_count} cluster sequences (cap {cap}); "
            "use a heuristic solver instead"
        )


class NoFiniteTourError(RuntimeError):
    """Every path through the layered network has infinite cost."""


def _check_sequence(instance: GtspInstance, order) -> list[int]:
    seq = [int(k) for k in order]
    if sorted(seq) != list(range(instance.p)):
        raise ValueError(f"sequence {seq} is not a permutation of 0..{instance.p - 1}")
    return seq


def best_tour_for_sequence(instance: GtspInstance, order) -> Tour:
    """Cheapest tour visiting the clusters in the given order.

    Forward dynamic programming over the layers, one start per node of the
    first cluster, O(sum_l |V_l|*|V_{l+1}|) per start. Ties resolve to the
    lowest start node, then the lowest member index per layer.
    """
    seq = _check_sequence(instance, order)
    cost = instance.costs.cost
    members = instance.cluster_arrays
    layers = [members[k] for k in seq]
    starts = layers[0]
    s = len(starts)

    dist = np.full((s, s), np.inf)
    np.fill_diagonal(dist, 0.0)
    parents: list[np.ndarray] = []
    for l in range(len(layers) - 1):
        block = cost[np.ix_(layers[l], layers[l + 1])]
        stacked = dist[:, :, None] + block[None, :, :]
        parents.append(stacked.argmin(axis=1))
        dist = stacked.min(axis=1)

    closing = cost[np.ix_(layers[-1], starts)]  # back to the duplicated first layer
    totals = dist + closing.T
    flat = int(totals.argmin())
    best = totals.flat[flat]
    if not np.isfinite(best):
        raise NoFiniteTourError("no finite tour for this cluster sequence")
    s_idx, j_idx = divmod(flat, totals.shape[1])

    choice = [0] * len(layers)
    choice[-1] = j_idx
    for l in range(len(layers) - 2, -1, -1):
        choice[l] = int(parents[l][s_idx, choice[l + 1]])
    nodes = [int(layers[l][choice[l]]) for l in range(len(layers))]
    assert nodes[0] == int(starts[s_idx])
    tour = make_tour(instance, nodes)
    assert tour.cost == int(best)
    return tour


def exact_solve(instance: GtspInstance, sequence_cap: int = DEFAULT_SEQUENCE_CAP) -> Tour:
    """Global optimum over all (p-1)! cluster orders.

    The first cluster is fixed to one of minimum cardinality (ties to the
    lowest index). Orders are explored lexicographically with prefix-shared
    dynamic programming; subtrees whose admissible lower bound cannot beat the
    incumbent are skipped, which never changes the returned optimum. The first
    optimal order in lexicographic position wins ties.
    """
    p = instance.p
    sequences = math.factorial(p - 1)
    if sequences > sequence_cap:
        raise SequenceCapExceeded(sequences, sequence_cap)

    cost = instance.costs.cost.astype(float)
    members = instance.cluster_arrays
    sizes = [len(c) for c in instance.clusters]
    first = sizes.index(min(sizes))
    rest = [k for k in range(p) if k != first]

    # Admissible completion bound: entering any cluster costs at least its
    # cheapest incoming edge from outside the cluster.
    min_in = np.empty(p)
    for k in range(p):
        outside = np.ones(instance.n, dtype=bool)
        outside[members[k]] = False
        min_in[k] = cost[np.ix_(outside, members[k])].min()

    starts = members[first]
    dist0 = np.full((len(starts), len(starts)), np.inf)
    np.fill_diagonal(dist0, 0.0)

    best_cost = np.inf
    best_order: list[int] | None = None
    order = [first]

    def search(dist: np.ndarray, last: int, remaining: list[int], rest_bound: float) -> None:
        nonlocal best_cost, best_order
        if not remaining:
            closing = cost[np.ix_(members[last], starts)]
            total = (dist + closing.T).min()
            if total < best_cost:
                best_cost = total
                best_order = list(order)
            return
        base = dist.min()
        for idx, k in enumerate(remaining):
            bound_rest = rest_bound - min_in[k]
            if base + min_in[k] + bound_rest + min_in[first] >= best_cost:
                continue
            block = cost[np.ix_(members[last], members[k])]
            nxt = (dist[:, :, None] + block[None, :, :]).min(axis=1)
            if nxt.min() + bound_rest + min_in[first] >= best_cost:
                continue
            order.append(k)
            search(nxt, k, remaining[:idx] + remaining[idx + 1 :], bound_rest)
            order.pop()

    search(dist0, first, rest, float(min_in[rest].sum()))
    if best_order is None:
        raise NoFiniteTourError("no finite tour exists")
    tour = best_tour_for_sequence(instance, best_order)
    assert tour.cost == int(best_cost)
    return tour
