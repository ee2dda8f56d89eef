"""Brute-force oracles and instance generators shared across the test suite.

The enumerators below recompute tour costs inline from the cost matrix so
they stay independent of the library's own cost and search code.
"""

from __future__ import annotations

import itertools

import numpy as np

from gtsp import CostMatrix, GtspInstance


def random_matrix_instance(
    n: int, p: int, rng: np.random.Generator, symmetric: bool = True, high: int = 100
) -> GtspInstance:
    """Random integer cost matrix with a random partition into p clusters."""
    cost = rng.integers(1, high, size=(n, n))
    if symmetric:
        upper = np.triu(cost, 1)
        cost = upper + upper.T
    np.fill_diagonal(cost, 0)
    nodes = rng.permutation(n)
    clusters = [[int(nodes[k])] for k in range(p)]
    for v in nodes[p:]:
        clusters[int(rng.integers(p))].append(int(v))
    return GtspInstance(
        name=f"{p}RND{n}",
        costs=CostMatrix(cost),
        clusters=tuple(tuple(c) for c in clusters),
    )


def cycle_cost(cost: np.ndarray, pick: tuple[int, ...]) -> int:
    total = 0
    for a, b in zip(pick, pick[1:] + (pick[0],)):
        total += int(cost[a, b])
    return total


def brute_force_best_for_order(instance: GtspInstance, order) -> int:
    """Exhaustive minimum over every node selection for one cluster order."""
    cost = instance.costs.cost
    layers = [instance.clusters[k] for k in order]
    return min(cycle_cost(cost, pick) for pick in itertools.product(*layers))


def brute_force_optimum(instance: GtspInstance) -> int:
    """Exhaustive minimum over every cluster order and node selection."""
    others = range(1, instance.p)
    return min(
        brute_force_best_for_order(instance, (0,) + rest)
        for rest in itertools.permutations(others)
    )
