"""Ant colony engines for the GTSP: the classic ant colony system (ACS) and a
reinforcing variant (RACS).

Both engines share the same tour construction: each ant starts on a random
node of a random cluster, repeatedly picks a node from an unvisited cluster
(greedy argmax below the exploitation threshold q0, otherwise a roulette draw
proportional to trail times visibility^beta), and closes the cycle. A tabu
set over clusters keeps tours feasible. They differ in the per-transition
trail correction: ACS relaxes toward the initial trail tau0, RACS toward
1/(n * L+), where L+ is the best cost seen so far. Once per iteration the
best-so-far tour's edges are reinforced with deposit 1/L+, and any trail that
climbed above tau_max is re-initialized to tau0.

A single run is sequential and deterministic given its seed. Independent runs
share instances read-only and may execute in parallel.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .construct import Tour, make_tour, nn_reference_cost
from .instance import GtspInstance

VARIANTS = ("acs", "racs")


@dataclass
class AcoParams:
    """Colony parameters. Defaults follow the benchmark setup: beta=5,
    rho=0.5, q0=0.5, ten ants."""

    beta: float = 5.0
    rho: float = 0.5
    q0: float = 0.5
    num_ants: int = 10
    time_max: float | None = None
    max_iterations: int | None = None
    seed: int = 0
    variant: str = "racs"

    def __post_init__(self) -> None:
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if not 0.0 <= self.q0 <= 1.0:
            raise ValueError(f"q0 must lie in [0, 1], got {self.q0}")
        if self.beta < 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.num_ants < 1:
            raise ValueError(f"num_ants must be >= 1, got {self.num_ants}")
        self.variant = self.variant.lower()
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "rho": self.rho,
            "q0": self.q0,
            "num_ants": self.num_ants,
            "time_max": self.time_max,
            "max_iterations": self.max_iterations,
            "seed": self.seed,
            "variant": self.variant,
        }


@dataclass
class PheromoneMatrix:
    """Per-edge trail intensities with their initial value and upper bound."""

    tau: np.ndarray  # shape (n, n), float64
    tau0: float
    tau_max: float

    @classmethod
    def for_instance(cls, instance: GtspInstance, l_nn: int, rho: float) -> "PheromoneMatrix":
        n = instance.n
        tau0 = 1.0 / (n * l_nn)
        tau_max = 1.0 / ((1.0 - rho) * l_nn)
        return cls(tau=np.full((n, n), tau0), tau0=tau0, tau_max=tau_max)


@dataclass
class AntState:
    """One ant's partial tour plus its tabu set of visited clusters.

    `node_mask` caches which nodes still belong to unvisited clusters; it is
    always consistent with `visited_clusters`.
    """

    current: int
    visited_clusters: set[int]
    path: list[int]
    rng_stream: np.random.Generator
    node_mask: np.ndarray

    @classmethod
    def place(cls, instance: GtspInstance, start: int, rng: np.random.Generator) -> "AntState":
        k = int(instance.cluster_of[start])
        mask = np.ones(instance.n, dtype=bool)
        mask[instance.cluster_arrays[k]] = False
        return cls(
            current=start, visited_clusters={k}, path=[start], rng_stream=rng, node_mask=mask
        )

    def advance(self, instance: GtspInstance, node: int) -> None:
        k = int(instance.cluster_of[node])
        self.visited_clusters.add(k)
        self.node_mask[instance.cluster_arrays[k]] = False
        self.path.append(node)
        self.current = node


@dataclass
class ColonyState:
    """Snapshot passed to iteration observers."""

    pheromone: PheromoneMatrix
    best_tour: Tour
    iteration: int
    elapsed: float


def _candidate_weights(
    instance: GtspInstance,
    pheromone: PheromoneMatrix,
    current: int,
    cand: np.ndarray,
    beta: float,
    eta_beta: np.ndarray | None = None,
) -> np.ndarray:
    if eta_beta is not None:
        vis = eta_beta[current, cand]
    else:
        edge = instance.costs.cost[current, cand]
        vis = (1.0 / np.maximum(edge, 1)) ** beta  # zero-cost edges clamp to 1
    return pheromone.tau[current, cand] * vis


def _visibility_pow(instance: GtspInstance, beta: float) -> np.ndarray:
    """Precomputed visibility^beta for a whole run."""
    return (1.0 / np.maximum(instance.costs.cost, 1)) ** beta


def transition_distribution(
    state: AntState,
    pheromone: PheromoneMatrix,
    instance: GtspInstance,
    beta: float,
) -> dict[int, float]:
    """Selection probabilities over all nodes of all unvisited clusters:
    p(u) proportional to tau(i,u) * (1/c(i,u))^beta."""
    cand = np.flatnonzero(state.node_mask)
    if cand.size == 0:
        raise RuntimeError("no candidates: every cluster already visited")
    w = _candidate_weights(instance, pheromone, state.current, cand, beta)
    probs = w / w.sum()
    return {int(u): float(pr) for u, pr in zip(cand, probs)}


def choose_next(
    state: AntState,
    pheromone: PheromoneMatrix,
    instance: GtspInstance,
    params: AcoParams,
    *,
    eta_beta: np.ndarray | None = None,
) -> int:
    """Pick the ant's next node.

    Draws one uniform q; if q <= q0 the argmax of trail times visibility^beta
    wins (ties to the lowest node id), otherwise a second uniform samples the
    transition distribution by inverse CDF over candidates in ascending node
    order. The fixed draw discipline keeps runs replayable.
    """
    cand = np.flatnonzero(state.node_mask)
    if cand.size == 0:
        raise RuntimeError("no candidates: every cluster already visited")
    w = _candidate_weights(instance, pheromone, state.current, cand, params.beta, eta_beta)
    q = state.rng_stream.random()
    if q <= params.q0:
        return int(cand[int(np.argmax(w))])
    probs = w / w.sum()
    r = state.rng_stream.random()
    idx = int(np.searchsorted(np.cumsum(probs), r, side="left"))
    return int(cand[min(idx, cand.size - 1)])


def local_update(
    pheromone: PheromoneMatrix,
    edge: tuple[int, int],
    rho: float,
    l_plus: int,
    n: int,
    variant: str = "racs",
    symmetric: bool = True,
) -> None:
    """Per-transition trail correction on a traversed edge.

    RACS relaxes toward 1/(n * L+) with L+ the best-so-far cost; the ACS
    baseline relaxes toward tau0. Symmetric instances mirror the update.
    """
    deposit = 1.0 / (n * l_plus) if variant == "racs" else pheromone.tau0
    i, j = edge
    tau = pheromone.tau
    tau[i, j] = (1.0 - rho) * tau[i, j] + rho * deposit
    if symmetric:
        tau[j, i] = tau[i, j]


def global_update(
    pheromone: PheromoneMatrix,
    best: Tour,
    rho: float,
    symmetric: bool = True,
) -> None:
    """Once per iteration, reinforce every edge of the best tour (closing edge
    included) with deposit 1/cost(best). Other edges are untouched."""
    deposit = 1.0 / best.cost
    tau = pheromone.tau
    nodes = best.nodes
    for a, b in zip(nodes, nodes[1:] + nodes[:1]):
        tau[a, b] = (1.0 - rho) * tau[a, b] + rho * deposit
        if symmetric:
            tau[b, a] = tau[a, b]


def evaporation_reinit(pheromone: PheromoneMatrix, scope: str = "entry") -> None:
    """Reset trails that climbed strictly above tau_max back to tau0.

    Runs right after the global update. `scope="entry"` resets only the
    offending entries; `scope="matrix"` resets the whole matrix when any
    entry exceeds the bound.
    """
    over = pheromone.tau > pheromone.tau_max
    if scope == "entry":
        pheromone.tau[over] = pheromone.tau0
    elif scope == "matrix":
        if over.any():
            pheromone.tau[:] = pheromone.tau0
    else:
        raise ValueError(f"scope must be 'entry' or 'matrix', got {scope!r}")


@dataclass
class RunResult:
    """Outcome of one colony run, serializable for the benchmark tables."""

    best: Tour
    iterations: int
    elapsed: float
    params: AcoParams
    trace: list[int] = field(default_factory=list)  # best-so-far cost per iteration

    def to_dict(self, include_elapsed: bool = True) -> dict:
        out = {
            "tour": self.best.to_dict(),
            "cost": self.best.cost,
            "iterations": self.iterations,
            "params": self.params.to_dict(),
            "seed": self.params.seed,
            "trace": list(self.trace),
        }
        if include_elapsed:
            out["elapsed_seconds"] = self.elapsed
        return out

    def to_json(self, include_elapsed: bool = True) -> str:
        return json.dumps(self.to_dict(include_elapsed), sort_keys=True)


IterationObserver = Callable[[ColonyState, list[Tour]], None]


def run(
    instance: GtspInstance,
    params: AcoParams,
    iteration_observer: IterationObserver | None = None,
) -> RunResult:
    """Run a full colony on `instance` until time_max or max_iterations.

    The incumbent starts as the nearest-neighbor reference tour, so the
    returned cost never exceeds it and the per-iteration trace is
    non-increasing. Deterministic given the seed when max_iterations is the
    stopping rule.
    """
    if params.time_max is None and params.max_iterations is None:
        raise ValueError("need a stopping rule: set time_max and/or max_iterations")

    started = time.perf_counter()
    rng = np.random.default_rng(params.seed)
    l_nn, incumbent = nn_reference_cost(instance)
    pheromone = PheromoneMatrix.for_instance(instance, l_nn, params.rho)
    eta_beta = _visibility_pow(instance, params.beta)
    symmetric = instance.costs.symmetric
    members = instance.cluster_arrays
    n, p = instance.n, instance.p

    trace: list[int] = []
    iteration = 0
    while True:
        if params.max_iterations is not None and iteration >= params.max_iterations:
            break
        if params.time_max is not None and time.perf_counter() - started >= params.time_max:
            break
        iteration += 1

        l_plus = incumbent.cost
        ant_tours: list[Tour] = []
        for _ in range(params.num_ants):
            cluster = int(rng.integers(p))
            start = int(members[cluster][rng.integers(len(members[cluster]))])
            state = AntState.place(instance, start, rng)
            for _ in range(p - 1):
                nxt = choose_next(state, pheromone, instance, params, eta_beta=eta_beta)
                local_update(
                    pheromone, (state.current, nxt), params.rho, l_plus, n,
                    params.variant, symmetric,
                )
                state.advance(instance, nxt)
            local_update(
                pheromone, (state.current, state.path[0]), params.rho, l_plus, n,
                params.variant, symmetric,
            )
            ant_tours.append(make_tour(instance, state.path))

        iteration_best = min(ant_tours, key=lambda t: t.cost)
        if iteration_best.cost < incumbent.cost:
            incumbent = iteration_best
        global_update(pheromone, incumbent, params.rho, symmetric)
        evaporation_reinit(pheromone)
        trace.append(incumbent.cost)

        if iteration_observer is not None:
            state_snapshot = ColonyState(
                pheromone=pheromone,
                best_tour=incumbent,
                iteration=iteration,
                elapsed=time.perf_counter() - started,
            )
            iteration_observer(state_snapshot, ant_tours)

    return RunResult(
        best=incumbent,
        iterations=iteration,
        elapsed=time.perf_counter() - started,
        params=replace(params),
        trace=trace,
    )
