"""Generalized traveling salesman problem toolkit.

Solvers for complete graphs whose nodes are partitioned into clusters and a
tour must visit exactly one node per cluster: an exact layered-network search,
a generalized nearest-neighbor heuristic, and two ant colony systems (the
classic ACS and a reinforcing variant, RACS), plus a benchmark harness.
"""

from .aco import (
    AcoParams,
    AntState,
    ColonyState,
    PheromoneMatrix,
    RunResult,
    choose_next,
    evaporation_reinit,
    global_update,
    local_update,
    run,
    transition_distribution,
)
from .bench import (
    ExperimentConfig,
    RunReport,
    emit_table,
    load_instance_file,
    run_experiment,
    sidecar_optimum,
)
from .construct import (
    InvalidTourError,
    Tour,
    make_tour,
    nn_reference_cost,
    nn_tour,
    tour_cost,
    validate_tour,
)
from .exact import (
    DEFAULT_SEQUENCE_CAP,
    NoFiniteTourError,
    SequenceCapExceeded,
    best_tour_for_sequence,
    exact_solve,
)
from .instance import (
    CostMatrix,
    GtspInstance,
    NodeCoords,
    ParseError,
    cluster_instance,
    default_cluster_count,
    euc2d_costs,
    format_clustered,
    format_instance_name,
    generate_instance,
    parse_clustered,
    parse_instance_name,
    parse_tsplib,
)

__version__ = "0.1.0"
