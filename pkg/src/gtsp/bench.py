"""Benchmark harness: run solver families over instance lists with seeded
repetitions and emit comparison tables.

The protocol mirrors the usual benchmark setup: deterministic algorithms run
once, the ant colonies run `repetitions` times (default five) under a wall
clock budget (default ten minutes), and each table cell reports the best and
the mean over those runs. Pin `max_iterations` instead of `time_max` whenever
reproducible output bytes matter.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .aco import AcoParams, run
from .construct import nn_reference_cost
from .exact import DEFAULT_SEQUENCE_CAP, SequenceCapExceeded, exact_solve
from .instance import (
    GtspInstance,
    cluster_instance,
    euc2d_costs,
    generate_instance,
    parse_clustered,
    parse_tsplib,
)

ALGORITHMS = ("exact", "nn", "acs", "racs")


@dataclass
class ExperimentConfig:
    """Everything one benchmark run needs; mirrors the JSON config file."""

    instances: list  # file paths (str) or generator specs {"nodes", "clusters", "seed"}
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    repetitions: int = 5
    time_max: float | None = 600.0
    max_iterations: int | None = None
    base_seed: int = 0
    seeds: list[int] | None = None
    num_ants: int = 10
    beta: float = 5.0
    rho: float = 0.5
    q0: float = 0.5
    sequence_cap: int = DEFAULT_SEQUENCE_CAP
    output: str | None = None

    def __post_init__(self) -> None:
        if not self.instances:
            raise ValueError("config lists no instances")
        self.algorithms = [a.lower() for a in self.algorithms]
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}; known: {list(ALGORITHMS)}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.seeds is not None and len(self.seeds) < self.repetitions:
            raise ValueError(
                f"{self.repetitions} repetitions need {self.repetitions} seeds, "
                f"got {len(self.seeds)}"
            )

    def rep_seeds(self) -> list[int]:
        if self.seeds is not None:
            return [int(s) for s in self.seeds[: self.repetitions]]
        return [self.base_seed + i for i in range(self.repetitions)]

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        if base_dir is not None:
            cfg.instances = [
                str(base_dir / spec) if isinstance(spec, str) else spec
                for spec in cfg.instances
            ]
            if cfg.output is not None:
                cfg.output = str(base_dir / cfg.output)
        return cfg

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        data = json.loads(path.read_text())
        return cls.from_dict(data, base_dir=path.parent)


@dataclass
class AlgoResult:
    """Per-algorithm cell of a report row."""

    costs: list[int] = field(default_factory=list)
    elapsed: list[float] = field(default_factory=list)
    iterations: list[int] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    error: str | None = None

    @property
    def best(self) -> int | None:
        return min(self.costs) if self.costs else None

    @property
    def mean(self) -> float | None:
        return sum(self.costs) / len(self.costs) if self.costs else None

    @property
    def mean_elapsed(self) -> float | None:
        return sum(self.elapsed) / len(self.elapsed) if self.elapsed else None

    def to_dict(self, include_elapsed: bool = True) -> dict:
        out = {
            "costs": list(self.costs),
            "best": self.best,
            "mean": self.mean,
            "iterations": list(self.iterations),
            "seeds": list(self.seeds),
            "error": self.error,
        }
        if include_elapsed:
            out["elapsed"] = list(self.elapsed)
            out["mean_elapsed"] = self.mean_elapsed
        return out


@dataclass
class RunReport:
    """One table row: an instance and its per-algorithm results."""

    problem: str
    nc: int
    n: int
    optimum: int | None
    results: dict[str, AlgoResult]

    def to_dict(self, include_elapsed: bool = True) -> dict:
        return {
            "problem": self.problem,
            "nc": self.nc,
            "n": self.n,
            "optimum": self.optimum,
            "results": {
                algo: cell.to_dict(include_elapsed) for algo, cell in self.results.items()
            },
        }


def load_instance_file(
    path: str | Path,
    clusters: int | None = None,
    cluster_file: str | Path | None = None,
) -> GtspInstance:
    """Load a clustered instance, or cluster a raw TSPLIB file on the fly.

    A file containing a GTSP_SET_SECTION is taken as already clustered;
    otherwise the center-based procedure partitions it into `clusters` sets
    (default one fifth of the nodes). `cluster_file` substitutes the set
    section of another clustered file.
    """
    path = Path(path)
    text = path.read_text()
    if cluster_file is not None:
        base_coords = parse_tsplib(text)
        donor = parse_clustered(Path(cluster_file).read_text())
        if donor.n != len(base_coords):
            raise ValueError(
                f"cluster file covers {donor.n} nodes but {path.name} has {len(base_coords)}"
            )
        return GtspInstance(
            name=donor.name or path.stem,
            costs=euc2d_costs(base_coords),
            clusters=donor.clusters,
        )
    if "GTSP_SET_SECTION" in text.upper():
        inst = parse_clustered(text)
        if not inst.name:
            inst = GtspInstance(name=path.stem, costs=inst.costs, clusters=inst.clusters)
        return inst
    coords = parse_tsplib(text)
    return cluster_instance(coords, euc2d_costs(coords), m=clusters, name=path.stem)


def sidecar_optimum(path: str | Path) -> int | None:
    """Known optimum from `<instance-file>.opt`, if present."""
    opt_path = Path(str(path) + ".opt")
    if not opt_path.exists():
        return None
    return int(opt_path.read_text().split()[0])


def _resolve_instance(spec) -> tuple[GtspInstance, int | None]:
    if isinstance(spec, str):
        return load_instance_file(spec), sidecar_optimum(spec)
    if isinstance(spec, dict):
        _, inst = generate_instance(
            nodes=int(spec["nodes"]), clusters=int(spec["clusters"]), seed=int(spec.get("seed", 0))
        )
        return inst, None
    raise ValueError(f"instance spec must be a path or a generator dict, got {spec!r}")


def run_experiment(config: ExperimentConfig, log=sys.stderr) -> list[RunReport]:
    """Run every configured algorithm on every instance.

    Deterministic algorithms run once; the colonies run `repetitions` times
    with consecutive seeds. Unreadable instances are reported on `log` and
    skipped; an exact-solver refusal leaves a dash in that cell.
    """
    reports: list[RunReport] = []
    for spec in config.instances:
        try:
            instance, optimum = _resolve_instance(spec)
        except (OSError, ValueError) as exc:
            print(f"gtsp bench: skipping {spec!r}: {exc}", file=log)
            continue
        results: dict[str, AlgoResult] = {}
        for algo in config.algorithms:
            results[algo] = _run_algorithm(instance, algo, config)
        reports.append(
            RunReport(
                problem=instance.name,
                nc=instance.p,
                n=instance.n,
                optimum=optimum,
                results=results,
            )
        )
    return reports


def _run_algorithm(instance: GtspInstance, algo: str, config: ExperimentConfig) -> AlgoResult:
    cell = AlgoResult()
    if algo == "exact":
        started = time.perf_counter()
        try:
            tour = exact_solve(instance, sequence_cap=config.sequence_cap)
        except SequenceCapExceeded as exc:
            cell.error = str(exc)
            return cell
        cell.costs.append(tour.cost)
        cell.elapsed.append(time.perf_counter() - started)
        return cell
    if algo == "nn":
        started = time.perf_counter()
        l_nn, _ = nn_reference_cost(instance)
        cell.costs.append(l_nn)
        cell.elapsed.append(time.perf_counter() - started)
        return cell
    for seed in config.rep_seeds():
        params = AcoParams(
            beta=config.beta,
            rho=config.rho,
            q0=config.q0,
            num_ants=config.num_ants,
            time_max=config.time_max,
            max_iterations=config.max_iterations,
            seed=seed,
            variant=algo,
        )
        result = run(instance, params)
        cell.costs.append(result.best.cost)
        cell.elapsed.append(result.elapsed)
        cell.iterations.append(result.iterations)
        cell.seeds.append(seed)
    return cell


def emit_table(
    reports: list[RunReport],
    out_base: str | Path | None = None,
    include_elapsed: bool = True,
) -> str:
    """Render the comparison table; optionally persist `<out>.csv`/`<out>.json`.

    Within a row, every algorithm matching the lowest best cost is starred.
    Output bytes are a pure function of the reports.
    """
    if not reports:
        raise ValueError("no reports to emit")
    algorithms = list(reports[0].results)
    text = _text_table(reports, algorithms)
    if out_base is not None:
        out_base = Path(out_base)
        out_base.parent.mkdir(parents=True, exist_ok=True)
        out_base.with_suffix(".csv").write_text(_csv_table(reports, algorithms, include_elapsed))
        payload = {"reports": [r.to_dict(include_elapsed) for r in reports]}
        out_base.with_suffix(".json").write_text(json.dumps(payload, indent=2, sort_keys=True))
    return text


def _cell_text(cell: AlgoResult, starred: bool) -> str:
    if cell.error is not None or cell.best is None:
        return "-"
    star = "*" if starred else ""
    if len(cell.costs) == 1:
        return f"{cell.best}{star}"
    return f"{cell.best}{star} (mean {cell.mean:g})"


def _text_table(reports: list[RunReport], algorithms: list[str]) -> str:
    header = ["Problem", "nc", "n", "Opt.val."] + [a.upper() for a in algorithms]
    rows = [header]
    for rep in reports:
        bests = [rep.results[a].best for a in algorithms if rep.results[a].best is not None]
        winner = min(bests) if bests else None
        row = [
            rep.problem,
            str(rep.nc),
            str(rep.n),
            str(rep.optimum) if rep.optimum is not None else "n/a",
        ]
        for algo in algorithms:
            cell = rep.results[algo]
            row.append(_cell_text(cell, starred=cell.best is not None and cell.best == winner))
        rows.append(row)
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = ["  ".join(val.ljust(w) for val, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _csv_table(reports: list[RunReport], algorithms: list[str], include_elapsed: bool) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["problem", "nc", "n", "optimum"]
    for algo in algorithms:
        header += [f"{algo}_best", f"{algo}_mean"]
        if include_elapsed:
            header.append(f"{algo}_mean_elapsed")
    writer.writerow(header)
    for rep in reports:
        row = [rep.problem, rep.nc, rep.n, "" if rep.optimum is None else rep.optimum]
        for algo in algorithms:
            cell = rep.results[algo]
            row += ["" if cell.best is None else cell.best,
                    "" if cell.mean is None else cell.mean]
            if include_elapsed:
                row.append("" if cell.mean_elapsed is None else cell.mean_elapsed)
        writer.writerow(row)
    return buf.getvalue()
