"""GTSP instances: TSPLIB parsing, integer Euclidean costs, center-based clustering.

An instance is a complete graph with non-negative integer edge costs whose
nodes are partitioned into clusters; a feasible tour visits exactly one node
per cluster. Instances are immutable after construction and safe to share
read-only across concurrent solver runs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class ParseError(ValueError):
    """An instance file is malformed; the message names the offending record."""


@dataclass(frozen=True)
class NodeCoords:
    """Planar coordinates indexed by 0-based node id."""

    points: np.ndarray  # shape (n, 2), float64

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"expected an (n, 2) coordinate array, got shape {pts.shape}")
        if pts.shape[0] < 2:
            raise ValueError("need at least 2 nodes")
        if not np.all(np.isfinite(pts)):
            raise ValueError("coordinates must be finite")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class CostMatrix:
    """Complete n x n matrix of non-negative integer edge costs, zero diagonal.

    The `symmetric` flag is computed from the data, never trusted from input.
    """

    cost: np.ndarray  # shape (n, n), int64
    symmetric: bool = field(init=False)

    def __post_init__(self) -> None:
        c = np.asarray(self.cost)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError(f"cost matrix must be square, got shape {c.shape}")
        if not np.issubdtype(c.dtype, np.integer):
            as_int = c.astype(np.int64)
            if not np.array_equal(as_int, c):
                raise ValueError("costs must be integers")
            c = as_int
        else:
            c = c.astype(np.int64)
        if (c < 0).any():
            raise ValueError("costs must be non-negative")
        if np.diagonal(c).any():
            raise ValueError("diagonal costs must be zero")
        object.__setattr__(self, "cost", c)
        object.__setattr__(self, "symmetric", bool(np.array_equal(c, c.T)))

    @property
    def n(self) -> int:
        return self.cost.shape[0]


@dataclass(frozen=True)
class GtspInstance:
    """A cost matrix plus a partition of the nodes into p >= 2 clusters."""

    name: str
    costs: CostMatrix
    clusters: tuple[tuple[int, ...], ...]
    cluster_of: np.ndarray = field(init=False)  # node id -> cluster index

    def __post_init__(self) -> None:
        n = self.costs.n
        clusters = tuple(tuple(sorted(int(v) for v in c)) for c in self.clusters)
        if len(clusters) < 2:
            raise ValueError(f"need at least 2 clusters, got {len(clusters)}")
        cluster_of = np.full(n, -1, dtype=np.int64)
        for k, members in enumerate(clusters):
            if not members:
                raise ValueError(f"empty cluster {k}")
            for v in members:
                if not 0 <= v < n:
                    raise ValueError(f"node {v} out of range 0..{n - 1}")
                if cluster_of[v] >= 0:
                    raise ValueError(
                        f"not a partition: node {v} is in clusters {cluster_of[v]} and {k}"
                    )
                cluster_of[v] = k
        unassigned = np.flatnonzero(cluster_of < 0)
        if unassigned.size:
            raise ValueError(f"not a partition: node {int(unassigned[0])} is in no cluster")
        object.__setattr__(self, "clusters", clusters)
        object.__setattr__(self, "cluster_of", cluster_of)

    @property
    def n(self) -> int:
        return self.costs.n

    @property
    def p(self) -> int:
        return len(self.clusters)

    @cached_property
    def cluster_arrays(self) -> tuple[np.ndarray, ...]:
        """Per-cluster member ids as int64 arrays, ascending within each cluster."""
        return tuple(np.asarray(c, dtype=np.int64) for c in self.clusters)


def parse_tsplib(text: str) -> NodeCoords:
    """Parse a TSPLIB file with EUC_2D coordinates into 0-based node order."""
    headers, coord_records, _ = _scan_records(text)
    dim = _required_int_header(headers, "DIMENSION")
    ew_lineno, ew_type = headers.get("EDGE_WEIGHT_TYPE", (0, ""))
    if not ew_type:
        raise ParseError("missing EDGE_WEIGHT_TYPE record")
    if ew_type.upper() != "EUC_2D":
        raise ParseError(f"line {ew_lineno}: unsupported EDGE_WEIGHT_TYPE {ew_type!r}")
    if coord_records is None:
        raise ParseError("missing NODE_COORD_SECTION")
    if len(coord_records) != dim:
        raise ParseError(
            f"dimension mismatch: DIMENSION {dim} but {len(coord_records)} coordinate records"
        )
    points = np.full((dim, 2), np.nan)
    seen: dict[int, int] = {}
    for lineno, line in coord_records:
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: bad coordinate record {line!r}")
        try:
            node = int(parts[0])
            x, y = float(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"line {lineno}: bad coordinate record {line!r}") from None
        if not 1 <= node <= dim:
            raise ParseError(f"line {lineno}: node id {node} outside 1..{dim}")
        if node in seen:
            raise ParseError(f"line {lineno}: duplicate record for node {node}")
        seen[node] = lineno
        points[node - 1] = (x, y)
    return NodeCoords(points)


def euc2d_costs(coords: NodeCoords) -> CostMatrix:
    """Integer Euclidean costs: nearest-integer distances, halves rounding up."""
    pts = coords.points
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))
    cost = np.floor(dist + 0.5).astype(np.int64)
    np.fill_diagonal(cost, 0)
    return CostMatrix(cost)


def default_cluster_count(n: int) -> int:
    """Default number of clusters, one fifth of the nodes rounded up."""
    return math.ceil(n / 5)


def cluster_instance(
    coords: NodeCoords,
    costs: CostMatrix,
    m: int | None = None,
    name: str = "",
) -> GtspInstance:
    """Partition nodes into m clusters around mutually-far centers.

    The first center is the lowest-id node on a maximum-cost pair; each next
    center maximizes its minimum cost to the centers already chosen; every
    other node joins its nearest center. All ties break to the lowest node id
    (or lowest center index), so the result is a pure function of its inputs.
    """
    n = len(coords)
    if costs.n != n:
        raise ValueError(f"coords have {n} nodes but cost matrix has {costs.n}")
    if m is None:
        m = default_cluster_count(n)
    if m < 2 or m > n:
        raise ValueError(f"cluster count m={m} must satisfy 2 <= m <= n={n}")

    centers = _farthest_centers(costs.cost, m)
    dist_to_centers = costs.cost[:, centers]  # columns in selection order
    assign = np.argmin(dist_to_centers, axis=1)  # ties: lowest center index
    for k, c in enumerate(centers):
        assign[c] = k  # a center anchors its own cluster even under zero-cost ties
    clusters = tuple(tuple(np.flatnonzero(assign == k)) for k in range(m))
    return GtspInstance(
        name=format_instance_name(name, m, n),
        costs=costs,
        clusters=clusters,
    )


def _farthest_centers(cost: np.ndarray, m: int) -> list[int]:
    n = cost.shape[0]
    off_diag = cost.copy()
    np.fill_diagonal(off_diag, -1)
    top = off_diag.max()
    endpoints = np.flatnonzero((off_diag == top).any(axis=1) | (off_diag == top).any(axis=0))
    first = int(endpoints[0])

    centers = [first]
    min_to_centers = cost[:, first].astype(np.int64).copy()
    min_to_centers[first] = -1  # chosen nodes never re-selected
    for _ in range(m - 1):
        nxt = int(np.argmax(min_to_centers))  # ties: lowest node id
        centers.append(nxt)
        np.minimum(min_to_centers, cost[:, nxt], out=min_to_centers)
        min_to_centers[nxt] = -1
    return centers


def parse_clustered(text: str) -> GtspInstance:
    """Parse a clustered instance: a TSPLIB EUC_2D body plus GTSP set records."""
    headers, _, set_records = _scan_records(text)
    coords = parse_tsplib(text)
    n = len(coords)
    p = _required_int_header(headers, "GTSP_SETS")

    sets = _parse_set_section(set_records, n, p)
    name = headers.get("NAME", (0, ""))[1]
    clusters = tuple(tuple(v - 1 for v in members) for members in sets)
    try:
        return GtspInstance(name=name, costs=euc2d_costs(coords), clusters=clusters)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _parse_set_section(
    set_records: list[tuple[int, str]] | None, n: int, p: int
) -> list[list[int]]:
    if set_records is None:
        raise ParseError("missing GTSP_SET_SECTION")
    tokens: list[tuple[int, int]] = []  # (lineno, value)
    for lineno, line in set_records:
        for tok in line.split():
            try:
                tokens.append((lineno, int(tok)))
            except ValueError:
                raise ParseError(f"line {lineno}: bad set record token {tok!r}") from None

    sets: list[list[int]] = []
    owner: dict[int, int] = {}  # 1-based node id -> 1-based set id
    pos = 0
    for _ in range(p):
        if pos >= len(tokens):
            raise ParseError(f"expected {p} set records, found {len(sets)}")
        lineno, set_id = tokens[pos]
        pos += 1
        if set_id != len(sets) + 1:
            raise ParseError(f"line {lineno}: expected set {len(sets) + 1}, got {set_id}")
        members: list[int] = []
        while True:
            if pos >= len(tokens):
                raise ParseError(f"line {lineno}: set {set_id} not terminated by -1")
            lineno, v = tokens[pos]
            pos += 1
            if v == -1:
                break
            if not 1 <= v <= n:
                raise ParseError(f"line {lineno}: node {v} outside 1..{n}")
            if v in owner:
                raise ParseError(
                    f"line {lineno}: not a partition: node {v} is in sets {owner[v]} and {set_id}"
                )
            owner[v] = set_id
            members.append(v)
        if not members:
            raise ParseError(f"line {lineno}: empty cluster {set_id}")
        sets.append(members)
    if pos < len(tokens):
        raise ParseError(f"line {tokens[pos][0]}: unexpected data after set {p}")
    for v in range(1, n + 1):
        if v not in owner:
            raise ParseError(f"not a partition: node {v} is in no set")
    return sets


def format_clustered(name: str, coords: NodeCoords, clusters: tuple[tuple[int, ...], ...]) -> str:
    """Render a clustered instance file that parse_clustered reads back verbatim."""
    lines = [
        f"NAME : {name}",
        "TYPE : GTSP",
        f"DIMENSION : {len(coords)}",
        f"GTSP_SETS : {len(clusters)}",
        "EDGE_WEIGHT_TYPE : EUC_2D",
        "NODE_COORD_SECTION",
    ]
    for i, (x, y) in enumerate(coords.points, start=1):
        lines.append(f"{i} {_fmt_coord(x)} {_fmt_coord(y)}")
    lines.append("GTSP_SET_SECTION")
    for k, members in enumerate(clusters, start=1):
        ids = " ".join(str(v + 1) for v in sorted(members))
        lines.append(f"{k} {ids} -1")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def _fmt_coord(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def generate_instance(
    nodes: int, clusters: int, seed: int, name: str = "rand"
) -> tuple[NodeCoords, GtspInstance]:
    """Random planar instance: distinct integer-grid points, clustered as usual."""
    if nodes < 2:
        raise ValueError("need at least 2 nodes")
    rng = np.random.default_rng(seed)
    flat = rng.choice(1000 * 1000, size=nodes, replace=False)
    pts = np.stack([flat % 1000, flat // 1000], axis=1).astype(float)
    coords = NodeCoords(pts)
    costs = euc2d_costs(coords)
    return coords, cluster_instance(coords, costs, m=clusters, name=name)


def format_instance_name(base: str, nc: int, n: int) -> str:
    """Benchmark naming: cluster count, then the letters of the base name, then n."""
    stem = re.sub(r"[^A-Za-z]+", "", base).upper() or "X"
    return f"{nc}{stem}{n}"


def parse_instance_name(name: str) -> tuple[int, str, int]:
    """Split a benchmark name like 11EIL51 into (clusters, stem, nodes)."""
    m = re.fullmatch(r"(\d+)(\D+?)(\d+)", name)
    if not m:
        raise ValueError(f"name {name!r} does not follow the <nc><NAME><n> convention")
    return int(m.group(1)), m.group(2), int(m.group(3))


_SECTION_KEYWORDS = {
    "NODE_COORD_SECTION": "coords",
    "GTSP_SET_SECTION": "sets",
}


def _scan_records(text: str):
    """Split a file into header records and raw section lines.

    Returns (headers, coord_records, set_records) where headers maps KEY to
    (lineno, value) and each *_records is a list of (lineno, line) or None if
    the section is absent.
    """
    headers: dict[str, tuple[int, str]] = {}
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper == "EOF":
            break
        if upper in _SECTION_KEYWORDS:
            current = _SECTION_KEYWORDS[upper]
            sections.setdefault(current, [])
            continue
        if current is not None and line.lstrip("-")[:1].isdigit():
            sections[current].append((lineno, line))
            continue
        current = None
        key, _, value = line.partition(":")
        if not _:
            raise ParseError(f"line {lineno}: expected 'KEY : VALUE' record, got {line!r}")
        headers[key.strip().upper()] = (lineno, value.strip())
    return headers, sections.get("coords"), sections.get("sets")


def _required_int_header(headers: dict[str, tuple[int, str]], key: str) -> int:
    if key not in headers:
        raise ParseError(f"missing {key} record")
    lineno, value = headers[key]
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"line {lineno}: {key} is not an integer: {value!r}") from None
