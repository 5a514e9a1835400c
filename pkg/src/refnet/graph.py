"""Patient-sharing edge lists and the immutable referral-network graph.

Raw records are pairs of provider ids with a shared-patient count, tagged by
service area and year. One undirected simple graph is built per (area, year)
bucket: directional counts are pooled, a minimum shared-patient threshold is
applied, and excluded providers are dropped. Adjacency is stored as sorted
index tuples so common-neighbor queries run as linear merges.
"""

from __future__ import annotations

import csv
import io
import json
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass

from .errors import DataError

CSV_COLUMNS = ("npi_a", "npi_b", "shared_patients", "hsa", "year")

SYMMETRIZATIONS = ("sum", "max")


@dataclass(frozen=True)
class EdgeRecord:
    """One raw patient-sharing observation between two providers."""

    provider_a: str
    provider_b: str
    shared_patients: int
    hsa_id: str
    year: int


@dataclass
class ParseStats:
    """Counts of rows read and rows rejected, by reason."""

    rows_read: int = 0
    accepted: int = 0
    malformed: int = 0
    self_loops: int = 0
    negative_counts: int = 0

    @property
    def rejected(self) -> int:
        return self.malformed + self.self_loops + self.negative_counts

    def as_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "malformed": self.malformed,
            "self_loops": self.self_loops,
            "negative_counts": self.negative_counts,
        }


@dataclass(frozen=True)
class FilterConfig:
    """Construction rules applied when turning records into a graph.

    ``symmetrization`` controls how all counts observed for one unordered
    provider pair are pooled: ``sum`` adds them (directional counts merge into
    one total), ``max`` keeps the largest single observation. The threshold is
    applied to the pooled value.
    """

    min_shared_patients: int = 11
    excluded_providers: frozenset = frozenset()
    symmetrization: str = "sum"
    keep_isolated: bool = False

    def __post_init__(self):
        if self.min_shared_patients < 1:
            raise ValueError(f"min_shared_patients must be >= 1, got {self.min_shared_patients}")
        if self.symmetrization not in SYMMETRIZATIONS:
            raise ValueError(f"symmetrization must be one of {SYMMETRIZATIONS}, got {self.symmetrization!r}")
        object.__setattr__(self, "excluded_providers", frozenset(self.excluded_providers))


class Graph:
    """Immutable undirected simple graph over provider ids.

    Nodes are indexed 0..n-1 in sorted provider-id order; ``adjacency[v]`` is
    a sorted tuple of neighbor indices, ``edges`` the canonical (i < j) edge
    list sorted lexicographically, and ``edge_weights`` the retained pooled
    shared-patient counts (annotation only, never used by curvature).
    """

    __slots__ = ("node_ids", "adjacency", "edges", "edge_weights", "hsa_id", "year", "_edge_index")

    def __init__(self, node_ids, weighted_edges, hsa_id="", year=0):
        node_ids = tuple(node_ids)
        if len(set(node_ids)) != len(node_ids):
            raise ValueError("duplicate node ids")
        n = len(node_ids)
        seen = {}
        for i, j, w in weighted_edges:
            if i == j:
                raise ValueError(f"self-loop on node index {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range for {n} nodes")
            key = (i, j) if i < j else (j, i)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen[key] = w
        edges = tuple(sorted(seen))
        nbrs = [[] for _ in range(n)]
        for i, j in edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        self.node_ids = node_ids
        self.adjacency = tuple(tuple(sorted(a)) for a in nbrs)
        self.edges = edges
        self.edge_weights = tuple(seen[e] for e in edges)
        self.hsa_id = hsa_id
        self.year = year
        self._edge_index = {e: k for k, e in enumerate(edges)}

    @classmethod
    def from_pairs(cls, pairs, hsa_id="", year=0, weights=None):
        """Build from (id_a, id_b) pairs of provider ids; nodes are their union."""
        pairs = list(pairs)
        ids = sorted({a for a, b in pairs} | {b for a, b in pairs})
        index = {p: k for k, p in enumerate(ids)}
        if weights is None:
            weights = [1] * len(pairs)
        return cls(ids, [(index[a], index[b], w) for (a, b), w in zip(pairs, weights)], hsa_id, year)

    @property
    def node_count(self) -> int:
        return len(self.node_ids)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def _check_node(self, v: int) -> int:
        if not 0 <= v < len(self.node_ids):
            raise IndexError(f"node index {v} out of range for {len(self.node_ids)} nodes")
        return v

    def degree(self, v: int) -> int:
        return len(self.adjacency[self._check_node(v)])

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[self._check_node(v)]

    def has_edge(self, i: int, j: int) -> bool:
        self._check_node(i)
        self._check_node(j)
        if i == j:
            return False
        a = self.adjacency[i]
        k = bisect_left(a, j)
        return k < len(a) and a[k] == j

    def edge_index(self, i: int, j: int) -> int:
        key = (i, j) if i < j else (j, i)
        try:
            return self._edge_index[key]
        except KeyError:
            raise ValueError(f"({i},{j}) is not an edge") from None

    def weight(self, i: int, j: int):
        return self.edge_weights[self.edge_index(i, j)]

    def triangles_on_edge(self, i: int, j: int) -> int:
        """Number of common neighbors of i and j (3-cliques through the edge)."""
        if not self.has_edge(i, j):
            raise ValueError(f"({i},{j}) is not an edge")
        a, b = self.adjacency[i], self.adjacency[j]
        count = 0
        p = q = 0
        la, lb = len(a), len(b)
        while p < la and q < lb:
            x, y = a[p], b[q]
            if x == y:
                count += 1
                p += 1
                q += 1
            elif x < y:
                p += 1
            else:
                q += 1
        return count

    def bfs_distances(self, source: int, radius: int) -> dict:
        """Exact hop distances from ``source`` for every node within ``radius``."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        self._check_node(source)
        dist = {source: 0}
        if radius == 0:
            return dist
        queue = deque((source,))
        while queue:
            v = queue.popleft()
            d = dist[v]
            if d == radius:
                break
            for w in self.adjacency[v]:
                if w not in dist:
                    dist[w] = d + 1
                    queue.append(w)
        return dist

    def connected_components(self):
        """Component label per node plus the component count."""
        n = self.node_count
        labels = [-1] * n
        count = 0
        for start in range(n):
            if labels[start] >= 0:
                continue
            labels[start] = count
            queue = deque((start,))
            while queue:
                v = queue.popleft()
                for w in self.adjacency[v]:
                    if labels[w] < 0:
                        labels[w] = count
                        queue.append(w)
            count += 1
        return labels, count


def _as_int(value) -> int:
    if isinstance(value, bool):
        raise ValueError(f"not an integer: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if value != int(value):
            raise ValueError(f"not an integer: {value!r}")
        return int(value)
    return int(str(value).strip())


def _parse_fields(a, b, cnt, hsa, year, stats):
    a = a.strip() if isinstance(a, str) else a
    b = b.strip() if isinstance(b, str) else b
    if not a or not b or not isinstance(a, str) or not isinstance(b, str):
        stats.malformed += 1
        return None
    try:
        cnt = _as_int(cnt)
        year = _as_int(year)
    except (TypeError, ValueError):
        stats.malformed += 1
        return None
    hsa = str(hsa).strip()
    if not hsa:
        stats.malformed += 1
        return None
    if cnt < 0:
        stats.negative_counts += 1
        return None
    if a == b:
        stats.self_loops += 1
        return None
    stats.accepted += 1
    return EdgeRecord(a, b, cnt, hsa, year)


def parse_edge_records(stream, fmt: str = "csv"):
    """Parse an edge-list stream into records plus rejection counters.

    ``stream`` is a text or binary file object. ``fmt`` is ``csv`` (header row
    with columns npi_a,npi_b,shared_patients,hsa,year required) or ``jsonl``
    (one object per line, same field names). Malformed rows are counted, not
    fatal; an unreadable stream or missing header raises DataError.
    """
    if isinstance(stream, (bytes, str)):
        raise TypeError("parse_edge_records expects a file object, not a string")
    try:
        raw = stream.read()
    except OSError as exc:
        raise DataError(f"cannot read edge list stream: {exc}") from exc
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    stats = ParseStats()
    records = []
    if fmt == "csv":
        reader = csv.reader(io.StringIO(raw))
        try:
            header = next(reader)
        except StopIteration:
            return records, stats
        header = [h.strip().lower() for h in header]
        missing = [c for c in CSV_COLUMNS if c not in header]
        if missing:
            raise DataError(f"edge list header is missing columns: {', '.join(missing)}")
        cols = [header.index(c) for c in CSV_COLUMNS]
        for row in reader:
            if not row or all(not f.strip() for f in row):
                continue
            stats.rows_read += 1
            if len(row) < len(header):
                stats.malformed += 1
                continue
            a, b, cnt, hsa, year = (row[k] for k in cols)
            rec = _parse_fields(a, b, cnt, hsa, year, stats)
            if rec is not None:
                records.append(rec)
    elif fmt == "jsonl":
        for line in raw.splitlines():
            if not line.strip():
                continue
            stats.rows_read += 1
            try:
                obj = json.loads(line)
                a, b = obj["npi_a"], obj["npi_b"]
                cnt, hsa, year = obj["shared_patients"], obj["hsa"], obj["year"]
            except (json.JSONDecodeError, KeyError, TypeError):
                stats.malformed += 1
                continue
            rec = _parse_fields(str(a), str(b), cnt, hsa, year, stats)
            if rec is not None:
                records.append(rec)
    else:
        raise ValueError(f"unknown edge list format {fmt!r}")
    return records, stats


def partition(records):
    """Bucket records by (hsa_id, year); every record lands in exactly one bucket."""
    buckets = {}
    for rec in records:
        buckets.setdefault((rec.hsa_id, rec.year), []).append(rec)
    return buckets


def build_network(records, config: FilterConfig, hsa_id=None, year=None) -> Graph:
    """Apply the construction rules to one (hsa, year) bucket of records.

    Counts for each unordered provider pair are pooled with the configured
    symmetrization; the edge is retained iff the pooled count reaches
    ``min_shared_patients`` and neither endpoint is excluded. Nodes appearing
    only in sub-threshold records are kept only under ``keep_isolated``.
    """
    records = list(records)
    keys = {(r.hsa_id, r.year) for r in records}
    if len(keys) > 1:
        raise ValueError(f"records span multiple (hsa, year) keys: {sorted(keys)[:4]}")
    if keys:
        bucket_hsa, bucket_year = next(iter(keys))
        hsa_id = bucket_hsa if hsa_id is None else hsa_id
        year = bucket_year if year is None else year
    else:
        hsa_id = hsa_id or ""
        year = year if year is not None else 0
    excluded = config.excluded_providers
    pooled = {}
    seen_nodes = set()
    for rec in records:
        a, b = rec.provider_a, rec.provider_b
        if a == b or a in excluded or b in excluded:
            continue
        seen_nodes.add(a)
        seen_nodes.add(b)
        pair = (a, b) if a < b else (b, a)
        prev = pooled.get(pair)
        if prev is None:
            pooled[pair] = rec.shared_patients
        elif config.symmetrization == "sum":
            pooled[pair] = prev + rec.shared_patients
        else:
            pooled[pair] = max(prev, rec.shared_patients)
    retained = {pair: w for pair, w in pooled.items() if w >= config.min_shared_patients}
    if config.keep_isolated:
        node_ids = sorted(seen_nodes)
    else:
        node_ids = sorted({p for pair in retained for p in pair})
    index = {p: k for k, p in enumerate(node_ids)}
    weighted = [(index[a], index[b], w) for (a, b), w in retained.items()]
    return Graph(node_ids, weighted, hsa_id, year)


def load_exclusion_list(path) -> frozenset:
    """One provider id per line; '#' introduces a comment."""
    ids = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                ids.add(line)
    return frozenset(ids)


def load_kv_config(path) -> dict:
    """key=value (or key: value) text config; '#' comments allowed."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            for sep in ("=", ":"):
                if sep in line:
                    key, value = line.split(sep, 1)
                    out[key.strip()] = value.strip()
                    break
            else:
                raise DataError(f"{path}:{lineno}: expected key=value, got {line!r}")
    return out


def filter_config_from_dict(values: dict, excluded=frozenset()) -> FilterConfig:
    """Build a FilterConfig from parsed key-value text (threshold, symmetrization, keep_isolated)."""
    kwargs = {"excluded_providers": excluded}
    if "threshold" in values:
        kwargs["min_shared_patients"] = int(values["threshold"])
    if "min_shared_patients" in values:
        kwargs["min_shared_patients"] = int(values["min_shared_patients"])
    if "symmetrization" in values:
        kwargs["symmetrization"] = values["symmetrization"]
    if "keep_isolated" in values:
        kwargs["keep_isolated"] = str(values["keep_isolated"]).lower() in ("1", "true", "yes")
    return FilterConfig(**kwargs)
