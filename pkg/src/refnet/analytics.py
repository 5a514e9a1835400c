"""Feature tables, metadata joins, correlations, and distribution summaries.

Tables are plain column-ordered row dicts. Correlations report permutation
p-values (two-sided, seeded, split per group) instead of parametric ones, and
missing values are dropped pairwise per analysis. Quantiles interpolate
linearly between order statistics at positions h = n*p + 1/2, so the quartile
of {1,2,3,4} is 1.5 and the median of an even count is the central midpoint.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .curvature import network_curvature_summary
from .descriptors import descriptor_row
from .errors import DataError

CURVATURE_SUMMARY_FIELDS = ("mean", "median", "std", "min", "max", "frac_negative", "count")

FEATURE_COLUMNS = (
    "hsa",
    "year",
    "node_count",
    "edge_count",
    "density",
    "global_clustering",
    "mean_local_clustering",
    "degree_assortativity",
    "component_count",
    "largest_component_fraction",
    "mean_degree",
    "max_degree",
    "mean_degree_centrality",
    "max_degree_centrality",
    "mean_betweenness",
    "max_betweenness",
) + tuple(f"{kind}_{stat}" for kind in ("frc", "orc") for stat in CURVATURE_SUMMARY_FIELDS)

METADATA_TABLE_NAMES = (
    "population_census",
    "hedis_measures",
    "post_discharge_records",
    "standard_pricing",
    "hospital_atlas_data",
)


@dataclass
class Table:
    """Ordered columns plus row dicts; None marks an absent value."""

    columns: list
    rows: list

    def column_values(self, name):
        if name not in self.columns:
            raise DataError(f"unknown column {name!r}")
        return [row.get(name) for row in self.rows]


@dataclass
class MetadataTable:
    """External metadata loaded from CSV with a typed schema sidecar."""

    name: str
    columns: list
    types: dict
    rows: list


@dataclass(frozen=True)
class CorrelationResult:
    x: str
    y: str
    method: str
    group: tuple | None
    coefficient: float
    n: int
    p_value: float | None


def assemble_features(networks) -> Table:
    """One feature row per (graph, curvature report) pair, sorted by (hsa, year)."""
    rows = []
    seen = set()
    for g, report in networks:
        key = (g.hsa_id, g.year)
        if key in seen:
            raise DataError(f"duplicate network key {key}")
        seen.add(key)
        row = {"hsa": g.hsa_id, "year": g.year}
        row.update(descriptor_row(g).as_dict())
        for kind in ("frc", "orc"):
            if report is not None:
                summary = network_curvature_summary(report, kind)
            else:
                summary = {stat: None for stat in CURVATURE_SUMMARY_FIELDS} | {"count": 0}
            for stat in CURVATURE_SUMMARY_FIELDS:
                row[f"{kind}_{stat}"] = summary[stat]
        rows.append(row)
    rows.sort(key=lambda r: (str(r["hsa"]), r["year"]))
    return Table(columns=list(FEATURE_COLUMNS), rows=rows)


def load_metadata_table(name: str, csv_path, schema_path=None) -> MetadataTable:
    """Read one metadata CSV; numeric columns that fail to parse become None."""
    types = {}
    if schema_path is not None:
        with open(schema_path, encoding="utf-8") as fh:
            declared = json.load(fh)
        if not isinstance(declared, dict):
            raise DataError(f"{schema_path}: schema must be a JSON object of column -> type")
        for col, kind in declared.items():
            if kind not in ("numeric", "text"):
                raise DataError(f"{schema_path}: column {col!r} has unknown type {kind!r}")
            types[col] = kind
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{csv_path}: empty metadata table") from None
        rows = []
        for raw in reader:
            if not raw or all(not f.strip() for f in raw):
                continue
            row = {}
            for col, value in zip(header, raw):
                value = value.strip()
                if types.get(col) == "numeric":
                    try:
                        row[col] = float(value)
                    except ValueError:
                        row[col] = None
                else:
                    row[col] = value if value else None
            rows.append(row)
    for col in header:
        types.setdefault(col, "text")
    return MetadataTable(name=name, columns=header, types=types, rows=rows)


def join_metadata(features: Table, tables, keys=("hsa", "year")) -> Table:
    """Left-join metadata tables onto the feature rows by (hsa, year).

    Unmatched feature rows keep None metadata fields; a duplicate key inside a
    metadata table or a column collision is an error. Row count and feature
    values are preserved exactly.
    """
    keys = tuple(keys)
    columns = list(features.columns)
    rows = [dict(row) for row in features.rows]
    for table in tables:
        missing = [k for k in keys if k not in table.columns]
        if missing:
            raise DataError(f"metadata table {table.name!r} lacks key columns: {', '.join(missing)}")
        payload_cols = [c for c in table.columns if c not in keys]
        for col in payload_cols:
            if col in columns:
                raise DataError(f"metadata table {table.name!r} column {col!r} collides with an existing column")
        columns.extend(payload_cols)
        lookup = {}
        for row in table.rows:
            key = _join_key(row, keys)
            if key in lookup:
                raise DataError(f"metadata table {table.name!r} has duplicate key {key}")
            lookup[key] = row
        for row in rows:
            match = lookup.get(_join_key(row, keys))
            for col in payload_cols:
                row[col] = match.get(col) if match is not None else None
    return Table(columns=columns, rows=rows)


def _join_key(row, keys):
    out = []
    for k in keys:
        v = row.get(k)
        if k == "year" and v is not None:
            try:
                v = int(float(v))
            except (TypeError, ValueError):
                pass
        out.append(str(v))
    return tuple(out)


def _as_number(value):
    if isinstance(value, bool) or value is None:
        return None
    if isinstance(value, (int, float)):
        return float(value) if math.isfinite(value) else None
    try:
        return float(value)
    except (TypeError, ValueError):
        return None


def _pearson_normalized(x):
    x = np.asarray(x, dtype=float)
    dx = x - x.mean()
    ss = float(dx @ dx)
    if ss <= 0.0:
        return None
    return dx / math.sqrt(ss)


def pearson(x, y):
    """Plain Pearson r; None when either variance vanishes.

    Computed as cov / sqrt(ssx * ssy) in one shot so exactly-affine inputs
    yield exactly +/-1.0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx <= 0.0 or sy <= 0.0:
        return None
    r = float(dx @ dy) / math.sqrt(sx * sy)
    return min(1.0, max(-1.0, r))


def weighted_pearson(x, y, w):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    total = w.sum()
    if total <= 0:
        return None
    dx = x - (w @ x) / total
    dy = y - (w @ y) / total
    vx = w @ (dx * dx)
    vy = w @ (dy * dy)
    if vx <= 0 or vy <= 0:
        return None
    return float(min(1.0, max(-1.0, (w @ (dx * dy)) / math.sqrt(vx * vy))))


def spearman(x, y):
    """Spearman rho via average ranks; None when either rank variance vanishes."""
    return pearson(rankdata(x), rankdata(y))


def correlate(frame: Table, x: str, y: str, method: str = "pearson", group_by=(), permutations: int = 0, seed: int = 0, weights: str | None = None):
    """Correlation of two frame columns, optionally per group.

    Rows with a missing x or y are dropped pairwise; groups with fewer than 3
    complete pairs are skipped. The permutation p-value is the fraction of
    |r| from seeded y-shuffles that reach |r_observed| (two-sided); each group
    draws from its own deterministic substream.
    """
    if method not in ("pearson", "spearman"):
        raise ValueError(f"method must be pearson or spearman, got {method!r}")
    if permutations < 0:
        raise ValueError("permutations must be >= 0")
    if weights is not None and method != "pearson":
        raise ValueError("weights are supported for pearson only")
    group_by = tuple(group_by)
    for col in (x, y) + group_by + ((weights,) if weights else ()):
        if col not in frame.columns:
            raise DataError(f"unknown column {col!r}")
    grouped = {}
    for row in frame.rows:
        xv = _as_number(row.get(x))
        yv = _as_number(row.get(y))
        if xv is None or yv is None:
            continue
        wv = 1.0
        if weights is not None:
            wv = _as_number(row.get(weights))
            if wv is None:
                continue
        key = tuple(row.get(c) for c in group_by) if group_by else None
        grouped.setdefault(key, []).append((xv, yv, wv))
    results = []
    for gidx, key in enumerate(sorted(grouped, key=lambda k: tuple(str(v) for v in k) if k is not None else ())):
        triples = grouped[key]
        if len(triples) < 3:
            continue
        xs = [t[0] for t in triples]
        ys = [t[1] for t in triples]
        ws = [t[2] for t in triples]
        if method == "spearman":
            xs = list(rankdata(xs))
            ys = list(rankdata(ys))
        if weights is not None:
            coeff = weighted_pearson(xs, ys, ws)
        else:
            coeff = pearson(xs, ys)
        if coeff is None:
            continue
        p_value = None
        if permutations > 0:
            rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(gidx,)))
            p_value = _permutation_p(xs, ys, ws if weights is not None else None, coeff, permutations, rng)
        results.append(
            CorrelationResult(x=x, y=y, method=method, group=key, coefficient=coeff, n=len(triples), p_value=p_value)
        )
    return results


def _permutation_p(xs, ys, ws, observed, permutations: int, rng) -> float:
    n = len(xs)
    y = np.asarray(ys, dtype=float)
    threshold = abs(observed) - 1e-12
    hits = 0
    batch = max(1, min(permutations, max(1, 4_000_000 // max(n, 1))))
    if ws is None:
        xn = _pearson_normalized(xs)
        done = 0
        while done < permutations:
            size = min(batch, permutations - done)
            idx = rng.permuted(np.tile(np.arange(n), (size, 1)), axis=1)
            yp = y[idx]
            dy = yp - yp.mean(axis=1, keepdims=True)
            norm = np.sqrt((dy * dy).sum(axis=1))
            norm[norm == 0] = np.inf
            rs = (dy @ xn) / norm
            hits += int((np.abs(rs) >= threshold).sum())
            done += size
    else:
        x = np.asarray(xs, dtype=float)
        w = np.asarray(ws, dtype=float)
        done = 0
        while done < permutations:
            size = min(batch, permutations - done)
            idx = rng.permuted(np.tile(np.arange(n), (size, 1)), axis=1)
            yp = y[idx]
            total = w.sum()
            dx = x - (w @ x) / total
            vx = w @ (dx * dx)
            ybar = (yp @ w) / total
            dy = yp - ybar[:, None]
            vy = (dy * dy) @ w
            cov = (dy * dx) @ w
            denom = np.sqrt(vx * vy)
            denom[denom == 0] = np.inf
            rs = cov / denom
            hits += int((np.abs(rs) >= threshold).sum())
            done += size
    return hits / permutations


def quantile(values, p: float):
    """Order-statistic quantile with linear interpolation at h = n*p + 1/2."""
    ordered = sorted(values)
    if not ordered:
        raise ValueError("quantile of empty sequence")
    n = len(ordered)
    h = n * p + 0.5
    if h <= 1.0:
        return float(ordered[0])
    if h >= n:
        return float(ordered[-1])
    k = int(math.floor(h))
    frac = h - k
    return float(ordered[k - 1] + frac * (ordered[k] - ordered[k - 1]))


def distribution_summary(values, groups=None, bins: int = 10, value_range=None):
    """Histogram and box statistics per group, for distribution panels.

    Bin edges are shared across groups (global range unless ``value_range`` is
    given) so panels stay comparable. Whiskers follow the 1.5*IQR rule: the
    extreme observations still inside [q1 - 1.5*IQR, q3 + 1.5*IQR].
    """
    values = [float(v) for v in values]
    if groups is None:
        groups = ["all"] * len(values)
    else:
        groups = list(groups)
        if len(groups) != len(values):
            raise ValueError("groups and values lengths differ")
    if not values:
        return []
    if value_range is not None:
        lo, hi = float(value_range[0]), float(value_range[1])
    else:
        lo, hi = min(values), max(values)
    if not lo < hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bins + 1)
    by_group = {}
    for g, v in zip(groups, values):
        by_group.setdefault(g, []).append(v)
    out = []
    for g in sorted(by_group, key=str):
        vals = sorted(by_group[g])
        q1 = quantile(vals, 0.25)
        q3 = quantile(vals, 0.75)
        iqr = q3 - q1
        lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
        inside = [v for v in vals if lo_fence <= v <= hi_fence]
        counts, _ = np.histogram(vals, bins=edges)
        out.append(
            {
                "group": g,
                "count": len(vals),
                "min": vals[0],
                "q1": q1,
                "median": quantile(vals, 0.5),
                "q3": q3,
                "max": vals[-1],
                "whisker_lo": inside[0] if inside else vals[0],
                "whisker_hi": inside[-1] if inside else vals[-1],
                "bin_edges": [float(e) for e in edges],
                "bin_counts": [int(c) for c in counts],
            }
        )
    return out


def load_region_map(path) -> dict:
    """CSV hsa,state,region -> {hsa: (state, region)}."""
    mapping = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = [h.strip().lower() for h in next(reader)]
        try:
            ih, is_, ir = header.index("hsa"), header.index("state"), header.index("region")
        except ValueError:
            raise DataError(f"{path}: region map needs hsa,state,region columns") from None
        for raw in reader:
            if not raw or all(not f.strip() for f in raw):
                continue
            mapping[raw[ih].strip()] = (raw[is_].strip(), raw[ir].strip())
    return mapping


def region_rollup(hsa_id: str, region_map: dict):
    """(state, region) labels for an HSA; unknown ids map to 'unassigned'."""
    return region_map.get(hsa_id, ("unassigned", "unassigned"))
