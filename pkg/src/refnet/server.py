"""Read-only HTTP JSON API over an exported pipeline directory.

The dataset (bundles, feature table, region labels, metadata) is loaded once
into an immutable in-memory snapshot; every request is answered from it, so
responses depend only on the dataset version. Mutation happens through the
CLI pipeline, never through this API.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .analytics import Table, correlate, distribution_summary, join_metadata, load_metadata_table, load_region_map, region_rollup
from .curvature import KINDS
from .datastore import feature_csv_types, read_graph_bundle, read_table_csv
from .errors import DataError

log = logging.getLogger("refnet.server")

MAX_LIMIT = 10_000
MAX_PERMUTATIONS = 100_000

NETWORK_FILTERS = ("hsa", "year", "state", "region")


@dataclass
class Dataset:
    """Immutable snapshot served by the API."""

    networks: list
    bundles: dict
    frame: Table
    version: str


def _load_metadata_dir(data_dir: Path):
    tables = {}
    meta_dir = data_dir / "metadata"
    if meta_dir.is_dir():
        for csv_path in sorted(meta_dir.glob("*.csv")):
            name = csv_path.stem
            schema = csv_path.with_suffix(".schema.json")
            tables[name] = load_metadata_table(name, csv_path, schema if schema.exists() else None)
    return tables


def load_dataset(data_dir, region_map_path=None, metadata_args=None) -> Dataset:
    """Build the in-memory snapshot from a pipeline output directory."""
    data_dir = Path(data_dir)
    bundle_dir = data_dir / "bundles"
    if not bundle_dir.is_dir():
        raise DataError(f"{bundle_dir} not found; run the pipeline first")
    if region_map_path is None:
        default_map = data_dir / "region_map.csv"
        region_map_path = default_map if default_map.exists() else None
    mapping = load_region_map(region_map_path) if region_map_path else {}
    bundles = {}
    networks = []
    for path in sorted(bundle_dir.glob("*.json")):
        bundle = read_graph_bundle(path)
        g = bundle.graph
        if bundle.node_metrics is None:
            log.info("bundle %s has no node metrics; computing at load", path.name)
            from .cli import _node_metrics

            bundle.node_metrics = _node_metrics(g, bundle.report)
        key = (str(g.hsa_id), int(g.year))
        bundles[key] = bundle
        state, region = region_rollup(str(g.hsa_id), mapping)
        networks.append(
            {
                "hsa": str(g.hsa_id),
                "year": int(g.year),
                "node_count": g.node_count,
                "edge_count": g.edge_count,
                "state": state,
                "region": region,
            }
        )
    features_path = data_dir / "features.csv"
    if features_path.exists():
        table = read_table_csv(features_path, feature_csv_types())
    else:
        table = Table(columns=["hsa", "year"], rows=[])
    columns = list(table.columns) + ["state", "region"]
    for row in table.rows:
        row["state"], row["region"] = region_rollup(str(row["hsa"]), mapping)
    frame = Table(columns=columns, rows=table.rows)
    metadata = {}
    if metadata_args:
        for spec in metadata_args:
            if "=" not in spec:
                raise DataError(f"metadata spec must be name=csv[:schema], got {spec!r}")
            name, paths = spec.split("=", 1)
            csv_path, _, schema_path = paths.partition(":")
            metadata[name.strip()] = load_metadata_table(name.strip(), csv_path, schema_path or None)
    metadata.update(_load_metadata_dir(data_dir))
    joinable = [t for t in metadata.values() if "hsa" in t.columns and "year" in t.columns]
    if joinable and frame.rows:
        frame = join_metadata(frame, joinable)
    version = f"{__version__}+n{len(networks)}"
    return Dataset(networks=networks, bundles=bundles, frame=frame, version=version)


_PAGED = {
    "type": "object",
    "required": ["items", "total", "offset", "limit"],
    "properties": {
        "items": {"type": "array"},
        "total": {"type": "integer", "minimum": 0},
        "offset": {"type": "integer", "minimum": 0},
        "limit": {"type": "integer", "minimum": 1},
    },
}

SCHEMAS = {
    "/health": {"type": "object", "required": ["status"], "properties": {"status": {"const": "ok"}}},
    "/version": {
        "type": "object",
        "required": ["version", "dataset"],
        "properties": {"version": {"type": "string"}, "dataset": {"type": "string"}},
    },
    "/networks": {
        **_PAGED,
        "properties": {
            **_PAGED["properties"],
            "items": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["hsa", "year", "node_count", "edge_count", "state", "region"],
                    "properties": {
                        "hsa": {"type": "string"},
                        "year": {"type": "integer"},
                        "node_count": {"type": "integer"},
                        "edge_count": {"type": "integer"},
                        "state": {"type": "string"},
                        "region": {"type": "string"},
                    },
                },
            },
        },
    },
    "/networks/{hsa}/{year}/graph": {
        "type": "object",
        "required": ["hsa", "year", "nodes", "edges"],
        "properties": {
            "hsa": {"type": "string"},
            "year": {"type": "integer"},
            "nodes": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["id", "degree", "degree_centrality", "betweenness", "frc", "orc"],
                    "properties": {
                        "id": {"type": "string"},
                        "degree": {"type": "integer"},
                        "degree_centrality": {"type": ["number", "null"]},
                        "betweenness": {"type": ["number", "null"]},
                        "frc": {"type": ["number", "null"]},
                        "orc": {"type": ["number", "null"]},
                    },
                },
            },
            "edges": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["source", "target", "weight", "frc", "orc"],
                    "properties": {
                        "source": {"type": "string"},
                        "target": {"type": "string"},
                        "weight": {"type": "number"},
                        "frc": {"type": ["number", "null"]},
                        "orc": {"type": ["number", "null"]},
                    },
                },
            },
        },
    },
    "/features": {**_PAGED, "properties": {**_PAGED["properties"], "items": {"type": "array", "items": {"type": "object"}}}},
    "/distributions": {
        "type": "object",
        "required": ["metric", "group", "groups"],
        "properties": {
            "metric": {"type": "string"},
            "group": {"type": "string"},
            "groups": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["group", "count", "min", "q1", "median", "q3", "max", "whisker_lo", "whisker_hi", "bin_edges", "bin_counts"],
                    "properties": {
                        "group": {"type": "string"},
                        "region": {"type": ["string", "null"]},
                        "count": {"type": "integer", "minimum": 1},
                        "min": {"type": "number"},
                        "q1": {"type": "number"},
                        "median": {"type": "number"},
                        "q3": {"type": "number"},
                        "max": {"type": "number"},
                        "whisker_lo": {"type": "number"},
                        "whisker_hi": {"type": "number"},
                        "bin_edges": {"type": "array", "items": {"type": "number"}},
                        "bin_counts": {"type": "array", "items": {"type": "integer"}},
                    },
                },
            },
        },
    },
    "/correlate": {
        "type": "object",
        "required": ["results"],
        "properties": {
            "results": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["x", "y", "method", "group", "coefficient", "n", "p_value"],
                    "properties": {
                        "x": {"type": "string"},
                        "y": {"type": "string"},
                        "method": {"enum": ["pearson", "spearman"]},
                        "group": {"type": ["string", "null"]},
                        "coefficient": {"type": "number", "minimum": -1, "maximum": 1},
                        "n": {"type": "integer", "minimum": 3},
                        "p_value": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                    },
                },
            }
        },
    },
}


def _check_params(request: Request, allowed):
    unknown = [k for k in request.query_params if k not in allowed]
    if unknown:
        raise HTTPException(status_code=400, detail=f"unknown query parameters: {', '.join(sorted(unknown))}")


def _pagination(request: Request):
    try:
        offset = int(request.query_params.get("offset", "0"))
        limit = int(request.query_params.get("limit", "100"))
    except ValueError:
        raise HTTPException(status_code=400, detail="offset and limit must be integers") from None
    if offset < 0 or limit <= 0 or limit > MAX_LIMIT:
        raise HTTPException(status_code=400, detail=f"require offset >= 0 and 0 < limit <= {MAX_LIMIT}")
    return offset, limit


def _network_filters(request: Request):
    filters = {}
    for name in NETWORK_FILTERS:
        value = request.query_params.get(name)
        if value is None:
            continue
        if name == "year":
            try:
                value = int(value)
            except ValueError:
                raise HTTPException(status_code=400, detail="year filter must be an integer") from None
        filters[name] = value
    return filters


def create_app(data_dir, region_map_path=None, metadata_args=None, dataset: Dataset | None = None, ui_dir=None) -> FastAPI:
    if dataset is None:
        dataset = load_dataset(data_dir, region_map_path, metadata_args)
    app = FastAPI(title="refnet", version=__version__, docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/version")
    def version():
        return {"version": __version__, "dataset": dataset.version}

    @app.get("/schema")
    def schema():
        return {
            "endpoints": SCHEMAS,
            "columns": {c: ("number" if c not in ("hsa", "state", "region") else "string") for c in dataset.frame.columns},
            "filters": list(NETWORK_FILTERS),
            "metrics": list(KINDS),
        }

    @app.get("/networks")
    def networks(request: Request):
        _check_params(request, NETWORK_FILTERS + ("offset", "limit"))
        filters = _network_filters(request)
        offset, limit = _pagination(request)
        items = [n for n in dataset.networks if all(n[k] == v for k, v in filters.items())]
        total = len(items)
        return {"items": items[offset : offset + limit], "total": total, "offset": offset, "limit": limit}

    @app.get("/networks/{hsa}/{year}/graph")
    def network_graph(hsa: str, year: str):
        try:
            key = (hsa, int(year))
        except ValueError:
            raise HTTPException(status_code=400, detail="year must be an integer") from None
        bundle = dataset.bundles.get(key)
        if bundle is None:
            raise HTTPException(status_code=404, detail=f"unknown network {hsa}/{year}")
        g = bundle.graph
        metrics = bundle.node_metrics or {}
        frc = list(bundle.report.frc) if bundle.report is not None and bundle.report.frc is not None else None
        orc = list(bundle.report.orc) if bundle.report is not None and bundle.report.orc is not None else None
        nodes = []
        for v in range(g.node_count):
            nodes.append(
                {
                    "id": g.node_ids[v],
                    "degree": g.degree(v),
                    "degree_centrality": _at(metrics.get("degree_centrality"), v),
                    "betweenness": _at(metrics.get("betweenness"), v),
                    "frc": _at(metrics.get("frc"), v),
                    "orc": _at(metrics.get("orc"), v),
                }
            )
        edges = []
        for k, (i, j) in enumerate(g.edges):
            edges.append(
                {
                    "source": g.node_ids[i],
                    "target": g.node_ids[j],
                    "weight": g.edge_weights[k],
                    "frc": frc[k] if frc is not None else None,
                    "orc": orc[k] if orc is not None else None,
                }
            )
        return {"hsa": g.hsa_id, "year": g.year, "nodes": nodes, "edges": edges}

    @app.get("/features")
    def features(request: Request):
        _check_params(request, NETWORK_FILTERS + ("offset", "limit", "columns"))
        filters = _network_filters(request)
        offset, limit = _pagination(request)
        columns = dataset.frame.columns
        selected = request.query_params.get("columns")
        if selected:
            chosen = [c.strip() for c in selected.split(",") if c.strip()]
            unknown = [c for c in chosen if c not in columns]
            if unknown:
                raise HTTPException(status_code=422, detail=f"unknown columns: {', '.join(unknown)}")
            columns = chosen
        rows = [r for r in dataset.frame.rows if all(r.get(k) == v for k, v in filters.items())]
        total = len(rows)
        items = [{c: r.get(c) for c in columns} for r in rows[offset : offset + limit]]
        return {"items": items, "total": total, "offset": offset, "limit": limit}

    @app.get("/distributions")
    def distributions(request: Request):
        _check_params(request, ("metric", "group", "year", "bins"))
        metric = request.query_params.get("metric", "orc")
        group_col = request.query_params.get("group", "state")
        year = request.query_params.get("year")
        if year is not None:
            try:
                year = int(year)
            except ValueError:
                raise HTTPException(status_code=400, detail="year must be an integer") from None
        try:
            bins = int(request.query_params.get("bins", "20"))
        except ValueError:
            raise HTTPException(status_code=400, detail="bins must be an integer") from None
        if bins < 1 or bins > 500:
            raise HTTPException(status_code=400, detail="bins must be in 1..500")
        if group_col not in ("hsa", "year", "state", "region"):
            raise HTTPException(status_code=422, detail=f"unknown group column {group_col!r}")
        if metric in KINDS:
            values, groups, region_of = [], [], {}
            for net in dataset.networks:
                if year is not None and net["year"] != year:
                    continue
                bundle = dataset.bundles[(net["hsa"], net["year"])]
                if bundle.report is None or bundle.report.values(metric) is None:
                    continue
                gval = str(net[group_col])
                region_of[gval] = net["region"]
                for v in bundle.report.values(metric):
                    values.append(float(v))
                    groups.append(gval)
        else:
            if metric not in dataset.frame.columns:
                raise HTTPException(status_code=422, detail=f"unknown metric {metric!r}")
            values, groups, region_of = [], [], {}
            for row in dataset.frame.rows:
                if year is not None and row.get("year") != year:
                    continue
                v = row.get(metric)
                if not isinstance(v, (int, float)):
                    continue
                gval = str(row.get(group_col))
                region_of[gval] = row.get("region")
                values.append(float(v))
                groups.append(gval)
        summaries = distribution_summary(values, groups, bins=bins)
        for s in summaries:
            s["region"] = region_of.get(s["group"])
        payload = [
            {
                "group": s["group"],
                "region": s["region"],
                "count": s["count"],
                "min": s["min"],
                "q1": s["q1"],
                "median": s["median"],
                "q3": s["q3"],
                "max": s["max"],
                "whisker_lo": s["whisker_lo"],
                "whisker_hi": s["whisker_hi"],
                "bin_edges": s["bin_edges"],
                "bin_counts": s["bin_counts"],
            }
            for s in summaries
        ]
        return {"metric": metric, "group": group_col, "groups": payload}

    @app.get("/correlate")
    def correlate_endpoint(request: Request):
        _check_params(request, ("x", "y", "method", "group", "permutations", "seed"))
        x = request.query_params.get("x")
        y = request.query_params.get("y")
        if not x or not y:
            raise HTTPException(status_code=400, detail="x and y are required")
        method = request.query_params.get("method", "pearson")
        if method not in ("pearson", "spearman"):
            raise HTTPException(status_code=400, detail="method must be pearson or spearman")
        group_col = request.query_params.get("group")
        try:
            permutations = int(request.query_params.get("permutations", "0"))
            seed = int(request.query_params.get("seed", "0"))
        except ValueError:
            raise HTTPException(status_code=400, detail="permutations and seed must be integers") from None
        if permutations < 0 or permutations > MAX_PERMUTATIONS:
            raise HTTPException(status_code=400, detail=f"permutations must be in 0..{MAX_PERMUTATIONS}")
        for col in (x, y) + ((group_col,) if group_col else ()):
            if col not in dataset.frame.columns:
                raise HTTPException(status_code=422, detail=f"unknown column {col!r}")
        results = correlate(
            dataset.frame,
            x,
            y,
            method=method,
            group_by=(group_col,) if group_col else (),
            permutations=permutations,
            seed=seed,
        )
        return {
            "results": [
                {
                    "x": r.x,
                    "y": r.y,
                    "method": r.method,
                    "group": None if r.group is None else "/".join(str(v) for v in r.group),
                    "coefficient": r.coefficient,
                    "n": r.n,
                    "p_value": r.p_value,
                }
                for r in results
            ]
        }

    @app.exception_handler(DataError)
    def data_error_handler(_request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _at(values, idx):
    if values is None:
        return None
    return values[idx]
