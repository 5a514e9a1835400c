"""Command-line pipeline: build -> curvature -> features -> correlate/report -> export -> serve.

Stages talk through on-disk bundles under the output directory, so long
curvature runs can resume per network. Every flag has a REFNET_-prefixed
environment override; explicit flags win over the environment, which wins
over the key-value config file.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from urllib.parse import quote

from . import __version__
from .analytics import (
    Table,
    assemble_features,
    correlate,
    distribution_summary,
    join_metadata,
    load_metadata_table,
    load_region_map,
    region_rollup,
)
from .curvature import KINDS, MeasureConfig, curvature_all_edges, node_curvature
from .datastore import (
    curvature_report_table,
    export_features_csv,
    export_sqldb,
    feature_csv_types,
    interactions_table,
    new_manifest,
    read_graph_bundle,
    read_table_csv,
    write_graph_bundle,
    write_manifest,
)
from .descriptors import betweenness_centrality
from .errors import DataError
from .graph import FilterConfig, filter_config_from_dict, load_exclusion_list, load_kv_config, parse_edge_records, partition, build_network

log = logging.getLogger("refnet")

ENV_PREFIX = "REFNET_"


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="refnet", description="Referral-network curvature analytics pipeline")
    parser.add_argument("--version", action="version", version=f"refnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_out(p):
        p.add_argument("--out", "--data", dest="out", default=_env("OUT", "out"), help="pipeline output directory")

    p_build = sub.add_parser("build", help="parse edge lists and write one graph bundle per (hsa, year)")
    p_build.add_argument("--input", required=True, help="edge list path (CSV or JSONL)")
    p_build.add_argument("--format", choices=("csv", "jsonl"), default=None, help="input format (default: by extension)")
    add_out(p_build)
    p_build.add_argument("--threshold", type=int, default=_env("THRESHOLD"), help="minimum pooled shared patients (default 11)")
    p_build.add_argument(
        "--symmetrization", choices=("sum", "max"), default=_env("SYMMETRIZATION"), help="how directional counts pool"
    )
    p_build.add_argument("--keep-isolated", action="store_true", help="keep nodes with no retained edge")
    p_build.add_argument("--exclude-list", default=_env("EXCLUDE_LIST"), help="file of provider ids to drop")
    p_build.add_argument("--config", default=None, help="key=value config file (threshold, symmetrization, keep_isolated)")

    p_curv = sub.add_parser("curvature", help="compute edge curvature for every bundle")
    add_out(p_curv)
    p_curv.add_argument("--kinds", default=_env("KINDS", "frc,orc"), help="comma list: frc,orc")
    p_curv.add_argument("--alpha", type=float, default=float(_env("ALPHA", "0")), help="self-mass of the neighborhood measure")
    p_curv.add_argument("--workers", type=int, default=int(_env("WORKERS", "1")), help="parallel workers")
    p_curv.add_argument("--approx-cutoff", type=int, default=None, help="degree at which the entropic estimate may kick in")
    p_curv.add_argument("--force", action="store_true", help="recompute bundles that already carry curvature")

    p_feat = sub.add_parser("features", help="assemble the per-network feature table")
    add_out(p_feat)
    p_feat.add_argument("--workers", type=int, default=int(_env("WORKERS", "1")), help="parallel workers (per-network)")

    p_corr = sub.add_parser("correlate", help="correlate feature columns, optionally against joined metadata")
    add_out(p_corr)
    p_corr.add_argument("--x", required=True)
    p_corr.add_argument("--y", required=True)
    p_corr.add_argument("--method", choices=("pearson", "spearman"), default="pearson")
    p_corr.add_argument("--group", default=None, help="comma list of grouping columns (e.g. region)")
    p_corr.add_argument("--permutations", type=int, default=0)
    p_corr.add_argument("--seed", type=int, default=int(_env("SEED", "0")))
    p_corr.add_argument("--weights", default=None, help="optional weight column (pearson only)")
    p_corr.add_argument("--region-map", default=_env("REGION_MAP"), help="CSV hsa,state,region")
    p_corr.add_argument("--metadata", action="append", default=[], help="name=csv[:schema.json], repeatable")

    p_rep = sub.add_parser("report", help="render distribution/scatter figures next to their CSVs")
    add_out(p_rep)
    p_rep.add_argument("--metric", default="orc", help="edge metric (frc|orc) or feature column for distributions")
    p_rep.add_argument("--group", default="state", help="grouping column for distributions")
    p_rep.add_argument("--bins", type=int, default=20)
    p_rep.add_argument("--x", default=None, help="scatter x column (enables the scatter panel)")
    p_rep.add_argument("--y", default=None, help="scatter y column")
    p_rep.add_argument("--scatter-group", default="region")
    p_rep.add_argument("--method", choices=("pearson", "spearman"), default="pearson")
    p_rep.add_argument("--permutations", type=int, default=0)
    p_rep.add_argument("--seed", type=int, default=int(_env("SEED", "0")))
    p_rep.add_argument("--region-map", default=_env("REGION_MAP"))
    p_rep.add_argument("--metadata", action="append", default=[])
    p_rep.add_argument("--network", action="append", default=[], help="hsa/year to render as a network panel, repeatable")

    p_exp = sub.add_parser("export", help="write the single-file SQL database and manifest")
    add_out(p_exp)
    p_exp.add_argument("--db", default=None, help="database path (default <out>/refnet.db)")
    p_exp.add_argument("--metadata", action="append", default=[])
    p_exp.add_argument("--include-interactions", action="store_true", help="also export raw retained interactions")
    p_exp.add_argument("--threshold", type=int, default=_env("THRESHOLD"), help="re-applied interaction threshold (default 11)")
    p_exp.add_argument("--edge-report", action="store_true", help="also write per-edge curvature CSV and JSONL")

    p_srv = sub.add_parser("serve", help="serve the read-only exploration API")
    add_out(p_srv)
    p_srv.add_argument("--bind", default=_env("BIND", "127.0.0.1:8626"), help="host:port")
    p_srv.add_argument("--region-map", default=_env("REGION_MAP"))
    p_srv.add_argument("--metadata", action="append", default=[])
    p_srv.add_argument("--ui", default=None, help="directory of built explorer assets to serve at /")
    return parser


def bundle_filename(hsa_id: str, year: int) -> str:
    return f"{quote(str(hsa_id), safe='')}__{year}.json"


def _bundle_paths(out_dir: Path):
    bundle_dir = out_dir / "bundles"
    if not bundle_dir.is_dir():
        raise DataError(f"{bundle_dir} not found; run `refnet build` first")
    return sorted(bundle_dir.glob("*.json"))


def _parse_metadata_args(args_metadata):
    tables = {}
    for spec in args_metadata:
        if "=" not in spec:
            raise DataError(f"--metadata expects name=csv[:schema.json], got {spec!r}")
        name, paths = spec.split("=", 1)
        csv_path, _, schema_path = paths.partition(":")
        tables[name.strip()] = load_metadata_table(name.strip(), csv_path, schema_path or None)
    return tables


def cmd_build(args) -> int:
    out_dir = Path(args.out)
    input_path = Path(args.input)
    if not input_path.exists():
        raise DataError(f"input path {input_path} does not exist")
    fmt = args.format or ("jsonl" if input_path.suffix in (".jsonl", ".ndjson") else "csv")
    config_values = load_kv_config(args.config) if args.config else {}
    excluded = load_exclusion_list(args.exclude_list) if args.exclude_list else frozenset()
    config = filter_config_from_dict(config_values, excluded)
    overrides = {}
    if args.threshold is not None:
        overrides["min_shared_patients"] = int(args.threshold)
    if args.symmetrization is not None:
        overrides["symmetrization"] = args.symmetrization
    if args.keep_isolated:
        overrides["keep_isolated"] = True
    if overrides:
        config = FilterConfig(
            min_shared_patients=overrides.get("min_shared_patients", config.min_shared_patients),
            excluded_providers=config.excluded_providers,
            symmetrization=overrides.get("symmetrization", config.symmetrization),
            keep_isolated=overrides.get("keep_isolated", config.keep_isolated),
        )
    with open(input_path, "rb") as fh:
        records, stats = parse_edge_records(fh, fmt)
    buckets = partition(records)
    bundle_dir = out_dir / "bundles"
    bundle_dir.mkdir(parents=True, exist_ok=True)
    networks = []
    for (hsa, year) in sorted(buckets):
        g = build_network(buckets[(hsa, year)], config)
        write_graph_bundle(g, None, bundle_dir / bundle_filename(hsa, year))
        networks.append({"hsa": hsa, "year": year, "nodes": g.node_count, "edges": g.edge_count})
        if g.edge_count == 0:
            log.warning("network %s/%s has no retained edges", hsa, year)
    build_log = {
        "parse_stats": stats.as_dict(),
        "config": {
            "min_shared_patients": config.min_shared_patients,
            "symmetrization": config.symmetrization,
            "keep_isolated": config.keep_isolated,
            "excluded_providers": len(config.excluded_providers),
        },
        "networks": networks,
    }
    with open(out_dir / "build_log.json", "w", encoding="utf-8") as fh:
        json.dump(build_log, fh, indent=2)
        fh.write("\n")
    log.info("built %d networks from %d records (%d rows rejected)", len(networks), stats.accepted, stats.rejected)
    return 0


def cmd_curvature(args) -> int:
    kinds = tuple(k.strip() for k in args.kinds.split(",") if k.strip())
    for k in kinds:
        if k not in KINDS:
            raise DataError(f"unknown curvature kind {k!r} (expected frc, orc)")
    config = MeasureConfig(alpha=args.alpha, approx_degree_cutoff=args.approx_cutoff)
    for path in _bundle_paths(Path(args.out)):
        bundle = read_graph_bundle(path)
        if bundle.report is not None and not args.force:
            log.info("skipping %s (already has curvature; use --force to redo)", path.name)
            continue
        report = curvature_all_edges(bundle.graph, kinds=kinds, config=config, workers=args.workers)
        write_graph_bundle(bundle.graph, report, path, bundle.node_metrics)
        log.info("curvature for %s/%s: %d edges", bundle.graph.hsa_id, bundle.graph.year, bundle.graph.edge_count)
    return 0


def _node_metrics(g, report, workers=1):
    n = g.node_count
    betweenness = betweenness_centrality(g, workers=workers)
    metrics = {
        "degree": [g.degree(v) for v in range(n)],
        "degree_centrality": [g.degree(v) / (n - 1) if n >= 2 else None for v in range(n)],
        "betweenness": betweenness,
    }
    for kind in KINDS:
        if report is not None and report.values(kind) is not None:
            metrics[kind] = [node_curvature(report, g, v, kind) for v in range(n)]
        else:
            metrics[kind] = [None] * n
    return metrics


def cmd_features(args) -> int:
    out_dir = Path(args.out)
    networks = []
    for path in _bundle_paths(out_dir):
        bundle = read_graph_bundle(path)
        metrics = _node_metrics(bundle.graph, bundle.report, workers=args.workers)
        write_graph_bundle(bundle.graph, bundle.report, path, metrics)
        networks.append((bundle.graph, bundle.report))
    table = assemble_features(networks)
    entry = export_features_csv(table, out_dir / "features.csv")
    log.info("wrote %s (%d rows)", entry.path, entry.rows)
    return 0


def _load_frame(out_dir: Path, region_map_path, metadata_args):
    features_path = out_dir / "features.csv"
    if not features_path.exists():
        raise DataError(f"{features_path} not found; run `refnet features` first")
    table = read_table_csv(features_path, feature_csv_types())
    columns = list(table.columns)
    if region_map_path:
        mapping = load_region_map(region_map_path)
        for row in table.rows:
            row["state"], row["region"] = region_rollup(str(row["hsa"]), mapping)
        columns += ["state", "region"]
    frame = Table(columns=columns, rows=table.rows)
    metadata = _parse_metadata_args(metadata_args)
    joinable = [t for t in metadata.values() if "hsa" in t.columns and "year" in t.columns]
    if joinable:
        frame = join_metadata(frame, joinable)
    return frame


def _results_table(results) -> Table:
    rows = []
    for r in results:
        rows.append(
            {
                "x": r.x,
                "y": r.y,
                "method": r.method,
                "group": "" if r.group is None else "/".join(str(v) for v in r.group),
                "coefficient": r.coefficient,
                "n": r.n,
                "p_value": r.p_value,
            }
        )
    return Table(columns=["x", "y", "method", "group", "coefficient", "n", "p_value"], rows=rows)


def cmd_correlate(args) -> int:
    out_dir = Path(args.out)
    frame = _load_frame(out_dir, args.region_map, args.metadata)
    group_by = tuple(c.strip() for c in args.group.split(",") if c.strip()) if args.group else ()
    results = correlate(
        frame,
        args.x,
        args.y,
        method=args.method,
        group_by=group_by,
        permutations=args.permutations,
        seed=args.seed,
        weights=args.weights,
    )
    entry = export_features_csv(_results_table(results), out_dir / "correlations.csv")
    for r in results:
        group = "all" if r.group is None else "/".join(str(v) for v in r.group)
        p_txt = "" if r.p_value is None else f" p={r.p_value:.4g}"
        print(f"{group}: {r.method} r={r.coefficient:.6f} n={r.n}{p_txt}")
    log.info("wrote %s (%d rows)", entry.path, entry.rows)
    return 0


def _edge_metric_values(out_dir: Path, metric: str, region_map_path):
    mapping = load_region_map(region_map_path) if region_map_path else {}
    values, states, regions = [], [], []
    for path in _bundle_paths(out_dir):
        bundle = read_graph_bundle(path)
        report = bundle.report
        if report is None or report.values(metric) is None:
            continue
        state, region = region_rollup(str(bundle.graph.hsa_id), mapping)
        for v in report.values(metric):
            values.append(float(v))
            states.append(state)
            regions.append(region)
    return values, states, regions


def cmd_report(args) -> int:
    from .figures import save_distribution_figure, save_network_figure, save_scatter_figure

    out_dir = Path(args.out)
    report_dir = out_dir / "reports"
    report_dir.mkdir(parents=True, exist_ok=True)
    wrote = []

    if args.metric in KINDS:
        values, states, regions = _edge_metric_values(out_dir, args.metric, args.region_map)
        if args.group == "region":
            groups, region_of_group = regions, {r: r for r in regions}
        else:
            groups = states
            region_of_group = dict(zip(states, regions))
        summaries = distribution_summary(values, groups, bins=args.bins)
    else:
        frame = _load_frame(out_dir, args.region_map, args.metadata)
        if args.metric not in frame.columns:
            raise DataError(f"unknown metric {args.metric!r}")
        if args.group not in frame.columns:
            raise DataError(f"unknown group column {args.group!r}")
        pairs = [
            (row[args.group], float(row[args.metric]))
            for row in frame.rows
            if isinstance(row.get(args.metric), (int, float)) and row.get(args.group) is not None
        ]
        summaries = distribution_summary([v for _, v in pairs], [g for g, _ in pairs], bins=args.bins)
        region_of_group = {}
        if "region" in frame.columns:
            region_of_group = {row[args.group]: row["region"] for row in frame.rows if row.get(args.group) is not None}
    dist_rows = [
        {k: (json.dumps(v) if isinstance(v, list) else v) for k, v in s.items()} for s in summaries
    ]
    dist_table = Table(
        columns=["group", "count", "min", "q1", "median", "q3", "max", "whisker_lo", "whisker_hi", "bin_edges", "bin_counts"],
        rows=dist_rows,
    )
    csv_path = report_dir / f"distribution_{args.metric}_by_{args.group}.csv"
    export_features_csv(dist_table, csv_path)
    fig_path = report_dir / f"distribution_{args.metric}_by_{args.group}.png"
    save_distribution_figure(summaries, args.metric, fig_path, region_of_group)
    wrote += [csv_path, fig_path]

    if args.x and args.y:
        frame = _load_frame(out_dir, args.region_map, args.metadata)
        group_by = (args.scatter_group,) if args.scatter_group and args.scatter_group in frame.columns else ()
        results = correlate(
            frame, args.x, args.y, method=args.method, group_by=group_by,
            permutations=args.permutations, seed=args.seed,
        )
        corr_csv = report_dir / f"scatter_{args.x}__{args.y}.csv"
        export_features_csv(_results_table(results), corr_csv)
        scatter_path = report_dir / f"scatter_{args.x}__{args.y}.png"
        save_scatter_figure(frame.rows, args.x, args.y, group_by[0] if group_by else None, results, scatter_path)
        wrote += [corr_csv, scatter_path]

    for spec in args.network:
        hsa, _, year = spec.partition("/")
        if not year:
            raise DataError(f"--network expects hsa/year, got {spec!r}")
        path = Path(args.out) / "bundles" / bundle_filename(hsa, int(year))
        if not path.exists():
            raise DataError(f"no bundle for network {spec!r}")
        bundle = read_graph_bundle(path)
        net_path = report_dir / f"network_{bundle_filename(hsa, int(year))[: -len('.json')]}.png"
        save_network_figure(bundle.graph, bundle.report, bundle.node_metrics, net_path)
        wrote.append(net_path)

    for p in wrote:
        print(p)
    return 0


def cmd_export(args) -> int:
    out_dir = Path(args.out)
    db_path = Path(args.db) if args.db else out_dir / "refnet.db"
    features_path = out_dir / "features.csv"
    features = read_table_csv(features_path, feature_csv_types()) if features_path.exists() else None
    metadata = _parse_metadata_args(args.metadata)
    interactions = None
    threshold = int(args.threshold) if args.threshold is not None else 11
    if args.include_interactions:
        bundles = [read_graph_bundle(p) for p in _bundle_paths(out_dir)]
        interactions = interactions_table(bundles)
    config = {
        "db": str(db_path),
        "include_interactions": bool(args.include_interactions),
        "interactions_threshold": threshold,
        "metadata_tables": sorted(metadata),
    }
    manifest = new_manifest(__version__, config)
    if features is not None:
        manifest.entries.append(export_features_csv(features, out_dir / "features.csv"))
    manifest.entries.extend(
        export_sqldb(db_path, features=features, metadata=metadata, interactions=interactions, interactions_threshold=threshold)
    )
    if args.edge_report:
        bundles = [read_graph_bundle(p) for p in _bundle_paths(out_dir)]
        rows = []
        for bundle in bundles:
            if bundle.report is not None:
                rows.extend(curvature_report_table(bundle.graph, bundle.report).rows)
        edge_table = Table(columns=["hsa", "year", "npi_i", "npi_j", "weight", "frc", "orc"], rows=rows)
        manifest.entries.append(export_features_csv(edge_table, out_dir / "curvature_edges.csv"))
        jsonl_path = out_dir / "curvature_edges.jsonl"
        with open(jsonl_path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, separators=(",", ":")))
                fh.write("\n")
    write_manifest(manifest, out_dir / "manifest.json")
    log.info("wrote %s and manifest.json", db_path)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise DataError(f"--bind expects host:port, got {args.bind!r}")
    ui_dir = Path(args.ui) if args.ui else None
    if ui_dir is not None and not ui_dir.is_dir():
        raise DataError(f"--ui directory {ui_dir} does not exist")
    app = create_app(Path(args.out), region_map_path=args.region_map, metadata_args=args.metadata, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


_COMMANDS = {
    "build": cmd_build,
    "curvature": cmd_curvature,
    "features": cmd_features,
    "correlate": cmd_correlate,
    "report": cmd_report,
    "export": cmd_export,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except DataError as exc:
        print(f"refnet: data error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"refnet: data error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 3
    except Exception as exc:  # internal errors get code 3
        log.exception("internal error: %s", exc)
        return 3


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
