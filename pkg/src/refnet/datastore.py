"""File persistence: graph bundles, delimited exports, and the SQLite mirror.

Every writer is byte-deterministic for fixed inputs: stable column order,
empty string for absent values, shortest-roundtrip float formatting, and a
fixed insert order into SQLite. Timestamps appear only in the manifest.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import sqlite3
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .analytics import FEATURE_COLUMNS, MetadataTable, Table
from .curvature import CurvatureReport, MeasureConfig
from .errors import DataError
from .graph import Graph

SQL_TABLE_NAMES = (
    "referral_network_features",
    "hedis_measures",
    "hospital_atlas_data",
    "population_census",
    "post_discharge_records",
    "standard_pricing",
    "local_physician_interactions",
)

INT_FEATURE_COLUMNS = frozenset(
    ("year", "node_count", "edge_count", "component_count", "max_degree", "frc_count", "orc_count")
)

INTERACTION_COLUMNS = ("npi_a", "npi_b", "shared_patients", "hsa", "year")


@dataclass
class ManifestEntry:
    name: str
    path: str
    rows: int
    sha256: str


@dataclass
class ExportManifest:
    version: str
    created: str
    config_hash: str
    entries: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "version": self.version,
            "created": self.created,
            "config_hash": self.config_hash,
            "entries": [vars(e) for e in self.entries],
        }


def new_manifest(version: str, config: dict) -> ExportManifest:
    digest = hashlib.sha256(json.dumps(config, sort_keys=True).encode("utf-8")).hexdigest()
    return ExportManifest(version=version, created=datetime.now(timezone.utc).isoformat(), config_hash=digest)


def write_manifest(manifest: ExportManifest, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest.as_dict(), fh, indent=2)
        fh.write("\n")


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def export_features_csv(table: Table, path) -> ManifestEntry:
    """UTF-8 RFC-4180 CSV with a header row; absent values are empty fields."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_format_cell(row.get(c)) for c in table.columns])
    return ManifestEntry(name=os.path.basename(path), path=str(path), rows=len(table.rows), sha256=file_sha256(path))


def read_table_csv(path, types: dict | None = None) -> Table:
    """Read a delimited table back; ``types`` maps column -> int|float|str."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            columns = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty CSV") from None
        rows = []
        for raw in reader:
            row = {}
            for col, cell in zip(columns, raw):
                row[col] = _parse_cell(cell, (types or {}).get(col))
            rows.append(row)
    return Table(columns=columns, rows=rows)


def _parse_cell(cell: str, kind):
    if cell == "":
        return None
    if kind == "str":
        return cell
    if kind == "int":
        return int(cell)
    if kind == "float":
        return float(cell)
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell


def feature_csv_types() -> dict:
    types = {}
    for col in FEATURE_COLUMNS:
        if col == "hsa":
            types[col] = "str"
        elif col in INT_FEATURE_COLUMNS:
            types[col] = "int"
        else:
            types[col] = "float"
    return types


def curvature_report_table(g: Graph, report: CurvatureReport) -> Table:
    """Per-edge curvature rows: hsa,year,npi_i,npi_j,weight,frc,orc."""
    rows = []
    for k, (i, j, frc, orc) in enumerate(report.entries()):
        rows.append(
            {
                "hsa": report.hsa_id,
                "year": report.year,
                "npi_i": g.node_ids[i],
                "npi_j": g.node_ids[j],
                "weight": g.edge_weights[k],
                "frc": frc,
                "orc": orc,
            }
        )
    return Table(columns=["hsa", "year", "npi_i", "npi_j", "weight", "frc", "orc"], rows=rows)


def export_curvature_jsonl(g: Graph, report: CurvatureReport, path) -> ManifestEntry:
    table = curvature_report_table(g, report)
    with open(path, "w", encoding="utf-8") as fh:
        for row in table.rows:
            fh.write(json.dumps(row, separators=(",", ":")))
            fh.write("\n")
    return ManifestEntry(name=os.path.basename(path), path=str(path), rows=len(table.rows), sha256=file_sha256(path))


def write_graph_bundle(g: Graph, report: CurvatureReport | None, path, node_metrics: dict | None = None):
    """Compact JSON bundle of one network; write -> read is the identity."""
    payload = {
        "hsa": g.hsa_id,
        "year": g.year,
        "nodes": list(g.node_ids),
        "edges": [[i, j, w] for (i, j), w in zip(g.edges, g.edge_weights)],
        "curvature": None,
        "node_metrics": node_metrics,
    }
    if report is not None:
        payload["curvature"] = {
            "config": report.config.as_dict(),
            "frc": list(report.frc) if report.frc is not None else None,
            "orc": list(report.orc) if report.orc is not None else None,
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, separators=(",", ":"))
        fh.write("\n")


@dataclass
class GraphBundle:
    graph: Graph
    report: CurvatureReport | None
    node_metrics: dict | None


def read_graph_bundle(path) -> GraphBundle:
    with open(path, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: not a graph bundle: {exc}") from exc
    try:
        g = Graph(
            payload["nodes"],
            [(i, j, w) for i, j, w in payload["edges"]],
            hsa_id=payload["hsa"],
            year=payload["year"],
        )
        report = None
        if payload.get("curvature") is not None:
            cfg = payload["curvature"]["config"]
            frc = payload["curvature"]["frc"]
            orc = payload["curvature"]["orc"]
            report = CurvatureReport(
                hsa_id=g.hsa_id,
                year=g.year,
                edges=g.edges,
                frc=tuple(frc) if frc is not None else None,
                orc=tuple(orc) if orc is not None else None,
                config=MeasureConfig(**cfg),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: malformed graph bundle: {exc}") from exc
    return GraphBundle(graph=g, report=report, node_metrics=payload.get("node_metrics"))


def _sql_type(kind):
    return {"int": "INTEGER", "float": "REAL", "str": "TEXT", "numeric": "REAL", "text": "TEXT"}[kind]


def _infer_sql_types(columns, rows):
    kinds = {}
    for col in columns:
        kind = "TEXT"
        for row in rows:
            v = row.get(col)
            if v is None:
                continue
            if isinstance(v, bool):
                kind = "INTEGER"
            elif isinstance(v, int):
                kind = "INTEGER"
            elif isinstance(v, float):
                kind = "REAL"
            else:
                kind = "TEXT"
            break
        kinds[col] = kind
    return kinds


_DEFAULT_SCHEMAS = {
    "referral_network_features": [(c, "INTEGER" if c in INT_FEATURE_COLUMNS else ("TEXT" if c == "hsa" else "REAL")) for c in FEATURE_COLUMNS],
    "hedis_measures": [("hsa", "TEXT"), ("year", "INTEGER")],
    "hospital_atlas_data": [("provider_id", "TEXT"), ("location", "TEXT")],
    "population_census": [("hsa", "TEXT"), ("year", "INTEGER")],
    "post_discharge_records": [("hsa", "TEXT"), ("year", "INTEGER")],
    "standard_pricing": [("hsa", "TEXT"), ("year", "INTEGER")],
    "local_physician_interactions": [
        ("npi_a", "TEXT"),
        ("npi_b", "TEXT"),
        ("shared_patients", "INTEGER"),
        ("hsa", "TEXT"),
        ("year", "INTEGER"),
    ],
}


def interactions_table(bundles) -> Table:
    """Aggregated retained edges as raw interaction rows, in bundle order."""
    rows = []
    for bundle in bundles:
        g = bundle.graph
        for (i, j), w in zip(g.edges, g.edge_weights):
            rows.append(
                {"npi_a": g.node_ids[i], "npi_b": g.node_ids[j], "shared_patients": w, "hsa": g.hsa_id, "year": g.year}
            )
    return Table(columns=list(INTERACTION_COLUMNS), rows=rows)


def export_sqldb(
    path,
    features: Table | None = None,
    metadata: dict | None = None,
    interactions: Table | None = None,
    interactions_threshold: int = 11,
    overwrite: bool = True,
) -> list:
    """Single-file SQLite database holding all seven interchange tables.

    Tables with no input stay present but empty. Raw interaction rows are
    written only when provided, and the shared-patient threshold is re-applied
    before writing regardless of what the caller passes.
    """
    if os.path.exists(path):
        if not overwrite:
            raise DataError(f"{path} already exists; refusing to overwrite an existing database")
        os.remove(path)
    metadata = metadata or {}
    unknown = [name for name in metadata if name not in SQL_TABLE_NAMES]
    if unknown:
        raise DataError(f"unknown metadata table names: {', '.join(sorted(unknown))}")
    conn = sqlite3.connect(path)
    try:
        entries = []
        for name in SQL_TABLE_NAMES:
            if name == "referral_network_features" and features is not None:
                columns, rows = list(features.columns), features.rows
                types = {c: t for c, t in _DEFAULT_SCHEMAS[name]}
                col_types = [(c, types.get(c) or _infer_sql_types([c], rows)[c]) for c in columns]
            elif name == "local_physician_interactions" and interactions is not None:
                columns = list(INTERACTION_COLUMNS)
                rows = [r for r in interactions.rows if (r.get("shared_patients") or 0) >= interactions_threshold]
                col_types = _DEFAULT_SCHEMAS[name]
            elif name in metadata:
                table = metadata[name]
                if isinstance(table, MetadataTable):
                    columns = list(table.columns)
                    col_types = [(c, _sql_type(table.types.get(c, "text"))) for c in columns]
                    rows = table.rows
                else:
                    columns = list(table.columns)
                    inferred = _infer_sql_types(columns, table.rows)
                    col_types = [(c, inferred[c]) for c in columns]
                    rows = table.rows
            else:
                col_types = _DEFAULT_SCHEMAS[name]
                columns = [c for c, _ in col_types]
                rows = []
            decl = ", ".join(f'"{c}" {t}' for c, t in col_types)
            conn.execute(f'CREATE TABLE "{name}" ({decl})')
            if rows:
                placeholders = ", ".join("?" for _ in columns)
                conn.executemany(
                    f'INSERT INTO "{name}" VALUES ({placeholders})',
                    ([row.get(c) for c in columns] for row in rows),
                )
            entries.append(ManifestEntry(name=name, path=str(path), rows=len(rows), sha256=""))
        conn.commit()
    finally:
        conn.close()
    digest = file_sha256(path)
    for entry in entries:
        entry.sha256 = digest
    return entries
