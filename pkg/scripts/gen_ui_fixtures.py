#!/usr/bin/env python3
"""Regenerate the frontend test fixtures from the fixture API.

Runs the pipeline on the deterministic test edge list, stands up the API
in-process, and dumps selected endpoint payloads as JSON under
frontend/tests/fixtures/.
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from refnet.cli import main  # noqa: E402
from refnet.server import create_app  # noqa: E402

from util import write_fixture_census, write_fixture_edges, write_fixture_region_map  # noqa: E402

CAPTURES = [
    ("schema.json", "/schema", {}),
    ("networks.json", "/networks", {}),
    ("graph_k3.json", "/networks/k3/2017/graph", {}),
    ("graph_dumb.json", "/networks/dumb/2017/graph", {}),
    ("features.json", "/features", {}),
    ("distributions.json", "/distributions", {"metric": "orc", "group": "state"}),
    ("correlate.json", "/correlate", {"x": "frc_mean", "y": "population", "method": "pearson", "permutations": "200", "seed": "4"}),
]


def generate(out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        edges = tmp / "edges.csv"
        write_fixture_edges(edges)
        data = tmp / "out"
        for argv in (
            ["build", "--input", str(edges), "--out", str(data)],
            ["curvature", "--out", str(data)],
            ["features", "--out", str(data)],
        ):
            code = main(argv)
            if code != 0:
                raise SystemExit(f"pipeline stage failed: {argv} -> {code}")
        write_fixture_region_map(data / "region_map.csv")
        meta = data / "metadata"
        meta.mkdir()
        write_fixture_census(meta / "population_census.csv", meta / "population_census.schema.json")
        client = TestClient(create_app(data))
        for filename, path, params in CAPTURES:
            resp = client.get(path, params=params)
            resp.raise_for_status()
            (out_dir / filename).write_text(json.dumps(resp.json(), indent=1) + "\n")
            print(f"wrote {out_dir / filename}")


if __name__ == "__main__":
    generate(ROOT / "frontend" / "tests" / "fixtures")
