"""Referral-network analytics toolkit.

Builds undirected patient-sharing networks from edge lists, computes
Forman-Ricci and Ollivier-Ricci edge curvature plus classical network
descriptors, assembles per-region/per-year feature tables, and serves the
results through file exports and a read-only HTTP API.
"""

__version__ = "0.1.0"

from .errors import DataError
from .graph import EdgeRecord, FilterConfig, Graph, ParseStats, build_network, parse_edge_records, partition
from .transport import DiscreteMeasure, wasserstein1, wasserstein1_approx
from .curvature import (
    CurvatureReport,
    MeasureConfig,
    curvature_all_edges,
    forman_edge,
    neighborhood_measure,
    network_curvature_summary,
    node_curvature,
    ollivier_edge,
)

__all__ = [
    "DataError",
    "EdgeRecord",
    "FilterConfig",
    "Graph",
    "ParseStats",
    "build_network",
    "parse_edge_records",
    "partition",
    "DiscreteMeasure",
    "wasserstein1",
    "wasserstein1_approx",
    "CurvatureReport",
    "MeasureConfig",
    "curvature_all_edges",
    "forman_edge",
    "neighborhood_measure",
    "network_curvature_summary",
    "node_curvature",
    "ollivier_edge",
]
