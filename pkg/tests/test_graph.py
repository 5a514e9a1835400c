"""graph module: parsing, construction rules, and primitive queries."""

import io

import numpy as np
import pytest

from refnet.errors import DataError
from refnet.graph import EdgeRecord, FilterConfig, Graph, build_network, parse_edge_records, partition

from oracles import dense_adjacency, floyd_warshall, triangles_bruteforce
from util import (
    complete_graph,
    cycle_graph,
    er_graph,
    graph_from_edges,
    k4_minus_edge,
    path_graph,
    star_graph,
    two_cliques_bridge,
)


def _parse_csv(text, fmt="csv"):
    return parse_edge_records(io.StringIO(text), fmt)


class TestParse:
    def test_basic_row(self):
        records, stats = _parse_csv("npi_a,npi_b,shared_patients,hsa,year\nA,B,12,hsa1,2017\n")
        assert records == [EdgeRecord("A", "B", 12, "hsa1", 2017)]
        assert stats.rows_read == 1 and stats.accepted == 1 and stats.rejected == 0

    def test_self_loop_rejected(self):
        records, stats = _parse_csv("npi_a,npi_b,shared_patients,hsa,year\nA,A,30,hsa1,2017\n")
        assert records == []
        assert stats.self_loops == 1

    def test_empty_stream(self):
        records, stats = _parse_csv("npi_a,npi_b,shared_patients,hsa,year\n")
        assert records == []
        assert stats.rows_read == 0 and stats.rejected == 0
        records, stats = _parse_csv("")
        assert records == [] and stats.rows_read == 0

    def test_reject_reasons_counted(self):
        text = (
            "npi_a,npi_b,shared_patients,hsa,year\n"
            "A,B,12,hsa1,2017\n"
            "A,,4,hsa1,2017\n"
            "A,B,-3,hsa1,2017\n"
            "A,B,notanumber,hsa1,2017\n"
            "C,C,9,hsa1,2017\n"
        )
        records, stats = _parse_csv(text)
        assert len(records) == 1
        assert stats.rows_read == 5
        assert stats.malformed == 2
        assert stats.negative_counts == 1
        assert stats.self_loops == 1
        assert stats.rejected == 4

    def test_missing_header_is_fatal(self):
        with pytest.raises(DataError):
            _parse_csv("a,b,c\n1,2,3\n")

    def test_jsonl(self):
        text = (
            '{"npi_a": "A", "npi_b": "B", "shared_patients": 12, "hsa": "hsa1", "year": 2017}\n'
            "not json\n"
            '{"npi_a": "A", "npi_b": "A", "shared_patients": 2, "hsa": "hsa1", "year": 2017}\n'
        )
        records, stats = _parse_csv(text, fmt="jsonl")
        assert records == [EdgeRecord("A", "B", 12, "hsa1", 2017)]
        assert stats.malformed == 1 and stats.self_loops == 1

    def test_bytes_stream(self):
        records, _ = parse_edge_records(io.BytesIO(b"npi_a,npi_b,shared_patients,hsa,year\nA,B,12,h,2017\n"))
        assert records[0].shared_patients == 12


class TestPartition:
    def test_two_by_two(self):
        records = [
            EdgeRecord("A", "B", 12, h, y)
            for h in ("h1", "h2")
            for y in (2016, 2017)
            for _ in range(3)
        ]
        buckets = partition(records)
        assert len(buckets) == 4
        assert sum(len(v) for v in buckets.values()) == len(records)
        for (h, y), recs in buckets.items():
            assert all(r.hsa_id == h and r.year == y for r in recs)

    def test_single_key(self):
        records = [EdgeRecord("A", "B", 12, "h1", 2017)] * 5
        assert len(partition(records)) == 1

    def test_many_hsas(self):
        records = [EdgeRecord("A", "B", 12, f"hsa{k}", 2017) for k in range(3404)]
        assert len(partition(records)) == 3404


class TestBuildNetwork:
    def test_retained_above_threshold(self):
        g = build_network([EdgeRecord("A", "B", 12, "h", 2017)], FilterConfig())
        assert g.node_count == 2 and g.edge_count == 1
        assert g.edge_weights == (12,)

    def test_below_threshold(self):
        g = build_network([EdgeRecord("A", "B", 10, "h", 2017)], FilterConfig())
        assert g.edge_count == 0 and g.node_count == 0

    def test_sum_symmetrization(self):
        records = [EdgeRecord("A", "B", 6, "h", 2017), EdgeRecord("B", "A", 6, "h", 2017)]
        g = build_network(records, FilterConfig(symmetrization="sum"))
        assert g.edge_count == 1
        assert g.edge_weights == (12,)

    def test_max_symmetrization(self):
        records = [EdgeRecord("A", "B", 6, "h", 2017), EdgeRecord("B", "A", 11, "h", 2017)]
        g = build_network(records, FilterConfig(symmetrization="max"))
        assert g.edge_count == 1 and g.edge_weights == (11,)

    def test_mixed_keys_rejected(self):
        records = [EdgeRecord("A", "B", 12, "h1", 2017), EdgeRecord("A", "B", 12, "h2", 2017)]
        with pytest.raises(ValueError):
            build_network(records, FilterConfig())

    def test_excluded_providers(self):
        records = [EdgeRecord("A", "B", 20, "h", 2017), EdgeRecord("B", "C", 20, "h", 2017)]
        g = build_network(records, FilterConfig(excluded_providers={"C"}))
        assert g.node_count == 2
        assert [g.node_ids[i] for i, j in g.edges] == ["A"]

    def test_keep_isolated(self):
        records = [EdgeRecord("A", "B", 20, "h", 2017), EdgeRecord("C", "D", 3, "h", 2017)]
        dropped = build_network(records, FilterConfig())
        kept = build_network(records, FilterConfig(keep_isolated=True))
        assert dropped.node_count == 2
        assert kept.node_count == 4
        assert kept.degree(kept.node_ids.index("C")) == 0

    def test_max_idempotent_under_reversed_duplicates(self):
        rng = np.random.default_rng(7)
        for trial in range(25):
            records = []
            for _ in range(rng.integers(1, 40)):
                a, b = rng.integers(0, 12, size=2)
                if a == b:
                    continue
                records.append(EdgeRecord(str(a), str(b), int(rng.integers(0, 25)), "h", 2017))
            doubled = records + [
                EdgeRecord(r.provider_b, r.provider_a, r.shared_patients, r.hsa_id, r.year) for r in records
            ]
            cfg = FilterConfig(min_shared_patients=8, symmetrization="max")
            g1 = build_network(records, cfg, hsa_id="h", year=2017)
            g2 = build_network(doubled, cfg, hsa_id="h", year=2017)
            assert g1.node_ids == g2.node_ids
            assert g1.edges == g2.edges
            assert g1.edge_weights == g2.edge_weights

    def test_matches_dictionary_oracle(self):
        rng = np.random.default_rng(11)
        for trial in range(20):
            records = []
            for _ in range(rng.integers(1, 120)):
                a, b = rng.integers(0, 15, size=2)
                if a == b:
                    continue
                records.append(EdgeRecord(str(a), str(b), int(rng.integers(0, 20)), "h", 2017))
            threshold = int(rng.integers(1, 15))
            sym = "sum" if rng.random() < 0.5 else "max"
            expect = {}
            for r in records:
                pair = tuple(sorted((r.provider_a, r.provider_b)))
                if pair in expect:
                    expect[pair] = expect[pair] + r.shared_patients if sym == "sum" else max(expect[pair], r.shared_patients)
                else:
                    expect[pair] = r.shared_patients
            expect = {pair: w for pair, w in expect.items() if w >= threshold}
            g = build_network(records, FilterConfig(min_shared_patients=threshold, symmetrization=sym), hsa_id="h", year=2017)
            got = {
                (g.node_ids[i], g.node_ids[j]): w for (i, j), w in zip(g.edges, g.edge_weights)
            }
            assert got == expect


class TestQueries:
    def test_degree(self):
        star = star_graph(5)
        assert star.degree(0) == 5
        k4 = complete_graph(4)
        assert all(k4.degree(v) == 3 for v in range(4))

    def test_degree_isolated(self):
        g = build_network(
            [EdgeRecord("A", "B", 20, "h", 2017), EdgeRecord("C", "D", 1, "h", 2017)],
            FilterConfig(keep_isolated=True),
        )
        v = g.node_ids.index("C")
        assert g.degree(v) == 0

    def test_degree_out_of_range(self):
        with pytest.raises(IndexError):
            complete_graph(3).degree(3)

    def test_triangles_k3_k5(self):
        k3 = complete_graph(3)
        assert all(k3.triangles_on_edge(i, j) == 1 for i, j in k3.edges)
        k5 = complete_graph(5)
        assert all(k5.triangles_on_edge(i, j) == 3 for i, j in k5.edges)

    def test_triangles_bridge(self):
        g = two_cliques_bridge(4)
        assert g.triangles_on_edge(0, 4) == 0

    def test_triangles_non_edge(self):
        with pytest.raises(ValueError):
            path_graph(3).triangles_on_edge(0, 2)

    def test_triangles_match_bruteforce(self):
        for seed, n, p in ((1, 40, 0.15), (2, 120, 0.05), (3, 200, 0.03), (4, 60, 0.3)):
            g = er_graph(n, p, seed)
            A = dense_adjacency(g)
            for i, j in g.edges:
                assert g.triangles_on_edge(i, j) == triangles_bruteforce(A, i, j)

    def test_bfs_path(self):
        g = path_graph(4)
        assert g.bfs_distances(0, 2) == {0: 0, 1: 1, 2: 2}

    def test_bfs_radius_zero(self):
        assert path_graph(4).bfs_distances(1, 0) == {1: 0}

    def test_bfs_cycle_opposite(self):
        g = cycle_graph(6)
        d = g.bfs_distances(0, 3)
        assert d[3] == 3 and len(d) == 6

    def test_bfs_matches_floyd_warshall(self):
        for seed in range(6):
            g = er_graph(30 + seed * 4, 0.12, seed + 100)
            D = floyd_warshall(dense_adjacency(g))
            for src in range(g.node_count):
                got = g.bfs_distances(src, g.node_count)
                for t in range(g.node_count):
                    if np.isfinite(D[src][t]):
                        assert got[t] == int(D[src][t])
                    else:
                        assert t not in got

    def test_components(self):
        two_triangles = graph_from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], n=6)
        _, count = two_triangles.connected_components()
        assert count == 2
        empty = graph_from_edges([], n=0)
        assert empty.connected_components() == ([], 0)
        _, count = k4_minus_edge().connected_components()
        assert count == 1

    def test_isomorphism_invariance(self):
        rng = np.random.default_rng(5)
        g = er_graph(60, 0.1, 42)
        perm = rng.permutation(g.node_count)
        relabeled = graph_from_edges([(int(perm[i]), int(perm[j])) for i, j in g.edges], n=g.node_count)
        assert sorted(g.degree(v) for v in range(g.node_count)) == sorted(
            relabeled.degree(v) for v in range(relabeled.node_count)
        )
        for i, j in g.edges:
            assert g.triangles_on_edge(i, j) == relabeled.triangles_on_edge(int(perm[i]), int(perm[j]))
        assert g.connected_components()[1] == relabeled.connected_components()[1]


class TestGraphInvariants:
    def test_adjacency_symmetric_sorted(self):
        g = er_graph(50, 0.1, 9)
        for v in range(g.node_count):
            nbrs = g.adjacency[v]
            assert list(nbrs) == sorted(nbrs)
            for w in nbrs:
                assert v in g.adjacency[w]
                assert v != w

    def test_rejects_self_loop_and_duplicates(self):
        with pytest.raises(ValueError):
            Graph(["a", "b"], [(0, 0, 1)])
        with pytest.raises(ValueError):
            Graph(["a", "b"], [(0, 1, 1), (1, 0, 2)])


def test_negative_index_rejected():
    g = complete_graph(3)
    with pytest.raises(IndexError):
        g.degree(-1)
    with pytest.raises(IndexError):
        g.bfs_distances(-2, 1)
