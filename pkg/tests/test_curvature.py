"""curvature module: closed-form instances, oracle sweeps, and bounds."""

import pytest

from refnet.curvature import (
    MeasureConfig,
    curvature_all_edges,
    forman_edge,
    neighborhood_measure,
    network_curvature_summary,
    node_curvature,
    ollivier_edge,
)

from oracles import dense_adjacency, orc_oracle, triangles_bruteforce
from util import (
    complete_graph,
    degree_capped_er_graph,
    dumbbell_graph,
    er_graph,
    graph_from_edges,
    path_graph,
    star_graph,
    two_cliques_bridge,
)


class TestNeighborhoodMeasure:
    def test_star_center_uniform(self):
        g = star_graph(4)
        mu = neighborhood_measure(g, 0)
        assert mu.support == (1, 2, 3, 4)
        assert all(m == 0.25 for m in mu.mass)

    def test_degree_one_point_mass(self):
        g = path_graph(2)
        mu = neighborhood_measure(g, 0)
        assert mu.support == (1,) and mu.mass == (1.0,)

    def test_self_mass(self):
        g = path_graph(3)
        mu = neighborhood_measure(g, 1, MeasureConfig(alpha=0.5))
        assert dict(zip(mu.support, mu.mass)) == {0: 0.25, 1: 0.5, 2: 0.25}

    def test_isolated_node_errors(self):
        g = graph_from_edges([(0, 1)], n=3)
        with pytest.raises(ValueError):
            neighborhood_measure(g, 2)

    def test_alpha_validation(self):
        with pytest.raises(ValueError):
            MeasureConfig(alpha=1.0)
        with pytest.raises(ValueError):
            MeasureConfig(alpha=-0.1)


class TestForman:
    def test_k2(self):
        assert forman_edge(path_graph(2), 0, 1) == 2

    def test_k3(self):
        g = complete_graph(3)
        assert all(forman_edge(g, i, j) == 3 for i, j in g.edges)

    def test_bridge_between_cliques(self):
        g = two_cliques_bridge(4)
        assert forman_edge(g, 0, 4) == -4

    def test_non_edge(self):
        with pytest.raises(ValueError):
            forman_edge(path_graph(3), 0, 2)

    def test_matches_bruteforce(self):
        for seed, n, p in ((0, 50, 0.1), (1, 120, 0.05), (2, 200, 0.02), (3, 80, 0.3)):
            g = er_graph(n, p, seed + 900)
            A = dense_adjacency(g)
            for i, j in g.edges:
                want = 4 - g.degree(i) - g.degree(j) + 3 * triangles_bruteforce(A, i, j)
                assert forman_edge(g, i, j) == want

    def test_pendant_perturbation(self):
        g = er_graph(25, 0.15, 77)
        for i, j in g.edges[:10]:
            before = forman_edge(g, i, j)
            n = g.node_count
            extended = graph_from_edges(list(g.edges) + [(i, n)], n=n + 1)
            assert forman_edge(extended, i, j) == before - 1


class TestOllivier:
    def test_k2_zero(self):
        assert ollivier_edge(path_graph(2), 0, 1) == pytest.approx(0.0, abs=1e-12)

    def test_k3_half(self):
        g = complete_graph(3)
        for i, j in g.edges:
            assert ollivier_edge(g, i, j) == pytest.approx(0.5, abs=1e-12)

    def test_complete_closed_form(self):
        for n in range(3, 9):
            g = complete_graph(n)
            want = (n - 2) / (n - 1)
            for i, j in g.edges:
                assert ollivier_edge(g, i, j) == pytest.approx(want, abs=1e-12)

    def test_dumbbell_bridge(self):
        g = dumbbell_graph()
        assert ollivier_edge(g, 0, 1) == pytest.approx(-2.0 / 3.0, abs=1e-12)

    def test_non_edge(self):
        with pytest.raises(ValueError):
            ollivier_edge(path_graph(3), 0, 2)

    def test_symmetry(self):
        g = er_graph(40, 0.12, 31)
        for i, j in g.edges[:25]:
            assert ollivier_edge(g, i, j) == pytest.approx(ollivier_edge(g, j, i), abs=1e-12)

    def test_matches_exhaustive_oracle(self):
        for seed in range(12):
            g = degree_capped_er_graph(18, 0.12, 4000 + seed, max_degree=4)
            for i, j in g.edges:
                assert ollivier_edge(g, i, j) == pytest.approx(orc_oracle(g, i, j), abs=1e-9)

    def test_matches_oracle_with_alpha(self):
        cfg = MeasureConfig(alpha=0.5)
        for seed in range(4):
            g = degree_capped_er_graph(12, 0.15, 5000 + seed, max_degree=3)
            for i, j in g.edges:
                assert ollivier_edge(g, i, j, cfg) == pytest.approx(orc_oracle(g, i, j, alpha=0.5), abs=1e-9)

    def test_bounds(self):
        for seed in range(8):
            g = er_graph(35, 0.12, 6000 + seed)
            for i, j in g.edges:
                assert -2.0 <= ollivier_edge(g, i, j) <= 1.0

    def test_approx_cutoff_falls_back_cleanly(self):
        g = complete_graph(6)
        cfg = MeasureConfig(approx_degree_cutoff=2, approx_regularization=1e-3)
        exact = ollivier_edge(g, 0, 1)
        approx = ollivier_edge(g, 0, 1, cfg)
        assert approx == pytest.approx(exact, abs=1e-2)


class TestAllEdges:
    def test_k3_report(self):
        g = complete_graph(3, hsa_id="k3", year=2017)
        report = curvature_all_edges(g)
        assert report.hsa_id == "k3" and report.year == 2017
        assert len(report.edges) == 3
        assert all(f == 3 for f in report.frc)
        assert all(o == pytest.approx(0.5, abs=1e-12) for o in report.orc)

    def test_empty_graph(self):
        g = graph_from_edges([], n=0)
        report = curvature_all_edges(g)
        assert report.edges == () and report.frc == () and report.orc == ()

    def test_coverage(self):
        g = er_graph(100, 0.05, 88)
        report = curvature_all_edges(g)
        assert len(report.edges) == g.edge_count
        assert report.edges == g.edges

    def test_frc_only_skips_orc(self):
        g = complete_graph(4)
        report = curvature_all_edges(g, kinds=("frc",))
        assert report.orc is None and report.frc is not None

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            curvature_all_edges(complete_graph(3), kinds=("frc", "bogus"))

    def test_worker_counts_identical(self):
        g = er_graph(60, 0.08, 99)
        assert g.edge_count >= 64, "fixture must be large enough to engage the pool"
        single = curvature_all_edges(g, workers=1)
        pooled = curvature_all_edges(g, workers=4)
        assert single.frc == pooled.frc
        assert single.orc == pooled.orc

    def test_repeat_runs_identical(self):
        g = er_graph(40, 0.1, 123)
        a = curvature_all_edges(g)
        b = curvature_all_edges(g)
        assert a.frc == b.frc and a.orc == b.orc


class TestAggregation:
    def test_node_k3(self):
        g = complete_graph(3)
        report = curvature_all_edges(g)
        assert node_curvature(report, g, 0, "orc") == pytest.approx(0.5, abs=1e-12)

    def test_node_star_center(self):
        g = star_graph(5)
        report = curvature_all_edges(g, kinds=("frc",))
        assert node_curvature(report, g, 0, "frc") == pytest.approx(-2.0, abs=1e-12)

    def test_node_isolated_absent(self):
        g = graph_from_edges([(0, 1)], n=3)
        report = curvature_all_edges(g, kinds=("frc",))
        assert node_curvature(report, g, 2, "frc") is None

    def test_summary_k3(self):
        g = complete_graph(3)
        report = curvature_all_edges(g)
        s = network_curvature_summary(report, "orc")
        assert s["mean"] == pytest.approx(0.5, abs=1e-12)
        assert s["std"] == pytest.approx(0.0, abs=1e-12)
        assert s["frac_negative"] == 0.0
        assert s["count"] == 3

    def test_summary_dumbbell_frc(self):
        g = dumbbell_graph()
        report = curvature_all_edges(g, kinds=("frc",))
        s = network_curvature_summary(report, "frc")
        assert s["mean"] == pytest.approx(-0.4, abs=1e-12)
        assert s["min"] == -2 and s["max"] == 0
        assert s["frac_negative"] == pytest.approx(0.2, abs=1e-12)

    def test_summary_empty(self):
        g = graph_from_edges([], n=0)
        report = curvature_all_edges(g)
        s = network_curvature_summary(report, "frc")
        assert s["count"] == 0
        assert all(s[k] is None for k in ("mean", "median", "std", "min", "max", "frac_negative"))

    def test_summary_median_even(self):
        g = path_graph(5)  # frc values: ends 4-1-2=1, middles 4-2-2=0 -> {1,0,0,1}
        report = curvature_all_edges(g, kinds=("frc",))
        s = network_curvature_summary(report, "frc")
        assert s["median"] == pytest.approx(0.5, abs=1e-15)
