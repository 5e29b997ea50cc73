import math

import pytest

from labeldist.exact import build_exact
from labeldist.generators import ExperimentConfig, generate
from labeldist.graph import INF, Graph, LabelAssignment
from labeldist.spanner import (SpannerError, SpannerResult, as_subgraph,
                               build_unweighted_spanner, build_weighted_spanner,
                               graph_diameter, vl_cover, wvl_cover)
from labeldist.verify import verify_spanner

from oracles import floyd_warshall, has_relevant_path, simple_path_census


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n, 1) for i in range(n)])


def weighted_triangle():
    return Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 10)])


def instance(spec, weights, labels, seed=0):
    return generate(ExperimentConfig(generator=spec, weights=weights, labels=labels), seed)


# ---------------------------------------------------------------- preconditions

def test_unweighted_cover_rejects_weighted_input():
    g = weighted_triangle()
    labels = LabelAssignment([0, 0, 1], 2)
    with pytest.raises(SpannerError, match="unweighted required"):
        vl_cover(g, labels, 2.0, 1)


def test_weighted_cover_rejects_small_weights():
    g = Graph(2, [(0, 1, 0.5)])
    labels = LabelAssignment([0, 1], 2)
    with pytest.raises(SpannerError, match="weights must be >= 1"):
        wvl_cover(g, labels, 2.0, 1, 1)


# ---------------------------------------------------------------- unweighted cover

def test_cycle_cover_guarantee():
    g = cycle_graph(5)
    labels = LabelAssignment([0, 0, 1, 0, 0], 2)
    run = vl_cover(g, labels, 1.0, 1)
    h = as_subgraph(g, run.edges)
    eg = build_exact(g, labels)
    eh = build_exact(h, labels)
    for v in range(5):
        for lam in range(2):
            if eg.dist[v][lam] <= 1.0:
                assert eh.dist[v][lam] <= 5.0  # (4k+1)d with k=1, d=1


def test_cover_edges_are_subgraph_edges():
    g, labels = instance("gnm:30:70", "unit", "uniform:4", seed=2)
    run = vl_cover(g, labels, 2.0, 2)
    for u, v in run.edges:
        assert g.has_edge(u, v)


def test_saturating_scale_single_label():
    g, labels = instance("gnm:25:60", "unit", "uniform:1", seed=3)
    d = graph_diameter(g)
    run = vl_cover(g, labels, max(d, 1.0), 2)
    h = as_subgraph(g, run.edges)
    eg = build_exact(g, labels)
    eh = build_exact(h, labels)
    for v in range(25):
        if eg.dist[v][0] != INF:
            assert eh.dist[v][0] <= (4 * 2 + 1) * max(d, 1.0)


def test_stage_counters_split_by_stage():
    g, labels = instance("grid:6:6", "unit", "uniform:4", seed=1)
    run = vl_cover(g, labels, 2.0, 2)
    assert set(run.stage_counters) == {"sparse_tree", "cluster_tree", "label_path"}
    assert sum(run.stage_counters.values()) == run.edge_count


def test_centers_far_apart_when_stage1_idle():
    # no carving here, so center separation is checkable in the full graph
    g, labels = instance("grid:7:7", "unit", "uniform:4", seed=4)
    k, d = 2, 1.0
    run = vl_cover(g, labels, d, k)
    assert run.carved == 0
    D = floyd_warshall(g)
    for a in run.centers:
        for b in run.centers:
            if a < b:
                assert D[a, b] > 2 * k * d


# ---------------------------------------------------------------- weighted cover

def test_vacuous_when_budget_exceeds_nodes():
    g, labels = instance("gnm:12:25", "uniform:1:4", "uniform:3", seed=5)
    run = wvl_cover(g, labels, 4.0, 13, 2)
    assert run.edges == set()
    assert run.centers == []


def test_hop_bounded_label_path_avoids_heavy_edge():
    g = weighted_triangle()
    labels = LabelAssignment([0, 0, 1], 2)
    run = wvl_cover(g, labels, 2.0, 1, 1)
    assert (0, 1) in run.edges and (1, 2) in run.edges
    assert (0, 2) not in run.edges  # the 2-hop witness replaces the weight-10 edge


def test_sparse_stage_fires_with_index_above_one():
    g = Graph(3, [(0, 1, 1), (1, 2, 1)])
    labels = LabelAssignment([0, 1, 2], 3)
    run = wvl_cover(g, labels, 1.0, 2, 2)
    # node 0 is (2,1)-relevant and its radius-2 ball (3 nodes) undercuts the
    # guard 2*sqrt(3); the minimal index is 2, so B(0, 1d) = {0, 1} is carved
    assert run.carved == 2
    assert run.stage_counters["sparse_tree"] == 2
    assert run.edges == {(0, 1), (1, 2)}


def test_weighted_per_cover_guarantee_against_path_census():
    g, labels = instance("gnm:14:26", "uniform:1:4", "uniform:3", seed=8)
    k = 2
    census = simple_path_census(g, labels, max_len=9.0, max_hops=8)
    for d, x in [(2.0, 1), (4.0, 1), (4.0, 2), (8.0, 2), (9.0, 4)]:
        run = wvl_cover(g, labels, d, x, k)
        h = as_subgraph(g, run.edges)
        eh = build_exact(h, labels)
        cap = (4 * k + 1) * d
        for v in range(g.node_count):
            for lam in range(labels.label_count):
                if has_relevant_path(census[v][lam], x, d):
                    assert eh.dist[v][lam] <= cap, (v, lam, d, x)


# ---------------------------------------------------------------- drivers

def test_unweighted_spanner_stretch_and_size():
    g, labels = instance("grid:8:8", "unit", "uniform:6", seed=6)
    k, eps = 2, 0.5
    res = build_unweighted_spanner(g, labels, k, eps)
    assert res.edges <= {tuple(sorted((u, v))) for u, v, _ in g.edges}
    h = as_subgraph(g, res.edges)
    eg = build_exact(g, labels)
    eh = build_exact(h, labels)
    bound = (4 * k + 1) * (1 + eps)
    for v in range(64):
        for lam in range(6):
            e = eg.dist[v][lam]
            if e not in (0.0, INF):
                assert e <= eh.dist[v][lam] <= bound * e
    # scales start at 1 and stop at the first value covering the largest label distance
    max_ld = max(eg.dist[v][lam] for v in range(64) for lam in range(6)
                 if eg.dist[v][lam] != INF)
    scales = res.params["d_values"]
    assert scales[0] == 1.0
    assert scales[-1] >= max_ld
    assert len(scales) < 2 + math.log(max_ld, 1 + eps) + 1


def test_unweighted_per_scale_guarantee():
    g, labels = instance("grid:6:6", "unit", "uniform:4", seed=7)
    k = 2
    res = build_unweighted_spanner(g, labels, k, 0.5)
    eg = build_exact(g, labels)
    for run in res.invocations:
        eh = build_exact(as_subgraph(g, run.edges), labels)
        cap = (4 * k + 1) * run.d
        for v in range(36):
            for lam in range(4):
                if eg.dist[v][lam] <= run.d:
                    assert eh.dist[v][lam] <= cap


def test_weighted_spanner_stretch():
    g, labels = instance("gnm:40:90", "uniform:1:8", "uniform:4", seed=9)
    k, eps = 2, 0.5
    res = build_weighted_spanner(g, labels, k, eps)
    h = as_subgraph(g, res.edges)
    eg = build_exact(g, labels)
    eh = build_exact(h, labels)
    bound = (4 * k + 1) * (1 + eps)
    for v in range(40):
        for lam in range(4):
            e = eg.dist[v][lam]
            if e == INF:
                assert eh.dist[v][lam] == INF
            elif e > 0:
                assert e <= eh.dist[v][lam] <= bound * e


def test_provenance_points_at_real_invocations():
    g, labels = instance("grid:5:5", "unit", "uniform:3", seed=10)
    res = build_unweighted_spanner(g, labels, 2, 0.5)
    by_key = {(run.d, run.x): run for run in res.invocations}
    assert set(res.edge_provenance) == res.edges
    for edge, (d, x, stage) in res.edge_provenance.items():
        run = by_key[(d, x)]
        assert run.stage_of[edge] == stage


def test_single_label_weighted_spanner_valid():
    g, labels = instance("gnm:25:50", "uniform:1:6", "uniform:1", seed=11)
    res = build_weighted_spanner(g, labels, 2, 0.5)
    eg = build_exact(g, labels)
    eh = build_exact(as_subgraph(g, res.edges), labels)
    for v in range(25):
        e = eg.dist[v][0]
        if e not in (0.0, INF):
            assert e <= eh.dist[v][0] <= 13.5 * e


def test_full_spanner_reports_ratio_one():
    g, labels = instance("gnm:20:40", "unit", "uniform:3", seed=12)
    edges = {tuple(sorted((u, v))) for u, v, _ in g.edges}
    full = SpannerResult(edges=edges, params={"mode": "unweighted", "k": 2, "eps": 0.5,
                                              "d_values": [1.0], "x_values": None},
                         edge_provenance={e: (1.0, None, "sparse_tree") for e in edges},
                         invocations=[])
    report = verify_spanner(g, labels, 2, 0.5, weighted=False, result=full)
    assert report.aggregates["max_ratio"] == 1.0
    assert report.checks["subgraph"]


def test_verify_spanner_passes_on_small_instances():
    g, labels = instance("grid:5:5", "unit", "uniform:3", seed=13)
    report = verify_spanner(g, labels, 2, 0.5, weighted=False)
    assert report.passed
    g, labels = instance("gnm:30:70", "uniform:1:8", "uniform:3", seed=14)
    report = verify_spanner(g, labels, 2, 0.5, weighted=True)
    assert report.passed
    assert report.aggregates["cover_constant"] > 0
