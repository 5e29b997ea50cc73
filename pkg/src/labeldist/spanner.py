"""Vertex-label spanners via ball carving and center covers.

Each cover invocation works a private residual view in two stages: sparse
regions are spanned by a tree and carved out; the remainder is covered by
a set of far-apart centers whose clusters get a shortest-path tree plus
one short path per reachable label. The spanner is the union of covers
over a geometric ladder of distance scales (and, for weighted graphs, of
hop budgets).
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field

from .exact import label_distance_maps
from .graph import (INF, Graph, GraphError, LabelAssignment, dijkstra,
                    extract_path, hop_bounded_distances, remove_nodes)

STAGE_SPARSE = "sparse_tree"
STAGE_CLUSTER = "cluster_tree"
STAGE_LABEL = "label_path"


class SpannerError(ValueError):
    """Precondition failures of the cover procedures."""


@dataclass
class CoverRun:
    """One cover invocation: its edge set plus bookkeeping."""

    d: float
    x: int | None
    stage_of: dict[tuple[int, int], str]
    stage_counters: dict[str, int]
    centers: list[int]
    carved: int

    @property
    def edges(self) -> set[tuple[int, int]]:
        return set(self.stage_of)

    @property
    def edge_count(self) -> int:
        return len(self.stage_of)


@dataclass
class SpannerResult:
    """Union of cover invocations with per-edge provenance."""

    edges: set[tuple[int, int]]
    params: dict
    edge_provenance: dict[tuple[int, int], tuple[float, int | None, str]]
    invocations: list[CoverRun] = field(default_factory=list)


def as_subgraph(g: Graph, edges) -> Graph:
    """Materialize an edge subset of ``g`` as a graph on the same nodes."""
    return Graph(g.node_count, [(u, v, g.weight(u, v)) for u, v in sorted(edges)])


def _ball_count_capped(g: Graph, v: int, r: float, limit: int) -> int:
    # |B(v, r, g)| over alive nodes, abandoning the scan once `limit` nodes
    # are settled (callers only compare the count against limit-sized guards).
    alive = g.alive
    adjacency = g.adjacency
    dist = {v: 0.0}
    settled = set()
    heap = [(0.0, v)]
    pop, push = heapq.heappop, heapq.heappush
    count = 0
    while heap:
        d, u = pop(heap)
        if u in settled:
            continue
        settled.add(u)
        count += 1
        if count >= limit:
            return count
        for nbr, w in adjacency[u]:
            if nbr in settled or not alive[nbr]:
                continue
            c = d + w
            if c > r:
                continue
            if c < dist.get(nbr, INF):
                dist[nbr] = c
                push(heap, (c, nbr))
    return count


def _minimal_sparse_index(dm, d: float, k: int, factor: float, l: int) -> int:
    # smallest i in 1..k with |B(v, i*d)| < factor * l^((i-1)/k); the caller's
    # guard guarantees i = k qualifies.
    finite = sorted(x for x in dm.dist if x != INF)
    for i in range(1, k + 1):
        count = bisect.bisect_right(finite, i * d)
        if count < factor * l ** ((i - 1.0) / k):
            return i
    raise AssertionError("guard held but no sparse index qualified")


class _EdgeSink:
    """Dedup edge collector with per-stage counters."""

    __slots__ = ("stage_of", "counters")

    def __init__(self):
        self.stage_of: dict[tuple[int, int], str] = {}
        self.counters = {STAGE_SPARSE: 0, STAGE_CLUSTER: 0, STAGE_LABEL: 0}

    def add(self, u: int, v: int, stage: str) -> None:
        key = (u, v) if u < v else (v, u)
        if key not in self.stage_of:
            self.stage_of[key] = stage
            self.counters[stage] += 1


def _carve_sparse_regions(gv: Graph, d: float, k: int, factor: float, l: int,
                          sink: _EdgeSink, relevance_x: int | None) -> int:
    """Stage 1: span and remove sparse balls until none qualifies.

    ``relevance_x`` restricts candidates to nodes with at least x alive
    nodes within distance d (the weighted variant); stage-1 removal then
    always uses radius (i-1)*d and the minimal index provably exceeds 1.
    """
    n = gv.node_count
    guard = factor * l ** (1.0 - 1.0 / k)
    limit = math.ceil(guard)
    carved = 0
    while True:
        if relevance_x is not None and relevance_x > gv.alive_count():
            break
        picked = None
        for v in range(n):
            if not gv.alive[v]:
                continue
            if relevance_x is not None and _ball_count_capped(gv, v, d, relevance_x) < relevance_x:
                continue
            if _ball_count_capped(gv, v, k * d, limit) < guard:
                picked = v
                break
        if picked is None:
            break
        dm = dijkstra(gv, {picked}, radius_cap=k * d)
        i = _minimal_sparse_index(dm, d, k, factor, l)
        if relevance_x is not None:
            assert i > 1, "relevant picks always survive the radius-d test"
        dist = dm.dist
        parent = dm.parent
        span_r = i * d
        for u in range(n):
            if dist[u] <= span_r and parent[u] is not None:
                sink.add(parent[u], u, STAGE_SPARSE)
        remove_r = (i - 1) * d if i > 1 else d
        victims = [u for u in range(n) if dist[u] <= remove_r]
        carved += len(victims)
        remove_nodes(gv, victims)
    return carved


def _select_centers(gv: Graph, sep: float, relevant) -> list[int]:
    """Greedy far-apart center set; candidates filtered by ``relevant``."""
    n = gv.node_count
    centers: list[int] = []
    cov = None
    while True:
        nxt = None
        for v in range(n):
            if not gv.alive[v]:
                continue
            if cov is not None and cov[v] != INF:
                continue
            if relevant(v):
                nxt = v
                break
        if nxt is None:
            return centers
        # every existing center is farther than the separation radius
        assert cov is None or cov[nxt] == INF
        centers.append(nxt)
        cov = dijkstra(gv, set(centers), radius_cap=sep).dist


def _cover_clusters(gv: Graph, centers: list[int], label_dists, label_maps,
                    d: float, sink: _EdgeSink) -> None:
    """Stage 2 tail: cluster trees plus one label path per (center, label)."""
    if not centers:
        return
    n = gv.node_count
    vor = dijkstra(gv, set(centers))
    members: dict[int, list[int]] = {c: [] for c in centers}
    for u in range(n):
        if gv.alive[u] and vor.dist[u] != INF:
            members[vor.source_of[u]].append(u)
            if vor.parent[u] is not None:
                sink.add(vor.parent[u], u, STAGE_CLUSTER)
    for c in centers:
        cluster = members[c]
        for lam, dists in label_dists.items():
            y = None
            for u in cluster:  # ascending node ids
                if dists[u] <= d:
                    y = u
                    break
            if y is None:
                continue
            for a, b in extract_path(label_maps[lam], y):
                sink.add(a, b, STAGE_LABEL)


def vl_cover(g: Graph, labels: LabelAssignment, d: float, k: int,
             label_maps: dict | None = None) -> CoverRun:
    """Unweighted cover: spans every node-label pair at distance <= d
    within (4k+1)d using the returned edge set."""
    if k < 1:
        raise SpannerError("k must be >= 1")
    if d < 1:
        raise SpannerError("cover radius must be >= 1")
    if not g.unit_weights:
        raise SpannerError("unweighted required")
    l = labels.label_count
    gv = g.view()
    sink = _EdgeSink()
    carved = _carve_sparse_regions(gv, d, k, factor=d, l=l, sink=sink, relevance_x=None)
    centers = _select_centers(gv, sep=2 * k * d, relevant=lambda v: True)
    if centers:
        if label_maps is None:
            label_maps = label_distance_maps(g, labels)
        label_dists = {lam: dm.dist for lam, dm in label_maps.items()}
        _cover_clusters(gv, centers, label_dists, label_maps, d, sink)
    return CoverRun(d=d, x=None, stage_of=sink.stage_of, stage_counters=sink.counters,
                    centers=centers, carved=carved)


def wvl_cover(g: Graph, labels: LabelAssignment, d: float, x: int, k: int,
              hop_cache: dict | None = None) -> CoverRun:
    """Weighted cover: spans every node-label pair joined by a path with
    x..2x edges and length <= d within (4k+1)d.

    Label paths are hop-bounded (at most 2x edges), computed in the
    original graph; ``hop_cache`` may share those runs across distance
    scales, keyed by (label, x).
    """
    if k < 1:
        raise SpannerError("k must be >= 1")
    if d < 1:
        raise SpannerError("cover radius must be >= 1")
    if x < 1:
        raise SpannerError("hop budget must be >= 1")
    if g.edges and g.min_weight() < 1:
        raise SpannerError("weights must be >= 1")
    l = labels.label_count
    gv = g.view()
    sink = _EdgeSink()
    carved = _carve_sparse_regions(gv, d, k, factor=float(x), l=l, sink=sink, relevance_x=x)

    relevance_memo: dict[int, bool] = {}

    def relevant(v: int) -> bool:
        flag = relevance_memo.get(v)
        if flag is None:
            flag = relevance_memo[v] = _ball_count_capped(gv, v, d, x) >= x
        return flag

    centers: list[int] = []
    if x <= gv.alive_count():
        centers = _select_centers(gv, sep=2 * k * d, relevant=relevant)
    if centers:
        if hop_cache is None:
            hop_cache = {}
        label_maps = {}
        for lam, cls in enumerate(labels.classes):
            if not cls:
                continue
            dm = hop_cache.get((lam, x))
            if dm is None:
                dm = hop_cache[(lam, x)] = hop_bounded_distances(g, cls, 2 * x)
            label_maps[lam] = dm
        label_dists = {lam: dm.dist for lam, dm in label_maps.items()}
        _cover_clusters(gv, centers, label_dists, label_maps, d, sink)
    return CoverRun(d=d, x=x, stage_of=sink.stage_of, stage_counters=sink.counters,
                    centers=centers, carved=carved)


def _assemble(runs: list[CoverRun], params: dict) -> SpannerResult:
    provenance: dict[tuple[int, int], tuple[float, int | None, str]] = {}
    for run in runs:
        for edge, stage in run.stage_of.items():
            if edge not in provenance:
                provenance[edge] = (run.d, run.x, stage)
    return SpannerResult(edges=set(provenance), params=params,
                         edge_provenance=provenance, invocations=runs)


def build_unweighted_spanner(g: Graph, labels: LabelAssignment, k: int,
                             eps: float) -> SpannerResult:
    """Union of unweighted covers over d = (1+eps)^i, starting at 1 and
    stopping at the first scale covering the largest finite node-to-label
    distance."""
    if eps <= 0:
        raise SpannerError("eps must be > 0")
    if not g.unit_weights:
        raise SpannerError("unweighted required")
    label_maps = label_distance_maps(g, labels)
    max_ld = 0.0
    for dm in label_maps.values():
        for dv in dm.dist:
            if dv != INF and dv > max_ld:
                max_ld = dv
    scales = [1.0]
    while scales[-1] < max_ld:
        scales.append((1 + eps) ** len(scales))
    runs = [vl_cover(g, labels, d, k, label_maps=label_maps) for d in scales]
    return _assemble(runs, {"mode": "unweighted", "k": k, "eps": eps,
                            "d_values": scales, "x_values": None})


def graph_diameter(g: Graph) -> float:
    """Largest finite pairwise distance over the alive graph."""
    best = 0.0
    for v in range(g.node_count):
        if not g.alive[v]:
            continue
        for dv in dijkstra(g, {v}).dist:
            if dv != INF and dv > best:
                best = dv
    return best


def build_weighted_spanner(g: Graph, labels: LabelAssignment, k: int,
                           eps: float) -> SpannerResult:
    """Union of weighted covers over d = (1+eps)^i for i = 0..ceil(log_{1+eps} D)
    and x = 2^j for j = 0..ceil(log2 n)."""
    if eps <= 0:
        raise SpannerError("eps must be > 0")
    if g.edges and g.min_weight() < 1:
        raise SpannerError("weights must be >= 1")
    n = g.node_count
    diameter = graph_diameter(g)
    if diameter > 1:
        i_max = math.ceil(math.log(diameter) / math.log(1 + eps))
        while (1 + eps) ** i_max < diameter:  # guard against log rounding
            i_max += 1
    else:
        i_max = 0
    j_max = math.ceil(math.log2(n)) if n >= 2 else 0
    scales = [(1 + eps) ** i for i in range(i_max + 1)]
    budgets = [2 ** j for j in range(j_max + 1)]
    hop_cache: dict = {}
    runs = []
    for d in scales:
        for x in budgets:
            runs.append(wvl_cover(g, labels, d, x, k, hop_cache=hop_cache))
    return _assemble(runs, {"mode": "weighted", "k": k, "eps": eps,
                            "d_values": scales, "x_values": budgets,
                            "diameter": diameter})
