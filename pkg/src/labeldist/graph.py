"""Undirected weighted graphs and the shortest-path primitives built on them.

Node ids are dense integers ``0..n-1``. A graph is immutable after
construction except for the per-node ``alive`` flags, which implement
residual views: traversals never visit dead nodes. ``Graph.view()`` returns
an independently deletable view sharing the (frozen) edge structure, so one
carving pass cannot corrupt another.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

INF = math.inf


class GraphError(ValueError):
    """Malformed graph input or an invalid traversal argument."""


class Graph:
    """Undirected weighted graph with residual-view node deletion."""

    __slots__ = ("node_count", "edges", "adjacency", "alive", "_weights", "unit_weights")

    def __init__(self, node_count: int, edges):
        if node_count < 0:
            raise GraphError("negative node count")
        self.node_count = node_count
        self.edges: list[tuple[int, int, float]] = []
        self._weights: dict[tuple[int, int], float] = {}
        adjacency: list[list[tuple[int, float]]] = [[] for _ in range(node_count)]
        for u, v, w in edges:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphError(f"edge ({u},{v}) out of range")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            w = float(w)
            if w < 0 or math.isnan(w):
                raise GraphError(f"bad weight {w!r} on edge ({u},{v})")
            key = (u, v) if u < v else (v, u)
            if key in self._weights:
                raise GraphError(f"duplicate edge ({u},{v})")
            self._weights[key] = w
            self.edges.append((u, v, w))
            adjacency[u].append((v, w))
            adjacency[v].append((u, w))
        for lst in adjacency:
            lst.sort()  # fixed relaxation order makes every tie-break reproducible
        self.adjacency = adjacency
        self.alive = [True] * node_count
        self.unit_weights = all(w == 1.0 for _, _, w in self.edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> float:
        key = (u, v) if u < v else (v, u)
        try:
            return self._weights[key]
        except KeyError:
            raise GraphError(f"no edge ({u},{v})") from None

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._weights

    def min_weight(self) -> float:
        return min((w for _, _, w in self.edges), default=INF)

    def alive_nodes(self) -> list[int]:
        return [v for v in range(self.node_count) if self.alive[v]]

    def alive_count(self) -> int:
        return sum(self.alive)

    def view(self) -> "Graph":
        """A residual view: same edges, private copy of the alive flags."""
        g = Graph.__new__(Graph)
        g.node_count = self.node_count
        g.edges = self.edges
        g._weights = self._weights
        g.adjacency = self.adjacency
        g.unit_weights = self.unit_weights
        g.alive = list(self.alive)
        return g


class LabelAssignment:
    """node -> label map plus the per-label node sets (its exact inverse)."""

    __slots__ = ("label_of", "classes", "label_count")

    def __init__(self, label_of, label_count: int):
        n = len(label_of)
        if label_count < 1:
            raise GraphError("label count must be >= 1")
        if label_count > n:
            raise GraphError(f"label count {label_count} exceeds node count {n}")
        classes: list[set[int]] = [set() for _ in range(label_count)]
        for v, lam in enumerate(label_of):
            if not (0 <= lam < label_count):
                raise GraphError(f"label {lam} of node {v} out of range")
            classes[lam].add(v)
        self.label_of = list(label_of)
        self.classes = classes
        self.label_count = label_count

    def copy(self) -> "LabelAssignment":
        return LabelAssignment(self.label_of, self.label_count)

    def relabel(self, v: int, lam: int) -> None:
        if not (0 <= lam < self.label_count):
            raise GraphError(f"label {lam} out of range")
        old = self.label_of[v]
        if old == lam:
            return
        self.classes[old].discard(v)
        self.classes[lam].add(v)
        self.label_of[v] = lam

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LabelAssignment)
            and self.label_count == other.label_count
            and self.label_of == other.label_of
        )


@dataclass
class DistanceMap:
    """Result of a (possibly truncated or hop-bounded) shortest-path run.

    ``dist[v]`` is +inf when v is unreachable within the run's bound. For
    hop-bounded runs the per-round tables are kept so that hop-feasible
    witness paths can be rebuilt exactly; the flat ``parent`` array then
    holds each node's own witness head (chains still reach a source with
    non-increasing dist, but only ``extract_path`` reconstructs a path
    whose weight and hop count match the reported distance).
    """

    dist: list[float]
    parent: list[int | None]
    source_of: list[int | None]
    sources: frozenset[int]
    hop_limit: int | None = None
    hop_rounds: list[list[float]] | None = None
    graph: Graph | None = None


def dijkstra(g: Graph, sources, radius_cap: float = INF) -> DistanceMap:
    """Multi-source Dijkstra over the alive part of ``g``.

    Nodes farther than ``radius_cap`` from every source keep dist = +inf.
    ``source_of[v]`` is the attaining source; ties go to the smallest
    source id, then the smallest predecessor id, so shortest paths are
    unique and reproducible without perturbing weights.
    """
    if not sources:
        raise GraphError("no sources")
    n = g.node_count
    dist = [INF] * n
    parent: list[int | None] = [None] * n
    source_of: list[int | None] = [None] * n
    settled = [False] * n
    alive = g.alive
    heap = []
    for s in sorted(set(sources)):
        if not (0 <= s < n):
            raise GraphError(f"source {s} out of range")
        if not alive[s]:
            raise GraphError("deleted node")
        dist[s] = 0.0
        source_of[s] = s
        heap.append((0.0, s))
    adjacency = g.adjacency
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if settled[u] or d > dist[u]:
            continue
        settled[u] = True
        su = source_of[u]
        for v, w in adjacency[u]:
            if settled[v] or not alive[v]:
                continue
            cand = d + w
            if cand > radius_cap:
                continue
            dv = dist[v]
            if cand < dv:
                dist[v] = cand
                parent[v] = u
                source_of[v] = su
                push(heap, (cand, v))
            elif cand == dv and parent[v] is not None and (su, u) < (source_of[v], parent[v]):
                parent[v] = u
                source_of[v] = su
    return DistanceMap(dist, parent, source_of, frozenset(sources))


def ball(g: Graph, v: int, r: float) -> set[int]:
    """Alive nodes within distance ``r`` of ``v`` in the residual graph."""
    if r < 0:
        raise GraphError("negative radius")
    dm = dijkstra(g, {v}, radius_cap=r)
    return {u for u, d in enumerate(dm.dist) if d != INF}


def remove_nodes(g: Graph, victims) -> None:
    """Mark ``victims`` dead; idempotent, irreversible on this view."""
    alive = g.alive
    for v in victims:
        if not (0 <= v < g.node_count):
            raise GraphError(f"node {v} out of range")
        alive[v] = False


def hop_bounded_distances(g: Graph, sources, hop_limit: int) -> DistanceMap:
    """Shortest distances over paths with at most ``hop_limit`` edges.

    Bellman-Ford style rounds; round h never reads values produced in
    round h, so after h rounds dist[v] is exactly the minimum over paths
    with <= h edges. Rounds are capped at n-1 (longer walks cannot be
    shorter with non-negative weights) and stop early at a fixed point.
    """
    if not sources:
        raise GraphError("no sources")
    if hop_limit < 0:
        raise GraphError("negative hop limit")
    n = g.node_count
    alive = g.alive
    srcs = sorted(set(sources))
    for s in srcs:
        if not (0 <= s < n):
            raise GraphError(f"source {s} out of range")
        if not alive[s]:
            raise GraphError("deleted node")
    d0 = [INF] * n
    for s in srcs:
        d0[s] = 0.0
    arcs = []
    for u in range(n):
        if not alive[u]:
            continue
        for v, w in g.adjacency[u]:
            if alive[v]:
                arcs.append((u, v, w))
    rounds = [d0]
    improved_round = [0] * n
    cur = d0
    for h in range(1, min(hop_limit, max(n - 1, 0)) + 1):
        nxt = cur[:]
        changed = False
        for u, v, w in arcs:
            du = cur[u]
            if du == INF:
                continue
            c = du + w
            if c < nxt[v]:
                nxt[v] = c
                improved_round[v] = h
                changed = True
        if not changed:
            break
        rounds.append(nxt)
        cur = nxt
    dist = cur[:]

    src_set = frozenset(srcs)
    parent: list[int | None] = [None] * n
    adjacency = g.adjacency
    for v in range(n):
        if dist[v] == INF or v in src_set:
            continue
        prev = rounds[improved_round[v]- 1]
        want = dist[v]
        for u, w in adjacency[v]:
            if alive[u] and prev[u] + w == want:
                parent[v] = u
                break
    source_of: list[int | None] = [None] * n
    for s in srcs:
        source_of[s] = s
    for v in range(n):
        if source_of[v] is not None or dist[v] == INF:
            continue
        chain = []
        x = v
        while source_of[x] is None:
            chain.append(x)
            x = parent[x]
        s = source_of[x]
        for y in chain:
            source_of[y] = s
    return DistanceMap(dist, parent, source_of, src_set,
                       hop_limit=hop_limit, hop_rounds=rounds, graph=g)


def extract_path(dm: DistanceMap, target: int) -> list[tuple[int, int]]:
    """Edges of a witness path from some source to ``target``.

    Total weight equals dm.dist[target]; for hop-bounded runs the hop
    count respects the run's limit (round-aware backtracking).
    """
    if dm.dist[target] == INF:
        raise GraphError("no path")
    if dm.hop_rounds is None:
        edges = []
        v = target
        while dm.parent[v] is not None:
            u = dm.parent[v]
            edges.append((u, v))
            v = u
        edges.reverse()
        return edges

    g = dm.graph
    rounds = dm.hop_rounds
    alive = g.alive
    final = dm.dist[target]
    h = 0
    while rounds[h][target] != final:
        h += 1
    edges = []
    v = target
    while v not in dm.sources:
        prev = rounds[h - 1]
        want = rounds[h][v]
        for u, w in g.adjacency[v]:
            if alive[u] and prev[u] + w == want:
                edges.append((u, v))
                v = u
                h -= 1
                break
        else:  # pragma: no cover - the round tables always contain a predecessor
            raise AssertionError("hop-bounded backtrack found no predecessor")
    edges.reverse()
    return edges


def parse_graph_text(text: str) -> tuple[Graph, LabelAssignment]:
    """Parse the graph text format.

    Line 1: ``n m l``; then m edge lines ``u v w``; then n label lines
    (label of node i). Lines starting with ``#`` and blank lines are
    skipped. Duplicate edges, self-loops, and out-of-range labels are
    rejected.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty graph file")
    header = lines[0].split()
    if len(header) != 3:
        raise GraphError(f"bad header {lines[0]!r}, expected 'n m l'")
    try:
        n, m, l = (int(tok) for tok in header)
    except ValueError as exc:
        raise GraphError(f"bad header {lines[0]!r}") from exc
    if len(lines) != 1 + m + n:
        raise GraphError(f"expected {1 + m + n} content lines, found {len(lines)}")
    edges = []
    for ln in lines[1:1 + m]:
        toks = ln.split()
        if len(toks) != 3:
            raise GraphError(f"bad edge line {ln!r}")
        try:
            edges.append((int(toks[0]), int(toks[1]), float(toks[2])))
        except ValueError as exc:
            raise GraphError(f"bad edge line {ln!r}") from exc
    g = Graph(n, edges)
    label_of = []
    for ln in lines[1 + m:]:
        try:
            label_of.append(int(ln))
        except ValueError as exc:
            raise GraphError(f"bad label line {ln!r}") from exc
    return g, LabelAssignment(label_of, l)


def format_graph_text(g: Graph, labels: LabelAssignment) -> str:
    out = [f"{g.node_count} {g.edge_count} {labels.label_count}"]
    for u, v, w in g.edges:
        out.append(f"{u} {v} {w!r}")
    for lam in labels.label_of:
        out.append(str(lam))
    return "\n".join(out) + "\n"


def read_graph(path) -> tuple[Graph, LabelAssignment]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_graph_text(f.read())


def write_graph(path, g: Graph, labels: LabelAssignment) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_graph_text(g, labels))
