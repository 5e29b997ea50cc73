"""Static vertex-label distance oracle.

Levels are nested random samples; each node keeps its per-level pivots and
a truncated bunch; each label keeps the union of its members' bunches with
exact node-to-label distances; the top level keeps a full row per label.
Queries scan levels first-hit and fall back to the top-level table.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass

from .exact import build_exact
from .graph import INF, Graph, GraphError, LabelAssignment, dijkstra

SAMPLE_RETRY_BUDGET = 32


class OracleError(ValueError):
    """Degenerate sampling or a malformed oracle dump."""


@dataclass
class LevelSampling:
    """Nested node samples A_0 >= A_1 >= ... >= A_{k-1}, top level non-empty."""

    k: int
    p: float
    seed: int
    levels: list[list[int]]      # sorted node ids per level
    level_of: list[int]          # highest level index containing the node


def sample_levels(n: int, k: int, p: float, seed: int) -> LevelSampling:
    """Draw the level hierarchy; deterministic for a fixed seed.

    Membership of level i is drawn independently from level i-1 with
    probability p. Resamples with derived sub-seeds until the top level is
    non-empty, erroring out after the retry budget.
    """
    if k < 1:
        raise OracleError("k must be >= 1")
    if not (0 < p <= 1):
        raise OracleError(f"sampling probability {p} out of (0, 1]")
    if n < 1:
        raise OracleError("need at least one node")
    master = random.Random(seed)
    for _ in range(SAMPLE_RETRY_BUDGET):
        sub_seed = master.randrange(2 ** 63)
        rng = random.Random(sub_seed)
        levels = [list(range(n))]
        for _i in range(1, k):
            levels.append([v for v in levels[-1] if rng.random() < p])
        if levels[-1]:
            level_of = [0] * n
            for i in range(1, k):
                for v in levels[i]:
                    level_of[v] = i
            return LevelSampling(k=k, p=p, seed=seed, levels=levels, level_of=level_of)
    raise OracleError("degenerate sampling")


@dataclass
class BunchSet:
    """Per-node pivots (nearest level member + distance) and bunch tables."""

    pivots: list[list[tuple[int | None, float]]]  # [v][i] -> (pivot, dist), (None, inf) if unreachable
    bunch: list[dict[int, float]]                 # [v] -> {u: dist(v, u)} for u in B(v)


def _bunch_scan(g: Graph, w: int, bound: list[float], bunch: list[dict[int, float]]) -> None:
    # Pruned Dijkstra from w: a node v joins only while dist(w,v) < bound(v),
    # and expansion past a failing node is sound because bound obeys the
    # triangle inequality (it is a distance to a fixed node set).
    alive = g.alive
    adjacency = g.adjacency
    dist = {w: 0.0}
    settled = set()
    heap = [(0.0, w)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if u in settled:
            continue
        settled.add(u)
        if d >= bound[u]:
            continue
        bunch[u][w] = d
        for v, wt in adjacency[u]:
            if v in settled or not alive[v]:
                continue
            c = d + wt
            if c < dist.get(v, INF):
                dist[v] = c
                push(heap, (c, v))


def build_bunches(g: Graph, sampling: LevelSampling, include_top_level: bool = False) -> BunchSet:
    """Pivots for every level and bunches per the strictly-closer rule.

    With ``include_top_level`` the last level contributes with an infinite
    next-level distance (every reachable top-level node joins every bunch);
    otherwise the last level is omitted from bunches entirely.
    """
    n = g.node_count
    k = sampling.k
    level_dist: list[list[float]] = []
    pivots: list[list[tuple[int | None, float]]] = [[] for _ in range(n)]
    for i in range(k):
        dm = dijkstra(g, set(sampling.levels[i]))
        level_dist.append(dm.dist)
        for v in range(n):
            pivots[v].append((dm.source_of[v], dm.dist[v]))
    bunch: list[dict[int, float]] = [{} for _ in range(n)]
    top = k if include_top_level else k - 1
    inf_bound = [INF] * n
    for i in range(top):
        bound = level_dist[i + 1] if i + 1 < k else inf_bound
        upper = set(sampling.levels[i + 1]) if i + 1 < k else set()
        for w in sampling.levels[i]:
            if w not in upper:
                _bunch_scan(g, w, bound, bunch)
    return BunchSet(pivots=pivots, bunch=bunch)


class StaticOracle:
    """Built oracle: sampling + bunches + label bunches + top-level table."""

    __slots__ = ("n", "k", "p", "seed", "sampling", "bunches", "label_bunch",
                 "top_table", "labels")

    def __init__(self, n, k, p, seed, sampling, bunches, label_bunch, top_table, labels):
        self.n = n
        self.k = k
        self.p = p
        self.seed = seed
        self.sampling = sampling
        self.bunches = bunches
        self.label_bunch = label_bunch  # [lam] -> {x: dist(x, lam)}
        self.top_table = top_table      # {(v, lam): dist}, finite entries only
        self.labels = labels

    def entry_count(self) -> int:
        """Stored entries: bunches + label bunches + top rows + pivots."""
        total = sum(len(b) for b in self.bunches.bunch)
        total += sum(len(lb) for lb in self.label_bunch)
        total += len(self.sampling.levels[self.k - 1]) * self.labels.label_count
        total += self.n * self.k
        return total

    def mean_bunch_size(self) -> float:
        return sum(len(b) for b in self.bunches.bunch) / max(self.n, 1)


def build_static_oracle(g: Graph, labels: LabelAssignment, k: int, seed: int) -> StaticOracle:
    """Compose sampling (p = l^(-1/k)), bunches, label bunches, top table."""
    if k < 1:
        raise OracleError("k must be >= 1")
    n = g.node_count
    l = labels.label_count
    p = l ** (-1.0 / k)
    sampling = sample_levels(n, k, p, seed)
    bunches = build_bunches(g, sampling, include_top_level=False)
    exact = build_exact(g, labels)
    label_bunch: list[dict[int, float]] = [{} for _ in range(l)]
    for v in range(n):
        lam = labels.label_of[v]
        row = label_bunch[lam]
        for x in bunches.bunch[v]:
            if x not in row:
                row[x] = exact.dist[x][lam]
    top_table: dict[tuple[int, int], float] = {}
    for v in sampling.levels[k - 1]:
        row = exact.dist[v]
        for lam in range(l):
            if row[lam] != INF:
                top_table[(v, lam)] = row[lam]
    return StaticOracle(n=n, k=k, p=p, seed=seed, sampling=sampling, bunches=bunches,
                        label_bunch=label_bunch, top_table=top_table, labels=labels.copy())


def static_query(o: StaticOracle, v: int, lam: int) -> float:
    """First-hit level scan, then the top-level fallback.

    Same-label queries short-circuit to 0 (the scan alone only bounds them
    through stretch slack).
    """
    if not (0 <= v < o.n):
        raise GraphError(f"node {v} out of range")
    if not (0 <= lam < o.labels.label_count):
        raise GraphError(f"label {lam} out of range")
    if o.labels.label_of[v] == lam:
        return 0.0
    pivots = o.bunches.pivots[v]
    row = o.label_bunch[lam]
    for i in range(o.k - 1):
        piv, dpv = pivots[i]
        if piv is None:
            continue
        dxl = row.get(piv)
        if dxl is not None:
            return dpv + dxl
    piv, dpv = pivots[o.k - 1]
    if piv is None:
        return INF
    return dpv + o.top_table.get((piv, lam), INF)


def dump_static_oracle(o: StaticOracle, out) -> None:
    """Versioned flat text dump; structures diffable across implementations."""
    out.write("labeldist-static-oracle v1\n")
    out.write(f"n {o.n} l {o.labels.label_count} k {o.k} seed {o.seed} p {o.p!r}\n")
    out.write("labels " + " ".join(str(x) for x in o.labels.label_of) + "\n")
    for lvl in o.sampling.levels:
        out.write("level " + " ".join(str(v) for v in lvl) + "\n")
    out.write("pivots\n")
    for v in range(o.n):
        for i, (piv, d) in enumerate(o.bunches.pivots[v]):
            out.write(f"{v} {i} {-1 if piv is None else piv} {d!r}\n")
    out.write("bunches\n")
    for v in range(o.n):
        for u in sorted(o.bunches.bunch[v]):
            out.write(f"{v} {u} {o.bunches.bunch[v][u]!r}\n")
    out.write("label-bunches\n")
    for lam, row in enumerate(o.label_bunch):
        for x in sorted(row):
            out.write(f"{lam} {x} {row[x]!r}\n")
    out.write("top-table\n")
    for (v, lam) in sorted(o.top_table):
        out.write(f"{v} {lam} {o.top_table[(v, lam)]!r}\n")
    out.write("end\n")


def load_static_oracle(inp) -> StaticOracle:
    lines = [ln.rstrip("\n") for ln in inp]
    if not lines or lines[0] != "labeldist-static-oracle v1":
        raise OracleError("unrecognized oracle dump")
    head = lines[1].split()
    n, l, k, seed = int(head[1]), int(head[3]), int(head[5]), int(head[7])
    p = float(head[9])
    labels_toks = lines[2].split()
    labels = LabelAssignment([int(t) for t in labels_toks[1:]], l)
    levels = []
    idx = 3
    for _ in range(k):
        toks = lines[idx].split()
        if toks[0] != "level":
            raise OracleError("missing level line")
        levels.append([int(t) for t in toks[1:]])
        idx += 1
    level_of = [0] * n
    for i in range(1, k):
        for v in levels[i]:
            level_of[v] = i
    sampling = LevelSampling(k=k, p=p, seed=seed, levels=levels, level_of=level_of)
    if lines[idx] != "pivots":
        raise OracleError("missing pivots section")
    idx += 1
    pivots: list[list[tuple[int | None, float]]] = [[(None, INF)] * k for _ in range(n)]
    for v in range(n):
        pivots[v] = list(pivots[v])
    while lines[idx] != "bunches":
        v, i, piv, d = lines[idx].split()
        pivots[int(v)][int(i)] = (None if piv == "-1" else int(piv), float(d))
        idx += 1
    idx += 1
    bunch: list[dict[int, float]] = [{} for _ in range(n)]
    while lines[idx] != "label-bunches":
        v, u, d = lines[idx].split()
        bunch[int(v)][int(u)] = float(d)
        idx += 1
    idx += 1
    label_bunch: list[dict[int, float]] = [{} for _ in range(l)]
    while lines[idx] != "top-table":
        lam, x, d = lines[idx].split()
        label_bunch[int(lam)][int(x)] = float(d)
        idx += 1
    idx += 1
    top_table: dict[tuple[int, int], float] = {}
    while lines[idx] != "end":
        v, lam, d = lines[idx].split()
        top_table[(int(v), int(lam))] = float(d)
        idx += 1
    bunches = BunchSet(pivots=pivots, bunch=bunch)
    return StaticOracle(n=n, k=k, p=p, seed=seed, sampling=sampling, bunches=bunches,
                        label_bunch=label_bunch, top_table=top_table, labels=labels)
