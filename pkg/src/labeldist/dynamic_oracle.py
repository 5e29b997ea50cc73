"""Label-dynamic vertex-label distance oracle.

Full (all-level) bunches over a hierarchy sampled with p = (n/ln n)^(-1/k),
plus one priority structure per (node, label): Heap(v, lam) holds every
lam-labeled node whose bunch contains v, keyed by distance. A label change
touches exactly the heaps of the relabeled node's bunch; queries take the
minimum over all levels (no early exit).
"""

from __future__ import annotations

import heapq
import math

from .graph import INF, Graph, GraphError, LabelAssignment
from .static_oracle import BunchSet, LevelSampling, OracleError, build_bunches, sample_levels


class LabelHeap:
    """Min-heap keyed by distance with remove-by-node; ties -> smallest node id."""

    __slots__ = ("_alive", "_heap")

    def __init__(self):
        self._alive: dict[int, float] = {}
        self._heap: list[tuple[float, int]] = []

    def insert(self, node: int, key: float) -> None:
        if node in self._alive:
            raise GraphError(f"node {node} already present")
        self._alive[node] = key
        heapq.heappush(self._heap, (key, node))

    def remove(self, node: int) -> None:
        del self._alive[node]  # stale heap entries are pruned lazily

    def minimum(self) -> tuple[int, float]:
        heap = self._heap
        alive = self._alive
        while heap and alive.get(heap[0][1]) != heap[0][0]:
            heapq.heappop(heap)
        if not heap:
            raise GraphError("empty heap")
        key, node = heap[0]
        return node, key

    def contents(self) -> dict[int, float]:
        return dict(self._alive)

    def __len__(self) -> int:
        return len(self._alive)


class DynamicOracle:
    """Mutable-labeling oracle; only the label index changes on updates."""

    __slots__ = ("graph", "k", "p", "seed", "sampling", "bunches", "labeling",
                 "label_index", "insert_ops", "remove_ops", "last_update_pairs")

    def __init__(self, graph, k, p, seed, sampling, bunches, labeling, label_index):
        self.graph = graph
        self.k = k
        self.p = p
        self.seed = seed
        self.sampling = sampling
        self.bunches = bunches
        self.labeling = labeling
        self.label_index = label_index  # [lam] -> {x: LabelHeap} with key set = B(lam)
        self.insert_ops = 0
        self.remove_ops = 0
        self.last_update_pairs = 0

    def max_bunch_size(self) -> int:
        return max((len(b) for b in self.bunches.bunch), default=0)

    def entry_count(self) -> int:
        """Heap entries + bunch entries + pivots."""
        total = sum(len(h) for idx in self.label_index for h in idx.values())
        total += sum(len(b) for b in self.bunches.bunch)
        total += self.graph.node_count * self.k
        return total

    def snapshot(self) -> list[dict[int, dict[int, float]]]:
        """Per-label heap contents, for rebuild-equivalence comparison."""
        return [{x: h.contents() for x, h in idx.items()} for idx in self.label_index]


def dynamic_from_components(g: Graph, labels: LabelAssignment, sampling: LevelSampling,
                            bunches: BunchSet) -> DynamicOracle:
    """Assemble the heaps for a given hierarchy; used for rebuild checks."""
    label_index: list[dict[int, LabelHeap]] = [{} for _ in range(labels.label_count)]
    for v in range(g.node_count):
        idx = label_index[labels.label_of[v]]
        for x, d in bunches.bunch[v].items():
            heap = idx.get(x)
            if heap is None:
                heap = idx[x] = LabelHeap()
            heap.insert(v, d)
    return DynamicOracle(graph=g, k=sampling.k, p=sampling.p, seed=sampling.seed,
                         sampling=sampling, bunches=bunches, labeling=labels.copy(),
                         label_index=label_index)


def build_dynamic(g: Graph, labels: LabelAssignment, k: int, seed: int) -> DynamicOracle:
    if k < 1:
        raise OracleError("k must be >= 1")
    n = g.node_count
    if n < 2:
        raise OracleError("need at least two nodes")
    p = (n / math.log(n)) ** (-1.0 / k)
    sampling = sample_levels(n, k, p, seed)
    bunches = build_bunches(g, sampling, include_top_level=True)
    return dynamic_from_components(g, labels, sampling, bunches)


def update_label(o: DynamicOracle, v: int, lam_new: int) -> None:
    """Relabel ``v``; touches exactly one remove+insert pair per bunch member."""
    if not (0 <= v < o.graph.node_count):
        raise GraphError(f"node {v} out of range")
    if not (0 <= lam_new < o.labeling.label_count):
        raise GraphError(f"label {lam_new} out of range")
    lam_old = o.labeling.label_of[v]
    if lam_new == lam_old:
        o.last_update_pairs = 0
        return
    idx_old = o.label_index[lam_old]
    idx_new = o.label_index[lam_new]
    for x, d in o.bunches.bunch[v].items():
        heap = idx_old[x]
        heap.remove(v)
        o.remove_ops += 1
        if not heap:
            del idx_old[x]
        heap = idx_new.get(x)
        if heap is None:
            heap = idx_new[x] = LabelHeap()
        heap.insert(v, d)
        o.insert_ops += 1
    o.labeling.relabel(v, lam_new)
    o.last_update_pairs = len(o.bunches.bunch[v])


def dynamic_query(o: DynamicOracle, v: int, lam: int) -> float:
    """Minimum over all levels of dist(v, pivot) + pivot's nearest lam key.

    Every level must be checked: the first pivot present in the label's
    index need not hold the globally best candidate.
    """
    if not (0 <= v < o.graph.node_count):
        raise GraphError(f"node {v} out of range")
    if not (0 <= lam < o.labeling.label_count):
        raise GraphError(f"label {lam} out of range")
    idx = o.label_index[lam]
    best = INF
    for piv, dpv in o.bunches.pivots[v]:
        if piv is None:
            continue
        heap = idx.get(piv)
        if heap is None:
            continue
        _, key = heap.minimum()
        cand = dpv + key
        if cand < best:
            best = cand
    return best
