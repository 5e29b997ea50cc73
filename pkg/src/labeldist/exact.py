"""Exact node-to-label distance table: the ground truth everything is checked against."""

from __future__ import annotations

from .graph import INF, DistanceMap, Graph, GraphError, LabelAssignment, dijkstra


class ExactLabelTable:
    """n x l table of true node-to-label distances with nearest witnesses."""

    __slots__ = ("node_count", "label_count", "dist", "witness")

    def __init__(self, node_count, label_count, dist, witness):
        self.node_count = node_count
        self.label_count = label_count
        self.dist = dist        # dist[v][lam]
        self.witness = witness  # nearest lam-labeled node, smallest id on ties


def label_distance_maps(g: Graph, labels: LabelAssignment) -> dict[int, DistanceMap]:
    """One multi-source run per non-empty label class, over the alive graph."""
    maps = {}
    for lam, members in enumerate(labels.classes):
        if members:
            maps[lam] = dijkstra(g, members)
    return maps


def build_exact(g: Graph, labels: LabelAssignment) -> ExactLabelTable:
    n = g.node_count
    l = labels.label_count
    dist = [[INF] * l for _ in range(n)]
    witness: list[list[int | None]] = [[None] * l for _ in range(n)]
    for lam, dm in label_distance_maps(g, labels).items():
        dmd = dm.dist
        dms = dm.source_of
        for v in range(n):
            dist[v][lam] = dmd[v]
            witness[v][lam] = dms[v]
    return ExactLabelTable(n, l, dist, witness)


def exact_query(t: ExactLabelTable, v: int, lam: int) -> tuple[float, int | None]:
    if not (0 <= v < t.node_count):
        raise GraphError(f"node {v} out of range")
    if not (0 <= lam < t.label_count):
        raise GraphError(f"label {lam} out of range")
    return t.dist[v][lam], t.witness[v][lam]


def dump_csv(t: ExactLabelTable, out) -> None:
    """Write the table as ``v,label,dist`` rows for offline diffing."""
    out.write("v,label,dist\n")
    for v in range(t.node_count):
        row = t.dist[v]
        for lam in range(t.label_count):
            out.write(f"{v},{lam},{row[lam]!r}\n")
