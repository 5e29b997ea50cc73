"""Seeded graph and label generators for experiments and tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph import Graph, GraphError, LabelAssignment, read_graph

LABEL_REDRAW_BUDGET = 1000


@dataclass
class ExperimentConfig:
    """Generator spec strings: ``gnm:N:M``, ``grid:W:H``, ``path:N``, ``file:PATH``;
    weights ``unit`` or ``uniform:LO:HI``; labels ``uniform:L`` or ``clustered:L:PATCH``."""

    generator: str
    weights: str = "unit"
    labels: str = "uniform:1"
    k: int = 2
    eps: float = 0.5
    seeds: list[int] = field(default_factory=lambda: [0])


def _parts(spec: str):
    return spec.split(":")


def gnm_edges(n: int, m: int, rng: random.Random) -> list[tuple[int, int]]:
    """m distinct non-loop pairs drawn uniformly (rejection sampling)."""
    if n < 0 or m < 0:
        raise GraphError("negative size")
    if m > n * (n - 1) // 2:
        raise GraphError(f"m={m} exceeds the {n * (n - 1) // 2} possible edges")
    chosen: set[tuple[int, int]] = set()
    order = []
    while len(chosen) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in chosen:
            continue
        chosen.add(key)
        order.append(key)
    return order


def grid_edges(w: int, h: int) -> list[tuple[int, int]]:
    """4-neighbor grid, node (r, c) -> r*w + c; 2wh - w - h edges."""
    edges = []
    for r in range(h):
        for c in range(w):
            v = r * w + c
            if c + 1 < w:
                edges.append((v, v + 1))
            if r + 1 < h:
                edges.append((v, v + w))
    return edges


def path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def _apply_weights(pairs, model: str, rng: random.Random):
    parts = _parts(model)
    if parts[0] == "unit":
        return [(u, v, 1.0) for u, v in pairs]
    if parts[0] == "uniform":
        lo, hi = float(parts[1]), float(parts[2])
        if lo < 1:
            raise GraphError("uniform weight lower bound must be >= 1")
        if hi < lo:
            raise GraphError("empty weight range")
        # Weights snap to a 1/64 grid: path sums then stay exact in doubles,
        # so soundness/stretch comparisons are arithmetic, not ulp-sensitive.
        return [(u, v, round(rng.uniform(lo, hi) * 64.0) / 64.0) for u, v in pairs]
    raise GraphError(f"unknown weight model {model!r}")


def _assign_labels(n: int, model: str, rng: random.Random) -> LabelAssignment:
    parts = _parts(model)
    if parts[0] == "uniform":
        l = int(parts[1])
        if l > n:
            raise GraphError(f"label count {l} exceeds node count {n}")
        for _ in range(LABEL_REDRAW_BUDGET):
            label_of = [rng.randrange(l) for _ in range(n)]
            if len(set(label_of)) == l:
                return LabelAssignment(label_of, l)
        raise GraphError("could not draw an assignment with all classes non-empty")
    if parts[0] == "clustered":
        l, patch = int(parts[1]), int(parts[2])
        if patch < 1:
            raise GraphError("patch size must be >= 1")
        label_of = [(v // patch) % l for v in range(n)]
        if len(set(label_of)) != l:
            raise GraphError("clustered labeling leaves empty classes")
        return LabelAssignment(label_of, l)
    raise GraphError(f"unknown label model {model!r}")


def generate(config: ExperimentConfig, seed: int) -> tuple[Graph, LabelAssignment]:
    """Deterministic instance for (config, seed): topology, then weights, then labels."""
    parts = _parts(config.generator)
    kind = parts[0]
    if kind == "file":
        return read_graph(":".join(parts[1:]))
    rng = random.Random(seed)
    if kind == "gnm":
        n, m = int(parts[1]), int(parts[2])
        pairs = gnm_edges(n, m, rng)
    elif kind == "grid":
        w, h = int(parts[1]), int(parts[2])
        n = w * h
        pairs = grid_edges(w, h)
    elif kind == "path":
        n = int(parts[1])
        pairs = path_edges(n)
    else:
        raise GraphError(f"unknown generator {config.generator!r}")
    g = Graph(n, _apply_weights(pairs, config.weights, rng))
    labels = _assign_labels(n, config.labels, rng)
    return g, labels
