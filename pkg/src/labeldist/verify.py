"""Verification harness: exhaustive node-label sweeps against the exact table.

Reports are JSON-ready dicts with deterministic content for a fixed config
and seed; wall-clock measurements live under the separate "timing" key,
which is excluded from the determinism guarantee.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from .dynamic_oracle import (build_dynamic, dynamic_from_components,
                             dynamic_query, update_label)
from .exact import build_exact, label_distance_maps
from .graph import INF, Graph, GraphError, LabelAssignment, extract_path
from .spanner import (SpannerResult, as_subgraph, build_unweighted_spanner,
                      build_weighted_spanner)
from .static_oracle import build_static_oracle, static_query

PAIR_CAP = 10 ** 6
SAMPLE_SIZE = 10 ** 5


@dataclass
class VerifyReport:
    mode: str
    params: dict
    checks: dict
    aggregates: dict
    records: list
    sampled: bool
    passed: bool
    timing: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "params": self.params,
            "checks": self.checks,
            "aggregates": self.aggregates,
            "records": self.records,
            "sampled": self.sampled,
            "pass": self.passed,
            "timing": self.timing,
        }


def _pair_sweep(n: int, l: int, pair_seed: int = 0) -> tuple[list[tuple[int, int]], bool]:
    """All (v, label) pairs, or a seeded 1e5 sample past the 1e6 cap."""
    total = n * l
    if total <= PAIR_CAP:
        return [(v, lam) for v in range(n) for lam in range(l)], False
    rng = random.Random(pair_seed)
    picks = rng.sample(range(total), SAMPLE_SIZE)
    return sorted((i // l, i % l) for i in picks), True


def _check_pair(exact_d: float, answer: float, bound: float) -> tuple[bool, float]:
    """(within bounds, ratio); never undershoots and never over-stretches."""
    if exact_d == INF:
        return answer == INF, 1.0
    if exact_d == 0.0:
        return answer == 0.0, 1.0
    return exact_d <= answer <= bound * exact_d, answer / exact_d


def parse_script(text: str) -> list[tuple[str, int, int]]:
    """Update/query scripts: one ``U v lam`` or ``Q v lam`` per line."""
    ops = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        toks = ln.split()
        if len(toks) != 3 or toks[0] not in ("U", "Q"):
            raise GraphError(f"bad script line {ln!r}")
        ops.append((toks[0], int(toks[1]), int(toks[2])))
    return ops


def verify_oracle(g: Graph, labels: LabelAssignment, mode: str, k: int, seeds,
                  script=None, pair_seed: int = 0) -> VerifyReport:
    t0 = time.perf_counter()
    if mode == "static":
        report = _verify_static(g, labels, k, seeds, pair_seed)
    elif mode == "dynamic":
        report = _verify_dynamic(g, labels, k, seeds, script or [], pair_seed)
    else:
        raise GraphError(f"unknown mode {mode!r}")
    report.timing["wall_time_s"] = time.perf_counter() - t0
    return report


def _verify_static(g, labels, k, seeds, pair_seed) -> VerifyReport:
    bound = 4 * k - 3
    exact = build_exact(g, labels)
    pairs, sampled = _pair_sweep(g.node_count, labels.label_count, pair_seed)
    records = []
    violations = 0
    max_ratio = 0.0
    ratio_sum = 0.0
    ratio_cnt = 0
    entries = []
    for seed in seeds:
        oracle = build_static_oracle(g, labels, k, seed)
        entries.append(oracle.entry_count())
        for v, lam in pairs:
            e = exact.dist[v][lam]
            a = static_query(oracle, v, lam)
            ok, ratio = _check_pair(e, a, bound)
            if not ok:
                violations += 1
            if ratio > max_ratio:
                max_ratio = ratio
            ratio_sum += ratio
            ratio_cnt += 1
            records.append([seed, v, lam, e, a, ratio])
    checks = {"stretch_bound": violations == 0}
    aggregates = {
        "bound": float(bound),
        "violations": violations,
        "max_ratio": max_ratio,
        "mean_ratio": ratio_sum / max(ratio_cnt, 1),
        "structure_entries": entries,
        "pairs_checked": len(pairs) * len(list(seeds)),
    }
    return VerifyReport(mode="static", params={"k": k, "seeds": list(seeds)},
                        checks=checks, aggregates=aggregates, records=records,
                        sampled=sampled, passed=all(checks.values()))


def _sweep_dynamic(oracle, exact, pairs, bound):
    violations = 0
    max_ratio = 0.0
    for v, lam in pairs:
        ok, ratio = _check_pair(exact.dist[v][lam], dynamic_query(oracle, v, lam), bound)
        if not ok:
            violations += 1
        if ratio > max_ratio:
            max_ratio = ratio
    return violations, max_ratio


def _verify_dynamic(g, labels, k, seeds, script, pair_seed) -> VerifyReport:
    bound = 4 * k - 3
    pairs, sampled = _pair_sweep(g.node_count, labels.label_count, pair_seed)
    records = []
    violations = 0
    max_ratio = 0.0
    equivalence_ok = True
    update_cost_ok = True
    updates = 0
    for seed in seeds:
        oracle = build_dynamic(g, labels, k, seed)
        exact = build_exact(g, oracle.labeling)
        vio, mr = _sweep_dynamic(oracle, exact, pairs, bound)
        violations += vio
        max_ratio = max(max_ratio, mr)
        for op, v, lam in script:
            if op == "U":
                before = len(oracle.bunches.bunch[v]) if oracle.labeling.label_of[v] != lam else 0
                update_label(oracle, v, lam)
                updates += 1
                if oracle.last_update_pairs != before:
                    update_cost_ok = False
                # full re-verification against a freshly rebuilt exact table
                exact = build_exact(g, oracle.labeling)
                vio, mr = _sweep_dynamic(oracle, exact, pairs, bound)
                violations += vio
                max_ratio = max(max_ratio, mr)
                rebuilt = dynamic_from_components(g, oracle.labeling, oracle.sampling,
                                                  oracle.bunches)
                if rebuilt.snapshot() != oracle.snapshot():
                    equivalence_ok = False
            else:
                e = exact.dist[v][lam]
                a = dynamic_query(oracle, v, lam)
                ok, ratio = _check_pair(e, a, bound)
                if not ok:
                    violations += 1
                max_ratio = max(max_ratio, ratio)
                records.append([seed, v, lam, e, a, ratio])
    checks = {"stretch_bound": violations == 0,
              "rebuild_equivalence": equivalence_ok,
              "update_cost": update_cost_ok}
    aggregates = {
        "bound": float(bound),
        "violations": violations,
        "max_ratio": max_ratio,
        "updates_applied": updates,
        "pairs_per_sweep": len(pairs),
    }
    return VerifyReport(mode="dynamic", params={"k": k, "seeds": list(seeds),
                                                "script_ops": len(script)},
                        checks=checks, aggregates=aggregates, records=records,
                        sampled=sampled, passed=all(checks.values()))


def verify_spanner(g: Graph, labels: LabelAssignment, k: int, eps: float,
                   weighted: bool, pair_seed: int = 0,
                   result: SpannerResult | None = None) -> VerifyReport:
    t0 = time.perf_counter()
    n = g.node_count
    l = labels.label_count
    bound = (4 * k + 1) * (1 + eps)
    if result is None:
        if weighted:
            result = build_weighted_spanner(g, labels, k, eps)
        else:
            result = build_unweighted_spanner(g, labels, k, eps)
    hg = as_subgraph(g, result.edges)
    subgraph_ok = all(g.has_edge(u, v) for u, v in result.edges)

    exact_g = build_exact(g, labels)
    exact_h = build_exact(hg, labels)
    pairs, sampled = _pair_sweep(n, l, pair_seed)
    records = []
    violations = 0
    max_ratio = 0.0
    for v, lam in pairs:
        e = exact_g.dist[v][lam]
        a = exact_h.dist[v][lam]
        ok, ratio = _check_pair(e, a, bound)
        if not ok:
            violations += 1
        if ratio > max_ratio:
            max_ratio = ratio
        records.append([v, lam, e, a, ratio])

    unit = n * (l ** (1.0 / k))
    per_cover = [
        {"d": run.d, "x": run.x, "edge_count": run.edge_count,
         "stage_counters": dict(run.stage_counters), "centers": len(run.centers)}
        for run in result.invocations
    ]
    cover_constant = max((run.edge_count / unit for run in result.invocations), default=0.0)

    per_scale_ok = True
    if not weighted:
        for run in result.invocations:
            hd = as_subgraph(g, run.edges)
            exact_hd = build_exact(hd, labels)
            cap = (4 * k + 1) * run.d
            for v, lam in pairs:
                if exact_g.dist[v][lam] <= run.d and exact_hd.dist[v][lam] > cap:
                    per_scale_ok = False
    else:
        per_scale_ok = _check_home_cells(g, labels, exact_g, result, k)

    checks = {"subgraph": subgraph_ok, "stretch_bound": violations == 0,
              "per_cover_guarantee": per_scale_ok}
    aggregates = {
        "bound": bound,
        "violations": violations,
        "max_ratio": max_ratio,
        "edge_count": len(result.edges),
        "graph_edge_count": g.edge_count,
        "cover_constant": cover_constant,
        "scale_count": len(result.params["d_values"]),
        "budget_count": len(result.params["x_values"] or []) or None,
        "per_cover": per_cover,
    }
    report = VerifyReport(mode="spanner", params={"k": k, "eps": eps, "weighted": weighted},
                          checks=checks, aggregates=aggregates, records=records,
                          sampled=sampled, passed=all(checks.values()))
    report.timing["wall_time_s"] = time.perf_counter() - t0
    return report


def _check_home_cells(g, labels, exact_g, result: SpannerResult, k: int) -> bool:
    """Every pair's canonical shortest path lands in one (scale, budget) cell;
    that cell's cover alone must serve the pair within (4k+1)*scale."""
    scales = result.params["d_values"]
    budgets = result.params["x_values"]
    runs = {(run.d, run.x): run for run in result.invocations}
    label_maps = label_distance_maps(g, labels)
    cell_pairs: dict[tuple[float, int], list[tuple[int, int]]] = {}
    for v in range(g.node_count):
        for lam, dm in label_maps.items():
            dist = dm.dist[v]
            if dist == INF or dist == 0.0:
                continue
            hops = len(extract_path(dm, v))
            d = next(s for s in scales if s >= dist)
            x = budgets[int(math.floor(math.log2(hops)))]
            cell_pairs.setdefault((d, x), []).append((v, lam))
    ok = True
    for (d, x), pair_list in sorted(cell_pairs.items()):
        sub = as_subgraph(g, runs[(d, x)].edges)
        exact_cell = build_exact(sub, labels)
        cap = (4 * k + 1) * d
        for v, lam in pair_list:
            if exact_cell.dist[v][lam] > cap:
                ok = False
    return ok
