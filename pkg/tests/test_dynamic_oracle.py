import random

import pytest

from labeldist.dynamic_oracle import (LabelHeap, build_dynamic,
                                      dynamic_from_components, dynamic_query,
                                      update_label)
from labeldist.exact import build_exact
from labeldist.generators import ExperimentConfig, generate
from labeldist.graph import INF, Graph, GraphError, LabelAssignment
from labeldist.static_oracle import LevelSampling, build_bunches

from oracles import brute_bunches


def manual_sampling(n, levels):
    k = len(levels)
    level_of = [0] * n
    for i in range(1, k):
        for v in levels[i]:
            level_of[v] = i
    return LevelSampling(k=k, p=0.5, seed=0, levels=levels, level_of=level_of)


def random_instance(seed, n=50, m=120, l=6):
    config = ExperimentConfig(generator=f"gnm:{n}:{m}", weights="uniform:1:5",
                              labels=f"uniform:{l}")
    return generate(config, seed)


# ---------------------------------------------------------------- LabelHeap

def test_heap_minimum_tie_breaks_to_smaller_node():
    h = LabelHeap()
    h.insert(7, 2.0)
    h.insert(3, 2.0)
    h.insert(9, 5.0)
    assert h.minimum() == (3, 2.0)
    h.remove(3)
    assert h.minimum() == (7, 2.0)
    h.remove(7)
    h.remove(9)
    assert len(h) == 0
    with pytest.raises(GraphError, match="empty heap"):
        h.minimum()


def test_heap_reinsert_after_remove():
    h = LabelHeap()
    h.insert(1, 3.0)
    h.remove(1)
    h.insert(1, 3.0)
    assert h.minimum() == (1, 3.0)
    with pytest.raises(GraphError, match="already present"):
        h.insert(1, 4.0)


# ---------------------------------------------------------------- build

def test_heaps_are_the_inverse_bunch_index():
    g = Graph(5, [(i, i + 1, 1) for i in range(4)])
    labels = LabelAssignment([0, 1, 1, 1, 1], 2)  # class A = {0}
    s = manual_sampling(5, [list(range(5)), [4]])
    bunches = build_bunches(g, s, include_top_level=True)
    oracle = dynamic_from_components(g, labels, s, bunches)
    # Heap(1, A) holds node 0 iff 1 is in B(0)
    assert (1 in bunches.bunch[0]) == (1 in oracle.label_index[0]
                                       and 0 in oracle.label_index[0][1].contents())
    # global inverse-index property
    pairs = {(x, v) for v in range(5) for x in bunches.bunch[v]}
    heap_pairs = set()
    for lam, idx in enumerate(oracle.label_index):
        for x, heap in idx.items():
            for v, key in heap.contents().items():
                assert labels.label_of[v] == lam
                assert key == bunches.bunch[v][x]
                heap_pairs.add((x, v))
    assert heap_pairs == pairs


def test_full_bunches_match_set_definition():
    g, labels = random_instance(1, n=30, m=70, l=4)
    oracle = build_dynamic(g, labels, k=2, seed=3)
    assert oracle.bunches.bunch == brute_bunches(g, oracle.sampling.levels, include_top=True)


def test_k1_bunches_cover_reachable_nodes_and_queries_exact():
    g, labels = random_instance(2, n=30, m=60, l=4)
    oracle = build_dynamic(g, labels, k=1, seed=3)
    exact = build_exact(g, labels)
    for v in range(30):
        for lam in range(4):
            assert dynamic_query(oracle, v, lam) == exact.dist[v][lam]


def test_no_empty_heaps_retained():
    g, labels = random_instance(3, n=30, m=70, l=4)
    oracle = build_dynamic(g, labels, k=2, seed=5)
    rng = random.Random(0)
    for _ in range(60):
        update_label(oracle, rng.randrange(30), rng.randrange(4))
        for idx in oracle.label_index:
            assert all(len(h) > 0 for h in idx.values())


# ---------------------------------------------------------------- updates

def test_update_to_same_label_is_noop():
    g, labels = random_instance(4, n=25, m=60, l=4)
    oracle = build_dynamic(g, labels, k=2, seed=1)
    before = oracle.snapshot()
    v = 7
    update_label(oracle, v, oracle.labeling.label_of[v])
    assert oracle.snapshot() == before
    assert oracle.last_update_pairs == 0


def test_update_rebuild_equivalence():
    g, labels = random_instance(5, n=40, m=100, l=5)
    oracle = build_dynamic(g, labels, k=3, seed=11)
    rng = random.Random(42)
    for _ in range(50):
        v = rng.randrange(40)
        update_label(oracle, v, rng.randrange(5))
        rebuilt = dynamic_from_components(g, oracle.labeling, oracle.sampling,
                                          oracle.bunches)
        assert rebuilt.snapshot() == oracle.snapshot()


def test_update_sequence_is_reversible():
    g, labels = random_instance(6, n=40, m=100, l=5)
    oracle = build_dynamic(g, labels, k=2, seed=2)
    original = oracle.snapshot()
    rng = random.Random(7)
    trace = []
    for _ in range(100):
        v = rng.randrange(40)
        trace.append((v, oracle.labeling.label_of[v]))
        update_label(oracle, v, rng.randrange(5))
    for v, lam in reversed(trace):
        update_label(oracle, v, lam)
    assert oracle.snapshot() == original
    assert oracle.labeling == labels


def test_update_touches_exactly_bunch_size_pairs():
    g, labels = random_instance(7, n=40, m=100, l=5)
    oracle = build_dynamic(g, labels, k=2, seed=9)
    rng = random.Random(1)
    for _ in range(40):
        v = rng.randrange(40)
        lam = rng.randrange(5)
        ins0, rem0 = oracle.insert_ops, oracle.remove_ops
        changed = oracle.labeling.label_of[v] != lam
        update_label(oracle, v, lam)
        expected = len(oracle.bunches.bunch[v]) if changed else 0
        assert oracle.last_update_pairs == expected
        assert oracle.insert_ops - ins0 == expected
        assert oracle.remove_ops - rem0 == expected


# ---------------------------------------------------------------- queries

def test_self_label_query_is_zero():
    g, labels = random_instance(8, n=30, m=80, l=4)
    oracle = build_dynamic(g, labels, k=3, seed=4)
    for v in range(30):
        assert dynamic_query(oracle, v, oracle.labeling.label_of[v]) == 0.0
    update_label(oracle, 3, (labels.label_of[3] + 1) % 4)
    assert dynamic_query(oracle, 3, oracle.labeling.label_of[3]) == 0.0


def test_soundness_and_stretch_under_updates():
    g, labels = random_instance(9, n=50, m=130, l=5)
    for k in (2, 3):
        bound = 4 * k - 3
        oracle = build_dynamic(g, labels, k=k, seed=21)
        rng = random.Random(k)
        for step in range(30):
            update_label(oracle, rng.randrange(50), rng.randrange(5))
            exact = build_exact(g, oracle.labeling)
            for v in range(50):
                for lam in range(5):
                    e = exact.dist[v][lam]
                    a = dynamic_query(oracle, v, lam)
                    if e == INF:
                        assert a == INF
                    else:
                        assert e <= a <= bound * e
