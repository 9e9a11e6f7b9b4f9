from __future__ import annotations

import random

from sepgraph import catalog
from sepgraph.oracle import geodesic_compatible
from sepgraph.paths import format_path
from sepgraph.trees import (classify, enumerate_trees, exits, format_tree, is_c_compatible,
                            neighborhood, parse_tree, reduce_tree, total_length, vertex_tree)

from conftest import T


def names(paths):
    return sorted(format_path(p) for p in paths)


def test_compatibility_examples():
    assert not is_c_compatible(T(catalog.get("G3"), "{a, b}"))
    assert is_c_compatible(T(catalog.get("G4"), "{a, c}"))
    assert is_c_compatible(vertex_tree(catalog.get("G3"), "v"))


def test_reduce_examples():
    g3, g2, g4 = catalog.get("G3"), catalog.get("G2"), catalog.get("G4")
    assert reduce_tree(T(g3, "{a.b~}")) == T(g3, "{a}")
    assert reduce_tree(T(g2, "{a.b}"), g2.singleton_edges()) == vertex_tree(g2, "v")
    t = T(g4, "{a, c}")
    assert reduce_tree(t, g4.singleton_edges()) == t


def test_classify_examples():
    assert classify(T(catalog.get("G5"), "{e}")) == {"in_Y": True, "in_Y0": True, "in_YL": False}
    assert classify(T(catalog.get("G4"), "{a, c}")) == {"in_Y": True, "in_Y0": True, "in_YL": True}
    assert classify(T(catalog.get("G3"), "{a, b}")) == {"in_Y": False, "in_Y0": False, "in_YL": False}
    flags = classify(T(catalog.get("G5"), "{e}"), S=[("v", 0)])
    assert flags["in_YS"] is False


def test_neighbourhood_examples():
    els, finite = neighborhood(vertex_tree(catalog.get("G2"), "v"))
    assert not finite
    assert neighborhood(T(catalog.get("G4"), "{a, c}")) == ([], True)
    els, finite = neighborhood(vertex_tree(catalog.get("G1"), "u"))
    assert finite and names(els) == ["a"]


def test_exit_examples():
    g4, g3 = catalog.get("G4"), catalog.get("G3")
    assert names(exits(vertex_tree(g4, "v"))[0]) == ["a", "b", "c", "d"]
    assert exits(T(g4, "{a, c}"))[0] == []
    assert names(exits(T(g3, "{a}"))[0]) == ["a.a", "a.b"]


def test_sink_singletons_have_exits():
    els, _ = exits(vertex_tree(catalog.get("G4"), "w1"))
    assert names(els) == ["a~.c", "a~.d"]


def test_total_length():
    g4, g3 = catalog.get("G4"), catalog.get("G3")
    assert total_length(vertex_tree(g4, "v")) == 0
    assert total_length(T(g4, "{a, c}")) == 2
    assert total_length(T(g3, "{a.b~}")) == 2


def test_literal_round_trip(small_graph):
    for t in enumerate_trees(small_graph, 4):
        assert parse_tree(small_graph, format_tree(t), root=t.root) == t


def test_local_criterion_matches_geodesics(small_graph):
    for t in enumerate_trees(small_graph, 6, compatible=False):
        assert is_c_compatible(t) == geodesic_compatible(t.nodes)


def test_reduction_laws(small_graph):
    rng = random.Random(7)
    U = small_graph.singleton_edges()
    trees = enumerate_trees(small_graph, 5)
    for t in trees:
        r = reduce_tree(t, U)
        assert r.nodes <= t.nodes and reduce_tree(r, U) == r
        # a one-step inflation by an inverse letter or a U-edge has the same reduction
        p = rng.choice(sorted(t.nodes))
        for x in [(e, True) for e in small_graph.in_edges(p.end)] + \
                 [(e, False) for e in small_graph.out_edges(p.end) if e in U]:
            if p.word and p.word[-1] == (x[0], not x[1]):
                continue
            bigger = t.with_paths([p.child(x)])
            assert reduce_tree(bigger, U) == r


def test_compatibility_saturation(small_graph):
    U = small_graph.singleton_edges()
    for t in enumerate_trees(small_graph, 5, compatible=False):
        if is_c_compatible(reduce_tree(t, U)):
            assert is_c_compatible(t)


def test_finiteness_agrees_with_deeper_listing(small_graph):
    # when the walk is finite, a deeper cut must not find anything new
    for t in enumerate_trees(small_graph, 3):
        if classify(t)["in_Y0"]:
            els, finite = neighborhood(t, 2)
            if finite:
                assert neighborhood(t, 6)[0] == els
