from __future__ import annotations

import itertools

import pytest

from sepgraph import catalog
from sepgraph.algebra import Algebra
from sepgraph.graph import parse_graph
from sepgraph.socle import (check_ecb_image, cohn_socle, ecb_search, filtration_check,
                            fim_orbit_check, fim_report, format_munn, isolated_points,
                            isotropy_trivial, matrix_unit, maxima_at_sinks, munn_classes,
                            munn_trees, orbit, orbit_dot, socle_report)
from sepgraph.paths import format_path
from sepgraph.trees import exits, format_tree, has_exits

from conftest import T

GRAPHS = ["G1", "G2", "G3", "G4", "G5", "line3", "loop1"]


def names(trees):
    return [format_tree(t) for t in trees]


def test_isolated_points_examples():
    assert names(isolated_points(catalog.get("G3"), 1)) == []
    g2 = catalog.get("G2")
    assert names(isolated_points(g2, 3)) == ["{v}"]
    assert not isotropy_trivial(orbit(isolated_points(g2, 3)[0]))
    g4 = catalog.get("G4")
    iso = names(isolated_points(g4, 2))
    assert {"{a, c}", "{a, d}", "{b, c}", "{b, d}"} <= set(iso)
    assert not any(s.startswith("{w") for s in iso)
    assert sorted(format_path(p) for p in exits(T(g4, "{w1}"))[0]) == ["a~.c", "a~.d"]


def test_orbit_g4():
    g = catalog.get("G4")
    og = orbit(T(g, "{a, c}"))
    assert names(og.nodes) == ["{a, c}", "{a~.c}", "{c~.a}"]
    assert len(og.edges) == 2 and isotropy_trivial(og)


def test_orbit_g1():
    g = catalog.get("G1")
    og = orbit(isolated_points(g, 2)[0])
    assert sorted(names(og.nodes)) == ["{u}", "{w}"]
    assert isotropy_trivial(og)


def test_single_loop_has_isotropy():
    g = parse_graph("vertex v\nedge a v v\npartition v { a }\n")
    pts = isolated_points(g, 2)
    assert names(pts) == ["{v}"]
    assert not isotropy_trivial(orbit(pts[0]))
    assert socle_report(g, 2) == []


def test_socle_reports():
    assert [c.size for c in socle_report(catalog.get("G1"), 3)] == [2]
    assert [c.size for c in socle_report(catalog.get("line3"), 3)] == [3]
    assert [c.size for c in socle_report(catalog.get("G4"), 3)] == [3, 3, 3, 3]
    assert socle_report(catalog.get("G3"), 3) == []
    assert socle_report(catalog.get("G2"), 3) == []


def test_orbit_dot():
    g = catalog.get("G4")
    dot = orbit_dot(orbit(T(g, "{a, c}")))
    assert dot.splitlines()[0] == "digraph orbit {"
    assert 'n1 -> n0 [label="a"];' in dot
    assert 'n2 -> n0 [label="c"];' in dot


@pytest.mark.parametrize("name", GRAPHS)
def test_isolation_is_orbit_invariant(name):
    g = catalog.get(name)
    for t in isolated_points(g, 3):
        og = orbit(t, 100)
        assert all(not has_exits(s) for s in og.nodes)


def test_g4_orbit_law():
    g = catalog.get("G4")
    for t in isolated_points(g, 3):
        og = orbit(t)
        assert len(og) == len(t.nodes)
        assert isotropy_trivial(og)
        assert all(maxima_at_sinks(s) for s in og.nodes)


@pytest.mark.parametrize("name", ["G1", "G4", "line3"])
def test_matrix_units(name):
    g = catalog.get(name)
    alg = Algebra(g, "leavitt")
    for cls in socle_report(g, 3):
        og = cls.orbit
        for s, t, u in itertools.product(og.nodes, repeat=3):
            e_st = matrix_unit(alg, og, s, t)
            assert e_st * matrix_unit(alg, og, t, u) == matrix_unit(alg, og, s, u)
            if u != s:
                assert (matrix_unit(alg, og, t, s) * matrix_unit(alg, og, u, t)).is_zero()
            assert e_st.star() == matrix_unit(alg, og, t, s)
        # the diagonal units are orthogonal projections onto distinct points
        diag = [matrix_unit(alg, og, s, s) for s in og.nodes]
        for a, b in itertools.combinations(diag, 2):
            assert (a * b).is_zero()


def test_ecb_examples():
    entries, certs = ecb_search(catalog.get("G2"), 3)
    assert entries == [] and set(certs.values()) == {"infinite"}
    entries, _ = ecb_search(catalog.get("G3"), 0)
    assert names(e.tree for e in entries) == ["{v}"]
    assert [[b.paths() for b in e.blocks] for e in entries][0][0] \
        == [T(catalog.get("G3"), "{a}").maxima()[0], T(catalog.get("G3"), "{b}").maxima()[0]]
    entries, _ = ecb_search(catalog.get("G1"), 0)
    assert names(e.tree for e in entries) == ["{u}"]


@pytest.mark.parametrize("name", GRAPHS)
def test_ecb_images_are_isolated_projections(name):
    entries, _ = ecb_search(catalog.get(name), 2)
    for e in entries:
        assert check_ecb_image(e)


def test_toeplitz_cohn_socle():
    g = catalog.get("loop1")
    for k in range(1, 6):
        classes = cohn_socle(g, k)
        assert [c.size for c in classes] == [k]
        assert classes[0].truncated


def test_cohn_socle_finite_cases():
    assert [(c.size, c.truncated) for c in cohn_socle(catalog.get("G1"), 3)] == [(1, False)]
    assert cohn_socle(catalog.get("G2"), 3) == []


def test_fim_examples():
    assert fim_report(1, 3)["blocks"] == [1, 2, 3]
    rep = fim_report(2, 2)
    assert rep["blocks"] == [1, 2, 2] and rep["agree"]
    assert format_munn(munn_classes(2, 2)[1][0]) == "{1, x1~}"


@pytest.mark.parametrize("n,bound", [(1, 5), (2, 3)])
def test_fim_routes_agree(n, bound):
    rep = fim_report(n, bound)
    assert rep["blocks"] == rep["tree_sizes"] == rep["second_route"]


def test_munn_classes_partition_trees():
    trees = munn_trees(2, 3)
    classes = munn_classes(2, 3)
    flat = [t for c in classes for t in c]
    assert len(flat) == len(set(flat)) == len(trees)
    for c in classes:
        assert len(c) == len(c[0])


def test_fim_second_route_single_tree():
    assert fim_orbit_check(1, frozenset([(), ((0, 1),)])) == 2


@pytest.mark.parametrize("n", [1, 2])
def test_filtration(n):
    checked, failures = filtration_check(n, 3, 300, seed=n)
    assert checked == 300 and failures == []
