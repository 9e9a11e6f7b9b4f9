from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from sepgraph import catalog
from sepgraph.graph import ParseError
from sepgraph.paths import (DomainError, Path, compose, decompose, format_path, inverse,
                            is_c_separated, is_reduced, make_path, parse_path, prefix_leq, trivial)
from sepgraph.trees import attachable_letters

from conftest import P


def all_paths(graph, max_len):
    out = [trivial(graph, v) for v in graph.vertices]
    level = list(out)
    for _ in range(max_len):
        nxt = []
        for p in level:
            for x in attachable_letters(graph, p.end):
                if p.word and p.word[-1] == (x[0], not x[1]):
                    continue
                nxt.append(p.child(x))
        out += nxt
        level = nxt
    return out


def test_compose_examples():
    g3, g5, g1 = catalog.get("G3"), catalog.get("G5"), catalog.get("G1")
    assert compose(P(g3, "a"), P(g3, "a~")) == trivial(g3, "v")
    assert compose(P(g5, "e"), P(g5, "e~.f")) == P(g5, "f")
    assert compose(P(g1, "a"), P(g1, "a")) is None


def test_c_separated_examples():
    assert not is_c_separated(P(catalog.get("G3"), "a~.b"))
    assert is_c_separated(P(catalog.get("G4"), "a~.c"))
    assert is_c_separated(P(catalog.get("G2"), "a~.b"))


def test_decompose_examples():
    g2, g3 = catalog.get("G2"), catalog.get("G3")
    pre, suf = decompose(P(g2, "a.b~.a"), g2.singleton_edges())
    assert pre == trivial(g2, "v") and format_path(suf) == "a.b~.a"
    pre, suf = decompose(P(g3, "a.b~"))
    assert pre == P(g3, "a") and format_path(suf) == "b~"
    pre, suf = decompose(trivial(g3, "v"), frozenset({"a", "b"}))
    assert pre == trivial(g3, "v") and suf.word == ()


def test_prefix_order_examples():
    g3 = catalog.get("G3")
    assert prefix_leq(trivial(g3, "v"), P(g3, "a"))
    assert not prefix_leq(P(g3, "a"), P(g3, "b"))
    assert prefix_leq(P(g3, "a"), P(g3, "a.b~"))


def test_literals():
    g = catalog.get("G3")
    assert format_path(P(g, "a.b~.a")) == "a.b~.a"
    assert P(g, "v").is_trivial
    with pytest.raises(DomainError):
        parse_path(g, "a.c")
    with pytest.raises(DomainError):
        parse_path(g, "a.a~")
    with pytest.raises(ParseError):
        parse_path(g, "a.$")
    with pytest.raises(DomainError):
        make_path(catalog.get("G1"), "u", [("a", False), ("a", False)])


@pytest.mark.parametrize("name", ["G2", "G3", "G4", "G5"])
def test_compose_associative_exhaustive(name):
    g = catalog.get(name)
    paths = all_paths(g, 2)
    for a, b, c in itertools.product(paths, repeat=3):
        ab = compose(a, b)
        bc = compose(b, c)
        left = None if ab is None else compose(ab, c)
        right = None if bc is None else compose(a, bc)
        assert left == right


@pytest.mark.parametrize("name", ["G2", "G3", "G4", "G5"])
def test_path_laws(name):
    g = catalog.get(name)
    U = g.singleton_edges()
    for p in all_paths(g, 4):
        assert is_reduced(p)
        assert inverse(inverse(p)) == p
        assert compose(p, inverse(p)) == trivial(g, p.base)
        pre, suf = decompose(p, U)
        assert pre.word + suf.word == p.word
        assert not pre.word or not (pre.word[-1][1] or pre.word[-1][0] in U)
        if is_c_separated(p):
            assert all(is_c_separated(q) for q in p.prefixes())


@settings(max_examples=200, derandomize=True)
@given(st.lists(st.sampled_from([("a", False), ("a", True), ("b", False), ("b", True)]), max_size=8),
       st.lists(st.sampled_from([("a", False), ("a", True), ("b", False), ("b", True)]), max_size=8))
def test_compose_matches_free_group(w1, w2):
    g = catalog.get("G3")

    def red(w):
        out = []
        for x in w:
            if out and out[-1] == (x[0], not x[1]):
                out.pop()
            else:
                out.append(x)
        return out

    a, b = Path(g, "v", red(w1)), Path(g, "v", red(w2))
    assert list(compose(a, b).word) == red(list(a.word) + list(b.word))
