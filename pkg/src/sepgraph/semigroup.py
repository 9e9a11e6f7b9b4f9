"""Tree pairs (T, g) under the Munn, Toeplitz-U, IS and Leavitt-Munn products.

The zero of every regime is represented by ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import ParseError, SeparatedGraph
from .paths import (DomainError, Path, compose, edge_path, format_path, inverse,
                    parse_path, trivial)
from .trees import (Tree, enumerate_trees, format_tree, is_c_compatible, parse_tree,
                    reduce_tree, translate, vertex_tree)


@dataclass(frozen=True)
class Regime:
    kind: str
    U: frozenset | None  # None means no pruning at all (Munn)
    compat: bool

    def __str__(self):
        return self.kind


def make_regime(graph: SeparatedGraph, kind: str, U=None) -> Regime:
    if kind == "munn":
        return Regime("munn", None, False)
    if kind == "toeplitz":
        return Regime("toeplitz", frozenset(U or ()), False)
    if kind == "is":
        return Regime("is", frozenset(), True)
    if kind == "leavitt":
        return Regime("leavitt", graph.singleton_edges(), True)
    if kind == "cl":
        return Regime("cl", graph.relative_singletons(), True)
    raise ValueError(f"unknown regime {kind}")


class Element:
    __slots__ = ("tree", "marker", "regime", "_hash")

    def __init__(self, tree: Tree, marker: Path, regime: Regime):
        self.tree = tree
        self.marker = marker
        self.regime = regime
        self._hash = hash((tree, marker))

    def __eq__(self, other):
        return (isinstance(other, Element) and self.tree == other.tree
                and self.marker == other.marker and self.regime == other.regime)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return format_element(self)

    def sort_key(self):
        return (self.marker.sort_key(), self.tree.sort_key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    @property
    def is_idempotent(self) -> bool:
        return self.marker.is_trivial


def canonical(tree: Tree, g: Path, regime: Regime):
    """The canonical element represented by the pair, or None."""
    if g.base != tree.root:
        raise DomainError("marker does not start at the root of the tree")
    t = tree.with_paths([g])
    if regime.compat and not is_c_compatible(t):
        return None
    if regime.U is not None:
        t = reduce_tree(t, regime.U)
    return Element(t, g, regime)


def multiply(x, y):
    if x is None or y is None:
        return None
    if x.regime != y.regime:
        raise DomainError("cannot multiply elements of different regimes")
    g1, g2 = x.marker, y.marker
    if g1.end != g2.base:
        return None
    t1 = x.tree.with_paths([g1])
    t2 = y.tree.with_paths([g2])
    union = Tree(t1.graph, t1.root, t1.nodes | translate(g1, t2).nodes)
    return canonical(union, compose(g1, g2), x.regime)


def invert(x):
    if x is None:
        return None
    g = x.marker
    t = x.tree.with_paths([g])
    gi = inverse(g)
    return canonical(translate(gi, t), gi, x.regime)


def natural_leq(s, t) -> bool:
    """s <= t in the natural partial order, i.e. t s^{-1} s = s."""
    if s is None:
        return True
    if t is None:
        return False
    return multiply(t, multiply(invert(s), s)) == s


def vertex_element(graph: SeparatedGraph, v, regime: Regime) -> Element:
    return Element(vertex_tree(graph, v), trivial(graph, v), regime)


def letter_element(graph: SeparatedGraph, e, inverted: bool, regime: Regime) -> Element:
    g = edge_path(graph, e, inverted)
    return canonical(vertex_tree(graph, g.base), g, regime)


def theta(g: Path, t: Tree, U):
    """The partial action theta_g on reduced trees: defined when (g^{-1})_U is in t
    and g.(t u (g^{-1})^down) is compatible; returns the reduced translate or None."""
    from .paths import reduced_prefix

    if g.end != t.root:
        return None
    gi = inverse(g)
    if reduced_prefix(gi, U) not in t:
        return None
    moved = translate(g, t.with_paths([gi]))
    if not is_c_compatible(moved):
        return None
    return reduce_tree(moved, U)


def theta_L(g: Path, t: Tree):
    return theta(g, t, t.graph.singleton_edges())


def element_size(x: Element) -> int:
    return len(x.tree.with_paths([x.marker]).nodes) - 1


def enumerate_elements(graph: SeparatedGraph, regime: Regime, bound: int, roots=None):
    """All canonical elements whose unreduced representative T u g^down has
    total length at most ``bound``."""
    out = set()
    for w in enumerate_trees(graph, bound + 1, roots=roots, compatible=regime.compat):
        for g in w.nodes:
            x = canonical(w, g, regime)
            if x is not None:
                out.add(x)
    return sorted(out)


def format_element(x) -> str:
    if x is None:
        return "0"
    return f"({format_tree(x.tree)} ; {format_path(x.marker)})"


def parse_element(graph: SeparatedGraph, text: str, regime: Regime):
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")) or ";" not in s:
        raise ParseError("element literal must look like (TREE ; PATH)", None, 1)
    inner = s[1:-1]
    tree_txt, path_txt = inner.rsplit(";", 1)
    g = parse_path(graph, path_txt, offset=len(tree_txt) + 2)
    t = parse_tree(graph, tree_txt, root=g.base, offset=1)
    return canonical(t, g, regime)
