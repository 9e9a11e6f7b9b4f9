"""Blocked idempotents e(T minus F), the basis of the ideal Q generated by the
q_X, and the corner map into the Leavitt algebra of the extended graph."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Algebra, AlgebraElement, format_coeff, monomial_key
from .graph import SeparatedGraph, extend_graph
from .paths import DomainError, Path, format_path
from .trees import (Tree, enumerate_trees, format_tree, is_c_compatible, is_reduced_for,
                    neighbor_blocks, neighborhood, vertex_tree)


def transport_path(p: Path, graph: SeparatedGraph) -> Path:
    return Path(graph, p.base, p.word)


def transport_tree(t: Tree, graph: SeparatedGraph) -> Tree:
    return Tree(graph, t.root, [transport_path(p, graph) for p in t.nodes])


def transport(a: AlgebraElement, alg: Algebra) -> AlgebraElement:
    """Read the monomials of a in another algebra (same paths, other graph/mode)."""
    out = {}
    for (t, g), c in a.terms.items():
        key = (transport_tree(t, alg.graph), transport_path(g, alg.graph))
        out[key] = out.get(key, 0) + c
    return AlgebraElement(alg, out)


# -- blocking families

def split_anchor(t: Tree, gamma: Path):
    """gamma = gamma_0 gamma_1 with gamma_0 the longest prefix lying in t."""
    k = len(gamma.word)
    while gamma.prefix(k) not in t.nodes:
        k -= 1
    return gamma.prefix(k), Path(gamma.graph, gamma.prefix(k).end, gamma.word[k:])


def in_neighborhood(t: Tree, p: Path) -> bool:
    """Membership of p in the neighbourhood of t (t in Y_0)."""
    if not p.word or p.word[-1][1] or p in t.nodes:
        return False
    g0, g1 = split_anchor(t, p)
    if any(not x[1] for x in g1.word[:-1]):
        return False
    return is_c_compatible(t.with_paths([p]))


@dataclass(frozen=True)
class Block:
    anchor: Path  # gamma = gamma_0 gamma_1
    ref: tuple    # BlockRef of X at r(gamma)

    def paths(self):
        graph = self.anchor.graph
        return [self.anchor.child((x, False)) for x in graph.block(self.ref)]

    def sort_key(self):
        return (self.anchor.sort_key(), self.ref)


def check_family(t: Tree, blocks) -> None:
    graph = t.graph
    for b in blocks:
        if b.anchor.base != t.root:
            raise DomainError("block anchored outside the tree")
        if graph.partition[b.anchor.end][b.ref[1]] != graph.block(b.ref) or b.ref[0] != b.anchor.end:
            raise DomainError("block does not sit at the end of its anchor")
        for p in b.paths():
            if p in t.nodes:
                raise DomainError(f"blocking family meets the tree at {format_path(p)}")
            if not in_neighborhood(t, p):
                raise DomainError(f"{format_path(p)} is not a neighbour of the tree")


def blocked_trees(t: Tree, blocks) -> dict:
    """The expansion e(T) prod (1 - sum_x e(gamma x)) as {tree: coefficient};
    incompatible terms vanish."""
    terms = {t: Fraction(1)}
    for b in sorted(blocks, key=Block.sort_key):
        nxt = dict(terms)
        for s, c in terms.items():
            for p in b.paths():
                s2 = s.with_paths([p])
                if not is_c_compatible(s2):
                    continue
                nxt[s2] = nxt.get(s2, 0) - c
        terms = {k: v for k, v in nxt.items() if v}
    return terms


def blocked_idempotent(cohn: Algebra, t: Tree, blocks, marker: Path | None = None,
                       strict: bool = True) -> AlgebraElement:
    if strict:
        check_family(t, blocks)
    g = marker if marker is not None else vertex_tree(t.graph, t.root).maxima()[0]
    out = AlgebraElement(cohn, {})
    for s, c in blocked_trees(t, blocks).items():
        out = out + AlgebraElement(cohn, cohn.normal_monomial(s, g)).scale(c)
    return out


def blocked_product(x, y):
    """(I, F) * (J, G) on blocked trees: (I u J, F u G) or None."""
    (i_tree, f), (j_tree, gfam) = x, y
    if i_tree.root != j_tree.root:
        return None
    union = i_tree.union(j_tree)
    if not is_c_compatible(union):
        return None
    fpaths = {p for b in f for p in b.paths()}
    gpaths = {p for b in gfam for p in b.paths()}
    if fpaths & j_tree.nodes or gpaths & i_tree.nodes:
        return None
    return union, frozenset(f) | frozenset(gfam)


def q_element(cohn: Algebra, ref) -> AlgebraElement:
    """q_X = v - sum_{e in X} e e^*."""
    v = ref[0]
    out = cohn.vertex(v)
    for e in cohn.graph.block(ref):
        out = out - cohn.edge(e) * cohn.edge(e, True)
    return out


# -- B(Q)

@dataclass(frozen=True)
class QBasisElement:
    tree: Tree
    blocks: frozenset
    marker: Path

    def sort_key(self):
        return (monomial_key(self.tree, self.marker),
                tuple(sorted(b.sort_key() for b in self.blocks)))


def family_extent(t: Tree, blocks, marker: Path, count_blocks: bool = False) -> int:
    """Total length of T together with the anchors and the marker. With
    ``count_blocks`` each block also adds its blocking edge, which is the total
    length of the image tree in the extended graph."""
    nodes = set(t.nodes)
    for b in blocks:
        nodes.update(b.anchor.prefixes())
    nodes.update(marker.prefixes())
    return len(nodes) - 1 + (len(blocks) if count_blocks else 0)


def nb_maxima(t: Tree, blocks):
    blocked = {split_anchor(t, b.anchor)[0] for b in blocks}
    return [m for m in t.maxima() if m not in blocked]


def _is_e_reduced(p: Path, chosen) -> bool:
    return not p.word or (not p.word[-1][1] and p.word[-1][0] not in chosen)


def _markers(t: Tree, extra_nodes: set, budget: int):
    """Markers g = g_0 w with g_0 in t not ending in an inverse letter and w a
    word of inverse letters, keeping |nodes u g^down| - 1 within budget."""
    graph = t.graph
    for h in sorted(t.nodes):
        if h.ends_inverse():
            continue
        stack = [h]
        while stack:
            g = stack.pop()
            yield g
            for e in graph.in_edges(g.end):
                x = (e, True)
                if g.word and g.word[-1] == (e, False):
                    continue
                c = g.child(x)
                used = len(extra_nodes | set(c.prefixes())) - 1
                if used <= budget:
                    stack.append(c)


def q_basis(graph: SeparatedGraph, bound: int, choice=None, count_blocks: bool = False):
    """Enumerate B(Q) by its definition: T in Y_0, F a non-empty blocking family,
    g_0 in T, and non-blocked maxima other than g_0 reduced for the choice.
    Sizes are measured by family_extent."""
    cohn = Algebra(graph, "cohn", choice)
    chosen = {cohn.choice[b] for b in graph.blocks()}
    out = []
    for t in enumerate_trees(graph, bound + 1):
        if not is_reduced_for(t, frozenset()):
            continue
        els, _ = neighborhood(t, bound)
        cands = sorted((Block(a, r) for (a, r) in neighbor_blocks(t, els)
                        if all(in_neighborhood(t, p) for p in Block(a, r).paths())),
                       key=Block.sort_key)
        for fam in _families(t, cands, bound, count_blocks):
            base = set(t.nodes)
            for b in fam:
                base.update(b.anchor.prefixes())
            nbm = nb_maxima(t, fam)
            budget = bound - (len(fam) if count_blocks else 0)
            for g in _markers(t, base, budget):
                if family_extent(t, fam, g, count_blocks) > bound:
                    continue
                g0 = g.prefix(len(g.word) - _inverse_tail(g))
                if all(m == g0 or _is_e_reduced(m, chosen) for m in nbm):
                    out.append(QBasisElement(t, frozenset(fam), g))
    return sorted(set(out), key=QBasisElement.sort_key)


def _inverse_tail(g: Path) -> int:
    k = 0
    while k < len(g.word) and g.word[-1 - k][1]:
        k += 1
    return k


def _families(t: Tree, cands, bound, count_blocks=False):
    """Non-empty subsets of candidate blocks whose extent stays within bound."""
    def extent(fam):
        nodes = set(t.nodes)
        for b in fam:
            nodes.update(b.anchor.prefixes())
        return len(nodes) - 1 + (len(fam) if count_blocks else 0)

    def rec(start, fam):
        for i in range(start, len(cands)):
            nf = fam + [cands[i]]
            if extent(nf) <= bound:
                yield nf
                yield from rec(i + 1, nf)
    yield from rec(0, [])


def q_basis_expansion(cohn: Algebra, q: QBasisElement) -> AlgebraElement:
    return blocked_idempotent(cohn, q.tree, q.blocks, q.marker)


def format_blocked(q: QBasisElement) -> str:
    graph = q.tree.graph
    fam = ", ".join(f"{format_path(b.anchor)}@{b.ref[0]}:{b.ref[1]}"
                    for b in sorted(q.blocks, key=Block.sort_key))
    tree = format_tree(q.tree, bare_root=True)[:-1]
    del graph
    return f"e{tree} \\ {fam}}} |> {format_path(q.marker)}"


# -- the extended graph and the corner map

class Corner:
    """The Cohn-Leavitt algebra of (E, C, S) and the Leavitt algebra of (E_S, C^S),
    with the map identity-on-generators between them.

    ``keep_choice`` selects the choice function on the extended graph: the old
    choice on every block (used for Q-membership) or the added edge d_X on each
    extended block (which sends basis monomials to basis monomials).
    """

    def __init__(self, graph: SeparatedGraph, S=None, keep_choice: bool = False, choice=None):
        self.graph = graph
        S = frozenset(graph.relative if S is None else S)
        if S != graph.relative:
            from .graph import make_graph
            graph = make_graph(graph.vertices,
                               [(e, graph.source[e], graph.range[e]) for e in graph.edges],
                               {v: list(graph.partition[v]) for v in graph.vertices},
                               graph.choice_override, S, graph.name)
            self.graph = graph
        self.S = S
        self.source = Algebra(graph, "cl", choice)
        ext, added = extend_graph(graph, S, choose_added=not keep_choice)
        self.ext = ext
        self.added = added
        self.d_edges = frozenset(added.values())
        self.block_of_d = {d: ref for ref, d in added.items()}
        ext_choice = None
        if choice and keep_choice:
            ext_choice = dict(choice)
        self.target = Algebra(ext, "leavitt", ext_choice)

    def phi(self, a: AlgebraElement) -> AlgebraElement:
        if a.alg.graph is not self.graph and a.alg.graph.vertices != self.graph.vertices:
            raise DomainError("element lives over another graph")
        return transport(a.normalize(), self.target).normalize()

    def has_d(self, t: Tree) -> bool:
        return any(p.word and p.word[-1][0] in self.d_edges for p in t.nodes)

    def phi_inverse(self, b: AlgebraElement) -> AlgebraElement:
        src = self.source
        out = src.zero()
        for (t, g), c in b.normalize().terms.items():
            if t.root not in self.graph.vertices or any(x[0] in self.d_edges for x in g.word):
                raise DomainError("monomial lies outside the corner")
            leaves = [m for m in t.maxima() if m.word and m.word[-1][0] in self.d_edges]
            rest = Tree(self.graph, t.root,
                        [transport_path(p, self.graph) for p in t.nodes if p not in leaves])
            term = src.monomial(rest, transport_path(g, self.graph))
            for m in leaves:
                gamma = transport_path(m.parent(), self.graph)
                ref = self.block_of_d[m.word[-1][0]]
                q = src.monomial(vertex_tree(self.graph, gamma.base).with_paths([gamma]),
                                 vertex_tree(self.graph, gamma.base).maxima()[0])
                for x in self.graph.block(ref):
                    p = gamma.child((x, False))
                    q = q - src.monomial(vertex_tree(self.graph, gamma.base).with_paths([p]),
                                         vertex_tree(self.graph, gamma.base).maxima()[0])
                term = q * term
            out = out + term.scale(c)
        return out.normalize()


def cohn_corner(graph: SeparatedGraph, choice=None) -> Corner:
    return Corner(graph, S=frozenset(), keep_choice=True, choice=choice)


def q_membership(a: AlgebraElement):
    """Decide a in Q for a Cohn-mode element; the witness is its image in the
    Leavitt algebra of the extended graph."""
    if a.alg.mode != "cohn":
        raise DomainError("Q-membership needs a Cohn-mode element")
    corner = cohn_corner(a.alg.graph, a.alg.choice)
    src = transport(a, corner.source)
    img = corner.phi(src)
    ok = all(corner.has_d(t) for (t, _g) in img.terms)
    return ok, img


def blocked_image(corner: Corner, q: QBasisElement):
    """The expected image e(S) |> g of a B(Q) element, S having maxima
    NB-max(T minus F) together with gamma_i d_{X_i}."""
    ext = corner.ext
    paths = [transport_path(m, ext) for m in nb_maxima(q.tree, q.blocks)]
    for b in q.blocks:
        paths.append(transport_path(b.anchor, ext).child((corner.added[b.ref], False)))
    s = vertex_tree(ext, q.tree.root).with_paths(paths)
    return s, transport_path(q.marker, ext)


def extended_q_basis(graph: SeparatedGraph, bound: int, choice=None):
    """The basis of the image of Q read off the extended Leavitt basis: monomials
    rooted in E^0 with markers avoiding d-edges whose tree holds a d-edge."""
    corner = cohn_corner(graph, choice)
    out = []
    for t, g in corner.target.basis(bound, roots=graph.vertices):
        if any(x[0] in corner.d_edges for x in g.word):
            continue
        if corner.has_d(t):
            out.append((t, g))
    return corner, out


def coeff_str(c) -> str:
    return format_coeff(Fraction(c))


__all__ = [
    "Block", "Corner", "QBasisElement", "blocked_idempotent", "blocked_image",
    "blocked_product", "blocked_trees", "check_family", "cohn_corner", "extended_q_basis",
    "family_extent", "format_blocked", "in_neighborhood", "nb_maxima", "q_basis",
    "q_basis_expansion", "q_element", "q_membership", "split_anchor", "transport",
    "transport_path", "transport_tree",
]
