"""Isolated points, their orbits under the Leavitt partial action, socle blocks,
completely blocked trees on the Cohn side, and free inverse monoid tools."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .algebra import Algebra
from .cohn_q import (Block, Corner, blocked_idempotent, cohn_corner, transport,
                     transport_path)
from .graph import SeparatedGraph
from .paths import Path, compose, edge_path, inverse, trivial
from .semigroup import canonical, theta, theta_L
from .trees import (Tree, enumerate_trees, format_tree, has_exits, is_reduced_for,
                    neighbor_blocks, neighborhood, vertex_tree)


# -- Leavitt side

def isolated_points(graph: SeparatedGraph, bound: int):
    """Trees in Y_L of total length <= bound without exits."""
    single = graph.singleton_edges()
    out = []
    for t in enumerate_trees(graph, bound + 1):
        if is_reduced_for(t, single) and not has_exits(t):
            out.append(t)
    return out


@dataclass
class OrbitGraph:
    base: Tree
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)   # (tree, edge, tree) with theta_e
    words: dict = field(default_factory=dict)   # tree -> alpha with theta_alpha(base) = tree
    complete: bool = True

    def __len__(self):
        return len(self.nodes)


def _letters(graph):
    for e in graph.edges:
        yield (e, False)
        yield (e, True)


def orbit(t: Tree, cap: int = 200, act=None) -> OrbitGraph:
    """Breadth-first closure of t under the single-letter partial maps."""
    graph = t.graph
    act = act or theta_L
    og = OrbitGraph(t, [t], [], {t: trivial(graph, t.root)})
    seen = {t}
    queue = deque([t])
    edge_set = set()
    while queue:
        s = queue.popleft()
        for x in _letters(graph):
            g = edge_path(graph, x[0], x[1])
            s2 = act(g, s)
            if s2 is None:
                continue
            key = (s2, x[0], s) if x[1] else (s, x[0], s2)
            if key not in edge_set:
                edge_set.add(key)
                og.edges.append(key if not x[1] else key)
            if s2 not in seen:
                if len(seen) >= cap:
                    og.complete = False
                    continue
                seen.add(s2)
                og.nodes.append(s2)
                og.words[s2] = compose(g, og.words[s])
                queue.append(s2)
    # edges are stored as (t, e, theta_e(t)); the source of a theta_e edge is rooted at r(e)
    og.edges = [(a, e, b) if a.root == graph.range[e] else (b, e, a) for (a, e, b) in og.edges]
    return og


def isotropy_trivial(og: OrbitGraph) -> bool:
    """The Schreier graph of a finite orbit is a tree."""
    return og.complete and len(og.edges) == len(og.nodes) - 1


def orbit_dot(og: OrbitGraph) -> str:
    idx = {t: i for i, t in enumerate(og.nodes)}
    lines = ["digraph orbit {"]
    for t, i in idx.items():
        lines.append(f'  n{i} [label="{format_tree(t)}"];')
    for a, e, b in sorted(og.edges, key=lambda k: (idx.get(k[0], -1), k[1], idx.get(k[2], -1))):
        if a in idx and b in idx:
            lines.append(f'  n{idx[a]} -> n{idx[b]} [label="{e}"];')
    lines.append("}")
    return "\n".join(lines)


@dataclass
class SocleClass:
    base: Tree
    orbit: OrbitGraph
    trivial_isotropy: bool

    @property
    def size(self):
        return len(self.orbit.nodes)


def socle_report(graph: SeparatedGraph, bound: int, cap: int = 200):
    """One entry per orbit of isolated points (found within ``bound``) with
    trivial isotropy, sorted by size and base tree."""
    done = set()
    out = []
    for t in isolated_points(graph, bound):
        if t in done:
            continue
        og = orbit(t, cap)
        done.update(og.nodes)
        for s in og.nodes:
            if has_exits(s):
                raise AssertionError(f"orbit of {format_tree(t)} reaches {format_tree(s)} with exits")
        triv = isotropy_trivial(og)
        if triv:
            out.append(SocleClass(t, og, triv))
    out.sort(key=lambda c: (c.size, c.base.sort_key()))
    return out


def matrix_unit(alg: Algebra, og: OrbitGraph, s: Tree, t: Tree):
    """The matrix unit sending the point t to the point s."""
    g = compose(og.words[s], inverse(og.words[t]))
    return alg.from_element(canonical(s, g, alg.regime))


def maxima_at_sinks(t: Tree) -> bool:
    return all(t.graph.is_sink(m.end) for m in t.maxima())


# -- Cohn side: completely blocked trees

@dataclass
class EcbEntry:
    tree: Tree
    blocks: list          # full blocking family covering N(T)
    extended: Tree        # T' in the extended graph


def ecb_search(graph: SeparatedGraph, bound: int, max_nodes: bool = False):
    """Trees in Y_0 with finite non-empty neighbourhood. Returns (entries,
    certificates) where certificates map every other enumerated tree to
    'infinite' or 'empty'. The bound is on total length, or on the number of
    nodes when ``max_nodes`` is set."""
    corner = cohn_corner(graph)
    entries, certs = [], {}
    limit = bound if max_nodes else bound + 1
    for t in enumerate_trees(graph, limit):
        if not is_reduced_for(t, frozenset()):
            continue
        els, finite = neighborhood(t, 1)
        if not finite:
            certs[t] = "infinite"
            continue
        if not els:
            certs[t] = "empty"
            continue
        groups = neighbor_blocks(t, els)
        blocks = sorted((Block(a, r) for (a, r) in groups), key=Block.sort_key)
        for b in blocks:
            if len(groups[(b.anchor, b.ref)]) != len(graph.block(b.ref)):
                raise AssertionError("neighbourhood does not split into full blocks")
        entries.append(EcbEntry(t, blocks, extended_point(corner, t, blocks)))
    return entries, certs


def extended_point(corner: Corner, t: Tree, blocks) -> Tree:
    ext = corner.ext
    paths = [transport_path(p, ext) for p in t.nodes]
    for b in blocks:
        paths.append(transport_path(b.anchor, ext).child((corner.added[b.ref], False)))
    return vertex_tree(ext, t.root).with_paths(paths)


def ecb_element(cohn: Algebra, entry: EcbEntry):
    return blocked_idempotent(cohn, entry.tree, entry.blocks)


def check_ecb_image(entry: EcbEntry, corner: Corner | None = None) -> bool:
    """phi(ecb(T)) is the projection onto the isolated point T'."""
    graph = entry.tree.graph
    corner = corner or cohn_corner(graph)
    img = corner.phi(transport(ecb_element(corner.source, entry), corner.source))
    want = corner.target.monomial(entry.extended, trivial(corner.ext, entry.tree.root))
    return img == want.normalize() and not has_exits(entry.extended)


@dataclass
class CohnClass:
    members: list     # completely blocked trees of the class within the bound
    truncated: bool   # the class reaches trees beyond the bound

    @property
    def size(self):
        return len(self.members)


def theta_0(g: Path, t: Tree):
    return theta(g, t, frozenset())


def cohn_socle(graph: SeparatedGraph, bound: int):
    """Classes of completely blocked trees with at most ``bound`` nodes under
    the partial action on Y_0. A truncated class continues past the bound."""
    entries, _ = ecb_search(graph, bound, max_nodes=True)
    ecb = {e.tree for e in entries}
    done = set()
    out = []
    for e in entries:
        if e.tree in done:
            continue
        comp, truncated = [], False
        queue = deque([e.tree])
        done.add(e.tree)
        while queue:
            s = queue.popleft()
            comp.append(s)
            for x in _letters(graph):
                s2 = theta_0(edge_path(graph, x[0], x[1]), s)
                if s2 is None or s2 in done:
                    continue
                if s2 in ecb:
                    done.add(s2)
                    queue.append(s2)
                elif len(s2.nodes) > bound:
                    truncated = True
        out.append(CohnClass(sorted(comp), truncated))
    out.sort(key=lambda c: (c.size, c.members[0].sort_key()))
    return out


# -- free inverse monoids

def _reduce_word(w):
    out = []
    for x in w:
        if out and out[-1] == (x[0], -x[1]):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _inv_word(w):
    return tuple((x, -s) for (x, s) in reversed(w))


def _mul(a, b):
    return _reduce_word(a + b)


def munn_trees(n: int, max_nodes: int):
    """Finite subtrees of the Cayley graph of the free group on n letters that
    contain the identity, as frozensets of reduced words."""
    gens = [(i, s) for i in range(n) for s in (1, -1)]
    start = frozenset([()])
    seen = {start}
    level = [start]
    while level:
        nxt = []
        for t in level:
            if len(t) >= max_nodes:
                continue
            for w in t:
                for x in gens:
                    c = _mul(w, (x,))
                    if len(c) > len(w) and c not in t:
                        nt = t | {c}
                        if nt not in seen:
                            seen.add(nt)
                            nxt.append(nt)
        level = nxt
    return seen


def munn_translate(g, t):
    return frozenset(_mul(g, w) for w in t)


def munn_classes(n: int, max_nodes: int):
    """Classes of Munn trees under T ~ g.T with g^{-1} in T."""
    trees = munn_trees(n, max_nodes)
    done = set()
    classes = []
    for t in sorted(trees, key=lambda t: (len(t), sorted(t))):
        if t in done:
            continue
        cls = {munn_translate(_inv_word(h), t) for h in t}
        done |= cls
        classes.append(sorted(cls, key=sorted))
    classes.sort(key=lambda c: (len(c[0]), len(c), sorted(min(c, key=sorted))))
    return classes


def munn_neighbours(n: int, t):
    gens = [(i, s) for i in range(n) for s in (1, -1)]
    out = set()
    for w in t:
        for x in gens:
            c = _mul(w, (x,))
            if c not in t:
                out.add(c)
    return out


def _fim_letter_paths(graph, letters, w):
    """The path of F_X spelling a free group word: x -> e_x f_x^{-1}."""
    word = []
    for (i, s) in w:
        x = letters[i]
        if s > 0:
            word += [(f"e_{x}", False), (f"f_{x}", True)]
        else:
            word += [(f"f_{x}", False), (f"e_{x}", True)]
    return Path(graph, "v", word)


def fim_point(graph, letters, t):
    """The tree of F_X corresponding to a Munn tree, pruned of inverse leaves."""
    from .trees import reduce_tree
    tree = vertex_tree(graph, "v").with_paths(_fim_letter_paths(graph, letters, w) for w in t)
    return reduce_tree(tree, frozenset())


def fim_orbit_check(n: int, t, cap: int = 500):
    """Second route for one Munn tree: map it into F_X, check that its
    neighbourhood is finite and that the extended point is isolated, and
    return the number of points of its orbit rooted at v."""
    from .catalog import fim_graph
    graph, letters = fim_graph(n)
    corner = cohn_corner(graph)
    pt = fim_point(graph, letters, t)
    els, finite = neighborhood(pt, 1)
    if not finite or not els:
        return None
    blocks = sorted((Block(a, r) for (a, r) in neighbor_blocks(pt, els)), key=Block.sort_key)
    ext = extended_point(corner, pt, blocks)
    if has_exits(ext):
        return None
    og = orbit(ext, cap)
    if not og.complete or not isotropy_trivial(og):
        return None
    return sum(1 for s in og.nodes if s.root == "v")


@dataclass
class BlockedMunn:
    tree: frozenset
    blocked: frozenset   # F, a subset of the neighbours
    marker: tuple

    def exits(self, n):
        return len(munn_neighbours(n, self.tree) - self.blocked)


def blocked_munn_product(x: BlockedMunn, y: BlockedMunn):
    g = x.marker
    t2 = munn_translate(g, y.tree)
    f2 = munn_translate(g, y.blocked)
    if x.tree & f2 or t2 & x.blocked:
        return None
    return BlockedMunn(x.tree | t2, x.blocked | f2, _mul(g, y.marker))


def random_blocked_munn(n: int, max_nodes: int, rng: random.Random, trees=None):
    trees = trees or sorted(munn_trees(n, max_nodes), key=lambda t: (len(t), sorted(t)))
    t = rng.choice(trees)
    nb = sorted(munn_neighbours(n, t))
    f = frozenset(x for x in nb if rng.random() < 0.5)
    g = rng.choice(sorted(t))
    return BlockedMunn(t, f, g)


def filtration_check(n: int, max_nodes: int, samples: int, seed: int = 0):
    """Random products of blocked Munn trees with i+1 and j+1 exits have at
    most i+j+1 exits. Returns (checked, failures)."""
    rng = random.Random(seed)
    trees = sorted(munn_trees(n, max_nodes), key=lambda t: (len(t), sorted(t)))
    checked, failures = 0, []
    while checked < samples:
        x = random_blocked_munn(n, max_nodes, rng, trees)
        y = random_blocked_munn(n, max_nodes, rng, trees)
        z = blocked_munn_product(x, y)
        if z is None:
            continue
        checked += 1
        i = max(x.exits(n) - 1, 0)
        j = max(y.exits(n) - 1, 0)
        if z.exits(n) > i + j + 1:
            failures.append((x, y, z))
    return checked, failures


def fim_report(n: int, bound: int, cross_check: bool = True):
    """Socle block sizes of K[FIM(X)] for Munn trees with at most ``bound``
    nodes, one per class, with both routes compared."""
    classes = munn_classes(n, bound)
    sizes = [len(c) for c in classes]
    tree_sizes = [len(c[0]) for c in classes]
    report = {"blocks": sizes, "tree_sizes": tree_sizes, "agree": sizes == tree_sizes}
    if cross_check:
        second = [fim_orbit_check(n, c[0]) for c in classes]
        report["second_route"] = second
        report["agree"] = report["agree"] and second == sizes
    return report


def format_munn(t) -> str:
    def word(w):
        if not w:
            return "1"
        return ".".join(f"x{i + 1}" + ("" if s > 0 else "~") for (i, s) in w)
    return "{" + ", ".join(word(w) for w in sorted(t, key=lambda w: (len(w), w))) + "}"


__all__ = [
    "OrbitGraph", "SocleClass", "CohnClass", "EcbEntry", "isolated_points", "orbit",
    "isotropy_trivial", "orbit_dot", "socle_report", "matrix_unit", "maxima_at_sinks",
    "ecb_search", "ecb_element", "check_ecb_image", "cohn_socle", "extended_point",
    "munn_trees", "munn_classes", "munn_neighbours", "fim_point", "fim_orbit_check",
    "BlockedMunn", "blocked_munn_product", "filtration_check", "fim_report", "format_munn",
]
