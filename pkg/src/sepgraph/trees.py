"""Finite E-trees: prefix-closed sets of reduced paths from a root vertex."""

from __future__ import annotations

from .graph import ParseError, SeparatedGraph
from .paths import (DomainError, Path, bad_pair, compose, format_path, inv_letter,
                    letter_end, parse_path, trivial)


class Tree:
    __slots__ = ("graph", "root", "nodes", "_hash", "_children", "_max")

    def __init__(self, graph: SeparatedGraph, root, nodes):
        self.graph = graph
        self.root = root
        self.nodes = frozenset(nodes)
        self._hash = hash((root, self.nodes))
        self._children = None
        self._max = None

    def __eq__(self, other):
        return isinstance(other, Tree) and self.root == other.root and self.nodes == other.nodes

    def __hash__(self):
        return self._hash

    def __contains__(self, p):
        return p in self.nodes

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __repr__(self):
        return f"Tree({format_tree(self, bare_root=True)})"

    def sort_key(self):
        return (len(self.nodes), self.root, tuple(sorted(p.sort_key() for p in self.maxima())))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    @property
    def children(self) -> dict:
        if self._children is None:
            ch = {p: [] for p in self.nodes}
            for p in self.nodes:
                if p.word:
                    ch[p.parent()].append(p)
            self._children = ch
        return self._children

    def maxima(self) -> list:
        if self._max is None:
            ch = self.children
            self._max = sorted(p for p in self.nodes if not ch[p])
        return self._max

    def union(self, other: "Tree") -> "Tree":
        if other.root != self.root:
            raise DomainError("trees with different roots")
        return Tree(self.graph, self.root, self.nodes | other.nodes)

    def with_paths(self, paths) -> "Tree":
        nodes = set(self.nodes)
        for p in paths:
            nodes.update(p.prefixes())
        return Tree(self.graph, self.root, nodes)

    def without(self, leaf: Path) -> "Tree":
        return Tree(self.graph, self.root, self.nodes - {leaf})


def vertex_tree(graph: SeparatedGraph, v) -> Tree:
    return Tree(graph, v, [trivial(graph, v)])


def lower_set(graph: SeparatedGraph, root, paths) -> Tree:
    nodes = {trivial(graph, root)}
    for p in paths:
        if p.base != root:
            raise DomainError(f"path {format_path(p)} does not start at {root}")
        nodes.update(p.prefixes())
    return Tree(graph, root, nodes)


def translate(g: Path, t: Tree) -> Tree:
    """g . T, rooted at s(g). The caller makes sure the result is connected to
    the root (for instance by having g^{-1} in T)."""
    if g.end != t.root:
        raise DomainError("cannot translate: r(g) differs from the root")
    return Tree(t.graph, g.base, [compose(g, h) for h in t.nodes])


def total_length(t: Tree) -> int:
    return len(t.nodes) - 1


# -- compatibility

def is_c_compatible(t: Tree) -> bool:
    """Local test: every node path is C-separated and no node has two positive
    children in one block."""
    graph = t.graph
    for p, kids in t.children.items():
        seen = set()
        for c in kids:
            x = c.word[-1]
            if p.word and bad_pair(graph, p.word[-1], x):
                return False
            if not x[1]:
                b = graph.block_of(x[0])
                if b in seen:
                    return False
                seen.add(b)
    return True


def can_attach(t: Tree, p: Path, x) -> bool:
    """Whether p.x can be added to the compatible tree t as a new leaf."""
    graph = t.graph
    if p.word and p.word[-1] == inv_letter(x):
        return False
    if p.word and bad_pair(graph, p.word[-1], x):
        return False
    if not x[1]:
        b = graph.block_of(x[0])
        for c in t.children[p]:
            y = c.word[-1]
            if not y[1] and graph.block_of(y[0]) == b:
                return False
    return True


# -- reductions

def reduce_tree(t: Tree, U=frozenset()) -> Tree:
    """T_U: prune leaves that end in an inverse letter or an edge of U until none is left."""
    nodes = set(t.nodes)
    kids = {p: len(c) for p, c in t.children.items()}
    stack = [p for p in nodes if kids[p] == 0]
    while stack:
        p = stack.pop()
        if not p.word:
            continue
        x = p.word[-1]
        if x[1] or x[0] in U:
            nodes.discard(p)
            q = p.parent()
            kids[q] -= 1
            if kids[q] == 0:
                stack.append(q)
    if len(nodes) == len(t.nodes):
        return t
    return Tree(t.graph, t.root, nodes)


def leavitt_edges(graph: SeparatedGraph) -> frozenset:
    """U for the Leavitt reduction: edges forming singleton blocks."""
    return graph.singleton_edges()


def is_reduced_for(t: Tree, U) -> bool:
    for m in t.maxima():
        if m.word and (m.word[-1][1] or m.word[-1][0] in U):
            return False
    return True


def classify(t: Tree, S=None) -> dict:
    """Membership flags for the classes Y, Y_0, Y_L and (when S is given) Y_S."""
    graph = t.graph
    compat = is_c_compatible(t)
    y0 = compat and is_reduced_for(t, frozenset())
    yl = y0 and is_reduced_for(t, graph.singleton_edges())
    out = {"in_Y": compat, "in_Y0": y0, "in_YL": yl}
    if S is not None:
        s1 = frozenset(graph.block(r)[0] for r in S if len(graph.block(r)) == 1)
        out["in_YS"] = y0 and is_reduced_for(t, s1)
    return out


# -- enumeration

def attachable_letters(graph: SeparatedGraph, v):
    """All letters that leave vertex v in the doubled graph."""
    out = [(e, False) for e in graph.out_edges(v)]
    out += [(e, True) for e in graph.in_edges(v)]
    return out


def enumerate_trees(graph: SeparatedGraph, max_nodes: int, roots=None, compatible: bool = True):
    """All trees with at most ``max_nodes`` nodes rooted at the given vertices.

    Subtrees of compatible trees are compatible, so growing leaf by leaf
    reaches every compatible tree.
    """
    roots = graph.vertices if roots is None else roots
    found = []
    for r in roots:
        start = vertex_tree(graph, r)
        level = {start}
        seen = {start}
        while level:
            nxt = set()
            for t in level:
                if len(t.nodes) >= max_nodes:
                    continue
                for p in t.nodes:
                    for x in attachable_letters(graph, p.end):
                        if p.word and p.word[-1] == inv_letter(x):
                            continue
                        c = p.child(x)
                        if c in t.nodes:
                            continue
                        if compatible and not can_attach(t, p, x):
                            continue
                        nt = Tree(graph, r, t.nodes | {c})
                        if nt not in seen:
                            seen.add(nt)
                            nxt.add(nt)
            level = nxt
        found.extend(seen)
    return sorted(found)


# -- frontier walks: neighbourhoods and exits

def _frontier(t: Tree, mid_ok, final_ok, bound):
    """Words g z_1 ... z_k y with g in t, g z_1 not in t, each z_i accepted by
    mid_ok, y accepted by final_ok, everything reduced and C-separated and the
    first letter attachable to t.

    Returns (elements, finite, nonempty). Finiteness is decided on the automaton whose
    states are the last letter read; the listing is cut at ``bound`` middle
    letters only when the set is infinite.
    """
    graph = t.graph

    def steps(x):
        v = letter_end(graph, x)
        for z in attachable_letters(graph, v):
            if z == inv_letter(x) or bad_pair(graph, x, z):
                continue
            yield z

    elements = set()
    starts = []
    for g in t.nodes:
        for z in attachable_letters(graph, g.end):
            c = g.child(z)
            if c in t.nodes or not can_attach(t, g, z):
                continue
            if final_ok(z):
                elements.add(c)
            if mid_ok(z):
                starts.append(c)

    # automaton on letters
    start_letters = {c.word[-1] for c in starts}
    reach, todo = set(start_letters), list(start_letters)
    succ = {}
    while todo:
        x = todo.pop()
        succ[x] = [z for z in steps(x) if mid_ok(z)]
        for z in succ[x]:
            if z not in reach:
                reach.add(z)
                todo.append(z)
    accepting = {x for x in reach if any(final_ok(z) for z in steps(x))}
    pred = {x: [] for x in reach}
    for x in reach:
        for z in succ[x]:
            pred[z].append(x)
    useful, todo = set(accepting), list(accepting)
    while todo:
        z = todo.pop()
        for x in pred[z]:
            if x not in useful:
                useful.add(x)
                todo.append(x)
    finite = not _has_cycle({x: [z for z in succ[x] if z in useful] for x in useful})

    stack = [(c, 1) for c in starts if c.word[-1] in useful]
    while stack:
        p, depth = stack.pop()
        x = p.word[-1]
        for z in steps(x):
            if final_ok(z):
                elements.add(p.child(z))
            elif mid_ok(z) and z in useful and (finite or depth < bound):
                stack.append((p.child(z), depth + 1))
    nonempty = bool(elements) or any(c.word[-1] in useful for c in starts)
    return sorted(elements), finite, nonempty


def _has_cycle(adj) -> bool:
    color = {}
    for s in adj:
        if s in color:
            continue
        stack = [(s, iter(adj[s]))]
        color[s] = 1
        while stack:
            node, it = stack[-1]
            for z in it:
                c = color.get(z, 0)
                if c == 1:
                    return True
                if c == 0:
                    color[z] = 1
                    stack.append((z, iter(adj[z])))
                    break
            else:
                color[node] = 2
                stack.pop()
    return False


def neighborhood(t: Tree, bound: int = 4):
    """The neighbours g x_1^{-1}...x_n^{-1} y of a tree in Y_0.

    Returns (elements, finite); when the set is infinite the listing only
    holds words with at most ``bound`` inverse letters after the tree.
    """
    els, finite, _ = _frontier(t, lambda z: z[1], lambda z: not z[1], bound)
    return els, finite


def exits(t: Tree, bound: int = 4):
    """Finite exits of a tree in Y_L: g gamma y where gamma uses inverse letters
    and singleton-block edges and y lies in a block with at least two edges.

    For such a leaf the extended tree is automatically Leavitt-reduced, so
    membership of the extension reduces to C-compatibility, which the walk
    enforces letter by letter.
    """
    els, finite, _ = _exit_walk(t, bound)
    return els, finite


def _exit_walk(t: Tree, bound):
    single = t.graph.singleton_edges()
    return _frontier(t, lambda z: z[1] or z[0] in single,
                     lambda z: not z[1] and z[0] not in single, bound)


def has_exits(t: Tree) -> bool:
    return _exit_walk(t, 0)[2]


def neighbor_blocks(t: Tree, elements):
    """Group neighbours gamma x by (gamma, block of x)."""
    graph = t.graph
    groups = {}
    for p in elements:
        anchor = p.parent()
        groups.setdefault((anchor, graph.block_of(p.word[-1][0])), []).append(p)
    return groups


# -- literals

def format_tree(t: Tree, bare_root: bool = True) -> str:
    ms = [m for m in t.maxima() if m.word]
    if not ms:
        return "{" + (str(t.root) if bare_root else "") + "}"
    return "{" + ", ".join(format_path(m) for m in ms) + "}"


def parse_tree(graph: SeparatedGraph, text: str, root=None, offset: int = 0) -> Tree:
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError("tree literal must be enclosed in braces", None, offset + 1)
    inner = s[1:-1]
    paths = []
    col = offset + text.index("{") + 2
    for part in inner.split(","):
        if part.strip():
            paths.append(parse_path(graph, part, offset=col - 1))
        col += len(part) + 1
    roots = {p.base for p in paths}
    if root is not None:
        roots.add(root)
    if not roots:
        if len(graph.vertices) == 1:
            roots = {graph.vertices[0]}
        else:
            raise DomainError("empty tree literal needs a root vertex")
    if len(roots) > 1:
        raise DomainError("tree literal mixes paths from different vertices")
    r = roots.pop()
    return lower_set(graph, r, paths)
