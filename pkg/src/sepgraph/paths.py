"""Reduced paths in the doubled graph.

A letter is a pair (edge, inverted). A path is a base vertex plus a reduced,
composable sequence of letters.
"""

from __future__ import annotations

from .graph import ParseError, SeparatedGraph


class DomainError(Exception):
    """Well-formed input that names something the graph does not have, or
    asks for something the operation does not allow."""


def inv_letter(x):
    return (x[0], not x[1])


def letter_start(graph: SeparatedGraph, x):
    return graph.range[x[0]] if x[1] else graph.source[x[0]]


def letter_end(graph: SeparatedGraph, x):
    return graph.source[x[0]] if x[1] else graph.range[x[0]]


class Path:
    __slots__ = ("graph", "base", "word", "end", "_hash")

    def __init__(self, graph: SeparatedGraph, base, word=()):
        self.graph = graph
        self.base = base
        self.word = tuple(word)
        self.end = letter_end(graph, self.word[-1]) if self.word else base
        self._hash = hash((base, self.word))

    def __eq__(self, other):
        return isinstance(other, Path) and self.base == other.base and self.word == other.word

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.word)

    def __repr__(self):
        return f"Path({format_path(self)})"

    def sort_key(self):
        return (len(self.word), self.base, self.word)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    @property
    def is_trivial(self) -> bool:
        return not self.word

    @property
    def last(self):
        return self.word[-1] if self.word else None

    def prefix(self, k: int) -> "Path":
        return Path(self.graph, self.base, self.word[:k])

    def parent(self) -> "Path":
        return self.prefix(len(self.word) - 1)

    def child(self, x) -> "Path":
        return Path(self.graph, self.base, self.word + (x,))

    def prefixes(self):
        """g^↓ as a list, shortest first."""
        return [self.prefix(k) for k in range(len(self.word) + 1)]

    def ends_inverse(self) -> bool:
        return bool(self.word) and self.word[-1][1]

    def free_word(self):
        """The underlying free group word (vertices forgotten)."""
        return self.word


def trivial(graph: SeparatedGraph, v) -> Path:
    return Path(graph, v, ())


def edge_path(graph: SeparatedGraph, e, inverted: bool = False) -> Path:
    x = (e, inverted)
    return Path(graph, letter_start(graph, x), (x,))


def make_path(graph: SeparatedGraph, base, letters) -> Path:
    """Build a path from letters, checking composability and reducedness."""
    cur = base
    prev = None
    for x in letters:
        if x[0] not in graph.source:
            raise DomainError(f"unknown edge {x[0]}")
        if letter_start(graph, x) != cur:
            raise DomainError(f"letters are not composable at {format_letter(x)}")
        if prev is not None and prev == inv_letter(x):
            raise DomainError("path is not reduced")
        prev = x
        cur = letter_end(graph, x)
    return Path(graph, base, letters)


def inverse(g: Path) -> Path:
    return Path(g.graph, g.end, tuple(inv_letter(x) for x in reversed(g.word)))


def compose(g: Path, h: Path):
    """Reduced concatenation, or None (the zero) when r(g) != s(h)."""
    if g.end != h.base:
        return None
    w = list(g.word)
    for x in h.word:
        if w and w[-1] == inv_letter(x):
            w.pop()
        else:
            w.append(x)
    return Path(g.graph, g.base, w)


def concat_letters(g: Path, letters) -> Path:
    """Reduced product of g with a word of letters starting at r(g)."""
    w = list(g.word)
    for x in letters:
        if w and w[-1] == inv_letter(x):
            w.pop()
        else:
            w.append(x)
    return Path(g.graph, g.base, w)


def bad_pair(graph: SeparatedGraph, x, y) -> bool:
    """True when x y is a forbidden pattern e^{-1} f with e != f in one block."""
    return x[1] and not y[1] and x[0] != y[0] and graph.same_block(x[0], y[0])


def is_c_separated(g: Path) -> bool:
    w = g.word
    graph = g.graph
    for i in range(len(w) - 1):
        if bad_pair(graph, w[i], w[i + 1]):
            return False
    return True


def is_reduced(g: Path) -> bool:
    w = g.word
    return all(w[i] != inv_letter(w[i + 1]) for i in range(len(w) - 1))


def decompose(g: Path, U=frozenset()):
    """Split g = prefix . suffix where the suffix is the longest tail made of
    inverse letters and edges of U."""
    k = len(g.word)
    while k > 0 and (g.word[k - 1][1] or g.word[k - 1][0] in U):
        k -= 1
    pre = g.prefix(k)
    return pre, Path(g.graph, pre.end, g.word[k:])


def reduced_prefix(g: Path, U=frozenset()) -> Path:
    return decompose(g, U)[0]


def prefix_leq(g: Path, h: Path) -> bool:
    n = len(g.word)
    return g.base == h.base and h.word[:n] == g.word


# -- literals

def format_letter(x) -> str:
    return x[0] + ("~" if x[1] else "")


def format_path(g: Path) -> str:
    if not g.word:
        return str(g.base)
    return ".".join(format_letter(x) for x in g.word)


def parse_path(graph: SeparatedGraph, text: str, base=None, offset: int = 0) -> Path:
    """Parse ``a.b~.c`` or a bare vertex name.

    ``base`` resolves a path whose first letter leaves from a vertex that
    cannot be guessed, which never happens for non-trivial paths; it is only
    used to check the start vertex.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty path literal", None, offset + 1)
    if s in graph.vertices:
        if base is not None and base != s:
            raise DomainError(f"path {s} does not start at {base}")
        return trivial(graph, s)
    letters = []
    col = offset + (len(text) - len(text.lstrip())) + 1
    for tok in s.split("."):
        name = tok.strip()
        inverted = name.endswith("~")
        if inverted:
            name = name[:-1].strip()
        if not name or not all(c.isalnum() or c in "_'" for c in name):
            raise ParseError(f"bad path token {tok!r}", None, col)
        if name not in graph.source:
            if name in graph.vertices:
                raise DomainError(f"vertex {name} cannot appear inside a path (col {col})")
            raise DomainError(f"unknown edge {name} (col {col})")
        letters.append((name, inverted))
        col += len(tok) + 1
    start = letter_start(graph, letters[0])
    if base is not None and base != start:
        raise DomainError(f"path {s} does not start at {base}")
    return make_path(graph, start, letters)
