"""Separated graphs: the data model, the text format, choice functions and
the extension by blocking sinks."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path as FilePath

BlockRef = tuple  # (vertex, index)


class GraphError(Exception):
    """A graph that violates one of the structural invariants."""


class ParseError(Exception):
    """Malformed input text. ``line`` and ``col`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class SeparatedGraph:
    vertices: tuple
    edges: tuple
    source: dict
    range: dict
    partition: dict  # vertex -> tuple of blocks, each a tuple of edges
    choice_override: dict = field(default_factory=dict)  # (vertex, idx) -> edge
    relative: frozenset = frozenset()  # set of (vertex, idx)
    name: str = ""

    def __post_init__(self):
        block_of = {}
        for v, blocks in self.partition.items():
            for i, blk in enumerate(blocks):
                for e in blk:
                    block_of[e] = (v, i)
        object.__setattr__(self, "_block_of", block_of)
        object.__setattr__(self, "_in_edges", {
            v: tuple(e for e in self.edges if self.range[e] == v) for v in self.vertices})
        object.__setattr__(self, "_out_edges", {
            v: tuple(e for e in self.edges if self.source[e] == v) for v in self.vertices})

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    # -- lookups
    def block_of(self, edge) -> BlockRef:
        return self._block_of[edge]

    def block(self, ref: BlockRef) -> tuple:
        v, i = ref
        return self.partition[v][i]

    def blocks(self):
        """All blocks as BlockRefs, in vertex then file order."""
        return [(v, i) for v in self.vertices for i in range(len(self.partition.get(v, ())))]

    def same_block(self, e, f) -> bool:
        return self._block_of[e] == self._block_of[f]

    def is_singleton(self, edge) -> bool:
        return len(self.block(self._block_of[edge])) == 1

    def in_edges(self, v):
        return self._in_edges[v]

    def out_edges(self, v):
        return self._out_edges[v]

    def is_sink(self, v) -> bool:
        return not self._out_edges[v]

    def singleton_edges(self) -> frozenset:
        return frozenset(e for e in self.edges if self.is_singleton(e))

    def relative_singletons(self) -> frozenset:
        """Edges forming a singleton block that belongs to the relative set S."""
        return frozenset(self.block(r)[0] for r in self.relative if len(self.block(r)) == 1)


def validate(graph: SeparatedGraph) -> list[str]:
    """Return diagnostics; empty means the graph is valid."""
    diags = []
    seen = set()
    for v in graph.vertices:
        if v in seen:
            diags.append(f"duplicate vertex {v}")
        seen.add(v)
    for e in graph.edges:
        if e in seen:
            diags.append(f"duplicate identifier {e}")
        seen.add(e)
        for m in (graph.source, graph.range):
            if m.get(e) not in graph.vertices:
                diags.append(f"edge {e} has an unknown endpoint")
    for v in graph.vertices:
        covered = {}
        for i, blk in enumerate(graph.partition.get(v, ())):
            if not blk:
                diags.append(f"empty block {i} at {v}")
            for e in blk:
                if e not in graph.source:
                    diags.append(f"unknown edge {e} in partition of {v}")
                    continue
                if graph.source[e] != v:
                    diags.append(f"edge {e} listed at {v} but starts at {graph.source[e]}")
                if e in covered:
                    diags.append(f"overlapping blocks at {v}")
                covered[e] = i
        for e in graph.edges:
            if graph.source.get(e) == v and e not in covered:
                diags.append(f"edge {e} in no block at {v}")
    for v in graph.partition:
        if v not in graph.vertices:
            diags.append(f"partition for unknown vertex {v}")
    for (v, i), e in graph.choice_override.items():
        blocks = graph.partition.get(v, ())
        if i >= len(blocks):
            diags.append(f"choice refers to missing block {i} at {v}")
        elif e not in blocks[i]:
            diags.append(f"choice {e} is not in block {i} at {v}")
    for v, i in graph.relative:
        if i >= len(graph.partition.get(v, ())):
            diags.append(f"relative refers to missing block {i} at {v}")
    return diags


def make_graph(vertices, edges, partition=None, choice=None, relative=(), name="") -> SeparatedGraph:
    """Build and validate a graph.

    ``edges`` is a list of (name, src, dst). ``partition`` maps a vertex to a
    list of blocks; vertices left out get the trivial separation.
    """
    vertices = tuple(vertices)
    source = {e: s for e, s, _ in edges}
    rng = {e: t for e, _, t in edges}
    names = tuple(e for e, _, _ in edges)
    partition = dict(partition or {})
    for v in vertices:
        if v not in partition:
            out = [e for e in names if source[e] == v]
            partition[v] = [out] if out else []
    part = {v: tuple(tuple(b) for b in partition[v]) for v in partition}
    g = SeparatedGraph(vertices, names, source, rng, part, dict(choice or {}),
                       frozenset(relative), name)
    diags = validate(g)
    if diags:
        raise GraphError(diags[0])
    return g


def default_choice(graph: SeparatedGraph) -> dict:
    """The least edge name in each block, unless the graph overrides it."""
    out = {}
    for ref in graph.blocks():
        out[ref] = graph.choice_override.get(ref, min(graph.block(ref)))
    return out


def parse_graph(text: str, name: str = "") -> SeparatedGraph:
    vertices, edges, partition, choice, relative = [], [], {}, {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        kw = words[0]
        if kw == "vertex":
            if len(words) != 2:
                raise ParseError("expected: vertex NAME", lineno)
            vertices.append(words[1])
        elif kw == "edge":
            if len(words) != 4:
                raise ParseError("expected: edge NAME SRC DST", lineno)
            edges.append((words[1], words[2], words[3]))
        elif kw == "partition":
            if len(words) < 2:
                raise ParseError("expected: partition VERTEX { ... } ...", lineno)
            partition[words[1]] = _parse_blocks(line, lineno)
        elif kw == "choice":
            if len(words) != 4 or not words[2].isdigit():
                raise ParseError("expected: choice VERTEX BLOCK_INDEX EDGE", lineno)
            choice[(words[1], int(words[2]))] = words[3]
        elif kw == "relative":
            if len(words) != 3 or not words[2].isdigit():
                raise ParseError("expected: relative VERTEX BLOCK_INDEX", lineno)
            relative.append((words[1], int(words[2])))
        else:
            raise ParseError(f"unknown directive {kw!r}", lineno, raw.index(kw) + 1)
    names = set(vertices)
    for e, s, t in edges:
        if s not in names or t not in names:
            raise GraphError(f"edge {e} refers to an unknown vertex")
    # sinks without a partition line are fine; a non-sink must be covered
    for v in vertices:
        if v not in partition and any(s == v for _, s, _ in edges):
            raise GraphError(f"edge {next(e for e, s, _ in edges if s == v)} in no block at {v}")
    return make_graph(vertices, edges, partition, choice, relative, name)


def _parse_blocks(line: str, lineno: int) -> list:
    rest = line.split(None, 2)[2] if len(line.split(None, 2)) > 2 else ""
    blocks, cur = [], None
    col0 = line.index(rest) if rest else len(line)
    tok = ""
    for k, ch in enumerate(rest + " "):
        if ch in "{} \t":
            if tok:
                if cur is None:
                    raise ParseError(f"edge {tok!r} outside braces", lineno, col0 + k - len(tok) + 1)
                cur.append(tok)
                tok = ""
            if ch == "{":
                if cur is not None:
                    raise ParseError("nested '{'", lineno, col0 + k + 1)
                cur = []
            elif ch == "}":
                if cur is None:
                    raise ParseError("unbalanced '}'", lineno, col0 + k + 1)
                blocks.append(cur)
                cur = None
        else:
            tok += ch
    if cur is not None:
        raise ParseError("unterminated block", lineno)
    return blocks


def load_graph(path) -> SeparatedGraph:
    p = FilePath(path)
    return parse_graph(p.read_text(encoding="utf-8"), name=p.stem)


def format_graph(graph: SeparatedGraph) -> str:
    lines = [f"vertex {v}" for v in graph.vertices]
    lines += [f"edge {e} {graph.source[e]} {graph.range[e]}" for e in graph.edges]
    for v in graph.vertices:
        blocks = graph.partition.get(v, ())
        if blocks:
            lines.append(f"partition {v} " + " ".join("{ " + " ".join(b) + " }" for b in blocks))
    for (v, i), e in sorted(graph.choice_override.items()):
        lines.append(f"choice {v} {i} {e}")
    for v, i in sorted(graph.relative):
        lines.append(f"relative {v} {i}")
    return "\n".join(lines) + "\n"


def block_tag(graph: SeparatedGraph, ref: BlockRef) -> str:
    """Suffix used for the added sink and edge of a block: the sorted edge names."""
    return "".join(sorted(graph.block(ref)))


def extend_graph(graph: SeparatedGraph, S=None, choose_added: bool = False):
    """Add a sink v_X and an edge d_X for each block X not in S.

    Returns (new graph, added) where ``added`` maps each BlockRef to the new
    edge name. When ``choose_added`` is set the new choice function picks d_X
    in every extended block; otherwise the old choice is kept.
    """
    S = set(graph.relative if S is None else S)
    vertices = list(graph.vertices)
    edges = [(e, graph.source[e], graph.range[e]) for e in graph.edges]
    partition = {v: [list(b) for b in graph.partition.get(v, ())] for v in graph.vertices}
    taken = set(graph.vertices) | set(graph.edges)
    choice = default_choice(graph)
    added = {}
    for ref in graph.blocks():
        if ref in S:
            continue
        v, i = ref
        tag = block_tag(graph, ref)
        d, sink = f"d_{tag}", f"v_{tag}"
        n = 2
        while d in taken or sink in taken:
            d, sink = f"d_{tag}_{n}", f"v_{tag}_{n}"
            n += 1
        taken |= {d, sink}
        vertices.append(sink)
        edges.append((d, v, sink))
        partition[v][i].append(d)
        added[ref] = d
        if choose_added:
            choice[ref] = d
    relative = [ref for ref in graph.relative]
    ext = make_graph(vertices, edges, partition, choice, relative,
                     name=(graph.name + "_ext") if graph.name else "")
    return ext, added
