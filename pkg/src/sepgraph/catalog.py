"""Small named graphs used throughout the tests and the CLI."""

from __future__ import annotations

from .graph import make_graph, parse_graph

TEXTS = {
    # a single arrow with the free separation
    "arrow": """
vertex u
vertex w
edge a u w
partition u { a }
""",
    # one vertex, two loops, each in its own block
    "cuntz2-free": """
vertex v
edge a v v
edge b v v
partition v { a } { b }
""",
    # one vertex, two loops in one block
    "cuntz2-joined": """
vertex v
edge a v v
edge b v v
partition v { a b }
""",
    "twopair": """
vertex v
vertex w1
vertex w2
vertex w3
vertex w4
edge a v w1
edge b v w2
edge c v w3
edge d v w4
partition v { a b } { c d }
""",
    "fim1": """
vertex v
vertex u
edge e v u
edge f v u
partition v { e } { f }
""",
    "line3": """
vertex u
vertex v
vertex w
edge a u v
edge b v w
partition u { a }
partition v { b }
""",
    # one loop, non-separated; its Cohn algebra is the Toeplitz algebra
    "loop1": """
vertex v
edge a v v
partition v { a }
""",
}

ALIASES = {"G1": "arrow", "G2": "cuntz2-free", "G3": "cuntz2-joined", "G4": "twopair",
           "G5": "fim1", "toeplitz": "loop1"}


def get(name: str):
    key = ALIASES.get(name, name)
    return parse_graph(TEXTS[key], name=key)


def names():
    return sorted(TEXTS)


def fim_graph(n: int):
    """The graph whose vertex corner realises the free inverse monoid on n letters."""
    if n < 1:
        raise ValueError("alphabet size must be at least 1")
    letters = [f"x{i}" for i in range(1, n + 1)] if n > 1 else ["x"]
    vertices = ["v"] + letters
    edges = []
    for x in letters:
        edges += [(f"e_{x}", "v", x), (f"f_{x}", "v", x)]
    partition = {"v": [[e] for e, _, _ in edges]}
    return make_graph(vertices, edges, partition, name=f"fim{n}"), letters
