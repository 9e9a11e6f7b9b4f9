"""Normal forms for tame Cohn and Leavitt algebras of separated graphs."""

from .algebra import Algebra, AlgebraElement, format_algebra
from .graph import GraphError, ParseError, SeparatedGraph, load_graph, make_graph, parse_graph
from .paths import DomainError, Path, parse_path
from .trees import Tree, parse_tree

__all__ = [
    "Algebra", "AlgebraElement", "DomainError", "GraphError", "ParseError", "Path",
    "SeparatedGraph", "Tree", "format_algebra", "load_graph", "make_graph", "parse_graph",
    "parse_path", "parse_tree",
]
