from __future__ import annotations

import pytest

from sepgraph import catalog
from sepgraph.paths import parse_path
from sepgraph.trees import parse_tree


@pytest.fixture(params=["G2", "G3", "G4", "G5"])
def small_graph(request):
    return catalog.get(request.param)


def P(graph, text):
    return parse_path(graph, text)


def T(graph, text):
    return parse_tree(graph, text)
