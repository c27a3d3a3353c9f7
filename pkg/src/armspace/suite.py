"""Named small graphs used for exhaustive checks, the CLI and the report."""

from __future__ import annotations

from armspace.graph_core import Graph, Vertex


def _complete(names: str) -> list[tuple[str, str]]:
    return [(u, v) for i, u in enumerate(names) for v in names[i + 1 :]]


# name -> (vertices, edges, base)
_SPECS: dict[str, tuple[str, list[tuple[str, str]], str]] = {
    "C3": ("bac", [("b", "a"), ("a", "c"), ("c", "b")], "b"),
    "C4": ("bacd", [("b", "a"), ("a", "c"), ("c", "d"), ("d", "b")], "b"),
    "K4": ("bacd", _complete("bacd"), "b"),
    "A3-end": ("bac", [("b", "a"), ("a", "c")], "b"),
    "A3-mid": ("abc", [("a", "b"), ("b", "c")], "b"),
    "paw": ("bacd", [("b", "a"), ("a", "c"), ("c", "b"), ("a", "d")], "b"),
    "star": ("bacd", [("b", "a"), ("b", "c"), ("b", "d")], "b"),
}

DESK_SUITE = tuple(_SPECS)


def named_graph(name: str) -> tuple[Graph, Vertex]:
    """Graph and base vertex of a desk-suite member, e.g. ``named_graph("C3")``."""
    try:
        vertices, edges, base = _SPECS[name]
    except KeyError:
        raise KeyError(f"unknown graph {name!r}; known: {', '.join(DESK_SUITE)}") from None
    return Graph.from_edges(list(vertices), edges), base


def single_vertex() -> Graph:
    return Graph.from_edges(["b"], [])
