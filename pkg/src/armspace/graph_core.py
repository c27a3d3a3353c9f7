"""Graphs, walks on graphs, and the maximal-length cycle-free suffix decomposition."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Sequence

from armspace.errors import GraphError

Vertex = str


@dataclass(frozen=True)
class Graph:
    """A finite simple connected graph.

    ``vertices`` keeps document order, which fixes every enumeration order in
    the package.
    """

    vertices: tuple[Vertex, ...]
    edges: frozenset[frozenset[Vertex]]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise GraphError("graph has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex identifiers")
        known = set(self.vertices)
        for e in self.edges:
            if len(e) != 2:
                raise GraphError(f"loop at {sorted(e)[0]!r}")
            unknown = e - known
            if unknown:
                raise GraphError(f"edge references unknown vertex {sorted(unknown)[0]!r}")
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for w in self.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != len(self.vertices):
            missing = [v for v in self.vertices if v not in seen]
            raise GraphError(f"graph is disconnected; unreachable: {missing}")

    @classmethod
    def from_edges(cls, vertices: Sequence[Vertex], edges: Sequence[Sequence[Vertex]]) -> Graph:
        seen: set[frozenset[Vertex]] = set()
        for pair in edges:
            if len(pair) != 2:
                raise GraphError(f"edge {list(pair)!r} must have exactly two endpoints")
            v, w = pair
            if v == w:
                raise GraphError(f"loop at {v!r}")
            e = frozenset((v, w))
            if e in seen:
                raise GraphError(f"duplicate edge {v!r}-{w!r}")
            seen.add(e)
        return cls(tuple(vertices), frozenset(seen))

    @cached_property
    def order(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> dict[Vertex, tuple[Vertex, ...]]:
        """Neighbours of each vertex, in canonical vertex order."""
        nbrs: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices}
        for e in self.edges:
            v, w = tuple(e)
            nbrs[v].append(w)
            nbrs[w].append(v)
        pos = {v: i for i, v in enumerate(self.vertices)}
        return {v: tuple(sorted(ws, key=pos.__getitem__)) for v, ws in nbrs.items()}

    @property
    def n(self) -> int:
        return len(self.vertices)

    def has_edge(self, v: Vertex, w: Vertex) -> bool:
        return w in self.adjacency.get(v, ())

    def path(self, *vertices: Vertex) -> GraphPath:
        return GraphPath(self, tuple(vertices))

    def to_json(self, base: Vertex | None = None) -> dict:
        edges = sorted((sorted(e, key=self.order.__getitem__) for e in self.edges),
                       key=lambda e: (self.order[e[0]], self.order[e[1]]))
        doc: dict = {"vertices": list(self.vertices), "edges": edges}
        if base is not None:
            doc["base"] = base
        return doc

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


def load_graph(document: str | dict) -> tuple[Graph, Vertex | None]:
    """Parse and validate a graph document; return the graph and its declared base (or None)."""
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from None
    else:
        doc = document
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise GraphError('graph document needs "vertices" and "edges"')
    vertices = doc["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise GraphError('"vertices" must be an array of strings')
    edges = doc["edges"]
    if not isinstance(edges, list) or not all(isinstance(e, list) for e in edges):
        raise GraphError('"edges" must be an array of 2-element arrays')
    graph = Graph.from_edges(vertices, edges)
    base = doc.get("base")
    if base is not None and base not in graph.order:
        raise GraphError(f"base vertex {base!r} is not in the graph")
    return graph, base


@dataclass(frozen=True, eq=False)
class GraphPath:
    """A walk ``p_0, ..., p_{#p}`` along edges of ``graph``.

    Equality and hashing use the vertex sequence only.  A path of length zero
    is the go-nowhere path at its single vertex.
    """

    graph: Graph = field(repr=False)
    vertices: tuple[Vertex, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise GraphError("a path needs at least its base vertex")
        adj = self.graph.adjacency
        if self.vertices[0] not in adj:
            raise GraphError(f"unknown vertex {self.vertices[0]!r}")
        for v, w in zip(self.vertices, self.vertices[1:]):
            if w not in adj.get(v, ()):
                raise GraphError(f"{v!r}-{w!r} is not an edge")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GraphPath) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices) - 1

    def __str__(self) -> str:
        return "->".join(self.vertices)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> Vertex:
        return self.vertices[0]

    @property
    def end(self) -> Vertex:
        return self.vertices[-1]

    def edge(self, i: int) -> frozenset[Vertex]:
        """The ``i``-th edge, 1-based."""
        if not 1 <= i <= self.length:
            raise IndexError(i)
        return frozenset((self.vertices[i - 1], self.vertices[i]))

    def prefix(self, k: int) -> GraphPath:
        return GraphPath(self.graph, self.vertices[: k + 1])

    def concat(self, other: GraphPath) -> GraphPath:
        if self.end != other.start:
            raise GraphError(f"cannot concatenate: {self.end!r} != {other.start!r}")
        return GraphPath(self.graph, self.vertices + other.vertices[1:])

    def extend(self, w: Vertex) -> GraphPath:
        return GraphPath(self.graph, self.vertices + (w,))


@dataclass(frozen=True)
class SuffixDecomposition:
    path: GraphPath
    block_lengths: tuple[int, ...]

    @property
    def n_blocks(self) -> int:
        return len(self.block_lengths)

    @cached_property
    def block_index(self) -> tuple[int, ...]:
        """``d_p(r)`` for ``r = 1..#p`` (the tuple is 0-based in ``r``)."""
        return _block_index(self.block_lengths)

    def d(self, r: int) -> int:
        return self.block_index[r - 1]

    def blocks(self) -> list[GraphPath]:
        out, start = [], 0
        for size in self.block_lengths:
            out.append(GraphPath(self.path.graph, self.path.vertices[start : start + size + 1]))
            start += size
        return out


def is_cycle_free(p: GraphPath | Sequence[Vertex]) -> bool:
    vs = p.vertices if isinstance(p, GraphPath) else tuple(p)
    return len(set(vs)) == len(vs)


def is_prefix(p: GraphPath | Sequence[Vertex], r: GraphPath | Sequence[Vertex]) -> bool:
    a = p.vertices if isinstance(p, GraphPath) else tuple(p)
    b = r.vertices if isinstance(r, GraphPath) else tuple(r)
    return len(a) <= len(b) and b[: len(a)] == a


def _max_cycle_free_suffix(vs: Sequence[Vertex]) -> int:
    """Number of edges in the longest cycle-free suffix of the walk ``vs``."""
    seen = {vs[-1]}
    k = 0
    for v in reversed(vs[:-1]):
        if v in seen:
            break
        seen.add(v)
        k += 1
    return k


@lru_cache(maxsize=None)
def block_lengths(vs: tuple[Vertex, ...]) -> tuple[int, ...]:
    """Block sizes of the maximal-length cycle-free suffix decomposition, right-to-left peeling."""
    if len(vs) < 2:
        raise GraphError("the suffix decomposition is defined for paths of positive length only")
    out: list[int] = []
    end = len(vs)
    while end > 1:
        k = _max_cycle_free_suffix(vs[:end])
        out.append(k)
        end -= k
    return tuple(reversed(out))


@lru_cache(maxsize=None)
def _block_index(lengths: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(t for t, size in enumerate(lengths, start=1) for _ in range(size))


def n_blocks(vs: tuple[Vertex, ...]) -> int:
    return len(block_lengths(vs))


def block_index(vs: tuple[Vertex, ...]) -> tuple[int, ...]:
    return _block_index(block_lengths(vs))


def satisfies_suffix_property(vs: Sequence[Vertex], lengths: Sequence[int]) -> bool:
    """Check the defining property left to right: every block is the longest
    cycle-free suffix of the prefix it ends."""
    vs = tuple(vs)
    if any(k <= 0 for k in lengths) or sum(lengths) != len(vs) - 1:
        return False
    end = 1
    for k in lengths:
        end += k
        if _max_cycle_free_suffix(vs[:end]) != k:
            return False
    return True


def suffix_decomposition(p: GraphPath) -> SuffixDecomposition:
    lengths = block_lengths(p.vertices)
    if __debug__ and not satisfies_suffix_property(p.vertices, lengths):
        raise AssertionError(f"suffix decomposition of {p} failed its verification pass")
    return SuffixDecomposition(p, lengths)


def enumerate_gb_paths(
    g: Graph, b: Vertex, bound: Callable[[int, int], bool]
) -> list[GraphPath]:
    """All walks of positive length from ``b`` accepted by ``bound(length, n_blocks)``.

    Results come in lexicographic order of vertex sequences (by canonical vertex
    order).  ``bound`` must be antitone along extensions: once a walk is
    rejected, every extension of it must be rejected too, because the search
    stops descending there.
    """
    if b not in g.order:
        raise GraphError(f"base vertex {b!r} is not in the graph")
    adj = g.adjacency
    out: list[GraphPath] = []

    def walk(vs: tuple[Vertex, ...]) -> None:
        for w in adj[vs[-1]]:
            ext = vs + (w,)
            if bound(len(ext) - 1, n_blocks(ext)):
                out.append(GraphPath(g, ext))
                walk(ext)

    walk((b,))
    return out


def iter_walks(g: Graph, b: Vertex, max_length: int) -> Iterator[tuple[Vertex, ...]]:
    """Every walk from ``b`` with at most ``max_length`` edges, including the empty one."""
    stack = [(b,)]
    while stack:
        vs = stack.pop()
        yield vs
        if len(vs) - 1 < max_length:
            for w in reversed(g.adjacency[vs[-1]]):
                stack.append(vs + (w,))
