"""Arm configurations in the workspace, the move catalogue, and the transition graph."""

from __future__ import annotations

import hashlib
import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from armspace.errors import GuardExceeded, IllegalMove, InvalidInput, guard_limit
from armspace.graph_core import Graph, GraphPath, Vertex
from armspace.pip import PipInstance, build_ip
from armspace.tableaux import PathTableau, iter_tableaux, parse_shorthand, tableau_violation

DEFAULT_NODE_LIMIT = 20000
COMMUTATIVITY_LIMIT = 6


class WorkVertex(NamedTuple):
    base: Vertex
    height: int


@dataclass(frozen=True)
class Configuration:
    """The ``length + 1`` workspace vertices visited by the arm, starting at ``(base, 0)``."""

    vertices: tuple[WorkVertex, ...]

    @cached_property
    def positions(self) -> dict[WorkVertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def horizontal_edges(self) -> list[int]:
        """1-based indices of the horizontal edges."""
        vs = self.vertices
        return [j for j in range(1, len(vs)) if vs[j].height == vs[j - 1].height]

    def to_json(self) -> list:
        return [[v.base, v.height] for v in self.vertices]

    def digest(self) -> str:
        return hashlib.sha1(json.dumps(self.to_json()).encode()).hexdigest()[:10]

    def __str__(self) -> str:
        return " ".join(f"({v.base},{v.height})" for v in self.vertices)


class Move(NamedTuple):
    """Tail (``T``) or corner (``C``) move; direction +1 raises the arm, -1 lowers it."""

    kind: str
    direction: int
    v: Vertex
    w: Vertex
    h: int

    @property
    def upward(self) -> bool:
        return self.direction > 0

    def inverse(self) -> Move:
        return self._replace(direction=-self.direction)

    def __str__(self) -> str:
        sign = "+" if self.direction > 0 else "-"
        return f"{self.kind}{sign}1[{self.v},{self.w},{self.h}]"

    def to_json(self) -> dict:
        return {"kind": self.kind, "dir": self.direction, "v": self.v, "w": self.w, "h": self.h}

    @classmethod
    def from_json(cls, doc: dict) -> Move:
        return cls(doc["kind"], int(doc["dir"]), doc["v"], doc["w"], int(doc["h"]))


@dataclass
class TransitionGraph:
    nodes: list[Configuration]
    edges: list[tuple[int, int, Move]]
    index: dict[Configuration, int] = field(repr=False)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def bfs(self, source: int) -> list[int]:
        dist = [-1] * len(self.nodes)
        dist[source] = 0
        queue = deque([source])
        adj = self.adjacency
        while queue:
            i = queue.popleft()
            for j in adj[i]:
                if dist[j] < 0:
                    dist[j] = dist[i] + 1
                    queue.append(j)
        return dist

    def to_dot(self, full_labels: bool = False) -> str:
        lines = ["graph transitions {", '  node [shape=point];' if not full_labels else '  node [shape=box, fontsize=8];']
        for i, x in enumerate(self.nodes):
            label = str(x) if full_labels else x.digest()
            lines.append(f'  c{i} [label="{label}", tooltip="{x.digest()}"];')
        for i, j, m in self.edges:
            lines.append(f'  c{i} -- c{j} [label="{m}"];' if full_labels else f"  c{i} -- c{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "nodes": [x.to_json() for x in self.nodes],
            "adjacency": [sorted(a) for a in self.adjacency],
        }


class RobotArm:
    """The arm of ``length`` segments anchored at ``base`` over ``graph``.

    Holds the ambient data every configuration-level operation needs.
    """

    def __init__(self, graph: Graph, base: Vertex, length: int):
        if base not in graph.order:
            raise InvalidInput(f"base vertex {base!r} is not in the graph")
        if length < 0:
            raise InvalidInput("arm length must be nonnegative")
        self.graph = graph
        self.base = base
        self.length = length
        self._successors: dict[Configuration, tuple[tuple[Move, Configuration], ...]] = {}
        self.memo: dict[str, dict] = {}

    def __repr__(self) -> str:
        return f"RobotArm({self.graph!r}, base={self.base!r}, length={self.length})"

    @cached_property
    def pip(self) -> PipInstance:
        return build_ip(self.graph, self.base, self.length)

    def initial(self) -> Configuration:
        return Configuration(tuple(WorkVertex(self.base, h) for h in range(self.length + 1)))

    def violation(self, x: Configuration) -> str | None:
        vs = x.vertices
        if len(vs) != self.length + 1:
            return f"expected {self.length + 1} vertices, got {len(vs)}"
        if vs[0] != (self.base, 0):
            return "must start at the base on the ground floor"
        for a, b in zip(vs, vs[1:]):
            if b.height == a.height:
                if not self.graph.has_edge(a.base, b.base):
                    return f"{a.base}-{b.base} is not an edge"
            elif b.height == a.height + 1:
                if a.base != b.base:
                    return "vertical step must stay above the same vertex"
            else:
                return "heights must weakly increase by unit steps"
        if len(set(vs)) != len(vs):
            return "arm intersects itself"
        return None

    def check(self, x: Configuration) -> Configuration:
        problem = self.violation(x)
        if problem:
            raise InvalidInput(f"invalid configuration: {problem}")
        return x

    def configuration(self, pairs: Iterable[Sequence]) -> Configuration:
        return self.check(Configuration(tuple(WorkVertex(str(v), int(h)) for v, h in pairs)))

    def legal_moves(self, x: Configuration) -> list[Move]:
        """Moves whose support contains ``x``, ordered by edge position then upward first."""
        vs, pos, last = x.vertices, x.positions, self.length
        out: list[Move] = []
        for j in range(1, last + 1):
            (v, h), (w, h2) = vs[j - 1], vs[j]
            if h == h2:
                if j == last:
                    out.append(Move("T", 1, v, w, h))
                elif vs[j + 1] == (w, h + 1) and (v, h + 1) not in pos:
                    out.append(Move("C", 1, v, w, h))
            elif j == last:
                for u in self.graph.adjacency[v]:
                    if (u, h) not in pos:
                        out.append(Move("T", -1, v, u, h))
            else:
                nxt = vs[j + 1]
                if nxt.height == h + 1 and nxt.base != v and (nxt.base, h) not in pos:
                    out.append(Move("C", -1, v, nxt.base, h))
        return out

    def successors(self, x: Configuration) -> tuple[tuple[Move, Configuration], ...]:
        """Legal moves of ``x`` paired with their results (memoised per arm)."""
        out = self._successors.get(x)
        if out is None:
            out = tuple((m, self.apply(x, m)) for m in self.legal_moves(x))
            self._successors[x] = out
        return out

    def apply(self, x: Configuration, m: Move) -> Configuration:
        """Apply one move; every move replaces exactly one vertex of the arm."""
        vs, pos = x.vertices, x.positions
        kind, d, v, w, h = m
        i = pos.get((v, h))
        if i is None or not self.graph.has_edge(v, w):
            raise IllegalMove(f"{m} is not legal here")
        last = self.length
        if kind == "T":
            if i != last - 1:
                raise IllegalMove(f"{m}: ({v},{h}) is not the second-to-last vertex")
            old, new = ((w, h), (v, h + 1)) if d > 0 else ((v, h + 1), (w, h))
            k = last
        elif kind == "C":
            if i > last - 2:
                raise IllegalMove(f"{m} needs two edges after ({v},{h})")
            if d > 0:
                if vs[i + 2] != (w, h + 1):
                    raise IllegalMove(f"{m}: no corner at ({w},{h})")
                old, new = (w, h), (v, h + 1)
            else:
                if vs[i + 2] != (w, h + 1):
                    raise IllegalMove(f"{m}: no corner at ({v},{h + 1})")
                old, new = (v, h + 1), (w, h)
            k = i + 1
        else:
            raise IllegalMove(f"unknown move kind {kind!r}")
        if vs[k] != old or new in pos:
            raise IllegalMove(f"{m} is not legal here")
        return Configuration(vs[:k] + (WorkVertex(*new),) + vs[k + 1 :])

    def apply_all(self, x: Configuration, moves: Iterable[Move]) -> Configuration:
        for m in moves:
            x = self.apply(x, m)
        return x

    def is_commutative_set(self, x: Configuration, moves: Iterable[Move], limit: int = COMMUTATIVITY_LIMIT) -> bool:
        """Every ordering of every subset applies legally and lands on a state fixed by the subset.

        Walks the tree of all orderings (each ordering of a subset is a
        prefix of some ordering of the whole set).
        """
        moves = list(dict.fromkeys(moves))
        if len(moves) > limit:
            raise GuardExceeded("commutativity check", len(moves), limit)
        outcome: dict[frozenset[int], Configuration] = {frozenset(): x}
        stack: list[tuple[tuple[int, ...], Configuration]] = [((), x)]
        while stack:
            done, y = stack.pop()
            for k in range(len(moves)):
                if k in done:
                    continue
                try:
                    z = self.apply(y, moves[k])
                except IllegalMove:
                    return False
                key = frozenset(done + (k,))
                if outcome.setdefault(key, z) != z:
                    return False
                stack.append((done + (k,), z))
        return True

    def commute_pairwise(self, x: Configuration, moves: Sequence[Move]) -> bool:
        """Cheap check: every pair of moves closes a square at ``x``."""
        for a, b in itertools.combinations(moves, 2):
            try:
                if self.apply(self.apply(x, a), b) != self.apply(self.apply(x, b), a):
                    return False
            except IllegalMove:
                return False
        return True

    def transition_graph(self, limit: int | None = DEFAULT_NODE_LIMIT) -> TransitionGraph:
        """Breadth-first closure of the initial configuration under legal moves."""
        if limit is not None:
            limit = guard_limit(limit)
        start = self.initial()
        index = {start: 0}
        nodes = [start]
        edges: list[tuple[int, int, Move]] = []
        queue = deque([start])
        while queue:
            x = queue.popleft()
            i = index[x]
            for m in self.legal_moves(x):
                y = self.apply(x, m)
                j = index.get(y)
                if j is None:
                    j = len(nodes)
                    if limit is not None and j >= limit:
                        raise GuardExceeded("transition graph", j + 1, limit)
                    index[y] = j
                    nodes.append(y)
                    queue.append(y)
                if m.upward:
                    edges.append((i, j, m))
        return TransitionGraph(nodes, edges, index)

    def to_tableau(self, x: Configuration) -> PathTableau:
        """Keep the horizontal edges: their bases form the path and their heights the labels."""
        vs = x.vertices
        path = [vs[0].base]
        labels = []
        for j in range(1, len(vs)):
            if vs[j].height == vs[j - 1].height:
                path.append(vs[j].base)
                labels.append(vs[j].height)
        return PathTableau(GraphPath(self.graph, tuple(path)), tuple(labels))

    def from_tableau(self, t: PathTableau) -> Configuration:
        """Insert the unique vertical fill between the horizontal edges of ``t``."""
        p = t.path.vertices
        if p[0] != self.base:
            raise InvalidInput(f"tableau path must start at {self.base!r}")
        problem = tableau_violation(p, t.labels, self.length)
        if problem:
            raise InvalidInput(f"invalid tableau {t}: {problem}")
        out = [WorkVertex(p[0], 0)]
        h = 0
        for i, lab in enumerate(t.labels, start=1):
            while h < lab:
                h += 1
                out.append(WorkVertex(p[i - 1], h))
            out.append(WorkVertex(p[i], h))
        top = self.length - len(t.labels)
        while h < top:
            h += 1
            out.append(WorkVertex(p[-1], h))
        return Configuration(tuple(out))

    def configurations(self) -> list[Configuration]:
        """Every configuration, enumerated through tableaux (independent of the move rules)."""
        return [self.from_tableau(t) for t in iter_tableaux(self.graph, self.base, self.length)]

    def parse(self, text: str) -> Configuration:
        """A configuration from JSON ``[["b",0],...]`` or tableau shorthand ``b,a:0``."""
        text = text.strip()
        if text.startswith("["):
            try:
                pairs = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"invalid configuration JSON: {exc}") from None
            return self.configuration(pairs)
        return self.from_tableau(parse_shorthand(self.graph, text))
