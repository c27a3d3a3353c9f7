"""Path tableaux, tight tableaux, extended tableaux and their distributive lattices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from armspace.checks import CheckReport
from armspace.errors import GuardExceeded, InvalidInput, guard_limit
from armspace.graph_core import Graph, GraphPath, Vertex, block_index, is_prefix, n_blocks
from armspace.pip import FiniteLattice, IndexedPath, PipInstance, build_ip

INF = math.inf
DEFAULT_LATTICE_LIMIT = 5000


@dataclass(frozen=True, eq=False)
class PathTableau:
    """A walk from the base with one nonnegative label per edge."""

    path: GraphPath
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != self.path.length:
            raise InvalidInput(f"{len(self.labels)} labels for a path of length {self.path.length}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PathTableau) and (self.path.vertices, self.labels) == (
            other.path.vertices,
            other.labels,
        )

    def __hash__(self) -> int:
        return hash((self.path.vertices, self.labels))

    def __str__(self) -> str:
        return format_shorthand(self)

    def __len__(self) -> int:
        return len(self.labels)

    def to_json(self) -> dict:
        return {"path": list(self.path.vertices), "labels": list(self.labels)}


def format_shorthand(t: PathTableau) -> str:
    """``b,a,d:0,1`` style rendering (path vertices, then labels)."""
    return ",".join(t.path.vertices) + ":" + ",".join(map(str, t.labels))


def parse_shorthand(g: Graph, text: str) -> PathTableau:
    try:
        path_part, label_part = text.split(":")
    except ValueError:
        raise InvalidInput(f"tableau shorthand needs exactly one ':', got {text!r}") from None
    vertices = tuple(v.strip() for v in path_part.split(",") if v.strip())
    try:
        labels = tuple(int(x) for x in label_part.split(",") if x.strip())
    except ValueError:
        raise InvalidInput(f"labels must be integers: {label_part!r}") from None
    return PathTableau(GraphPath(g, vertices), labels)


def tableau_violation(path: Sequence[Vertex], labels: Sequence[int], length: int) -> str | None:
    """Name of the first violated tableau condition, or None if the labelling is valid."""
    k = len(path) - 1
    if len(labels) != k:
        return "label count"
    if any(x < 0 for x in labels):
        return "negative label"
    if any(labels[i] > labels[i + 1] for i in range(k - 1)):
        return "weakly increasing"
    last_left: dict[Vertex, int] = {}
    for j in range(1, k + 1):
        # edge i starts at path[i-1]; a later edge j ending there needs a strictly larger label
        last_left[path[j - 1]] = j
        i = last_left.get(path[j])
        if i is not None and i < j and not labels[i - 1] < labels[j - 1]:
            return "revisit"
    if k and labels[-1] + k > length:
        return "height bound"
    return None


def is_tableau(p: GraphPath, labels: Sequence[int], length: int) -> bool:
    return tableau_violation(p.vertices, labels, length) is None


def tau(u: IndexedPath) -> PathTableau:
    """The tight tableau of an indexed path: edge ``r`` is labelled by its block number plus ``index - 1``."""
    return PathTableau(u.path, tuple(d + u.index - 1 for d in block_index(u.path.vertices)))


def is_tight(t: PathTableau) -> bool:
    if t.path.length == 0:
        raise InvalidInput("tightness is defined for tableaux on positive-length paths")
    a = t.labels[-1] - n_blocks(t.path.vertices) + 1
    if a < 0:
        return False
    return tau(IndexedPath(t.path, a)).labels == t.labels


def tight_index(t: PathTableau) -> int:
    """The index ``a`` with ``tau(<p, a>) == t`` for a tight tableau ``t``."""
    if not is_tight(t):
        raise InvalidInput(f"{t} is not tight")
    return t.labels[-1] - n_blocks(t.path.vertices) + 1


def iter_tableaux(g: Graph, b: Vertex, length: int, spine: Sequence[Vertex] | None = None) -> Iterator[PathTableau]:
    """All tableaux for the arm, or only those whose path is a prefix of ``spine``.

    Labels grow by depth-first search, tracking for each vertex the label of
    the latest edge that left it, which is the binding constraint for a
    later edge returning there.
    """
    if spine is not None and tuple(spine[:1]) != (b,):
        raise InvalidInput("spine must start at the base vertex")

    def rec(vs: tuple[Vertex, ...], labels: tuple[int, ...], left: dict[Vertex, int]):
        yield PathTableau(GraphPath(g, vs), labels)
        k = len(labels)
        if spine is not None:
            if k + 1 >= len(spine):
                return
            choices: Sequence[Vertex] = (spine[k + 1],)
        else:
            choices = g.adjacency[vs[-1]]
        lo = labels[-1] if labels else 0
        for w in choices:
            floor = lo
            if w in left:
                floor = max(floor, left[w] + 1)
            prev = left.get(vs[-1])
            for lab in range(floor, length - (k + 1) + 1):
                left[vs[-1]] = lab
                yield from rec(vs + (w,), labels + (lab,), left)
            if prev is None:
                left.pop(vs[-1], None)
            else:
                left[vs[-1]] = prev

    yield from rec((b,), (), {})


def count_tableaux(g: Graph, b: Vertex, length: int) -> int:
    return sum(1 for _ in iter_tableaux(g, b, length))


@dataclass(frozen=True, eq=False)
class ExtendedTableau:
    """A weakly increasing labelling of a spine by integers and infinity.

    Finite values fill an initial segment; that segment is an ordinary
    tableau on the matching prefix of the spine.
    """

    spine: GraphPath = field(repr=False)
    values: tuple[float, ...]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExtendedTableau) and (self.spine.vertices, self.values) == (
            other.spine.vertices,
            other.values,
        )

    def __hash__(self) -> int:
        return hash((self.spine.vertices, self.values))

    def __repr__(self) -> str:
        return "ExtendedTableau(" + ",".join("inf" if v == INF else str(v) for v in self.values) + ")"

    @property
    def finite_length(self) -> int:
        return sum(1 for v in self.values if v != INF)

    def is_valid(self, length: int) -> bool:
        vals = self.values
        if any(vals[i] > vals[i + 1] for i in range(len(vals) - 1)):
            return False
        m = self.finite_length
        if any(v != INF for v in vals[m:]):
            return False
        return tableau_violation(self.spine.vertices[: m + 1], [int(v) for v in vals[:m]], length) is None

    def truncate(self) -> PathTableau:
        m = self.finite_length
        return PathTableau(self.spine.prefix(m), tuple(int(v) for v in self.values[:m]))

    def leq(self, other: ExtendedTableau) -> bool:
        """Lattice order: smaller elements carry pointwise larger values."""
        return all(x >= y for x, y in zip(self.values, other.values))

    def to_json(self) -> dict:
        return {"spine": list(self.spine.vertices), "values": ["inf" if v == INF else int(v) for v in self.values]}


def extend(t: PathTableau, q: GraphPath) -> ExtendedTableau:
    if not is_prefix(t.path.vertices, q.vertices):
        raise InvalidInput(f"{t.path} is not a prefix of {q}")
    return ExtendedTableau(q, t.labels + (INF,) * (q.length - t.path.length))


def _same_spine(u: ExtendedTableau, v: ExtendedTableau) -> None:
    if u.spine.vertices != v.spine.vertices:
        raise InvalidInput("extended tableaux on different spines")


def ext_meet(u: ExtendedTableau, v: ExtendedTableau) -> ExtendedTableau:
    _same_spine(u, v)
    return ExtendedTableau(u.spine, tuple(max(x, y) for x, y in zip(u.values, v.values)))


def ext_join(u: ExtendedTableau, v: ExtendedTableau) -> ExtendedTableau:
    _same_spine(u, v)
    return ExtendedTableau(u.spine, tuple(min(x, y) for x, y in zip(u.values, v.values)))


def build_extended_lattice(q: GraphPath, length: int, limit: int | None = DEFAULT_LATTICE_LIMIT) -> FiniteLattice:
    """All extended tableaux on spine ``q`` with pointwise max/min as meet/join."""
    elements = [extend(t, q) for t in iter_tableaux(q.graph, q.start, length, spine=q.vertices)]
    if limit is not None:
        limit = guard_limit(limit)
        if len(elements) > limit:
            raise GuardExceeded("extended tableau lattice", len(elements), limit)
    elements.sort(key=lambda u: tuple(-v for v in u.values))
    pos = {u: i for i, u in enumerate(elements)}
    n = len(elements)
    down = [sum(1 << j for j in range(n) if elements[j].leq(elements[i])) for i in range(n)]
    meet = [[pos[ext_meet(a, b)] for b in elements] for a in elements]
    join = [[pos[ext_join(a, b)] for b in elements] for a in elements]
    return FiniteLattice(elements, down, meet, join)


def check_poset_iso(q: GraphPath, length: int, pip: PipInstance | None = None,
                    lattice: FiniteLattice | None = None) -> CheckReport:
    """``u -> extend(tau(u), q)`` must be an order isomorphism from the indexed paths along ``q``
    onto the join-irreducibles of the extended tableau lattice on ``q``."""
    name = f"poset-iso[{q}]"
    if pip is None:
        pip = build_ip(q.graph, q.start, length)
    if lattice is None:
        lattice = build_extended_lattice(q, length)
    below = [u for u in pip.elements if is_prefix(u.path.vertices, q.vertices)]
    image = [extend(tau(u), q) for u in below]
    irr = {lattice.elements[k] for k in lattice.join_irreducibles()}
    if len(set(image)) != len(image):
        return CheckReport(name, False, None, "map is not injective")
    if set(image) != irr:
        stray = [str(u) for u, im in zip(below, image) if im not in irr]
        return CheckReport(name, False, stray[:1] or None,
                           f"{len(image)} indexed paths vs {len(irr)} join-irreducibles")
    for u, iu in zip(below, image):
        for v, iv in zip(below, image):
            if pip.leq(u, v) != iu.leq(iv):
                return CheckReport(name, False, (u, v), "order mismatch")
    return CheckReport(name, True, detail=f"{len(image)} join-irreducibles")
