"""Posets with inconsistent pairs, lower sets, finite lattices, and the PIP of indexed paths."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from armspace.checks import CheckReport, first_bit, iter_bits
from armspace.errors import GraphError, GuardExceeded, InvalidInput, guard_limit
from armspace.graph_core import Graph, GraphPath, Vertex, block_index, is_prefix, iter_walks, n_blocks

DEFAULT_PIP_LIMIT = 64


@dataclass(frozen=True, order=False)
class IndexedPath:
    """An element ``<p, a>`` of the PIP of indexed paths: a positive-length walk from the base plus an index."""

    path: GraphPath
    index: int

    def __str__(self) -> str:
        return f"<{self.path}, {self.index}>"

    def sort_key(self) -> tuple:
        order = self.path.graph.order
        return (tuple(order[v] for v in self.path.vertices), self.index)

    def to_json(self) -> dict:
        return {"path": list(self.path.vertices), "a": self.index}


def index_range(path: tuple[Vertex, ...], length: int) -> range:
    """Admissible indices of ``path`` for an arm of the given length."""
    return range(0, length + 2 - (len(path) - 1) - n_blocks(path))


def ip_leq(u: IndexedPath, v: IndexedPath) -> bool:
    p, q = u.path.vertices, v.path.vertices
    if not is_prefix(p, q):
        return False
    return n_blocks(p) + u.index >= block_index(q)[len(p) - 2] + v.index


def ip_inconsistent(u: IndexedPath, v: IndexedPath) -> bool:
    p, q = u.path.vertices, v.path.vertices
    return not is_prefix(p, q) and not is_prefix(q, p)


class PipInstance:
    """A finite PIP stored as bitmask relations over positions ``0..N-1``.

    ``down[i]`` has bit ``j`` set iff element ``j`` is below or equal to
    element ``i``; ``incons[i]`` has bit ``j`` set iff ``i`` and ``j`` are an
    inconsistent pair.  The indexed-path PIP additionally remembers the graph,
    base and arm length it was built from.
    """

    def __init__(
        self,
        elements: Sequence[Hashable],
        down: Sequence[int],
        incons: Sequence[int],
        graph: Graph | None = None,
        base: Vertex | None = None,
        length: int | None = None,
    ):
        if not (len(elements) == len(down) == len(incons)):
            raise ValueError("relation tables must match the element list")
        self.elements = tuple(elements)
        self.down = list(down)
        self.incons = list(incons)
        self.graph = graph
        self.base = base
        self.length = length
        self.position = {e: i for i, e in enumerate(self.elements)}

    @classmethod
    def from_relations(
        cls,
        elements: Sequence[Hashable],
        leq: Callable[[Hashable, Hashable], bool],
        inconsistent: Callable[[Hashable, Hashable], bool] = lambda u, v: False,
    ) -> PipInstance:
        elements = list(elements)
        n = len(elements)
        down = [sum(1 << j for j in range(n) if leq(elements[j], elements[i])) for i in range(n)]
        incons = [sum(1 << j for j in range(n) if inconsistent(elements[i], elements[j])) for i in range(n)]
        return cls(elements, down, incons)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        if self.graph is not None:
            return f"PipInstance(IP[{self.graph!r}, base={self.base!r}, length={self.length}], N={len(self)})"
        return f"PipInstance(N={len(self)})"

    @cached_property
    def up(self) -> list[int]:
        up = [0] * len(self)
        for i, mask in enumerate(self.down):
            for j in iter_bits(mask):
                up[j] |= 1 << i
        return up

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self)) - 1

    def leq(self, u: Hashable, v: Hashable) -> bool:
        return bool(self.down[self.position[v]] >> self.position[u] & 1)

    def inconsistent(self, u: Hashable, v: Hashable) -> bool:
        return bool(self.incons[self.position[u]] >> self.position[v] & 1)

    def mask_of(self, items: Iterable[Hashable]) -> int:
        mask = 0
        for u in items:
            try:
                mask |= 1 << self.position[u]
            except KeyError:
                raise InvalidInput(f"{u} is not an element of {self!r}") from None
        return mask

    def corrupted(self, i: int, j: int) -> PipInstance:
        """Copy with the order relation between positions ``i`` and ``j`` flipped (negative controls)."""
        down = list(self.down)
        down[j] ^= 1 << i
        return PipInstance(self.elements, down, self.incons, self.graph, self.base, self.length)

    @cached_property
    def covers(self) -> list[int]:
        """``covers[i]``: mask of the elements covered by ``i``."""
        out = []
        for i, mask in enumerate(self.down):
            strict = mask & ~(1 << i)
            below = 0
            for j in iter_bits(strict):
                below |= self.down[j] & ~(1 << j)
            out.append(strict & ~below)
        return out

    def minimal_inconsistent_pairs(self) -> list[tuple[int, int]]:
        """Inconsistent pairs ``(i, j)``, ``i < j``, with no inconsistent pair strictly below them."""
        out = []
        for i in range(len(self)):
            for j in iter_bits(self.incons[i] >> (i + 1) << (i + 1)):
                if any(self.incons[k] >> j & 1 for k in iter_bits(self.covers[i])):
                    continue
                if any(self.incons[i] >> k & 1 for k in iter_bits(self.covers[j])):
                    continue
                out.append((i, j))
        return out


def build_ip(g: Graph, b: Vertex, length: int) -> PipInstance:
    """The PIP of indexed paths for the arm of ``length`` segments anchored at ``b``."""
    if b not in g.order:
        raise GraphError(f"base vertex {b!r} is not in the graph")
    if length < 0:
        raise ValueError("arm length must be nonnegative")
    # #p + n_p <= length + 1 with n_p >= 1 forces #p <= length.
    paths = [vs for vs in iter_walks(g, b, length) if len(vs) > 1 and len(vs) - 1 + n_blocks(vs) <= length + 1]
    order = g.order
    paths.sort(key=lambda vs: tuple(order[v] for v in vs))
    elements: list[IndexedPath] = []
    by_path: dict[tuple[Vertex, ...], list[int]] = {}
    for vs in paths:
        gp = GraphPath(g, vs)
        by_path[vs] = []
        for a in index_range(vs, length):
            by_path[vs].append(len(elements))
            elements.append(IndexedPath(gp, a))

    down = [0] * len(elements)
    for pos, v in enumerate(elements):
        q = v.path.vertices
        d_q = block_index(q)
        for k in range(2, len(q) + 1):
            p = q[:k]
            threshold = d_q[k - 2] + v.index - n_blocks(p)
            for u_pos in by_path[p]:
                if elements[u_pos].index >= threshold:
                    down[pos] |= 1 << u_pos

    related: dict[tuple[Vertex, ...], int] = {vs: 0 for vs in paths}
    for vs in paths:
        own = sum(1 << i for i in by_path[vs])
        for k in range(2, len(vs) + 1):
            related[vs[:k]] |= own
    for vs in paths:
        for k in range(2, len(vs)):
            related[vs] |= sum(1 << i for i in by_path[vs[:k]])
    full = (1 << len(elements)) - 1
    incons = [full & ~related[e.path.vertices] for e in elements]

    pip = PipInstance(elements, down, incons, graph=g, base=b, length=length)
    pip.by_path = by_path
    return pip


def verify_pip_axioms(pip: PipInstance) -> CheckReport:
    """Exhaustively check the poset axioms and the inconsistency axioms on the stored relations."""
    down, incons, n = pip.down, pip.incons, len(pip)
    els = pip.elements
    name = "pip-axioms"
    for i in range(n):
        if not down[i] >> i & 1:
            return CheckReport(name, False, (els[i],), "reflexivity")
    for i in range(n):
        for j in iter_bits(down[i] & ~(1 << i)):
            if down[j] >> i & 1:
                return CheckReport(name, False, (els[j], els[i]), "antisymmetry")
    for i in range(n):
        for j in iter_bits(down[i]):
            extra = down[j] & ~down[i]
            if extra:
                return CheckReport(name, False, (els[first_bit(extra)], els[j], els[i]), "transitivity")
    for i in range(n):
        for j in iter_bits(incons[i]):
            if not incons[j] >> i & 1:
                return CheckReport(name, False, (els[i], els[j]), "inconsistency symmetry")
    up = [0] * n
    for i in range(n):
        for j in iter_bits(down[i]):
            up[j] |= 1 << i
    for v in range(n):
        for w in iter_bits(up[v]):
            extra = incons[v] & ~incons[w]
            if extra:
                return CheckReport(name, False, (els[first_bit(extra)], els[v], els[w]), "inconsistency inheritance")
    return CheckReport(name, True, detail=f"{n} elements", stats={"elements": n})


def verify_against_definition(pip: PipInstance) -> CheckReport:
    """Recompute every stored relation of an indexed-path PIP pairwise from the definitions."""
    name = "pip-definition"
    els = pip.elements
    for i, v in enumerate(els):
        for j, u in enumerate(els):
            if bool(pip.down[i] >> j & 1) != ip_leq(u, v):
                return CheckReport(name, False, (str(u), str(v)), "order relation differs")
            if bool(pip.incons[i] >> j & 1) != ip_inconsistent(u, v):
                return CheckReport(name, False, (str(u), str(v)), "inconsistency differs")
    return CheckReport(name, True, detail=f"{len(els) ** 2} pairs")


@dataclass(frozen=True, eq=False)
class LowerSet:
    """A downward-closed subset of a PIP, stored as a bitmask over element positions."""

    pip: PipInstance = field(repr=False)
    mask: int

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LowerSet) and other.pip is self.pip and other.mask == self.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, u: Hashable) -> bool:
        pos = self.pip.position.get(u)
        return pos is not None and bool(self.mask >> pos & 1)

    def __repr__(self) -> str:
        return f"LowerSet({[str(u) for u in self.maximal]})"

    @property
    def members(self) -> frozenset:
        return frozenset(self.pip.elements[i] for i in iter_bits(self.mask))

    @cached_property
    def maximal_mask(self) -> int:
        up = self.pip.up
        return sum(1 << i for i in iter_bits(self.mask) if up[i] & self.mask == 1 << i)

    @property
    def maximal(self) -> tuple:
        """The antichain of maximal elements, in canonical element order."""
        return tuple(self.pip.elements[i] for i in iter_bits(self.maximal_mask))

    @property
    def is_lower(self) -> bool:
        down = self.pip.down
        return all(down[i] & ~self.mask == 0 for i in iter_bits(self.mask))

    @property
    def consistent(self) -> bool:
        incons = self.pip.incons
        return all(incons[i] & self.mask == 0 for i in iter_bits(self.mask))

    def to_json(self) -> list:
        return [u.to_json() if hasattr(u, "to_json") else repr(u) for u in self.maximal]


def lower_set_generated(pip: PipInstance, gens: Iterable[Hashable]) -> LowerSet:
    mask = 0
    for i in iter_bits(pip.mask_of(gens)):
        mask |= pip.down[i]
    return LowerSet(pip, mask)


def linear_extension(down: Sequence[int]) -> list[int]:
    """Positions sorted so that every element comes after everything below it (smallest position first)."""
    n = len(down)
    remaining = [(down[i] & ~(1 << i)).bit_count() for i in range(n)]
    up = [0] * n
    for i in range(n):
        for j in iter_bits(down[i] & ~(1 << i)):
            up[j] |= 1 << i
    import heapq

    ready = [i for i in range(n) if remaining[i] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        i = heapq.heappop(ready)
        out.append(i)
        for j in iter_bits(up[i]):
            remaining[j] -= 1
            if remaining[j] == 0:
                heapq.heappush(ready, j)
    if len(out) != n:
        raise ValueError("relation has a cycle; not a partial order")
    return out


def enumerate_lower_set_masks(down: Sequence[int], incons: Sequence[int] | None = None) -> list[int]:
    """All (consistent, if ``incons`` is given) lower sets as masks.

    Elements are decided in linear-extension order; an element may join only
    when everything below it is already in and it conflicts with nothing chosen,
    so every branch ends in an output and the search never backtracks idly.
    """
    order = linear_extension(down)
    n = len(order)
    strict = [down[i] & ~(1 << i) for i in range(len(down))]
    out: list[int] = []
    stack = [(0, 0)]
    while stack:
        pos, mask = stack.pop()
        if pos == n:
            out.append(mask)
            continue
        e = order[pos]
        if strict[e] & ~mask == 0 and (incons is None or incons[e] & mask == 0):
            stack.append((pos + 1, mask | 1 << e))
        stack.append((pos + 1, mask))
    return out


def enumerate_consistent_lower_sets(pip: PipInstance, limit: int | None = DEFAULT_PIP_LIMIT) -> list[LowerSet]:
    """Every consistent lower set of ``pip``; refuses PIPs with more than ``limit`` elements."""
    if limit is not None:
        limit = guard_limit(limit)
        if len(pip) > limit:
            raise GuardExceeded("consistent lower set enumeration", len(pip), limit)
    masks = enumerate_lower_set_masks(pip.down, pip.incons)
    masks.sort(key=lambda m: (m.bit_count(), m))
    return [LowerSet(pip, m) for m in masks]


class FiniteLattice:
    """A finite lattice with its order (``down`` masks) and meet/join tables over positions."""

    def __init__(self, elements: Sequence, down: Sequence[int], meet: list[list[int]], join: list[list[int]]):
        self.elements = list(elements)
        self.down = list(down)
        self.meet = meet
        self.join = join
        self.position = {e: i for i, e in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def from_order(cls, elements: Sequence, leq: Callable[[object, object], bool]) -> FiniteLattice:
        """Build the meet/join tables from the order alone; raises if some pair lacks a unique bound."""
        elements = list(elements)
        n = len(elements)
        down = [sum(1 << j for j in range(n) if leq(elements[j], elements[i])) for i in range(n)]
        up = [0] * n
        for i in range(n):
            for j in iter_bits(down[i]):
                up[j] |= 1 << i

        def extreme(bounds: int, rel: list[int]) -> int:
            best = [k for k in iter_bits(bounds) if rel[k] & bounds == bounds]
            if len(best) != 1:
                raise InvalidInput("not a lattice: a pair has no unique least upper / greatest lower bound")
            return best[0]

        join = [[extreme(up[i] & up[j], up) for j in range(n)] for i in range(n)]
        meet = [[extreme(down[i] & down[j], down) for j in range(n)] for i in range(n)]
        return cls(elements, down, meet, join)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    @cached_property
    def bottom(self) -> int:
        return next(i for i in range(len(self)) if self.down[i] == 1 << i)

    def check_laws(self) -> CheckReport:
        n, m, j = len(self), self.meet, self.join
        for a in range(n):
            for b in range(n):
                if m[a][b] != m[b][a] or j[a][b] != j[b][a]:
                    return CheckReport("lattice-laws", False, (a, b), "commutativity")
                if m[a][j[a][b]] != a or j[a][m[a][b]] != a:
                    return CheckReport("lattice-laws", False, (a, b), "absorption")
                for c in range(n):
                    if m[a][m[b][c]] != m[m[a][b]][c] or j[a][j[b][c]] != j[j[a][b]][c]:
                        return CheckReport("lattice-laws", False, (a, b, c), "associativity")
        return CheckReport("lattice-laws", True, detail=f"{n} elements")

    def distributivity_counterexample(self) -> tuple[int, int, int] | None:
        n, m, j = len(self), self.meet, self.join
        for a, b, c in itertools.product(range(n), repeat=3):
            if m[a][j[b][c]] != j[m[a][b]][m[a][c]]:
                return (a, b, c)
        return None

    def join_irreducibles(self) -> list[int]:
        """Non-bottom elements that are not the join of two strictly smaller elements."""
        out = []
        for k in range(len(self)):
            if k == self.bottom:
                continue
            below = list(iter_bits(self.down[k] & ~(1 << k)))
            if not any(self.join[a][b] == k for a in below for b in below):
                out.append(k)
        return out


def birkhoff_verify(lat: FiniteLattice) -> CheckReport:
    """Check that ``x -> {join-irreducibles below x}`` is a lattice isomorphism onto the lower sets of J."""
    name = "birkhoff"
    bad = lat.distributivity_counterexample()
    if bad is not None:
        return CheckReport(name, False, tuple(lat.elements[i] for i in bad), "not distributive")
    irr = lat.join_irreducibles()
    jpos = {k: t for t, k in enumerate(irr)}
    j_down = [sum(1 << jpos[a] for a in irr if lat.leq(a, k)) for k in irr]
    image = []
    for x in range(len(lat)):
        image.append(sum(1 << jpos[a] for a in irr if lat.leq(a, x)))
    targets = set(enumerate_lower_set_masks(j_down))
    if len(set(image)) != len(image):
        return CheckReport(name, False, None, "map is not injective")
    if set(image) != targets:
        missing = sorted(targets - set(image))
        return CheckReport(name, False, missing[:1], f"{len(targets)} lower sets of J vs {len(lat)} elements")
    for x in range(len(lat)):
        for y in range(len(lat)):
            if lat.leq(x, y) != (image[x] & ~image[y] == 0):
                return CheckReport(name, False, (lat.elements[x], lat.elements[y]), "order not preserved")
            if image[lat.join[x][y]] != image[x] | image[y] or image[lat.meet[x][y]] != image[x] & image[y]:
                return CheckReport(name, False, (lat.elements[x], lat.elements[y]), "join/meet not preserved")
    return CheckReport(name, True, detail=f"|L|={len(lat)}, |J|={len(irr)}",
                       stats={"size": len(lat), "join_irreducibles": len(irr)})


def hasse_dot(pip: PipInstance, name: str = "pip") -> str:
    """DOT source for the Hasse diagram; dashed undirected edges join minimal inconsistent pairs."""
    lines = [f"graph {name} {{", "  rankdir=BT;", '  node [shape=box, fontname="Helvetica"];']
    for i, u in enumerate(pip.elements):
        lines.append(f'  n{i} [label="{u}"];')
    for i in range(len(pip)):
        for j in iter_bits(pip.covers[i]):
            lines.append(f"  n{j} -- n{i};")
    for i, j in pip.minimal_inconsistent_pairs():
        lines.append(f"  n{i} -- n{j} [style=dashed, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
