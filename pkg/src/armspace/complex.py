"""The two cubical complexes (configuration space and lower-set complex) and the map between them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Sequence

from armspace.arm import Configuration, Move, RobotArm
from armspace.checks import CheckReport, iter_bits
from armspace.errors import InvalidInput
from armspace.graph_core import n_blocks
from armspace.pip import (
    DEFAULT_PIP_LIMIT,
    IndexedPath,
    LowerSet,
    PipInstance,
    enumerate_consistent_lower_sets,
    lower_set_generated,
)
from armspace.tableaux import PathTableau

DEFAULT_COMPLEX_LIMIT = 20000


@dataclass(frozen=True)
class Cube:
    """A cube given by its corner grid: ``grid[S]`` is the vertex reached by the directions in bitmask ``S``."""

    grid: tuple[int, ...]
    anchor: Hashable = field(default=None, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.grid).bit_length() - 1

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.grid)

    def faces(self) -> list[frozenset[int]]:
        k = self.dimension
        out = []
        for d in range(k):
            bit = 1 << d
            out.append(frozenset(v for s, v in enumerate(self.grid) if not s & bit))
            out.append(frozenset(v for s, v in enumerate(self.grid) if s & bit))
        return out


@dataclass
class CubicalComplex:
    vertices: list
    cubes: list[list[Cube]]
    root: int = 0

    @property
    def f_vector(self) -> list[int]:
        return [len(level) for level in self.cubes]

    @property
    def dimension(self) -> int:
        return len(self.cubes) - 1

    def check_face_closure(self) -> CheckReport:
        present = [{c.vertex_set for c in level} for level in self.cubes]
        for k in range(1, len(self.cubes)):
            for c in self.cubes[k]:
                for face in c.faces():
                    if face not in present[k - 1]:
                        return CheckReport("face-closure", False, (c.anchor, sorted(face)), f"missing {k - 1}-face")
        return CheckReport("face-closure", True, detail=f"f-vector {self.f_vector}")

    @cached_property
    def cube_adjacency(self) -> list[set[int]]:
        """Vertices sharing at least one cube with each vertex."""
        adj: list[set[int]] = [set() for _ in self.vertices]
        for level in self.cubes[1:]:
            for c in level:
                for v in c.grid:
                    adj[v].update(c.grid)
        for v, a in enumerate(adj):
            a.discard(v)
        return adj

    def cube_distances(self, source: int) -> list[int]:
        """Breadth-first distances where one step moves between any two vertices of a common cube."""
        dist = [-1] * len(self.vertices)
        dist[source] = 0
        queue = deque([source])
        adj = self.cube_adjacency
        while queue:
            i = queue.popleft()
            for j in adj[i]:
                if dist[j] < 0:
                    dist[j] = dist[i] + 1
                    queue.append(j)
        return dist

    def to_json(self) -> dict:
        return {
            "vertices": len(self.vertices),
            "root": self.root,
            "cubes": [[sorted(c.vertex_set) for c in level] for level in self.cubes],
        }


def _add_cube(levels: list[list[Cube]], seen: set[frozenset[int]], cube: Cube) -> None:
    if cube.vertex_set in seen:
        return
    seen.add(cube.vertex_set)
    while len(levels) <= cube.dimension:
        levels.append([])
    levels[cube.dimension].append(cube)


def build_X(pip: PipInstance, limit: int | None = DEFAULT_PIP_LIMIT) -> CubicalComplex:
    """Complex whose vertices are consistent lower sets and whose cubes drop subsets of maximal elements."""
    lowers = enumerate_consistent_lower_sets(pip, limit=limit)
    ids = {mu.mask: i for i, mu in enumerate(lowers)}
    levels: list[list[Cube]] = [[]]
    seen: set[frozenset[int]] = set()
    for mu in lowers:
        tops = list(iter_bits(mu.maximal_mask))
        for sub in range(1 << len(tops)):
            chosen = [tops[d] for d in range(len(tops)) if sub >> d & 1]
            grid = []
            for s in range(1 << len(chosen)):
                removed = sum(1 << chosen[d] for d in range(len(chosen)) if s >> d & 1)
                grid.append(ids[mu.mask & ~removed])
            _add_cube(levels, seen, Cube(tuple(grid), anchor=(mu.mask, tuple(chosen))))
    root = ids[0]
    return CubicalComplex([mu for mu in lowers], levels, root)


def build_S(arm: RobotArm, limit: int | None = DEFAULT_COMPLEX_LIMIT) -> CubicalComplex:
    """Configuration space: a cube for each configuration and each set of its upward legal moves."""
    tg = arm.transition_graph(limit=limit)
    levels: list[list[Cube]] = [[]]
    seen: set[frozenset[int]] = set()
    for i, x in enumerate(tg.nodes):
        ups = [m for m in arm.legal_moves(x) if m.upward]
        for sub in range(1 << len(ups)):
            chosen = [ups[d] for d in range(len(ups)) if sub >> d & 1]
            states = [x]
            for s in range(1, 1 << len(chosen)):
                top = s.bit_length() - 1
                states.append(arm.apply(states[s ^ (1 << top)], chosen[top]))
            grid = tuple(tg.index[y] for y in states)
            if len(set(grid)) != len(grid):
                raise InvalidInput(f"upward moves {chosen} at {x} do not span a cube")
            _add_cube(levels, seen, Cube(grid, anchor=(i, tuple(chosen))))
    return CubicalComplex(tg.nodes, levels, tg.index[arm.initial()])


def sigma_generators(arm: RobotArm, x: Configuration) -> list[IndexedPath]:
    """One indexed path per horizontal edge: the prefix ending there, indexed by its height offset."""
    t = arm.to_tableau(x)
    out = []
    for j in range(1, len(t.labels) + 1):
        prefix = t.path.prefix(j)
        out.append(IndexedPath(prefix, t.labels[j - 1] - n_blocks(prefix.vertices) + 1))
    return out


def sigma(arm: RobotArm, x: Configuration) -> LowerSet:
    return lower_set_generated(arm.pip, sigma_generators(arm, x))


def sigma_mask(arm: RobotArm, t: PathTableau) -> int:
    """Bitmask of the lower set of a tableau, read off directly: every prefix with every index at or above its own."""
    pip = arm.pip
    vs = t.path.vertices
    mask = 0
    for j in range(1, len(vs)):
        prefix = vs[: j + 1]
        a = t.labels[j - 1] - n_blocks(prefix) + 1
        positions = pip.by_path[prefix]
        for p in positions[a:]:
            mask |= 1 << p
    return mask


def sigma_inverse(arm: RobotArm, mu: LowerSet) -> Configuration:
    """Recover the configuration from a consistent lower set of the arm's PIP."""
    if not mu.consistent:
        raise InvalidInput("lower set is not consistent")
    if not mu.is_lower:
        raise InvalidInput("not a lower set")
    members = [mu.pip.elements[i] for i in iter_bits(mu.mask)]
    if not members:
        return arm.initial()
    q = max((u.path for u in members), key=lambda p: p.length)
    least: dict[tuple, int] = {}
    for u in members:
        vs = u.path.vertices
        if vs not in least or u.index < least[vs]:
            least[vs] = u.index
    labels = []
    for i in range(1, q.length + 1):
        prefix = q.vertices[: i + 1]
        if prefix not in least:
            raise InvalidInput(f"lower set has no element on prefix {'->'.join(prefix)}")
        labels.append(least[prefix] + n_blocks(prefix) - 1)
    return arm.from_tableau(PathTableau(q, tuple(labels)))


def chi(arm: RobotArm, x: Configuration) -> dict[Move, IndexedPath]:
    """Upward legal moves of ``x`` paired with the maximal elements of its lower set they remove."""
    gens = sigma_generators(arm, x)
    horizontals = x.horizontal_edges()
    rank = {j: r for r, j in enumerate(horizontals)}
    out = {}
    for m in arm.legal_moves(x):
        if not m.upward:
            continue
        if m.kind == "T":
            out[m] = gens[-1]
        else:
            j = x.positions[(m.v, m.h)] + 1
            out[m] = gens[rank[j]]
    return out


def check_cube_isomorphism(
    arm: RobotArm,
    limit: int | None = DEFAULT_COMPLEX_LIMIT,
    sigma_fn: Callable[[RobotArm, Configuration], int] | None = None,
) -> list[CheckReport]:
    """Verify that the lower-set map is an isomorphism of cubical complexes.

    ``sigma_fn`` maps a configuration to a lower-set bitmask; by default the
    generated lower set.  Returns one report each for the 0-skeleton
    bijection, the move/maximal-element bijection, the local cube condition,
    and the f-vector comparison.
    """
    pip = arm.pip
    if sigma_fn is None:
        def sigma_fn(a: RobotArm, x: Configuration) -> int:
            return sigma(a, x).mask

    S = build_S(arm, limit=limit)
    X = build_X(pip, limit=None)
    configs: list[Configuration] = S.vertices
    masks = [sigma_fn(arm, x) for x in configs]
    lower_masks = {mu.mask for mu in X.vertices}

    reports = []
    name = "sigma-bijection"
    if len(set(masks)) != len(masks):
        reports.append(CheckReport(name, False, None, "two configurations share a lower set"))
    elif set(masks) != lower_masks:
        stray = next((x for x, m in zip(configs, masks) if m not in lower_masks), None)
        reports.append(CheckReport(name, False, stray, f"{len(configs)} configurations vs {len(lower_masks)} lower sets"))
    else:
        bad = next((x for x, m in zip(configs, masks) if sigma_inverse(arm, LowerSet(pip, m)) != x), None)
        reports.append(CheckReport(name, bad is None, bad, f"{len(configs)} vertices"))

    index = {x: i for i, x in enumerate(configs)}
    chi_bad = None
    local_bad = None
    for x, mx in zip(configs, masks):
        mapping = {m: 1 << pip.position[u] for m, u in chi(arm, x).items()}
        tops = LowerSet(pip, mx).maximal_mask
        image = 0
        for bit in mapping.values():
            image |= bit
        if chi_bad is None and (len(set(mapping.values())) != len(mapping) or image != tops):
            chi_bad = x
        if local_bad is None:
            moves = list(mapping)
            for sub in range(1, 1 << len(moves)):
                chosen = [moves[d] for d in range(len(moves)) if sub >> d & 1]
                y = arm.apply_all(x, chosen)
                removed = 0
                for m in chosen:
                    removed |= mapping[m]
                if masks[index[y]] != mx & ~removed:
                    local_bad = (x, chosen)
                    break
    reports.append(CheckReport("chi-bijection", chi_bad is None, chi_bad, "upward moves vs maximal elements"))
    reports.append(CheckReport("chi-local-cubes", local_bad is None, local_bad, "lower set after moves = removal of images"))
    same = S.f_vector == X.f_vector
    reports.append(CheckReport("f-vectors", same, None if same else (S.f_vector, X.f_vector),
                               f"S {S.f_vector} / X {X.f_vector}",
                               stats={"S": S.f_vector, "X": X.f_vector}))
    return reports


def transition_adjacency_by_lower_sets(masks: Sequence[int]) -> list[list[int]]:
    """Pairs of lower sets differing in exactly one element (used to cross-check the edge rule)."""
    pos = {m: i for i, m in enumerate(masks)}
    adj: list[list[int]] = [[] for _ in masks]
    for i, m in enumerate(masks):
        rest = m
        while rest:
            low = rest & -rest
            j = pos.get(m ^ low)
            if j is not None:
                adj[i].append(j)
                adj[j].append(i)
            rest ^= low
    return adj
