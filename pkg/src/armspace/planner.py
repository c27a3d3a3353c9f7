"""Distances, optimal move plans, round schedules and the diameter of the transition graph."""

from __future__ import annotations

from dataclasses import dataclass, field

from armspace.arm import Configuration, Move, RobotArm
from armspace.complex import sigma_mask
from armspace.errors import ArmError, GuardExceeded, IllegalMove, InvalidInput, guard_limit
from armspace.graph_core import Graph, GraphPath, Vertex
from armspace.tableaux import PathTableau

DEFAULT_DIAMETER_LIMIT = 5000
MODES = ("bound", "exact-bfs", "exact-formula")


@dataclass
class Plan:
    source: Configuration
    target: Configuration
    moves: list[Move]
    rounds: list[list[int]] | None = None

    def __len__(self) -> int:
        return len(self.moves)

    def replay(self, arm: RobotArm) -> Configuration:
        """Apply the moves one by one from the source; raises IllegalMove or ArmError on a bad plan."""
        x = self.source
        for m in self.moves:
            x = arm.apply(x, m)
        if x != self.target:
            raise ArmError("plan does not end at its target")
        if self.rounds is not None:
            x = self.source
            for r in self.rounds:
                batch = [self.moves[k] for k in r]
                if not arm.is_commutative_set(x, batch, limit=max(len(batch), 1)):
                    raise ArmError(f"round {r} is not a commutative set")
                x = arm.apply_all(x, batch)
            if x != self.target:
                raise ArmError("rounds do not end at the target")
        return x

    def to_json(self) -> dict:
        out = {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "moves": [m.to_json() for m in self.moves],
        }
        if self.rounds is not None:
            out["rounds"] = self.rounds
        return out


@dataclass
class DiameterReport:
    n: int
    length: int
    bound: int
    tight_bound: int
    hypothesis_holds: bool
    mode: str
    exact: int | None = None
    witness: tuple[Configuration, Configuration] | None = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "length": self.length,
            "bound": self.bound,
            "tight_bound": self.tight_bound,
            "hypothesis_holds": self.hypothesis_holds,
            "mode": self.mode,
            "exact_diameter": self.exact,
            "witness": None if self.witness is None else [x.to_json() for x in self.witness],
            **({"stats": self.stats} if self.stats else {}),
        }


def _profile(length: int, labels: tuple[int, ...]) -> list[int]:
    return [length - lab - i for i, lab in enumerate(labels)]


def m_profile(arm: RobotArm, x: Configuration) -> list[int]:
    """Remaining vertical room ``length - L(i) - i + 1`` above each horizontal edge."""
    return _profile(arm.length, arm.to_tableau(x).labels)


def _common_prefix(p: tuple, q: tuple) -> int:
    """Number of shared edges at the start of two vertex sequences from the same base."""
    r = 0
    for a, b in zip(p[1:], q[1:]):
        if a != b:
            break
        r += 1
    return r


def tableau_distance(length: int, s: PathTableau, t: PathTableau) -> int:
    mx, my = _profile(length, s.labels), _profile(length, t.labels)
    r = _common_prefix(s.path.vertices, t.path.vertices)
    return sum(mx[r:]) + sum(my[r:]) + sum(abs(a - b) for a, b in zip(mx[:r], my[:r]))


def distance(arm: RobotArm, x: Configuration, y: Configuration) -> int:
    """Transition-graph distance from the profiles of the two induced tableaux."""
    return tableau_distance(arm.length, arm.to_tableau(x), arm.to_tableau(y))


def _config_mask(arm: RobotArm, x: Configuration) -> int:
    cache = arm.memo.setdefault("sigma_mask", {})
    mask = cache.get(x)
    if mask is None:
        mask = cache[x] = sigma_mask(arm, arm.to_tableau(x))
    return mask


def _improving_moves(arm: RobotArm, x: Configuration, cur: int, goal: int) -> list[tuple[Move, int, int]]:
    """Legal moves that change the lower set by one element of the remaining symmetric difference."""
    out = []
    todo = cur ^ goal
    for m, y in arm.successors(x):
        nxt = _config_mask(arm, y)
        changed = cur ^ nxt
        if changed & todo and changed.bit_count() == 1:
            out.append((m, changed.bit_length() - 1, nxt))
    return out


def plan_moves(arm: RobotArm, x: Configuration, y: Configuration) -> Plan:
    """A shortest move sequence, found by walking through lower sets.

    Removals (upward moves) come first, then additions; ties go to the
    earliest PIP element in canonical order.
    """
    arm.check(x)
    arm.check(y)
    cur, goal = _config_mask(arm, x), _config_mask(arm, y)
    moves: list[Move] = []
    z = x
    while cur != goal:
        options = _improving_moves(arm, z, cur, goal)
        if not options:
            raise ArmError(f"planner blocked at {z}")
        m, _, nxt = min(options, key=lambda o: (not o[0].upward, o[1]))
        z = dict(arm.successors(z))[m]
        cur = nxt
        moves.append(m)
    plan = Plan(x, y, moves)
    expected = distance(arm, x, y)
    if len(moves) != expected:
        raise ArmError(f"plan has {len(moves)} moves but the distance is {expected}")
    return plan


def plan_rounds(arm: RobotArm, x: Configuration, y: Configuration) -> Plan:
    """Schedule moves in rounds: each round applies every improving move at once.

    In the configuration space these moves always span a cube, so they
    commute; if a round were ever not commutative the scheduler would fall
    back to a greedy pairwise-commuting subset.
    """
    arm.check(x)
    arm.check(y)
    cur, goal = _config_mask(arm, x), _config_mask(arm, y)
    moves: list[Move] = []
    rounds: list[list[int]] = []
    z = x
    while cur != goal:
        batch = [m for m, _, _ in _improving_moves(arm, z, cur, goal)]
        if not batch:
            raise ArmError(f"scheduler blocked at {z}")
        if not _commutes(arm, z, batch):
            chosen: list[Move] = []
            for m in batch:
                if arm.commute_pairwise(z, chosen + [m]):
                    chosen.append(m)
            batch = chosen
        rounds.append(list(range(len(moves), len(moves) + len(batch))))
        moves.extend(batch)
        z = arm.apply_all(z, batch)
        cur = _config_mask(arm, z)
    return Plan(x, y, moves, rounds)


def _commutes(arm: RobotArm, x: Configuration, batch: list[Move]) -> bool:
    try:
        return arm.is_commutative_set(x, batch, limit=max(len(batch), 1))
    except IllegalMove:
        return False


def omega(length: int, n: int) -> int:
    """Closed form floor((n - 1)(length + 1)^2 / 2n) of half the diameter bound.

    Agrees with :func:`omega_sum` whenever n <= 7; beyond that it can exceed
    it by floor((r + 1)(n - r - 1) / 2n) with r = length mod n, so it is
    an upper bound but not always attained.
    """
    if n < 1:
        raise InvalidInput("omega needs n >= 1")
    if length < 0:
        raise InvalidInput("omega needs length >= 0")
    return (n - 1) * (length + 1) ** 2 // (2 * n)


def omega_sum(length: int, n: int) -> int:
    """The same quantity as a sum: 1..length, skipping terms congruent to length + 1 mod n."""
    if n < 1:
        raise InvalidInput("omega needs n >= 1")
    return sum(t for t in range(1, length + 1) if (t - length - 1) % n)


def omega_m(length: int, n: int) -> int:
    """Sum of length - floor((j - 1)/(n - 1)) - j + 1 over j = 1..m, m maximal with
    floor((m - 1)/(n - 1)) + m <= length: the profile sum of the farthest configuration."""
    if n < 1:
        raise InvalidInput("omega needs n >= 1")
    if n == 1:
        return 0
    m = _winding_length(length, n)
    return sum(length - (j - 1) // (n - 1) - j + 1 for j in range(1, m + 1))


def turan_edges(vertices: int, parts: int) -> int:
    """Edge count of the complete ``parts``-partite graph on ``vertices`` vertices with near-equal parts."""
    q, r = divmod(vertices, parts)
    sizes = [q + 1] * r + [q] * (parts - r)
    return (vertices * vertices - sum(s * s for s in sizes)) // 2


def _spanning_paths(g: Graph, b: Vertex, k: int) -> list[tuple[Vertex, ...]]:
    """Cycle-free walks of exactly ``k`` edges from ``b``, lexicographic in canonical vertex order."""
    out: list[tuple[Vertex, ...]] = []

    def walk(vs: tuple[Vertex, ...]) -> None:
        if len(vs) - 1 == k:
            out.append(vs)
            return
        for w in g.adjacency[vs[-1]]:
            if w not in vs:
                walk(vs + (w,))

    walk((b,))
    return out


def _diverging_pair(g: Graph, b: Vertex, length: int) -> tuple[tuple, tuple] | None:
    k = min(length, g.n - 1)
    if k == 0:
        return None
    paths = _spanning_paths(g, b, k)
    if not paths:
        return None
    p = paths[0]
    for q in paths:
        if q[1] != p[1]:
            return p, q
    return None


def hypothesis_holds(g: Graph, b: Vertex, length: int) -> bool:
    """Two cycle-free paths of length min(length, n - 1) from ``b`` with different first edges exist."""
    return _diverging_pair(g, b, length) is not None


def _winding_length(length: int, n: int) -> int:
    """Largest m with floor((m - 1) / (n - 1)) + m <= length."""
    m = 0
    while m // (n - 1) + m + 1 <= length:
        m += 1
    return m


def _wind(p: tuple, m: int) -> tuple:
    """First ``m`` edges of the walk tracing ``p`` forward, back, forward, ..."""
    if len(p) == 1:
        return p
    out = [p[0]]
    i, step = 0, 1
    while len(out) < m + 1:
        if not 0 <= i + step < len(p):
            step = -step
        i += step
        out.append(p[i])
    return tuple(out)


def antipodal_pair(arm: RobotArm) -> tuple[Configuration, Configuration]:
    """Two configurations at distance 2 * omega_sum(length, n), wound along two diverging cycle-free paths."""
    g, length = arm.graph, arm.length
    pair = _diverging_pair(g, arm.base, length)
    if pair is None:
        raise InvalidInput("no two cycle-free paths of length min(length, n - 1) with distinct first edges")
    n = g.n
    p, p2 = pair
    if length < n - 1:
        q, q2 = p, p2
        labels = (0,) * length
    else:
        m = _winding_length(length, n)
        q, q2 = _wind(p, m), _wind(p2, m)
        labels = tuple((i - 1) // (n - 1) for i in range(1, m + 1))
    x = arm.from_tableau(PathTableau(GraphPath(g, q), labels))
    y = arm.from_tableau(PathTableau(GraphPath(g, q2), labels))
    got = distance(arm, x, y)
    if got != 2 * omega_sum(length, n):
        raise ArmError(f"antipodal construction reached distance {got}, expected {2 * omega_sum(length, n)}")
    return x, y


def canonical_key(arm: RobotArm, x: Configuration) -> tuple:
    order = arm.graph.order
    return tuple((order[v.base], v.height) for v in x.vertices)


def _all_pairs_formula(arm: RobotArm, configs: list[Configuration]) -> tuple[int, int, int]:
    """Maximum pairwise distance with the first maximizing pair in canonical order."""
    length = arm.length
    data = []
    for x in configs:
        t = arm.to_tableau(x)
        prof = _profile(length, t.labels)
        data.append((t.path.vertices, prof, sum(prof)))
    best, bi, bj = -1, 0, 0
    for i, (pi, mi, si) in enumerate(data):
        for j in range(i, len(data)):
            pj, mj, sj = data[j]
            r = _common_prefix(pi, pj)
            d = si + sj - 2 * sum(min(a, b) for a, b in zip(mi[:r], mj[:r]))
            if d > best:
                best, bi, bj = d, i, j
    return best, bi, bj


def _all_pairs_bfs(arm: RobotArm, configs: list[Configuration], limit: int | None) -> tuple[int, int, int]:
    tg = arm.transition_graph(limit=limit)
    ids = [tg.index[x] for x in configs]
    best, bi, bj = -1, 0, 0
    for i, src in enumerate(ids):
        dist = tg.bfs(src)
        for j in range(i, len(ids)):
            if dist[ids[j]] > best:
                best, bi, bj = dist[ids[j]], i, j
    return best, bi, bj


def diameter(arm: RobotArm, mode: str = "exact-bfs", method: str = "formula",
             limit: int | None = DEFAULT_DIAMETER_LIMIT) -> DiameterReport:
    """Bound ``2 * omega`` plus, in exact modes, the true diameter and a witness pair.

    ``tight_bound`` uses the summation form, which is what the antipodal pair
    attains.  ``exact-bfs`` scans all pairs (with the distance formula, or
    with BFS when ``method == "bfs"``).  ``exact-formula`` returns the
    antipodal pair's distance when the hypothesis holds, and falls back to
    the scan otherwise.
    """
    if mode not in MODES:
        raise InvalidInput(f"mode must be one of {', '.join(MODES)}")
    if method not in ("formula", "bfs"):
        raise InvalidInput("method must be 'formula' or 'bfs'")
    n = arm.graph.n
    report = DiameterReport(n, arm.length, 2 * omega(arm.length, n), 2 * omega_sum(arm.length, n),
                            hypothesis_holds(arm.graph, arm.base, arm.length), mode)
    if mode == "bound":
        return report
    if mode == "exact-formula" and report.hypothesis_holds:
        report.witness = antipodal_pair(arm)
        report.exact = distance(arm, *report.witness)
        return report
    configs = arm.configurations()
    if limit is not None:
        limit = guard_limit(limit)
        if len(configs) > limit:
            raise GuardExceeded("diameter scan", len(configs), limit)
    configs.sort(key=lambda x: canonical_key(arm, x))
    if method == "bfs":
        best, i, j = _all_pairs_bfs(arm, configs, None)
    else:
        best, i, j = _all_pairs_formula(arm, configs)
    report.exact = best
    report.witness = (configs[i], configs[j])
    report.stats = {"configurations": len(configs), "method": method}
    return report
