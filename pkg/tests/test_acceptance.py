"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

import time

from armspace import RobotArm
from armspace.arm import Move
from armspace.complex import build_S, build_X, check_cube_isomorphism, sigma, sigma_generators, sigma_inverse
from armspace.graph_core import suffix_decomposition
from armspace.pip import IndexedPath, birkhoff_verify, enumerate_consistent_lower_sets, verify_pip_axioms
from armspace.planner import diameter, distance, omega, omega_sum, plan_moves, plan_rounds, turan_edges
from armspace.suite import DESK_SUITE, named_graph
from armspace.tableaux import (
    PathTableau,
    build_extended_lattice,
    check_poset_iso,
    is_tableau,
    is_tight,
    iter_tableaux,
    tau,
)

import oracles

LENGTHS = range(6)
CONFIG_LIMIT = 20000
PAIRS_LIMIT = 3000
SIX_EDGE_PATH = ("b", "a", "d", "a", "c", "b", "a")


def report(capsys, number: int, title: str, failures: list[str], detail: str = "") -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    with capsys.disabled():
        print("\n" + line)
        for f in failures[:5]:
            print(f"    {f}")
    assert not failures, failures[:5]


def suite_arms(max_configs: int = CONFIG_LIMIT):
    for name in DESK_SUITE:
        g, b = named_graph(name)
        for length in LENGTHS:
            arm = RobotArm(g, b, length)
            if len(list(iter_tableaux(g, b, length))) > max_configs:
                continue
            yield name, arm


def test_criterion_1_diameter_reproduction(capsys):
    g, b = named_graph("C3")
    arm = RobotArm(g, b, 5)
    failures = []
    start = time.perf_counter()
    rep = diameter(arm, "exact-bfs")
    elapsed = time.perf_counter() - start
    if rep.exact != 24:
        failures.append(f"exact-bfs gave {rep.exact}")
    if elapsed >= 60:
        failures.append(f"exact-bfs took {elapsed:.1f}s")
    rep = diameter(arm, "exact-formula")
    if rep.exact != 24 or rep.witness is None:
        failures.append(f"exact-formula gave {rep.exact}")
    else:
        plan = plan_moves(arm, *rep.witness)
        if plan.replay(arm) != rep.witness[1] or len(plan) != 24:
            failures.append(f"witness plan has {len(plan)} moves")
    report(capsys, 1, "diameter of C3, length 5 is 24", failures, f"exact-bfs {elapsed:.2f}s")


def test_criterion_2_worked_examples(capsys):
    g, b = named_graph("paw")
    failures = []
    p = g.path(*SIX_EDGE_PATH)
    if suffix_decomposition(p).block_index != (1, 1, 2, 2, 3, 3):
        failures.append("(a) suffix decomposition")
    t = tau(IndexedPath(p, 2))
    loose = PathTableau(p, (2, 2, 3, 3, 3, 4))
    if t.labels != (2, 2, 3, 3, 4, 4) or not is_tableau(p, loose.labels, 10) or is_tight(loose):
        failures.append("(b) tight tableau")
    arm10 = RobotArm(g, b, 10)
    x = arm10.configuration([("b", 0), ("a", 0), ("a", 1), ("d", 1), ("d", 2), ("a", 2), ("a", 3),
                             ("c", 3), ("b", 3), ("b", 4), ("a", 4)])
    if arm10.to_tableau(x).labels != (0, 1, 2, 3, 3, 4):
        failures.append("(c) tableau of the configuration")
    if [u.index for u in sigma_generators(arm10, x)] != [0, 1, 1, 2, 2, 2]:
        failures.append("(d) lower-set generators")
    if sigma_inverse(arm10, sigma(arm10, x)) != x:
        failures.append("(d) inverse of the lower set")
    arm9 = RobotArm(g, b, 9)
    y = arm9.configuration([("b", 0), ("a", 0), ("a", 1), ("d", 1), ("d", 2), ("a", 2), ("c", 2),
                            ("b", 2), ("b", 3), ("a", 3)])
    moves = arm9.legal_moves(y)
    if [str(m) for m in moves] != ["C+1[b,a,0]", "C-1[a,d,0]", "C+1[c,b,2]", "T+1[b,a,3]"]:
        failures.append(f"(e) legal moves {[str(m) for m in moves]}")
    clash = {Move("C", 1, "b", "a", 0), Move("C", -1, "a", "d", 0)}
    for mask in range(1 << len(moves)):
        subset = [m for k, m in enumerate(moves) if mask >> k & 1]
        if arm9.is_commutative_set(y, subset) != (not clash <= set(subset)):
            failures.append(f"(e) commutativity of {[str(m) for m in subset]}")
    report(capsys, 2, "worked examples (a)-(e)", failures)


def test_criterion_3_bijections(capsys):
    failures = []
    checked = lattices = 0
    for name, arm in suite_arms():
        tag = f"{name} length {arm.length}"
        tabs = list(iter_tableaux(arm.graph, arm.base, arm.length))
        nodes = arm.transition_graph(limit=CONFIG_LIMIT).nodes
        lowers = enumerate_consistent_lower_sets(arm.pip, limit=None)
        if not len(nodes) == len(tabs) == len(lowers):
            failures.append(f"{tag}: {len(nodes)} configurations, {len(tabs)} tableaux, {len(lowers)} lower sets")
        if any(arm.to_tableau(arm.from_tableau(t)) != t for t in tabs):
            failures.append(f"{tag}: tableau round trip")
        if any(arm.from_tableau(arm.to_tableau(x)) != x for x in nodes):
            failures.append(f"{tag}: configuration round trip")
        masks = set()
        for x in nodes:
            mu = sigma(arm, x)
            masks.add(mu.mask)
            if sigma_inverse(arm, mu) != x:
                failures.append(f"{tag}: lower-set round trip at {x}")
                break
        if masks != {mu.mask for mu in lowers}:
            failures.append(f"{tag}: lower-set images differ from the consistent lower sets")
        if not verify_pip_axioms(arm.pip):
            failures.append(f"{tag}: PIP axioms")
        spines = {u.path.vertices for u in arm.pip.elements if u.path.length <= 4}
        for vs in spines:
            q = arm.graph.path(*vs)
            lat = build_extended_lattice(q, arm.length)
            lattices += 1
            if not check_poset_iso(q, arm.length, pip=arm.pip, lattice=lat):
                failures.append(f"{tag}: poset isomorphism on {q}")
            if not birkhoff_verify(lat):
                failures.append(f"{tag}: Birkhoff on {q}")
        checked += 1
    report(capsys, 3, "bijection suite", failures, f"{checked} instances, {lattices} extended lattices")


def test_criterion_4_complex_isomorphism(capsys):
    failures = []
    checked = 0
    for name, arm in suite_arms():
        for r in check_cube_isomorphism(arm):
            if not r:
                failures.append(f"{name} length {arm.length}: {r.line()}")
        checked += 1
    g, b = named_graph("C3")
    arm = RobotArm(g, b, 5)
    S, X = build_S(arm), build_X(arm.pip, limit=None)
    if S.dimension != 3 or X.dimension != 3:
        failures.append(f"C3 length 5 has dimension {S.dimension} / {X.dimension}")
    report(capsys, 4, "cubical complex isomorphism", failures, f"{checked} instances, C3 length 5 f-vector {S.f_vector}")


def test_criterion_5_distances_and_plans(capsys):
    failures = []
    pairs = 0
    start = time.perf_counter()
    for name, arm in suite_arms(PAIRS_LIMIT):
        tg = arm.transition_graph()
        S = build_S(arm)
        masks = [sigma(arm, x).mask for x in tg.nodes]
        for i, x in enumerate(tg.nodes):
            dist = tg.bfs(i)
            cube = S.cube_distances(i)
            for j, y in enumerate(tg.nodes):
                pairs += 1
                f = distance(arm, x, y)
                s = (masks[i] ^ masks[j]).bit_count()
                plan = plan_moves(arm, x, y)
                rounds = plan_rounds(arm, x, y)
                ok = f == dist[j] == s == len(plan) and len(rounds.rounds) == cube[j]
                try:
                    plan.replay(arm)
                    rounds.replay(arm)
                except Exception as exc:  # noqa: BLE001 - any replay failure is a criterion failure
                    ok = False
                    failures.append(f"{name} length {arm.length}: replay {exc}")
                if not ok:
                    failures.append(f"{name} length {arm.length} pair {i},{j}: formula {f}, bfs {dist[j]}, "
                                    f"lower sets {s}, plan {len(plan)}, rounds {len(rounds.rounds)}, cube {cube[j]}")
    elapsed = time.perf_counter() - start
    if elapsed >= 600:
        failures.append(f"took {elapsed:.0f}s")
    report(capsys, 5, "distance triple equality and plans", failures, f"{pairs} pairs in {elapsed:.0f}s")


def test_criterion_6_omega_identity(capsys):
    failures = []
    for n in range(1, 26):
        for length in range(301):
            closed, summed = omega(length, n), omega_sum(length, n)
            if closed != summed:
                failures.append(f"length {length}, n {n}: closed form {closed}, summation {summed}")
            if closed != turan_edges(length + 1, n):
                failures.append(f"length {length}, n {n}: closed form {closed}, Turan {turan_edges(length + 1, n)}")
    seq = oracles.quarter_squares(21)
    if [omega(length, 2) for length in range(20)] != seq[1:21]:
        failures.append("quarter-squares mismatch")
    report(capsys, 6, "omega closed form = summation = Turan edge count", failures,
           f"{len(failures)} disagreements" if failures else "")


def test_criterion_7_bound_sharpness(capsys):
    failures = []
    strict = []
    for name, arm in suite_arms():
        rep = diameter(arm, "exact-bfs", limit=None)
        if rep.exact > rep.bound:
            failures.append(f"{name} length {arm.length}: {rep.exact} > {rep.bound}")
        if name in ("C3", "C4", "K4") and rep.exact != rep.bound:
            failures.append(f"{name} length {arm.length}: {rep.exact} != {rep.bound}")
        if name == "A3-end" and rep.exact < rep.bound:
            strict.append(arm.length)
    if not strict:
        failures.append("no strict inequality on A3 with an endpoint base")
    report(capsys, 7, "diameter bound and its sharpness", failures, f"A3-end strict at lengths {strict}")
