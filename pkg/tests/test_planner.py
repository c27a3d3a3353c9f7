import pytest
from hypothesis import given, strategies as st

import oracles
from strategies import connected_graphs
from armspace import Graph, RobotArm
from armspace.complex import build_S, sigma
from armspace.errors import ArmError, GuardExceeded, InvalidInput
from armspace.planner import (
    Plan,
    antipodal_pair,
    diameter,
    distance,
    hypothesis_holds,
    m_profile,
    omega,
    omega_m,
    omega_sum,
    plan_moves,
    plan_rounds,
    turan_edges,
)
from armspace.suite import single_vertex
from armspace.tableaux import parse_shorthand


@pytest.fixture(scope="module")
def six_edge(paw_graph):
    arm = RobotArm(paw_graph, "b", 10)
    return arm, arm.from_tableau(parse_shorthand(paw_graph, "b,a,d,a,c,b,a:0,1,2,3,3,4"))


def test_m_profile(six_edge):
    arm, x = six_edge
    assert m_profile(arm, x) == [10, 8, 6, 4, 3, 1]
    assert m_profile(arm, arm.initial()) == []
    assert m_profile(arm, arm.parse("b,a:0")) == [10]


def test_distance_to_initial(six_edge):
    arm, x = six_edge
    assert distance(arm, x, arm.initial()) == 32 == len(sigma(arm, x))
    assert distance(arm, x, x) == 0


def test_plan_from_initial_is_all_downward(six_edge):
    arm, x = six_edge
    plan = plan_moves(arm, arm.initial(), x)
    assert len(plan) == 32 and not any(m.upward for m in plan.moves)
    assert plan.replay(arm) == x


def test_empty_plans(six_edge):
    arm, x = six_edge
    assert plan_moves(arm, x, x).moves == []
    p = plan_rounds(arm, x, x)
    assert p.moves == [] and p.rounds == []


def test_single_step_round(arm_of):
    arm = arm_of("C3", 2)
    x = arm.initial()
    y = arm.apply(x, arm.legal_moves(x)[0])
    p = plan_rounds(arm, x, y)
    assert p.rounds == [[0]]


def test_plan_json(arm_of):
    arm = arm_of("C3", 3)
    p = plan_rounds(arm, arm.initial(), arm.parse("b,a,c:0,1"))
    doc = p.to_json()
    assert set(doc) == {"source", "target", "moves", "rounds"}
    assert sorted(k for r in doc["rounds"] for k in r) == list(range(len(doc["moves"])))


def test_replay_rejects_wrong_target(arm_of):
    arm = arm_of("C3", 3)
    p = plan_moves(arm, arm.initial(), arm.parse("b,a:0"))
    bad = Plan(p.source, arm.parse("b,c:0"), p.moves)
    with pytest.raises(ArmError):
        bad.replay(arm)


@pytest.mark.parametrize("name,length", [("C3", 4), ("paw", 3), ("star", 4), ("A3-mid", 4)])
def test_all_pairs_plans(arm_of, name, length):
    arm = arm_of(name, length)
    tg = arm.transition_graph()
    S = build_S(arm)
    for i, x in enumerate(tg.nodes):
        dist = tg.bfs(i)
        cube = S.cube_distances(i)
        for j, y in enumerate(tg.nodes):
            p = plan_moves(arm, x, y)
            assert len(p) == dist[j] == distance(arm, x, y)
            assert p.replay(arm) == y
            r = plan_rounds(arm, x, y)
            r.replay(arm)
            assert len(r.rounds) == cube[j]


@pytest.mark.parametrize("length,n,value", [(5, 3, 12), (4, 4, 9), (6, 4, 18), (5, 4, 13)])
def test_omega_values(length, n, value):
    assert omega(length, n) == value


def test_summed_omega_identities():
    for n in range(1, 26):
        assert omega_sum(0, n) == 0
        for length in range(301):
            assert omega_sum(length, n) == omega_m(length, n) == turan_edges(length + 1, n)


def test_closed_form_agrees_up_to_seven_vertices():
    for n in range(1, 8):
        for length in range(301):
            assert omega(length, n) == omega_sum(length, n)


def test_closed_form_gap_beyond_seven_vertices():
    # gap = floor((r + 1)(n - r - 1) / 2n), r = length mod n
    for n in range(1, 26):
        for length in range(301):
            r = length % n
            assert omega(length, n) - omega_sum(length, n) == (r + 1) * (n - r - 1) // (2 * n)
    assert (omega(3, 8), omega_sum(3, 8)) == (7, 6)


def test_closed_form_not_attained_on_k8():
    names = "bacdefgh"
    g = Graph.from_edges(list(names), [(u, v) for i, u in enumerate(names) for v in names[i + 1:]])
    rep = diameter(RobotArm(g, "b", 3), "exact-bfs", limit=None)
    assert rep.hypothesis_holds
    assert rep.exact == rep.tight_bound == 12 < rep.bound == 14


def test_omega_quarter_squares():
    seq = oracles.quarter_squares(21)
    assert [omega(length, 2) for length in range(20)] == seq[1:21]


def test_omega_rejects_zero():
    with pytest.raises(InvalidInput):
        omega(3, 0)


def test_hypothesis(graphs):
    assert hypothesis_holds(*graphs["C3"], 5)
    assert hypothesis_holds(*graphs["K4"], 1)
    assert not hypothesis_holds(*graphs["A3-end"], 3)
    assert not hypothesis_holds(*graphs["A3-mid"], 3)
    assert hypothesis_holds(*graphs["A3-mid"], 1)
    assert not hypothesis_holds(*graphs["C3"], 0)


def test_antipodal_pairs(arm_of):
    for name, length, expected in [("C3", 5, 24), ("C4", 6, 36), ("K4", 4, 18), ("C3", 1, 2)]:
        arm = arm_of(name, length)
        x, y = antipodal_pair(arm)
        assert distance(arm, x, y) == expected
        tg = arm.transition_graph()
        assert tg.bfs(tg.index[x])[tg.index[y]] == expected


def test_antipodal_c3_windings(arm_of):
    arm = arm_of("C3", 5)
    x, y = antipodal_pair(arm)
    assert arm.to_tableau(x).path.vertices == ("b", "a", "c", "a", "b")[: len(arm.to_tableau(x).path.vertices)]
    assert arm.to_tableau(y).path.vertices[1] == "c"


def test_antipodal_requires_hypothesis(arm_of):
    with pytest.raises(InvalidInput):
        antipodal_pair(arm_of("A3-end", 3))


def test_diameter_modes(arm_of):
    arm = arm_of("C3", 5)
    rep = diameter(arm, "bound")
    assert rep.bound == 24 and rep.exact is None and rep.hypothesis_holds
    assert diameter(arm, "exact-bfs").exact == 24
    assert diameter(arm, "exact-bfs", method="bfs").exact == 24
    rep = diameter(arm, "exact-formula")
    assert rep.exact == 24 and distance(arm, *rep.witness) == 24
    assert rep.to_json()["exact_diameter"] == 24
    with pytest.raises(InvalidInput):
        diameter(arm, "other")


def test_diameter_witness_is_first_pair(arm_of):
    arm = arm_of("C3", 2)
    rep = diameter(arm, "exact-bfs")
    assert rep.exact == distance(arm, *rep.witness) == 6


def test_single_vertex_graph():
    arm = RobotArm(single_vertex(), "b", 4)
    rep = diameter(arm, "exact-bfs")
    assert rep.n == 1 and rep.bound == 0 and rep.exact == 0


def test_path_graph_below_bound(arm_of):
    rep = diameter(arm_of("A3-end", 3), "exact-bfs")
    assert rep.exact < rep.bound == 10


def test_diameter_guard(arm_of):
    with pytest.raises(GuardExceeded):
        diameter(arm_of("K4", 5), "exact-bfs", limit=100)


@given(connected_graphs(max_vertices=4), st.integers(0, 4), st.data())
def test_random_distances(g, length, data):
    arm = RobotArm(g, "b", length)
    tg = arm.transition_graph()
    i = data.draw(st.integers(0, len(tg.nodes) - 1))
    j = data.draw(st.integers(0, len(tg.nodes) - 1))
    x, y = tg.nodes[i], tg.nodes[j]
    d = tg.bfs(i)[j]
    assert distance(arm, x, y) == d == (sigma(arm, x).mask ^ sigma(arm, y).mask).bit_count()
    assert all(v >= 0 for v in m_profile(arm, x))
    p = plan_moves(arm, x, y)
    assert len(p) == d and p.replay(arm) == y
    assert d <= 2 * omega(length, g.n)
