import pytest
from hypothesis import given, strategies as st

import oracles
from strategies import connected_graphs
from armspace import RobotArm
from armspace.arm import Move
from armspace.errors import GuardExceeded, IllegalMove, InvalidInput
from armspace.tableaux import parse_shorthand

FOUR_MOVE_CONFIG = [("b", 0), ("a", 0), ("a", 1), ("d", 1), ("d", 2), ("a", 2), ("c", 2), ("b", 2), ("b", 3), ("a", 3)]

# configuration counts for lengths 0..6, frozen from the workspace-walk oracle
COUNTS = {
    "C3": [1, 3, 7, 15, 35, 79, 179],
    "C4": [1, 3, 7, 17, 39, 93, 219],
    "K4": [1, 4, 13, 37, 106, 319, 937],
    "A3-end": [1, 2, 4, 8, 15, 28, 53],
    "A3-mid": [1, 3, 5, 9, 17, 33, 63],
    "paw": [1, 3, 8, 19, 46, 108, 256],
    "star": [1, 4, 7, 13, 28, 61, 127],
}


@pytest.fixture(scope="module")
def four_move_arm(paw_graph):
    arm = RobotArm(paw_graph, "b", 9)
    return arm, arm.configuration(FOUR_MOVE_CONFIG)


def test_four_move_config_legal_moves(four_move_arm):
    arm, x = four_move_arm
    assert [str(m) for m in arm.legal_moves(x)] == ["C+1[b,a,0]", "C-1[a,d,0]", "C+1[c,b,2]", "T+1[b,a,3]"]


def test_four_move_config_commutative_subsets(four_move_arm):
    arm, x = four_move_arm
    moves = arm.legal_moves(x)
    clash = {Move("C", 1, "b", "a", 0), Move("C", -1, "a", "d", 0)}
    for mask in range(1 << len(moves)):
        subset = [m for k, m in enumerate(moves) if mask >> k & 1]
        assert arm.is_commutative_set(x, subset) == (not clash <= set(subset)), subset


def test_apply_replaces_one_vertex(four_move_arm):
    arm, x = four_move_arm
    y = arm.apply(x, Move("T", 1, "b", "a", 3))
    assert y.vertices[-1] == ("b", 4) and y.vertices[:-1] == x.vertices[:-1]
    z = arm.apply(x, Move("C", 1, "b", "a", 0))
    assert z.vertices[1] == ("b", 1)
    w = arm.apply(x, Move("C", -1, "a", "d", 0))
    assert w.vertices[2] == ("d", 0)
    assert arm.apply(w, Move("C", 1, "a", "d", 0)) == x


def test_illegal_moves_raise(four_move_arm):
    arm, x = four_move_arm
    with pytest.raises(IllegalMove):
        arm.apply(x, Move("T", 1, "a", "d", 0))
    with pytest.raises(IllegalMove):
        arm.apply(x, Move("C", 1, "c", "b", 5))
    with pytest.raises(IllegalMove):
        arm.apply(x, Move("Q", 1, "b", "a", 0))


def test_move_serialisation():
    m = Move("C", -1, "a", "d", 0)
    assert Move.from_json(m.to_json()) == m
    assert m.inverse().upward and str(m) == "C-1[a,d,0]"


def test_invalid_configurations(paw_graph):
    arm = RobotArm(paw_graph, "b", 2)
    for pairs in ([("b", 0), ("b", 1)], [("a", 0), ("a", 1), ("a", 2)], [("b", 0), ("d", 0), ("d", 1)],
                  [("b", 0), ("b", 2), ("b", 3)], [("b", 0), ("a", 0), ("b", 0)], [("b", 0), ("b", 1), ("a", 0)]):
        with pytest.raises(InvalidInput):
            arm.configuration(pairs)
    with pytest.raises(InvalidInput):
        RobotArm(paw_graph, "z", 2)
    with pytest.raises(InvalidInput):
        RobotArm(paw_graph, "b", -1)


def test_six_edge_tableau(paw_graph):
    arm = RobotArm(paw_graph, "b", 10)
    t = parse_shorthand(paw_graph, "b,a,d,a,c,b,a:0,1,2,3,3,4")
    x = arm.from_tableau(t)
    assert arm.to_tableau(x).labels == (0, 1, 2, 3, 3, 4)
    assert arm.violation(x) is None and x.length == 10
    assert x.horizontal_edges() == [1, 3, 5, 7, 8, 10]


def test_parse_both_forms(paw_graph):
    arm = RobotArm(paw_graph, "b", 2)
    assert arm.parse('[["b",0],["a",0],["a",1]]') == arm.parse("b,a:0")
    with pytest.raises(InvalidInput):
        arm.parse("[oops")


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_counts_three_ways(name, graphs):
    g, b = graphs[name]
    adj = oracles.adjacency(g)
    for length, expected in enumerate(COUNTS[name]):
        arm = RobotArm(g, b, length)
        brute = oracles.configurations(adj, b, length)
        reached = arm.transition_graph().nodes
        assert len(brute) == expected
        assert {tuple(tuple(v) for v in x.vertices) for x in reached} == brute
        assert len(arm.configurations()) == expected


def test_transition_graph_oracle(graphs):
    # single moves = valid configurations differing in one vertex, the old and new
    # vertex sitting at adjacent heights (a flip across one unit square)
    g, b = graphs["paw"]
    arm = RobotArm(g, b, 4)
    tg = arm.transition_graph()
    configs = set(tg.nodes)
    for i, x in enumerate(tg.nodes):
        nbrs = {tg.nodes[j] for j in tg.adjacency[i]}
        brute = set()
        for y in configs:
            diff = [(a, c) for a, c in zip(x.vertices, y.vertices) if a != c]
            if len(diff) == 1 and abs(diff[0][0].height - diff[0][1].height) == 1:
                brute.add(y)
        assert nbrs == brute
    assert len(tg.edges) == sum(len(a) for a in tg.adjacency) // 2


def test_guard(graphs):
    g, b = graphs["K4"]
    with pytest.raises(GuardExceeded):
        RobotArm(g, b, 5).transition_graph(limit=100)


def test_dot_and_json(graphs):
    g, b = graphs["C3"]
    tg = RobotArm(g, b, 2).transition_graph()
    dot = tg.to_dot()
    assert dot.count(" -- ") == len(tg.edges) == 6
    assert tg.to_json()["nodes"][0] == [["b", 0], ["b", 1], ["b", 2]]


@given(connected_graphs(max_vertices=4), st.integers(0, 5))
def test_random_roundtrips(g, length):
    arm = RobotArm(g, "b", length)
    nodes = arm.transition_graph().nodes
    assert len(nodes) == len(oracles.configurations(oracles.adjacency(g), "b", length))
    for x in nodes:
        assert arm.from_tableau(arm.to_tableau(x)) == x
        for m in arm.legal_moves(x):
            assert arm.apply(arm.apply(x, m), m.inverse()) == x
