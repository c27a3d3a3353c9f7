"""Exhaustive cross-checks for one arm, bundled for the CLI and the acceptance suite."""

from __future__ import annotations

from armspace.arm import RobotArm
from armspace.checks import CheckReport
from armspace.complex import build_S, build_X, check_cube_isomorphism, sigma_mask
from armspace.pip import (
    PipInstance,
    birkhoff_verify,
    enumerate_consistent_lower_sets,
    verify_against_definition,
    verify_pip_axioms,
)
from armspace.planner import tableau_distance
from armspace.tableaux import build_extended_lattice, check_poset_iso, iter_tableaux

SPINE_MAX = 4
PAIRS_LIMIT = 3000


def check_counts(arm: RobotArm) -> CheckReport:
    """Reachable configurations, tableaux and consistent lower sets are equinumerous."""
    tg = arm.transition_graph()
    tabs = list(iter_tableaux(arm.graph, arm.base, arm.length))
    lowers = enumerate_consistent_lower_sets(arm.pip, limit=None)
    counts = {"configurations": len(tg.nodes), "tableaux": len(tabs),
              "lower_sets": len(lowers), "pip_elements": len(arm.pip)}
    ok = len(tg.nodes) == len(tabs) == len(lowers)
    return CheckReport("counts", ok, None if ok else counts,
                       ", ".join(f"{k} {v}" for k, v in counts.items()), stats=counts)


def check_tableau_roundtrip(arm: RobotArm) -> CheckReport:
    """The horizontal-edge map and its inverse compose to the identity in both directions."""
    tabs = list(iter_tableaux(arm.graph, arm.base, arm.length))
    for t in tabs:
        if arm.to_tableau(arm.from_tableau(t)) != t:
            return CheckReport("tableau-roundtrip", False, str(t), "tableau -> configuration -> tableau")
    for x in arm.transition_graph().nodes:
        if arm.from_tableau(arm.to_tableau(x)) != x:
            return CheckReport("tableau-roundtrip", False, str(x), "configuration -> tableau -> configuration")
    return CheckReport("tableau-roundtrip", True, detail=f"{len(tabs)} tableaux")


def check_spines(arm: RobotArm, spine_max: int = SPINE_MAX) -> list[CheckReport]:
    """Poset isomorphism and Birkhoff representation on every spine with at most ``spine_max`` edges."""
    pip = arm.pip
    spines = {u.path.vertices: u.path for u in pip.elements if u.path.length <= spine_max}
    iso_bad = birk_bad = None
    for q in spines.values():
        lat = build_extended_lattice(q, arm.length)
        iso = check_poset_iso(q, arm.length, pip=pip, lattice=lat)
        if not iso and iso_bad is None:
            iso_bad = iso
        birk = birkhoff_verify(lat)
        if not birk and birk_bad is None:
            birk_bad = birk
    n = len(spines)
    return [
        iso_bad or CheckReport("poset-iso", True, detail=f"{n} spines"),
        birk_bad or CheckReport("birkhoff", True, detail=f"{n} extended lattices"),
    ]


def check_distances(arm: RobotArm, pairs_limit: int | None = PAIRS_LIMIT) -> CheckReport:
    """Distance formula = BFS distance = size of the lower-set symmetric difference, for all pairs."""
    tg = arm.transition_graph()
    if pairs_limit is not None and len(tg.nodes) > pairs_limit:
        return CheckReport("distance-triple", True, detail=f"skipped: {len(tg.nodes)} configurations")
    tabs = [arm.to_tableau(x) for x in tg.nodes]
    masks = [sigma_mask(arm, t) for t in tabs]
    for i in range(len(tg.nodes)):
        dist = tg.bfs(i)
        for j in range(len(tg.nodes)):
            f = tableau_distance(arm.length, tabs[i], tabs[j])
            s = (masks[i] ^ masks[j]).bit_count()
            if not f == dist[j] == s:
                return CheckReport("distance-triple", False, (str(tg.nodes[i]), str(tg.nodes[j])),
                                   f"formula {f}, bfs {dist[j]}, lower sets {s}")
    return CheckReport("distance-triple", True, detail=f"{len(tg.nodes) ** 2} pairs")


def run_all(arm: RobotArm, pip: PipInstance | None = None, spine_max: int = SPINE_MAX,
            pairs_limit: int | None = PAIRS_LIMIT) -> list[CheckReport]:
    """All checks for one arm; ``pip`` replaces the arm's PIP in the relation checks (negative controls)."""
    pip = arm.pip if pip is None else pip
    reports = [verify_pip_axioms(pip), verify_against_definition(pip),
               check_counts(arm), check_tableau_roundtrip(arm)]
    reports += check_spines(arm, spine_max)
    reports += check_cube_isomorphism(arm)
    S, X = build_S(arm), build_X(arm.pip, limit=None)
    for label, cx in (("S", S), ("X", X)):
        r = cx.check_face_closure()
        r.name = f"face-closure[{label}]"
        reports.append(r)
    reports.append(check_distances(arm, pairs_limit))
    return reports
