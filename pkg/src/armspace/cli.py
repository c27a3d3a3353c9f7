"""Command-line entry point: ``armspace {enumerate,plan,diameter,verify,export,report}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from armspace.arm import RobotArm
from armspace.checks import CheckReport, iter_bits
from armspace.complex import build_S, build_X
from armspace.errors import ArmError, GuardExceeded
from armspace.graph_core import Graph, load_graph
from armspace.pip import enumerate_consistent_lower_sets, hasse_dot
from armspace.planner import MODES, diameter, plan_moves, plan_rounds
from armspace.suite import DESK_SUITE, named_graph
from armspace.tableaux import iter_tableaux

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class UsageError(ArmError):
    pass


def _load(args: argparse.Namespace) -> tuple[Graph, str]:
    source = args.graph
    if os.path.exists(source):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc}") from None
        g, base = load_graph(text)
    elif source in DESK_SUITE:
        g, base = named_graph(source)
    else:
        raise UsageError(f"{source!r} is neither a file nor one of {', '.join(DESK_SUITE)}")
    if args.base is not None:
        base = args.base
    if base is None:
        base = next(iter(g.order))
    if base not in g.order:
        raise UsageError(f"base vertex {base!r} is not in the graph")
    return g, base


def _arm(args: argparse.Namespace) -> RobotArm:
    g, base = _load(args)
    return RobotArm(g, base, args.len)


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_enumerate(args: argparse.Namespace) -> int:
    arm = _arm(args)
    configs = arm.transition_graph().nodes
    tabs = list(iter_tableaux(arm.graph, arm.base, arm.length))
    lowers = enumerate_consistent_lower_sets(arm.pip, limit=None)
    counts = {
        "configurations": len(configs),
        "tableaux": len(tabs),
        "pip_elements": len(arm.pip),
        "consistent_lower_sets": len(lowers),
    }
    agree = len(configs) == len(tabs) == len(lowers)
    if args.format == "json":
        doc: dict = {**counts, "agree": agree}
        if args.list:
            doc["listing"] = {
                "configurations": [x.to_json() for x in configs],
                "tableaux": [t.to_json() for t in tabs],
                "pip_elements": [u.to_json() for u in arm.pip.elements],
                "consistent_lower_sets": [mu.to_json() for mu in lowers],
            }
        _emit(args, _dump(doc))
    else:
        lines = [f"{k.replace('_', ' ')}: {v}" for k, v in counts.items()]
        if args.list:
            lines += ["", "# configurations"] + [str(x) for x in configs]
            lines += ["", "# tableaux"] + [str(t) for t in tabs]
            lines += ["", "# pip elements"] + [str(u) for u in arm.pip.elements]
            lines += ["", "# consistent lower sets (maximal elements)"]
            lines += ["{" + ", ".join(str(u) for u in mu.maximal) + "}" for mu in lowers]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if agree else EXIT_CHECK


def cmd_plan(args: argparse.Namespace) -> int:
    arm = _arm(args)
    x, y = arm.parse(args.source), arm.parse(args.target)
    plan = plan_rounds(arm, x, y) if args.rounds else plan_moves(arm, x, y)
    plan.replay(arm)
    if args.format == "text":
        lines = [f"source: {x}", f"target: {y}", f"moves: {len(plan)}"]
        if plan.rounds is not None:
            lines.append(f"rounds: {len(plan.rounds)}")
            for r in plan.rounds:
                lines.append("  " + " ".join(str(plan.moves[k]) for k in r))
        else:
            lines += ["  " + str(m) for m in plan.moves]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _dump(plan.to_json()))
    return EXIT_OK


def cmd_diameter(args: argparse.Namespace) -> int:
    arm = _arm(args)
    rep = diameter(arm, mode=args.mode, method=args.method, limit=None)
    if args.format == "text":
        lines = [f"n: {rep.n}", f"length: {rep.length}", f"bound: {rep.bound}", f"tight bound: {rep.tight_bound}",
                 f"hypothesis holds: {rep.hypothesis_holds}",
                 f"exact diameter: {'unknown' if rep.exact is None else rep.exact}"]
        if rep.witness:
            lines += [f"witness: {rep.witness[0]}", f"         {rep.witness[1]}"]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _dump(rep.to_json()))
    ok = rep.exact is None or rep.exact <= rep.bound
    return EXIT_OK if ok else EXIT_CHECK


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        i, j = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two positions I,J") from None
    return i, j


def cmd_verify(args: argparse.Namespace) -> int:
    from armspace.verification import run_all

    arm = _arm(args)
    pip = arm.pip
    if args.corrupt is not None:
        i, j = args.corrupt
        if not (0 <= i < len(pip) and 0 <= j < len(pip)):
            raise UsageError(f"--corrupt positions must lie in [0, {len(pip) - 1}]")
        pip = pip.corrupted(i, j)
    reports: list[CheckReport] = run_all(arm, pip=pip, spine_max=args.spine_max)
    if args.format == "json":
        _emit(args, _dump([r.to_json() for r in reports]))
    else:
        lines = []
        for r in reports:
            lines.append(r.line())
            if not r and r.counterexample is not None:
                lines.append(f"  counterexample: {r.counterexample}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if all(reports) else EXIT_CHECK


def cmd_export(args: argparse.Namespace) -> int:
    arm = _arm(args)
    fmt = args.format or ("dot" if args.what in ("transitions", "hasse") else "json")
    if args.what == "transitions":
        tg = arm.transition_graph()
        text = tg.to_dot(full_labels=args.labels) if fmt == "dot" else _dump(tg.to_json())
    elif args.what == "hasse":
        if fmt == "dot":
            text = hasse_dot(arm.pip)
        else:
            pip = arm.pip
            text = _dump({
                "elements": [u.to_json() for u in pip.elements],
                "covers": [[j, i] for i in range(len(pip)) for j in iter_bits(pip.covers[i])],
                "minimal_inconsistent_pairs": [list(p) for p in pip.minimal_inconsistent_pairs()],
            })
    elif args.what == "fvectors":
        if fmt == "dot":
            raise UsageError("f-vectors export only as json")
        S, X = build_S(arm), build_X(arm.pip, limit=None)
        text = _dump({"S": {"dims": S.f_vector}, "X": {"dims": X.f_vector}, "equal": S.f_vector == X.f_vector})
    else:
        if fmt == "dot":
            raise UsageError("complex export only as json")
        text = _dump(build_S(arm).to_json())
    _emit(args, text)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    from armspace.report import collect_rows, write_report

    g, base = _load(args)
    rows = collect_rows(g, base, args.len)
    stem = Path(args.graph).stem
    csv_path, png_path = write_report(rows, Path(args.out_dir), stem, f"{stem}, base {base}")
    with open(csv_path) as fh:
        sys.stdout.write(fh.read())
    sys.stderr.write(f"wrote {csv_path} and {png_path}\n")
    bad = [r for r in rows if r["exact_diameter"] > r["bound"]]
    return EXIT_CHECK if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=True,
                        help=f"graph JSON file, or a built-in name ({', '.join(DESK_SUITE)})")
    common.add_argument("--base", help="base vertex (default: the file's base, else the first vertex)")
    common.add_argument("--len", type=int, required=True, help="arm length")
    common.add_argument("--limit", type=int, help="size guard for exhaustive work (overrides ARM_LIMIT)")
    common.add_argument("--out", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="armspace", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="count configurations, tableaux and lower sets")
    p.add_argument("--list", action="store_true", help="print full listings")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("plan", parents=[common], help="shortest move plan between two configurations")
    p.add_argument("source", help='configuration as JSON [["b",0],...] or tableau shorthand "b,a:0"')
    p.add_argument("target")
    p.add_argument("--rounds", action="store_true", help="group moves into commutative rounds")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("diameter", parents=[common], help="diameter bound and exact value")
    p.add_argument("--mode", choices=MODES, default="exact-bfs")
    p.add_argument("--method", choices=("formula", "bfs"), default="formula",
                   help="pairwise distances for exact-bfs mode")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("verify", parents=[common], help="run every exhaustive cross-check")
    p.add_argument("--corrupt", type=_parse_pair, metavar="I,J",
                   help="flip the order relation between PIP positions I and J (negative control)")
    p.add_argument("--spine-max", type=int, default=4, help="longest spine for lattice checks")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", parents=[common], help="DOT/JSON of the transition graph, Hasse diagram or complex")
    p.add_argument("--what", choices=("transitions", "hasse", "fvectors", "complex"), default="transitions")
    p.add_argument("--format", choices=("dot", "json"), help="default: dot for graphs, json otherwise")
    p.add_argument("--labels", action="store_true", help="label transition-graph nodes with full configurations")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("report", parents=[common], help="CSV table and PNG figure for arm lengths 0..--len")
    p.add_argument("--out-dir", default="report")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.len < 0:
        parser.error("--len must be nonnegative")
    saved = os.environ.get("ARM_LIMIT")
    if args.limit is not None:
        if args.limit <= 0:
            parser.error("--limit must be positive")
        os.environ["ARM_LIMIT"] = str(args.limit)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        sys.stderr.write(f"guard exceeded: {exc}\n")
        return EXIT_GUARD
    except (ArmError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    finally:
        if saved is None:
            os.environ.pop("ARM_LIMIT", None)
        else:
            os.environ["ARM_LIMIT"] = saved


if __name__ == "__main__":
    sys.exit(main())
