"""Per-length summary table and figures for one graph."""

from __future__ import annotations

import csv
from pathlib import Path

from armspace.arm import RobotArm
from armspace.complex import build_S
from armspace.graph_core import Graph, Vertex
from armspace.planner import diameter

COLUMNS = ("length", "n", "configurations", "pip_elements", "exact_diameter", "bound", "tight_bound",
           "hypothesis_holds", "f_vector")


def collect_rows(g: Graph, base: Vertex, max_length: int, limit: int | None = None) -> list[dict]:
    rows = []
    for length in range(max_length + 1):
        arm = RobotArm(g, base, length)
        S = build_S(arm, limit=limit)
        rep = diameter(arm, mode="exact-bfs", limit=limit)
        rows.append({
            "length": length,
            "n": g.n,
            "configurations": len(S.vertices),
            "pip_elements": len(arm.pip),
            "exact_diameter": rep.exact,
            "bound": rep.bound,
            "tight_bound": rep.tight_bound,
            "hypothesis_holds": rep.hypothesis_holds,
            "f_vector": S.f_vector,
        })
    return rows


def write_csv(rows: list[dict], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({**row, "f_vector": ";".join(map(str, row["f_vector"]))})


def plot(rows: list[dict], path: Path, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    lengths = [r["length"] for r in rows]
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    left.plot(lengths, [r["bound"] for r in rows], "o--", color="0.5", label="2 omega(length, n)")
    if any(r["tight_bound"] != r["bound"] for r in rows):
        left.plot(lengths, [r["tight_bound"] for r in rows], "^:", color="C1", label="2 omega, summed form")
    left.plot(lengths, [r["exact_diameter"] for r in rows], "s-", color="C0", label="exact diameter")
    left.set_xlabel("arm length")
    left.set_ylabel("moves")
    left.set_title("Diameter of the transition graph")
    left.legend(frameon=False)

    top = max(len(r["f_vector"]) for r in rows)
    for k in range(top):
        counts = [r["f_vector"][k] if k < len(r["f_vector"]) else 0 for r in rows]
        right.plot(lengths, counts, "o-", label=f"{k}-cubes")
    right.set_yscale("log")
    right.set_xlabel("arm length")
    right.set_ylabel("count")
    right.set_title("Cubes of the configuration space")
    right.legend(frameon=False, fontsize="small")

    for ax in (left, right):
        ax.spines[["top", "right"]].set_visible(False)
        ax.set_xticks(lengths)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(rows: list[dict], out_dir: Path, stem: str, title: str) -> tuple[Path, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path, png_path = out_dir / f"{stem}.csv", out_dir / f"{stem}.png"
    write_csv(rows, csv_path)
    plot(rows, png_path, title)
    return csv_path, png_path
