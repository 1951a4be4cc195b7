"""Summary figures and CSV tables for enumerated catalogs."""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ..cayley_analysis import stabilizer  # noqa: E402
from ..enumerator import counts  # noqa: E402

CSV_FIELDS = ("degree", "periodic", "aperiodic", "3-connected", "2-separable", "1-separable")


def summary_rows(by_degree: dict[int, list]) -> list[dict]:
    rows = []
    for d in sorted(by_degree):
        fams = by_degree[d]
        p, a = counts(fams)
        conn = Counter(f.connectivity for f in fams)
        rows.append(
            {
                "degree": d,
                "periodic": p,
                "aperiodic": a,
                "3-connected": conn.get("3-connected", 0),
                "2-separable": conn.get("2-connected-2-separable", 0),
                "1-separable": conn.get("1-separable", 0),
            }
        )
    return rows


def write_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def plot_counts(path, rows) -> None:
    degrees = [r["degree"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(degrees, [r["periodic"] for r in rows], label="periodic", color="#4c72b0")
    ax.bar(
        degrees,
        [r["aperiodic"] for r in rows],
        bottom=[r["periodic"] for r in rows],
        label="aperiodic",
        color="#dd8452",
    )
    ax.set_xlabel("degree")
    ax.set_ylabel("families")
    ax.set_xticks(degrees)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_stabilizers(path, by_degree: dict[int, list]) -> None:
    kinds = ("trivial", "cyclic", "dihedral")
    degrees = sorted(by_degree)
    tallies = {k: [] for k in kinds}
    for d in degrees:
        c = Counter(stabilizer(f.scheme).kind for f in by_degree[d])
        for k in kinds:
            tallies[k].append(c.get(k, 0))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    width = 0.25
    for n, k in enumerate(kinds):
        ax.bar([d + (n - 1) * width for d in degrees], tallies[k], width, label=k)
    ax.set_xlabel("degree")
    ax.set_ylabel("families")
    ax.set_xticks(degrees)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(outdir, by_degree: dict[int, list]) -> list[Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rows = summary_rows(by_degree)
    paths = [out / "counts.csv", out / "counts.png", out / "stabilizers.png"]
    write_csv(paths[0], rows)
    plot_counts(paths[1], rows)
    plot_stabilizers(paths[2], by_degree)
    return paths
