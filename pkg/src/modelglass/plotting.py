"""Figures and delimited tables for the graph reports."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .graphs.ramsey import RamseyReport  # noqa: E402
from .graphs.regularity import PartitionCertificate  # noqa: E402
from .graphs.graph import Graph  # noqa: E402

# drop the version stamp so identical inputs give identical bytes
_PNG_META = {"Software": None}

RAMSEY_COLUMNS = ["family", "n", "seed", "parts", "stable", "clique", "independent", "hom", "log_n_hom", "exact"]


def ramsey_rows(report: RamseyReport) -> list[list[str]]:
    out = []
    for r in report.rows:
        exp = "" if r.exponent is None else f"{r.exponent:.6f}"
        out.append([r.family, str(r.n), str(r.seed), "" if r.parts is None else str(r.parts),
                    "yes" if r.stable else "no",
                    "" if r.clique is None else str(r.clique),
                    "" if r.independent is None else str(r.independent),
                    "" if r.hom is None else str(r.hom), exp, "yes" if r.exact else "no"])
    return out


def write_ramsey_tsv(report: RamseyReport, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(RAMSEY_COLUMNS)
        w.writerows(ramsey_rows(report))


def plot_ramsey(report: RamseyReport, path: str | Path) -> None:
    """hom(G) against n on log-log axes, with the sqrt(n) and log2(n) curves for scale."""
    rows = report.measured
    fig, ax = plt.subplots(figsize=(5.5, 4))
    if rows:
        ax.scatter([r.n for r in rows], [r.hom for r in rows], s=22, color="tab:blue", label="hom(G)", zorder=3)
        lo, hi = min(r.n for r in rows), max(r.n for r in rows)
        xs = [lo + (hi - lo) * i / 50 for i in range(51)] if hi > lo else [lo]
        ax.plot(xs, [math.sqrt(x) for x in xs], "--", color="gray", lw=1, label="sqrt(n)")
        ax.plot(xs, [max(1.0, math.log2(x)) for x in xs], ":", color="gray", lw=1, label="log2(n)")
    skipped = report.skipped
    if skipped:
        ax.text(0.02, 0.02, f"{len(skipped)} unstable instances skipped", transform=ax.transAxes, fontsize=8)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("largest homogeneous set")
    ax.set_title(f"{report.family}, no {report.k}-half-graph")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def plot_partition(g: Graph, cert: PartitionCertificate, path: str | Path) -> None:
    """Pairwise densities between the pieces, irregular pairs outlined."""
    k = len(cert.blocks)
    grid = [[math.nan] * k for _ in range(k)]
    for (i, j), v in cert.pairs.items():
        grid[i][j] = grid[j][i] = float(v.density)
    for i, b in enumerate(cert.blocks):
        if len(b) > 1:
            inside = g.induced(list(b))
            grid[i][i] = inside.edge_count() / (len(b) * (len(b) - 1) / 2)
    fig, ax = plt.subplots(figsize=(4.5, 4))
    im = ax.imshow(grid, vmin=0, vmax=1, cmap="Greys")
    for i, j in cert.irregular_pairs:
        for a, b in ((i, j), (j, i)):
            ax.add_patch(plt.Rectangle((b - 0.5, a - 0.5), 1, 1, fill=False, ec="tab:red", lw=1.5))
    ax.set_xlabel("piece")
    ax.set_ylabel("piece")
    ax.set_title(f"eps = {cert.eps}, {'pass' if cert.passed else 'fail'}")
    fig.colorbar(im, ax=ax, label="density")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)

