"""Rendering Betti tables and duality reports to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .linalg import BettiTable


def _table_grid(table: BettiTable):
    lo_p, hi_p = table.degrees
    lo_u, hi_u = table.labels
    degrees = list(range(lo_p, hi_p + 1))
    labels = list(range(lo_u, hi_u + 1))
    data = np.zeros((len(degrees), len(labels)), dtype=int)
    for r, p in enumerate(degrees):
        for c, u in enumerate(labels):
            data[r, c] = table.dim(p, u)
    return degrees, labels, data


def _draw_table(ax, table: BettiTable, title: str):
    degrees, labels, data = _table_grid(table)
    vmax = max(1, int(data.max()))
    ax.imshow(data, origin="lower", cmap="Blues", vmin=0, vmax=vmax, aspect="auto")
    for r in range(data.shape[0]):
        for c in range(data.shape[1]):
            if data[r, c]:
                ax.text(
                    c,
                    r,
                    str(data[r, c]),
                    ha="center",
                    va="center",
                    fontsize=8,
                    color="black",
                )
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels([str(u) for u in labels], fontsize=7)
    ax.set_yticks(range(len(degrees)))
    ax.set_yticklabels([str(p) for p in degrees], fontsize=8)
    ax.set_xlabel("slice label u")
    ax.set_ylabel("degree p")
    ax.set_title(title, fontsize=10)


def save_betti_figure(table: BettiTable, path: str | Path, title: str | None = None):
    """Render one Betti table as an annotated heatmap."""
    fig, ax = plt.subplots(figsize=(max(4.0, 0.45 * (table.labels[1] - table.labels[0] + 1)), 3.2))
    side_name = "homology" if table.side == "hom" else "cohomology"
    _draw_table(ax, table, title or f"{side_name} dimensions (twist: {table.twist})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_duality_figure(report, path: str | Path):
    """Render both sides of a duality report, with the verdict on top."""
    fig, axes = plt.subplots(
        1,
        2,
        figsize=(
            max(8.0, 0.5 * (report.cohomology.labels[1] - report.cohomology.labels[0] + 1) * 2),
            3.6,
        ),
    )
    _draw_table(axes[0], report.cohomology, "cohomology of A^tau")
    _draw_table(axes[1], report.homology, "homology of the twisted module")
    verdict = "PASS" if report.passed else "MISMATCH"
    shift = report.shift if report.shift is not None else "-"
    fig.suptitle(
        f"duality check: {verdict} (shift {shift}, {report.shift_status})",
        fontsize=11,
    )
    fig.tight_layout(rect=(0, 0, 1, 0.93))
    fig.savefig(path, dpi=150)
    plt.close(fig)
