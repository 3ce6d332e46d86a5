"""Figures for bench output."""

from __future__ import annotations

from collections import defaultdict
from statistics import median

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (5.5, 3.5),
    "font.size": 9,
    "axes.linewidth": 0.6,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
}


def plot_bench(rows, path) -> None:
    """Median wall time against instance size, one line per family and solver."""
    series = defaultdict(lambda: defaultdict(list))
    for r in rows:
        series[(r.family, r.solver)][r.size].append(r.seconds)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for (family, solver), by_size in sorted(series.items()):
            sizes = sorted(by_size)
            ax.plot(sizes, [max(median(by_size[s]), 1e-6) for s in sizes], marker="o", ms=3, lw=1, label=f"{family} / {solver}")
        ax.set_yscale("log")
        ax.set_xlabel("instance size")
        ax.set_ylabel("wall time (s)")
        if series:
            ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)
