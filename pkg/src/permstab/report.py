"""Figure rendering for the report-producing CLI paths.

Every report command ships three sibling files: the JSON document, the CSV
table, and a PNG chart rendered here.  Counts are exact integers end to end
elsewhere; the charts alone are allowed to round, since they are for eyes,
not arithmetic.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .eulerian import ATable
from .patterns import Distribution, format_pattern
from .stability import ScanReport


def render_distribution(dist: Distribution, path) -> None:
    """Bar chart of words-by-occurrence-count for one multiset/pattern cell."""
    values = sorted(dist.counts)
    heights = [float(dist.counts[s]) for s in values]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(values, heights, color="#4878cf", edgecolor="black", linewidth=0.4)
    ax.set_xlabel("occurrences s")
    ax.set_ylabel("words with exactly s occurrences")
    ax.set_title(
        f"{format_pattern(dist.pattern)} over the words of {dist.multiset}"
    )
    ax.set_xticks(values)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_atable(table: ATable, path) -> None:
    """One curve per k of s ↦ A_{m,k,s} at the deepest table row."""
    m = table.m_max
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for k in range(m // 2 + 1):
        row = [(s, table.value(m, k, s)) for s in range(max(m, 1))]
        xs = [s for s, v in row]
        ys = [float(v) for s, v in row]
        ax.plot(xs, ys, marker="o", markersize=3, label=f"k={k}")
    ax.set_xlabel("ascent count s")
    ax.set_ylabel(f"A({m}, k, s)")
    ax.set_title(f"Doubled-letter ascent distributions at size {m}")
    if m >= 6:
        ax.set_yscale("symlog")
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_scan(report: ScanReport, path) -> None:
    """Horizontal bars: the multiset size of each pattern's witness, if any."""
    labels = [format_pattern(e.pattern) for e in report.entries]
    sizes = [e.witness_size or 0 for e in report.entries]
    colors = [
        "#d65f5f" if e.witness is not None else "#8cc68c" for e in report.entries
    ]
    height = max(2.5, 0.28 * len(labels) + 1.2)
    fig, ax = plt.subplots(figsize=(7, height))
    ax.barh(range(len(labels)), sizes, color=colors, edgecolor="black", linewidth=0.3)
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels, fontsize=8, family="monospace")
    ax.invert_yaxis()
    ax.set_xlabel("witness multiset size (0 = none found)")
    ax.set_title(
        f"{report.family}: scan to size {report.max_size}, "
        f"≤{report.max_letters} letters"
        + (f", s={report.s_restriction}" if report.s_restriction is not None else "")
    )
    ax.set_xlim(0, report.max_size + 0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
