"""Figure rendering for the report paths.

Every figure lands next to its delimited output file: emitting foo.csv also
renders foo.png (unless plotting is switched off).  Data stays in the CSV;
the figures are companions, never the primary record.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _companion(path):
    base = str(path)
    if "." in base.rsplit("/", 1)[-1]:
        base = base.rsplit(".", 1)[0]
    return base + ".png"


def render_histogram(histogram, path, title, xlabel="density", vline=None):
    """Bar chart for ((bin_low, bin_high, count), ...) rows."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    lows = [row[0] for row in histogram]
    widths = [row[1] - row[0] for row in histogram]
    counts = [row[2] for row in histogram]
    ax.bar(lows, counts, width=widths, align="edge", color="#4878a8", edgecolor="none")
    if vline is not None:
        ax.axvline(vline, color="#a83838", linestyle="--", linewidth=1)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("trials")
    ax.set_title(title)
    fig.tight_layout()
    out = _companion(path)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out


def render_series(rows, path, title, xlabel, ylabel, logy=False):
    """Line plot for (x, y) pairs."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    xs = [r[0] for r in rows]
    ys = [r[1] for r in rows]
    ax.plot(xs, ys, marker="o", markersize=3, color="#4878a8")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    out = _companion(path)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out


def render_spectrum(eigenvalues, path, title):
    """Stem plot of (approximate) adjacency eigenvalues."""
    fig, ax = plt.subplots(figsize=(7, 3.6))
    ax.stem(sorted(eigenvalues), [1] * len(eigenvalues), basefmt=" ")
    ax.set_xlabel("eigenvalue")
    ax.set_yticks([])
    ax.set_title(title)
    fig.tight_layout()
    out = _companion(path)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out
