"""Figure rendering for the report path.

Renders the same data the CSV artifacts carry: a normalized-output heatmap
per run, the mean normalized output curves, and an overload summary chart.
All figures are written as PNG files next to the CSVs.
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .reporting import (_rate_label, average_output, normalized_series,
                        overload_stats)


def save_heatmap(result, grid, path) -> str:
    ns = normalized_series(result, grid)
    fig, ax = plt.subplots(figsize=(9, 5))
    extent = (0, ns.ratios.shape[1] * ns.tick_minutes / 60.0,
              ns.ratios.shape[0], 0)
    im = ax.imshow(ns.ratios, aspect="auto", cmap="RdYlBu_r",
                   vmin=0.0, vmax=max(1.5, float(ns.ratios.max())),
                   extent=extent, interpolation="nearest")
    fig.colorbar(im, ax=ax, label="output / rating")
    ax.set_xlabel("hours from start")
    ax.set_ylabel("transformer (by node)")
    pct = int(round(result.penetration_rate * 100))
    mode = "coordinated" if result.coordinated else "uncoordinated"
    ax.set_title(f"Normalized transformer output, {pct}% EVs ({mode})")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return str(path)


def save_average_outputs(results, grid, path) -> str:
    fig, ax = plt.subplots(figsize=(9, 4))
    for result in results:
        avg = average_output(result, grid)
        hours = [t * result.tick_minutes / 60.0 for t in range(len(avg))]
        pct = int(round(result.penetration_rate * 100))
        style = "--" if result.coordinated else "-"
        label = f"{pct}%" + (" coordinated" if result.coordinated else "")
        ax.plot(hours, avg, style, lw=1.2, label=label)
    ax.axhline(1.0, color="k", lw=0.8, alpha=0.6)
    ax.set_xlabel("hours from start")
    ax.set_ylabel("mean normalized output")
    ax.set_title("Average transformer-level output")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return str(path)


def save_overload_summary(results, grid, path) -> str:
    reports = [overload_stats(r, grid) for r in results]
    labels = [f"{int(round(r.penetration_rate * 100))}%"
              + ("*" if r.coordinated else "") for r in reports]
    fractions = [r.overloaded_fraction * 100 for r in reports]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(reports)), fractions, color="#c0504d")
    ax.set_xticks(range(len(reports)), labels)
    ax.set_xlabel("EV penetration (* = coordinated)")
    ax.set_ylabel("transformers overloaded (%)")
    ax.set_title("Overloaded transformers by penetration rate")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return str(path)


def render_figures(results, grid, out_dir) -> list:
    """Render every figure for a result set; returns written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for result in results:
        label = _rate_label(result)
        written.append(save_heatmap(
            result, grid,
            os.path.join(out_dir, f"normalized_heatmap_{label}.png")))
    written.append(save_average_outputs(
        results, grid, os.path.join(out_dir, "average_output.png")))
    written.append(save_overload_summary(
        results, grid, os.path.join(out_dir, "overload_summary.png")))
    return written
