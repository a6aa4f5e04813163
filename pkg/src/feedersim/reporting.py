"""Overload statistics and CSV report emission.

A transformer-minute is overloaded iff output is strictly above the
rating; a transformer sitting exactly at its rating is fine. "Maximum
duration" is the longest single contiguous overload episode on any one
transformer.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .topology import Grid


@dataclass(frozen=True)
class OverloadReport:
    penetration_rate: float
    coordinated: bool
    overloaded_fraction: float
    max_duration_min: int
    aggregated_overload_min: int


@dataclass(frozen=True)
class NormalizedSeries:
    """Output-to-rating ratios, rows ordered by (node_id, transformer_id)."""

    transformer_ids: tuple
    ratios: np.ndarray   # (n_transformers, n_ticks)
    tick_minutes: int


def _longest_run(flags: np.ndarray) -> int:
    if not flags.any():
        return 0
    padded = np.concatenate(([0], flags.astype(np.int8), [0]))
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    return int((ends - starts).max())


def overload_stats(result, grid: Grid) -> OverloadReport:
    """Table-style overload summary for one run."""
    series = result.transformer_kw
    if series.shape[0] != len(grid.transformers):
        raise ValueError("series does not match the grid's transformers")
    ratings = np.array([t.rating_kva for t in grid.transformers])
    over = series > ratings[:, None]

    n_tr = len(grid.transformers)
    fraction = float(over.any(axis=1).sum()) / n_tr
    longest = max((_longest_run(row) for row in over), default=0)
    return OverloadReport(
        penetration_rate=result.penetration_rate,
        coordinated=result.coordinated,
        overloaded_fraction=fraction,
        max_duration_min=longest * result.tick_minutes,
        aggregated_overload_min=int(over.sum()) * result.tick_minutes,
    )


def normalized_series(result, grid: Grid) -> NormalizedSeries:
    ratings = np.array([t.rating_kva for t in grid.transformers])
    if (ratings <= 0).any():
        raise ValueError("transformer ratings must be positive")
    order = sorted(range(len(grid.transformers)),
                   key=lambda i: (grid.transformers[i].node_id,
                                  grid.transformers[i].id))
    ratios = result.transformer_kw[order] / ratings[order, None]
    ids = tuple(grid.transformers[i].id for i in order)
    return NormalizedSeries(ids, ratios, result.tick_minutes)


def average_output(result, grid: Grid) -> np.ndarray:
    """Per-minute mean over transformers of normalized output."""
    return normalized_series(result, grid).ratios.mean(axis=0)


def _rate_label(result) -> str:
    label = str(int(round(result.penetration_rate * 100)))
    if result.coordinated:
        label += "_coordinated"
    return label


def emit_reports(results, grid: Grid, out_dir) -> list:
    """Write the summary and per-rate CSV artifacts; return written paths."""
    if not results:
        raise ValueError("no results to report")
    os.makedirs(out_dir, exist_ok=True)
    written = []

    summary_path = os.path.join(out_dir, "overload_summary.csv")
    rows = ["penetration,coordinated,overloaded_fraction,"
            "max_duration_min,aggregated_min"]
    for result in results:
        rep = overload_stats(result, grid)
        rows.append(f"{rep.penetration_rate:.6f},"
                    f"{'true' if rep.coordinated else 'false'},"
                    f"{rep.overloaded_fraction:.6f},"
                    f"{rep.max_duration_min},{rep.aggregated_overload_min}")
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")
    written.append(summary_path)

    for result in results:
        label = _rate_label(result)
        ns = normalized_series(result, grid)
        heat_path = os.path.join(out_dir, f"normalized_heatmap_{label}.csv")
        with open(heat_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("minute,transformer_id,ratio\n")
            for row, t_id in enumerate(ns.transformer_ids):
                for tick in range(ns.ratios.shape[1]):
                    fh.write(f"{tick * ns.tick_minutes},{t_id},"
                             f"{ns.ratios[row, tick]:.6f}\n")
        written.append(heat_path)

        avg = average_output(result, grid)
        avg_path = os.path.join(out_dir, f"average_output_{label}.csv")
        with open(avg_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("minute,mean_normalized_output\n")
            for tick, value in enumerate(avg):
                fh.write(f"{tick * result.tick_minutes},{value:.6f}\n")
        written.append(avg_path)

    return written


def emit_ev_trace(result, out_path) -> str:
    """Optional per-EV diagnostic CSV: minute,ev_id,mode,soc_percent,amps."""
    trace = result.ev_trace
    if trace is None:
        raise ValueError("run was executed without ev_trace")
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("minute,ev_id,mode,soc_percent,amps\n")
        n_ev, n_ticks = trace.mode.shape
        for tick in range(n_ticks):
            minute = tick * result.tick_minutes
            for i in range(n_ev):
                amps = max(int(trace.amps[i, tick]), 0)
                fh.write(f"{minute},{i},{int(trace.mode[i, tick])},"
                         f"{trace.soc[i, tick]:.4f},{amps}\n")
    return str(out_path)
