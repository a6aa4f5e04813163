"""`simulate` command line entry point.

Reads the scenario/topology/schedule files (all optional; missing files
fall back to the built-in defaults), runs one simulation per requested
penetration rate, and writes the CSV reports plus rendered figures into
the output directory.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .config import (ConfigError, default_schedule_text, parse_scenario,
                     parse_schedules, parse_topology, validate_bundle)
from .engine import run, sweep
from .figures import render_figures
from .reporting import emit_ev_trace, emit_reports
from .topology import grid_dump_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Residential feeder EV-charging simulation")
    parser.add_argument("--scenario", help="scenario key=value file")
    parser.add_argument("--topology", help="topology key=value file")
    parser.add_argument("--schedules", help="appliance schedule CSV")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument("--penetration", type=float, action="append",
                        help="EV penetration rate; repeat for a sweep")
    parser.add_argument("--coordinated", action="store_true",
                        help="enable the fair-sharing controller")
    parser.add_argument("--ev-trace", action="store_true",
                        help="also write the per-EV diagnostic trace")
    parser.add_argument("--no-figures", action="store_true",
                        help="skip PNG figure rendering")
    return parser


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        scenario_text = _read(args.scenario) if args.scenario else ""
        topology_text = _read(args.topology) if args.topology else ""
        cfg = parse_scenario(scenario_text)
        topo = parse_topology(topology_text)
        schedule_text = (_read(args.schedules) if args.schedules
                         else default_schedule_text(cfg.season))
        schedules = parse_schedules(schedule_text)

        # Flags override file values.
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        if args.coordinated:
            cfg = replace(cfg, coordinated=True)
        rates = (args.penetration if args.penetration
                 else [cfg.penetration_rate])
        if len(rates) == 1:
            cfg = replace(cfg, penetration_rate=rates[0])

        bundle = validate_bundle(cfg, topo, schedules)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        results = [run(bundle, penetration=rate, ev_trace=args.ev_trace)
                   for rate in rates]
        grid = results[0].grid

        os.makedirs(args.out, exist_ok=True)
        written = emit_reports(results, grid, args.out)
        dump_path = os.path.join(args.out, "grid.csv")
        with open(dump_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(grid_dump_csv(results[-1].grid))
        written.append(dump_path)
        if args.ev_trace:
            for result in results:
                pct = int(round(result.penetration_rate * 100))
                suffix = "_coordinated" if result.coordinated else ""
                path = os.path.join(args.out, f"ev_trace_{pct}{suffix}.csv")
                written.append(emit_ev_trace(result, path))
        if not args.no_figures:
            written.extend(render_figures(results, grid, args.out))
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
