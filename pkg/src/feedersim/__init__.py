"""Deterministic residential-feeder EV charging simulator."""

from .config import (Bundle, ConfigError, ScenarioConfig, ScheduleSpec,
                     SocMode, TopologySpec, default_schedules,
                     parse_scenario, parse_schedules, parse_topology,
                     validate_bundle)
from .engine import SimulationResult, run, sweep
from .reporting import (OverloadReport, average_output, emit_reports,
                        normalized_series, overload_stats)
from .topology import Grid, build_grid

__all__ = [
    "Bundle", "ConfigError", "Grid", "OverloadReport", "ScenarioConfig",
    "ScheduleSpec", "SimulationResult", "SocMode", "TopologySpec",
    "average_output", "build_grid", "default_schedules", "emit_reports",
    "normalized_series", "overload_stats", "parse_scenario",
    "parse_schedules", "parse_topology", "run", "sweep", "validate_bundle",
]

__version__ = "0.1.0"
