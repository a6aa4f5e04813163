"""Scenario, topology, and schedule input files.

Scenario and topology are flat ``key=value`` files (``#`` comments, LF or
CRLF); schedules are a header-less CSV with one row per appliance. Every
constant of the reference setup ships as a default, so an empty scenario
file reproduces it. Parsing is pure: same text, same value.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, fields, replace
from datetime import datetime, timedelta
from enum import Enum
from importlib import resources
from typing import Mapping, Sequence

from . import loads


class ConfigError(ValueError):
    """Invalid input; carries the offending line number and key."""

    def __init__(self, message, line=None, key=None):
        detail = message
        if key is not None:
            detail += f" (key {key!r})"
        if line is not None:
            detail += f" [line {line}]"
        super().__init__(detail)
        self.line = line
        self.key = key


class SocMode(Enum):
    SAMPLED_SOC = "sampled_soc"
    DISTANCE_DRIVEN = "distance_driven"


# Two-day windows used when the scenario gives no explicit timestamps.
WINTER_START = datetime(2012, 1, 3)
WINTER_END = datetime(2012, 1, 5)
SUMMER_START = datetime(2012, 8, 2)
SUMMER_END = datetime(2012, 8, 4)

_MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int = 42
    penetration_rate: float = 0.0
    coordinated: bool = False
    season: str = "winter"
    start: datetime = WINTER_START
    end: datetime = WINTER_END
    tick_minutes: int = 1
    arrival_mean: float = 1050.0      # 17:30, minutes of day
    arrival_std: float = 60.0
    departure_mean: float = 450.0     # 07:30
    departure_std: float = 60.0
    soc_std: float = 5.0              # SOC percentage points
    charge_efficiency: float = 0.9
    distance_mean: float = 30.0       # miles per day
    distance_std: float = 10.0
    soc_mode: SocMode = SocMode.SAMPLED_SOC

    def __post_init__(self):
        if not 0 <= self.seed <= _MAX_SEED:
            raise ConfigError("seed outside unsigned 64-bit range", key="seed")
        if not 0.0 <= self.penetration_rate <= 1.0:
            raise ConfigError("penetration must be in [0, 1]",
                              key="penetration")
        if self.season not in ("winter", "summer"):
            raise ConfigError("season must be winter or summer", key="season")
        if self.start >= self.end:
            raise ConfigError("start must precede end", key="start")
        if self.tick_minutes < 1:
            raise ConfigError("tick_minutes must be positive",
                              key="tick_minutes")
        for name in ("arrival_std", "departure_std", "soc_std",
                     "distance_std"):
            if getattr(self, name) < 0:
                raise ConfigError("standard deviation must be >= 0", key=name)
        if not 0.0 < self.charge_efficiency <= 1.0:
            raise ConfigError("charge_efficiency must be in (0, 1]",
                              key="charge_efficiency")


@dataclass(frozen=True)
class TopologySpec:
    node_count: int = 13
    total_houses: int = 1000
    houses_min: int = 3
    houses_max: int = 7
    kva_per_house: float = 5.0
    substation_kva: float = 5000.0
    primary_voltage: float = 33000.0
    secondary_voltage: float = 2400.0
    service_voltage: float = 120.0
    type2_fraction: float = 0.5

    def __post_init__(self):
        if self.node_count < 1 or self.total_houses < 1:
            raise ConfigError("node_count and total_houses must be positive")
        if not 1 <= self.houses_min <= self.houses_max:
            raise ConfigError(
                "houses_min must be >= 1 and <= houses_max", key="houses_min")
        for name in ("kva_per_house", "substation_kva", "primary_voltage",
                     "secondary_voltage", "service_voltage"):
            if getattr(self, name) <= 0:
                raise ConfigError("rating/voltage must be positive", key=name)
        if not 0.0 <= self.type2_fraction <= 1.0:
            raise ConfigError("type2_fraction must be in [0, 1]",
                              key="type2_fraction")


@dataclass(frozen=True)
class ScheduleSpec:
    name: str
    hourly_duty: tuple
    jitter_cv: float = 0.15

    def __post_init__(self):
        if len(self.hourly_duty) != 24:
            raise ConfigError(f"schedule {self.name!r} needs 24 hourly values",
                              key=self.name)
        if any(not 0.0 <= d <= 1.0 for d in self.hourly_duty):
            raise ConfigError(f"duty fractions for {self.name!r} must be in "
                              "[0, 1]", key=self.name)
        if self.jitter_cv < 0:
            raise ConfigError(f"jitter_cv for {self.name!r} must be >= 0",
                              key=self.name)


@dataclass(frozen=True)
class Bundle:
    """Validated inputs, ready for the engine."""

    scenario: ScenarioConfig
    topology: TopologySpec
    schedules: Mapping[str, ScheduleSpec]


def _kv_entries(text: str):
    """Yield (line_no, key, value) from a key=value file."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            col = len(raw) - len(raw.lstrip()) + 1
            raise ConfigError(
                f"expected key=value at column {col}", line=line_no)
        key, _, value = line.partition("=")
        yield line_no, key.strip(), value.strip()


def _parse_int(value, line, key):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"expected integer, got {value!r}",
                          line=line, key=key) from None


def _parse_float(value, line, key):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"expected number, got {value!r}",
                          line=line, key=key) from None


def _parse_bool(value, line, key):
    lowered = value.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected true/false, got {value!r}",
                      line=line, key=key)


def _parse_timestamp(value, line, key):
    try:
        ts = datetime.fromisoformat(value)
    except ValueError:
        raise ConfigError(f"expected ISO-8601 timestamp, got {value!r}",
                          line=line, key=key) from None
    if ts.second or ts.microsecond:
        raise ConfigError("timestamps are minute resolution",
                          line=line, key=key)
    return ts


def _parse_soc_mode(value, line, key):
    try:
        return SocMode(value.lower())
    except ValueError:
        choices = ", ".join(m.value for m in SocMode)
        raise ConfigError(f"soc_mode must be one of {choices}",
                          line=line, key=key) from None


_SCENARIO_PARSERS = {
    "seed": ("seed", _parse_int),
    "penetration": ("penetration_rate", _parse_float),
    "coordinated": ("coordinated", _parse_bool),
    "season": ("season", lambda v, l, k: v.lower()),
    "start": ("start", _parse_timestamp),
    "end": ("end", _parse_timestamp),
    "tick_minutes": ("tick_minutes", _parse_int),
    "arrival_mean": ("arrival_mean", _parse_float),
    "arrival_std": ("arrival_std", _parse_float),
    "departure_mean": ("departure_mean", _parse_float),
    "departure_std": ("departure_std", _parse_float),
    "soc_std": ("soc_std", _parse_float),
    "charge_efficiency": ("charge_efficiency", _parse_float),
    "distance_mean": ("distance_mean", _parse_float),
    "distance_std": ("distance_std", _parse_float),
    "soc_mode": ("soc_mode", _parse_soc_mode),
}


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse a scenario file; unspecified keys take their defaults."""
    values = {}
    lines = {}
    for line_no, key, raw in _kv_entries(text):
        if key not in _SCENARIO_PARSERS:
            raise ConfigError("unknown scenario key", line=line_no, key=key)
        attr, caster = _SCENARIO_PARSERS[key]
        values[attr] = caster(raw, line_no, key)
        lines[attr] = lines[key] = line_no

    season = values.get("season", "winter")
    if "start" not in values and "end" not in values:
        if season == "summer":
            values["start"], values["end"] = SUMMER_START, SUMMER_END
        else:
            values["start"], values["end"] = WINTER_START, WINTER_END
    elif "end" not in values:
        values["end"] = values["start"] + timedelta(days=2)
    elif "start" not in values:
        values["start"] = values["end"] - timedelta(days=2)

    try:
        return ScenarioConfig(**values)
    except ConfigError as exc:
        # Re-raise with the source line of the offending key when we know it.
        if exc.key in lines and exc.line is None:
            raise ConfigError(str(exc), line=lines[exc.key]) from None
        raise


_TOPOLOGY_PARSERS = {
    "node_count": ("node_count", _parse_int),
    "total_houses": ("total_houses", _parse_int),
    "houses_min": ("houses_min", _parse_int),
    "houses_max": ("houses_max", _parse_int),
    "kva_per_house": ("kva_per_house", _parse_float),
    "substation_kva": ("substation_kva", _parse_float),
    "type2_fraction": ("type2_fraction", _parse_float),
}


def parse_topology(text: str) -> TopologySpec:
    values = {}
    lines = {}
    for line_no, key, raw in _kv_entries(text):
        if key not in _TOPOLOGY_PARSERS:
            raise ConfigError("unknown topology key", line=line_no, key=key)
        attr, caster = _TOPOLOGY_PARSERS[key]
        values[attr] = caster(raw, line_no, key)
        lines[attr] = lines[key] = line_no
    try:
        return TopologySpec(**values)
    except ConfigError as exc:
        if exc.key in lines and exc.line is None:
            raise ConfigError(str(exc), line=lines[exc.key]) from None
        raise


def parse_schedules(text: str) -> list:
    """Parse the schedule CSV: ``name,h0,...,h23[,jitter_cv]``, no header."""
    specs = []
    seen = set()
    reader = csv.reader(io.StringIO(text))
    for row in reader:
        line_no = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) not in (25, 26):
            raise ConfigError(
                f"expected 25 or 26 columns, got {len(row)}", line=line_no)
        name = row[0].strip()
        if name in seen:
            raise ConfigError("duplicate appliance name",
                              line=line_no, key=name)
        seen.add(name)
        duties = tuple(_parse_float(v, line_no, name) for v in row[1:25])
        jitter = (_parse_float(row[25], line_no, name)
                  if len(row) == 26 else 0.15)
        try:
            specs.append(ScheduleSpec(name, duties, jitter))
        except ConfigError as exc:
            raise ConfigError(str(exc), line=line_no) from None
    return specs


def validate_bundle(scenario: ScenarioConfig, topo: TopologySpec,
                    schedules: Sequence[ScheduleSpec]) -> Bundle:
    """Cross-check the three inputs and freeze them into one bundle."""
    by_name = {s.name: s for s in schedules}
    for appliance in loads.APPLIANCES:
        if appliance not in by_name:
            raise ConfigError(
                f"no schedule for appliance {appliance!r}", key=appliance)
    if 60 % scenario.tick_minutes != 0:
        raise ConfigError("tick_minutes must divide 60", key="tick_minutes")
    return Bundle(scenario, topo, by_name)


def render_scenario(cfg: ScenarioConfig) -> str:
    """Inverse of parse_scenario: parse(render(cfg)) == cfg."""
    out = [
        f"seed={cfg.seed}",
        f"penetration={cfg.penetration_rate!r}",
        f"coordinated={'true' if cfg.coordinated else 'false'}",
        f"season={cfg.season}",
        f"start={cfg.start.strftime('%Y-%m-%dT%H:%M')}",
        f"end={cfg.end.strftime('%Y-%m-%dT%H:%M')}",
        f"tick_minutes={cfg.tick_minutes}",
        f"arrival_mean={cfg.arrival_mean!r}",
        f"arrival_std={cfg.arrival_std!r}",
        f"departure_mean={cfg.departure_mean!r}",
        f"departure_std={cfg.departure_std!r}",
        f"soc_std={cfg.soc_std!r}",
        f"charge_efficiency={cfg.charge_efficiency!r}",
        f"distance_mean={cfg.distance_mean!r}",
        f"distance_std={cfg.distance_std!r}",
        f"soc_mode={cfg.soc_mode.value}",
    ]
    return "\n".join(out) + "\n"


def render_topology(topo: TopologySpec) -> str:
    out = [
        f"node_count={topo.node_count}",
        f"total_houses={topo.total_houses}",
        f"houses_min={topo.houses_min}",
        f"houses_max={topo.houses_max}",
        f"kva_per_house={topo.kva_per_house!r}",
        f"substation_kva={topo.substation_kva!r}",
        f"type2_fraction={topo.type2_fraction!r}",
    ]
    return "\n".join(out) + "\n"


def default_schedule_text(season: str = "winter") -> str:
    """Shipped schedule fixture for the given season."""
    if season not in ("winter", "summer"):
        raise ConfigError("season must be winter or summer", key="season")
    path = resources.files("feedersim.data") / f"schedules_{season}.csv"
    return path.read_text(encoding="utf-8")


def default_schedules(season: str = "winter") -> list:
    return parse_schedules(default_schedule_text(season))
