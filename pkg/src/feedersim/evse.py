"""Charging equipment: integer amperage command at 240 V.

The command latches at tick boundaries; delivered power is zero unless the
attached EV is actually in the charging state, regardless of the command.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .ev import EvMode, EvSpec, EvState

MAX_AMPS = 30
CHARGE_VOLTAGE = 240.0
MAX_POWER_KW = MAX_AMPS * CHARGE_VOLTAGE / 1000.0  # 7.2


@dataclass(frozen=True, slots=True)
class Evse:
    id: int
    house_id: int
    commanded_amps: int = MAX_AMPS
    voltage: float = CHARGE_VOLTAGE

    def __post_init__(self):
        if not (isinstance(self.commanded_amps, int)
                and 0 <= self.commanded_amps <= MAX_AMPS):
            raise ValueError(
                f"commanded_amps must be an integer in [0, {MAX_AMPS}]")


@dataclass(frozen=True, slots=True)
class EvseStatus:
    """Read-only snapshot handed to the controller."""

    soc: float
    battery_size_kwh: float
    next_departure: int
    miles_classification: float
    plugged: bool
    current_rate_kw: float


def set_amperage(evse: Evse, amps: int) -> Evse:
    if not (isinstance(amps, int) and 0 <= amps <= MAX_AMPS):
        raise ValueError(f"amperage {amps} outside [0, {MAX_AMPS}]")
    return replace(evse, commanded_amps=amps)


def delivered_power(evse: Evse, ev_mode: EvMode) -> float:
    """kW actually drawn this tick."""
    if ev_mode is not EvMode.CHARGING:
        return 0.0
    return evse.voltage * evse.commanded_amps / 1000.0


def energy_per_tick(power_kw: float, tick_minutes: int) -> float:
    """kWh delivered over one tick at constant power."""
    if power_kw < 0:
        raise ValueError("power must be >= 0")
    return power_kw * tick_minutes / 60.0


def report_status(evse: Evse, ev: EvState, spec: EvSpec) -> EvseStatus:
    return EvseStatus(
        soc=ev.charge_kwh / spec.battery_size_kwh * 100.0,
        battery_size_kwh=spec.battery_size_kwh,
        next_departure=ev.today_departure,
        miles_classification=spec.miles_classification,
        plugged=ev.mode is not EvMode.AWAY,
        current_rate_kw=delivered_power(evse, ev.mode),
    )
