"""EV battery, daily trip profile, and charge state machine.

The battery level while charging follows
``soc = (b_c + E * c_e) / s * 100`` and the after-drive level follows
``soc = (b_c - d / (2 * m_e)) / s * 100`` with m_e the mileage efficiency
in miles per kWh; the factor of 2 derates the rated mileage efficiency.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .config import ScenarioConfig, SocMode
from .loads import HouseType
from .rng import gaussian


class EvMode(Enum):
    AWAY = 0
    CHARGING = 1
    IDLE_FULL = 2
    IDLE_STOPPED = 3


HOME_MODES = (EvMode.CHARGING, EvMode.IDLE_FULL, EvMode.IDLE_STOPPED)


@dataclass(frozen=True)
class EvSpec:
    battery_size_kwh: float
    miles_classification: float
    soc_arrival_mean: float
    max_current: int = 30
    charge_voltage: float = 240.0

    @property
    def mileage_efficiency(self) -> float:
        """Miles per kWh, from the classification-to-capacity ratio."""
        return self.miles_classification / self.battery_size_kwh


EV_SPECS = {
    HouseType.TYPE1: EvSpec(25.0, 75.0, 20.0),
    HouseType.TYPE2: EvSpec(40.0, 140.0, 25.0),
}


@dataclass(frozen=True, slots=True)
class TripProfile:
    arrival: int          # minute of day
    departure: int        # minute of day, always < arrival
    distance: float       # miles
    arrival_soc: float    # percent


@dataclass(frozen=True, slots=True)
class EvState:
    mode: EvMode
    charge_kwh: float
    today_arrival: int
    today_departure: int
    today_distance: float
    today_arrival_soc: float


def sample_trip_profile(spec: EvSpec, cfg: ScenarioConfig, rng) -> TripProfile:
    """Draw one day's departure/arrival/distance/arrival-SOC.

    Draw order is fixed; bounds are enforced by clamping, never resampling,
    so stream consumption is data-independent.
    """
    departure = int(round(gaussian(rng, cfg.departure_mean,
                                   cfg.departure_std)))
    arrival = int(round(gaussian(rng, cfg.arrival_mean, cfg.arrival_std)))
    distance = max(0.0, gaussian(rng, cfg.distance_mean, cfg.distance_std))
    soc = gaussian(rng, spec.soc_arrival_mean, cfg.soc_std)

    departure = min(max(departure, 0), 1438)
    arrival = min(max(arrival, departure + 1), 1439)
    soc = min(max(soc, 5.0), 95.0)
    return TripProfile(arrival, departure, distance, soc)


def soc_after_charge(charge_kwh: float, energy_in: float, efficiency: float,
                     battery_size: float) -> float:
    """Battery percentage after absorbing energy_in kWh at the given
    efficiency, saturating at 100."""
    if battery_size == 0:
        raise ValueError("battery_size must be nonzero")
    return min(100.0, (charge_kwh + energy_in * efficiency)
               / battery_size * 100.0)


def soc_after_drive(charge_kwh: float, distance: float, mileage_eff: float,
                    battery_size: float) -> float:
    """Battery percentage after driving `distance` miles, floored at 0."""
    if battery_size == 0:
        raise ValueError("battery_size must be nonzero")
    return max(0.0, (charge_kwh - distance / (2.0 * mileage_eff))
               / battery_size * 100.0)


def _arrival_charge(state: EvState, spec: EvSpec, soc_mode: SocMode) -> float:
    if soc_mode is SocMode.DISTANCE_DRIVEN:
        soc = soc_after_drive(state.charge_kwh, state.today_distance,
                              spec.mileage_efficiency, spec.battery_size_kwh)
    else:
        soc = state.today_arrival_soc
    return soc / 100.0 * spec.battery_size_kwh


def step_ev(state: EvState, spec: EvSpec, minute_of_day: int,
            energy_in: float, efficiency: float,
            soc_mode: SocMode = SocMode.SAMPLED_SOC) -> EvState:
    """Advance one EV by one tick.

    `energy_in` is the kWh delivered by the EVSE during this tick and must
    be zero while the EV is away or departing.
    """
    size = spec.battery_size_kwh

    if state.mode is EvMode.AWAY:
        if energy_in > 0:
            raise ValueError("energy delivered while EV is away")
        if minute_of_day == state.today_arrival:
            charge = min(_arrival_charge(state, spec, soc_mode), size)
            mode = EvMode.IDLE_FULL if charge >= size else EvMode.CHARGING
            return replace(state, mode=mode, charge_kwh=charge)
        return state

    if minute_of_day == state.today_departure:
        if energy_in > 0:
            raise ValueError("energy delivered at departure")
        return replace(state, mode=EvMode.AWAY)

    if state.charge_kwh >= size:
        if energy_in > 0:
            raise ValueError("energy delivered to a full battery")
        if state.mode is EvMode.IDLE_FULL:
            return state
        return replace(state, mode=EvMode.IDLE_FULL)

    if energy_in == 0:
        if state.mode is EvMode.IDLE_STOPPED:
            return state
        return replace(state, mode=EvMode.IDLE_STOPPED)

    charge = min(size, state.charge_kwh + energy_in * efficiency)
    mode = EvMode.IDLE_FULL if charge >= size else EvMode.CHARGING
    return replace(state, mode=mode, charge_kwh=charge)


def initial_state(profile: TripProfile, spec: EvSpec) -> EvState:
    """State at simulation start (midnight): home, charge drawn from the
    arrival-SOC distribution, first departure later that morning."""
    charge = min(profile.arrival_soc / 100.0 * spec.battery_size_kwh,
                 spec.battery_size_kwh)
    mode = (EvMode.IDLE_FULL if charge >= spec.battery_size_kwh
            else EvMode.CHARGING)
    return EvState(mode, charge, profile.arrival, profile.departure,
                   profile.distance, profile.arrival_soc)
