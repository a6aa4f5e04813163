"""House appliance ratings and the non-EV load model.

Two house classes share the same appliance set with different nameplate
ratings. A house's load at a given minute is the sum over appliances of
rating x hourly duty fraction x a per-day multiplier drawn once per house
and appliance (mean 1, spread proportional to the mean, truncated to
[0, 2]).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .rng import gaussian


class HouseType(Enum):
    TYPE1 = 1
    TYPE2 = 2


# Canonical appliance order; schedules, multipliers, and the engine's
# vectorized path all follow it.
APPLIANCES = (
    "lights",
    "dishwasher",
    "water_heater",
    "clothes_washer",
    "miscellaneous",
    "compressor",
    "oven",
    "dryer",
)

TYPE1_KW = {
    "lights": 1.2,
    "dishwasher": 1.0,
    "water_heater": 3.0,
    "clothes_washer": 0.8,
    "miscellaneous": 0.7,
    "compressor": 0.5,
    "oven": 2.4,
    "dryer": 2.0,
}

TYPE2_KW = {
    "lights": 1.5,
    "dishwasher": 1.5,
    "water_heater": 4.0,
    "clothes_washer": 1.0,
    "miscellaneous": 0.8,
    "compressor": 0.6,
    "oven": 3.0,
    "dryer": 3.0,
}


@dataclass(frozen=True)
class ApplianceRating:
    name: str
    rated_kw: float

    def __post_init__(self):
        if self.rated_kw < 0:
            raise ValueError(f"negative rating for {self.name}")


@dataclass(frozen=True)
class HouseProfileSpec:
    """Appliance ratings plus descriptive metadata for one house class.

    The metadata (floor area, occupants, tank volume, ...) documents the
    house class but does not enter the load equation.
    """

    profile: HouseType
    appliances: tuple
    metadata: Mapping


def _profile(house_type: HouseType, ratings: Mapping[str, float],
             metadata: Mapping) -> HouseProfileSpec:
    apps = tuple(ApplianceRating(name, ratings[name]) for name in APPLIANCES)
    return HouseProfileSpec(house_type, apps, metadata)


PROFILES = {
    HouseType.TYPE1: _profile(HouseType.TYPE1, TYPE1_KW, {
        "stories": 1, "floor_area_sqft": 2100, "occupants": 3,
        "heating": "gas", "thermal_integrity": "normal",
        "water_tank_gal": 40,
    }),
    HouseType.TYPE2: _profile(HouseType.TYPE2, TYPE2_KW, {
        "stories": 2, "floor_area_sqft": 2500, "occupants": 5,
        "heating": "gas", "thermal_integrity": "above_average",
        "water_tank_gal": 50,
    }),
}


@dataclass(frozen=True)
class DailyLoadInstance:
    """Per-appliance multipliers for one house on one simulated day."""

    house_id: int
    multipliers: Mapping[str, float]


def draw_daily_multipliers(house, schedules: Mapping, rng) -> DailyLoadInstance:
    """Draw one multiplier per appliance: Gaussian(1, jitter_cv), truncated
    to [0, 2].

    `rng` must be the substream keyed to this house and day.
    """
    mults = {}
    for name in APPLIANCES:
        cv = schedules[name].jitter_cv
        m = gaussian(rng, 1.0, cv)
        mults[name] = min(2.0, max(0.0, m))
    return DailyLoadInstance(house.id, mults)


def appliance_load(rating: ApplianceRating, schedule, multiplier: float,
                   minute_of_day: int) -> float:
    """kW drawn by one appliance at the given minute."""
    if not 0 <= minute_of_day < 1440:
        raise ValueError(f"minute_of_day {minute_of_day} out of range")
    return rating.rated_kw * schedule.hourly_duty[minute_of_day // 60] * multiplier


def house_load(house, instance: DailyLoadInstance, schedules: Mapping,
               minute_of_day: int) -> float:
    """Total non-EV kW for one house at the given minute."""
    spec = PROFILES[house.profile]
    total = 0.0
    for rating in spec.appliances:
        total += appliance_load(rating, schedules[rating.name],
                                instance.multipliers[rating.name],
                                minute_of_day)
    return total


def rating_matrix() -> np.ndarray:
    """(2, n_appliance) nameplate matrix, row 0 = TYPE1, row 1 = TYPE2."""
    return np.array([
        [TYPE1_KW[a] for a in APPLIANCES],
        [TYPE2_KW[a] for a in APPLIANCES],
    ])
