"""Per-transformer fair-sharing charge controller.

Once per tick, each transformer's remaining headroom
``rating - (output - sum(ev_rates))`` is split equally among its
charging-eligible EVs. Negative shares stop charging; shares above the
7.2 kW equipment ceiling clamp to 30 A. kW-to-amp quantization floors, so
the commanded total never exceeds the headroom it was computed from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .evse import CHARGE_VOLTAGE, MAX_AMPS, MAX_POWER_KW


@dataclass(frozen=True)
class TransformerSnapshot:
    """One transformer's state as measured at a single tick.

    `ev_rates_kw`, `statuses`, and `evse_ids` are parallel lists covering
    the charging-eligible EVs only (plugged in, battery not full).
    """

    transformer_id: int
    rating_kw: float
    output_kw: float
    ev_rates_kw: tuple
    statuses: tuple
    evse_ids: tuple

    def __post_init__(self):
        if not (len(self.ev_rates_kw) == len(self.statuses)
                == len(self.evse_ids)):
            raise ValueError("snapshot lists must be parallel")


@dataclass(frozen=True)
class AmpCommandSet:
    """Map transformer_id -> tuple of (evse_id, amps)."""

    commands: Mapping[int, tuple]


def fair_share_rate(rating_kw: float, output_kw: float,
                    ev_rates_kw: Sequence[float], n: int) -> float:
    """Unclamped equal share of the transformer's remaining headroom, kW.

    May be negative when the non-EV load alone exceeds the rating.
    """
    if n == 0:
        raise ValueError("no EVs to share among; skip this transformer")
    if n != len(ev_rates_kw):
        raise ValueError("n must match the EV rate list")
    return (rating_kw - (output_kw - sum(ev_rates_kw))) / n


def rate_to_amps(rate_kw: float, voltage: float = CHARGE_VOLTAGE) -> int:
    """Quantize a kW share to a whole-ampere command in [0, 30]."""
    if voltage <= 0:
        raise ValueError("voltage must be positive")
    if rate_kw <= 0:
        return 0
    if rate_kw >= MAX_POWER_KW:
        return MAX_AMPS
    return min(MAX_AMPS, math.floor(rate_kw * 1000.0 / voltage))


def control_step(snapshots: Sequence[TransformerSnapshot]) -> AmpCommandSet:
    """Compute this tick's amperage commands for every transformer.

    Within one transformer every eligible EV gets the identical command.
    """
    commands = {}
    for snap in snapshots:
        if snap.transformer_id in commands:
            raise ValueError(
                f"duplicate transformer {snap.transformer_id} in snapshots")
        n = len(snap.evse_ids)
        if n == 0:
            commands[snap.transformer_id] = ()
            continue
        share = fair_share_rate(snap.rating_kw, snap.output_kw,
                                snap.ev_rates_kw, n)
        amps = rate_to_amps(share)
        commands[snap.transformer_id] = tuple(
            (evse_id, amps) for evse_id in snap.evse_ids)
    return AmpCommandSet(commands)
