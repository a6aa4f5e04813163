"""Minute-resolution simulation loop.

Tick phases, in order:

1. at a day boundary, redraw every house's daily appliance multipliers and
   every EV's trip profile from their keyed substreams;
2. look up each transformer's non-EV base load for the current hour;
3. determine the charging-eligible EVs (home, not full, not departing this
   minute) and fix their amperage commands: the constant 30 A when
   uncoordinated, or the fair-sharing controller's output when coordinated
   (the controller sees this tick's measured output, so its commands bound
   this tick's total);
4. deliver energy at the commanded power and advance every EV's state;
5. record each transformer's total output;
6. advance the clock.

An EV arriving at minute m becomes eligible at m+1: its state machine
forbids accepting energy on the arrival tick itself.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import timedelta

import numpy as np

from . import evse as evse_mod
from .config import Bundle, ScenarioConfig
from .coordinator import TransformerSnapshot, control_step
from .ev import (EV_SPECS, EvMode, initial_state, sample_trip_profile,
                 step_ev)
from .evse import (Evse, delivered_power, energy_per_tick, report_status,
                   set_amperage)
from .loads import APPLIANCES, HouseType, draw_daily_multipliers, rating_matrix
from .rng import RngStreams
from .topology import Grid, assign_evs, build_grid

_ACTIVE_MODES = (EvMode.CHARGING, EvMode.IDLE_STOPPED)
_FULL_EPS = 1e-12


@dataclass
class EvTrace:
    """Per-EV, per-tick diagnostics. amps == -1 marks a tick on which the
    EV was not charging-eligible."""

    house_ids: np.ndarray          # (n_ev,)
    mode: np.ndarray               # (n_ev, n_ticks) int8, EvMode values
    charge_kwh: np.ndarray         # (n_ev, n_ticks) float64, post-tick
    soc: np.ndarray                # (n_ev, n_ticks) float64
    amps: np.ndarray               # (n_ev, n_ticks) int16
    delivered_kwh: np.ndarray      # (n_ev, n_ticks) float64, pre-efficiency


@dataclass
class SimulationResult:
    scenario: ScenarioConfig
    grid: Grid
    penetration_rate: float
    coordinated: bool
    transformer_kw: np.ndarray     # (n_transformers, n_ticks)
    ratings_kw: np.ndarray         # (n_transformers,)
    tick_minutes: int
    ev_trace: EvTrace | None = None


def run(bundle: Bundle, *, penetration: float | None = None,
        coordinated: bool | None = None, seed: int | None = None,
        ev_trace: bool = False) -> SimulationResult:
    """Simulate the scenario window and return per-transformer kW traces.

    Keyword overrides exist so a sweep can vary one knob without editing
    the bundle; everything else, including the base-load randomness, stays
    identical for a fixed seed.
    """
    cfg = bundle.scenario
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    rate = cfg.penetration_rate if penetration is None else penetration
    coord = cfg.coordinated if coordinated is None else coordinated
    topo = bundle.topology
    schedules = bundle.schedules
    tick_min = cfg.tick_minutes
    eff = cfg.charge_efficiency

    streams = RngStreams(cfg.seed)
    grid = build_grid(topo, topo.type2_fraction, streams.stream("grid"))
    grid = assign_evs(grid, rate, streams.stream("ev-assign"))

    n_tr = len(grid.transformers)
    n_houses = len(grid.houses)
    total_minutes = int((cfg.end - cfg.start) / timedelta(minutes=1))
    n_ticks = total_minutes // tick_min

    # Static arrays for the vectorized base-load path.
    house_to_tr = np.array([h.transformer_id for h in grid.houses])
    house_type_row = np.array(
        [0 if h.profile is HouseType.TYPE1 else 1 for h in grid.houses])
    ratings_by_type = rating_matrix()                    # (2, n_app)
    house_ratings = ratings_by_type[house_type_row]      # (n_houses, n_app)
    duty = np.array([schedules[a].hourly_duty for a in APPLIANCES])  # (n_app, 24)
    tr_ratings = np.array([t.rating_kva for t in grid.transformers])

    # EV fleet.
    ev_houses = [h for h in grid.houses if h.has_ev]
    n_ev = len(ev_houses)
    ev_specs = [EV_SPECS[h.profile] for h in ev_houses]
    ev_tr = np.array([h.transformer_id for h in ev_houses], dtype=int)
    evses = [Evse(id=i, house_id=h.id) for i, h in enumerate(ev_houses)]
    states = [None] * n_ev

    out = np.zeros((n_tr, n_ticks))
    trace = None
    if ev_trace:
        trace = EvTrace(
            house_ids=np.array([h.id for h in ev_houses]),
            mode=np.zeros((n_ev, n_ticks), dtype=np.int8),
            charge_kwh=np.zeros((n_ev, n_ticks)),
            soc=np.zeros((n_ev, n_ticks)),
            amps=np.full((n_ev, n_ticks), -1, dtype=np.int16),
            delivered_kwh=np.zeros((n_ev, n_ticks)),
        )

    tr_hourly = None
    current_day = None
    when = cfg.start
    for t in range(n_ticks):
        minute = when.hour * 60 + when.minute
        day_index = (when.date() - cfg.start.date()).days

        if day_index != current_day:
            current_day = day_index
            multipliers = np.empty((n_houses, len(APPLIANCES)))
            for house in grid.houses:
                inst = draw_daily_multipliers(
                    house, schedules,
                    streams.stream("house-day", house.id, day_index))
                multipliers[house.id] = [inst.multipliers[a]
                                         for a in APPLIANCES]
            house_hourly = (house_ratings * multipliers) @ duty  # (n_houses, 24)
            tr_hourly = np.zeros((n_tr, 24))
            for h in range(24):
                tr_hourly[:, h] = np.bincount(
                    house_to_tr, weights=house_hourly[:, h], minlength=n_tr)
            for i, house in enumerate(ev_houses):
                profile = sample_trip_profile(
                    ev_specs[i], cfg,
                    streams.stream("trip", house.id, day_index))
                if states[i] is None:
                    states[i] = initial_state(profile, ev_specs[i])
                else:
                    states[i] = replace(
                        states[i], today_arrival=profile.arrival,
                        today_departure=profile.departure,
                        today_distance=profile.distance,
                        today_arrival_soc=profile.arrival_soc)

        base = tr_hourly[:, minute // 60].copy()

        eligible = [i for i in range(n_ev)
                    if states[i].mode in _ACTIVE_MODES
                    and states[i].charge_kwh
                    < ev_specs[i].battery_size_kwh - _FULL_EPS
                    and minute != states[i].today_departure]

        if coord and eligible:
            by_tr = {}
            for i in eligible:
                by_tr.setdefault(int(ev_tr[i]), []).append(i)
            snapshots = []
            for tr_id, members in by_tr.items():
                rates = tuple(delivered_power(evses[i], states[i].mode)
                              for i in members)
                statuses = tuple(report_status(evses[i], states[i],
                                               ev_specs[i])
                                 for i in members)
                snapshots.append(TransformerSnapshot(
                    transformer_id=tr_id,
                    rating_kw=float(tr_ratings[tr_id]),
                    output_kw=float(base[tr_id]) + sum(rates),
                    ev_rates_kw=rates,
                    statuses=statuses,
                    evse_ids=tuple(members)))
            command_set = control_step(snapshots)
            for pairs in command_set.commands.values():
                for i, amps in pairs:
                    evses[i] = set_amperage(evses[i], amps)
        else:
            for i in eligible:
                if evses[i].commanded_amps != evse_mod.MAX_AMPS:
                    evses[i] = set_amperage(evses[i], evse_mod.MAX_AMPS)

        out[:, t] = base
        eligible_set = set(eligible)
        for i in range(n_ev):
            if i in eligible_set:
                amps = evses[i].commanded_amps
                power = (delivered_power(evses[i], EvMode.CHARGING)
                         if amps > 0 else 0.0)
                energy = energy_per_tick(power, tick_min)
                states[i] = step_ev(states[i], ev_specs[i], minute, energy,
                                    eff, cfg.soc_mode)
                out[ev_tr[i], t] += power
                if trace is not None:
                    trace.amps[i, t] = amps
                    trace.delivered_kwh[i, t] = energy
            else:
                states[i] = step_ev(states[i], ev_specs[i], minute, 0.0,
                                    eff, cfg.soc_mode)
            if trace is not None:
                trace.mode[i, t] = states[i].mode.value
                trace.charge_kwh[i, t] = states[i].charge_kwh
                trace.soc[i, t] = (states[i].charge_kwh
                                   / ev_specs[i].battery_size_kwh * 100.0)

        if coord:
            # No-overshoot guarantee: wherever the base alone fits the
            # rating, the commanded total must fit it too.
            bad = (base <= tr_ratings) & (out[:, t] > tr_ratings + 1e-9)
            if bad.any():
                raise AssertionError(
                    f"fair-sharing overshoot at tick {t}, "
                    f"transformers {np.where(bad)[0].tolist()}")

        when += timedelta(minutes=tick_min)

    return SimulationResult(
        scenario=cfg, grid=grid, penetration_rate=rate, coordinated=coord,
        transformer_kw=out, ratings_kw=tr_ratings, tick_minutes=tick_min,
        ev_trace=trace)


def sweep(bundle: Bundle, penetration_rates, seeds,
          *, coordinated: bool | None = None,
          ev_trace: bool = False) -> list:
    """One independent run per (rate, seed) pair, rate-major order."""
    rates = list(penetration_rates)
    seed_list = list(seeds)
    if not rates or not seed_list:
        raise ValueError("penetration and seed lists must be non-empty")
    results = []
    for rate in rates:
        for seed in seed_list:
            results.append(run(bundle, penetration=rate, seed=seed,
                               coordinated=coordinated, ev_trace=ev_trace))
    return results
