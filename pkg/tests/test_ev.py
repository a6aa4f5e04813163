import numpy as np
import pytest

from feedersim.config import SocMode, parse_scenario
from feedersim.ev import (EV_SPECS, EvMode, EvState, initial_state,
                          sample_trip_profile, soc_after_charge,
                          soc_after_drive, step_ev)
from feedersim.loads import HouseType
from feedersim.rng import derive_stream

TYPE1 = EV_SPECS[HouseType.TYPE1]
TYPE2 = EV_SPECS[HouseType.TYPE2]


def home_state(mode=EvMode.CHARGING, charge=5.0, arrival=1050,
               departure=450, distance=30.0, soc=20.0):
    return EvState(mode, charge, arrival, departure, distance, soc)


def test_spec_table_values():
    assert (TYPE1.battery_size_kwh, TYPE1.miles_classification,
            TYPE1.soc_arrival_mean) == (25.0, 75.0, 20.0)
    assert (TYPE2.battery_size_kwh, TYPE2.miles_classification,
            TYPE2.soc_arrival_mean) == (40.0, 140.0, 25.0)
    assert TYPE1.mileage_efficiency == pytest.approx(3.0)
    assert TYPE2.mileage_efficiency == pytest.approx(3.5)


def test_soc_after_charge_one_minute_at_full_rate():
    assert soc_after_charge(5.0, 0.12, 0.9, 25.0) == pytest.approx(20.432)


def test_soc_after_charge_identity_and_saturation():
    assert soc_after_charge(5.0, 0.0, 0.9, 25.0) == pytest.approx(20.0)
    assert soc_after_charge(24.99, 1.0, 1.0, 25.0) == 100.0


def test_soc_after_charge_zero_battery_rejected():
    with pytest.raises(ValueError):
        soc_after_charge(1.0, 1.0, 1.0, 0.0)


def test_soc_after_drive_halved_consumption():
    assert soc_after_drive(25.0, 30.0, 3.0, 25.0) == pytest.approx(80.0)


def test_soc_after_drive_identity_and_floor():
    assert soc_after_drive(10.0, 0.0, 3.0, 25.0) == pytest.approx(40.0)
    assert soc_after_drive(1.0, 1e6, 3.0, 25.0) == 0.0


def test_trip_profile_zero_variance_hits_means():
    cfg = parse_scenario("arrival_std=0\ndeparture_std=0\n"
                         "soc_std=0\ndistance_std=0")
    prof = sample_trip_profile(TYPE1, cfg, derive_stream(1, "trip", 0, 0))
    assert prof.arrival == 1050      # 17:30
    assert prof.departure == 450     # 07:30
    assert prof.arrival_soc == pytest.approx(20.0)
    assert prof.distance == pytest.approx(30.0)


def test_trip_profile_departure_always_before_arrival():
    cfg = parse_scenario("arrival_std=300\ndeparture_std=300")
    for i in range(500):
        prof = sample_trip_profile(TYPE1, cfg,
                                   derive_stream(2, "trip", i, 0))
        assert 0 <= prof.departure < prof.arrival <= 1439
        assert prof.distance >= 0.0
        assert 5.0 <= prof.arrival_soc <= 95.0


def test_trip_profile_monte_carlo_arrival_mean():
    cfg = parse_scenario("")
    arrivals = [sample_trip_profile(TYPE1, cfg,
                                    derive_stream(3, "trip", i, 0)).arrival
                for i in range(10000)]
    assert abs(np.mean(arrivals) - 1050.0) < 2.0


def test_step_arrival_sampled_soc():
    st = EvState(EvMode.AWAY, 12.0, 1050, 450, 30.0, 20.0)
    out = step_ev(st, TYPE1, 1050, 0.0, 0.9)
    assert out.mode is EvMode.CHARGING
    assert out.charge_kwh == pytest.approx(5.0)


def test_step_arrival_distance_driven():
    # Left full; drives 30 miles at 3 mi/kWh with the halved-consumption
    # rule: arrives at 80%.
    st = EvState(EvMode.AWAY, 25.0, 1050, 450, 30.0, 20.0)
    out = step_ev(st, TYPE1, 1050, 0.0, 0.9,
                  soc_mode=SocMode.DISTANCE_DRIVEN)
    assert out.mode is EvMode.CHARGING
    assert out.charge_kwh == pytest.approx(20.0)


def test_step_charging_to_full():
    st = home_state(charge=24.95)
    out = step_ev(st, TYPE1, 600, 0.12, 0.9)
    assert out.mode is EvMode.IDLE_FULL
    assert out.charge_kwh == 25.0


def test_full_battery_accepts_no_energy():
    st = home_state(mode=EvMode.IDLE_FULL, charge=25.0)
    assert step_ev(st, TYPE1, 600, 0.0, 0.9).mode is EvMode.IDLE_FULL
    with pytest.raises(ValueError):
        step_ev(st, TYPE1, 600, 0.12, 0.9)


def test_departure_from_any_home_mode():
    for mode in (EvMode.CHARGING, EvMode.IDLE_FULL, EvMode.IDLE_STOPPED):
        st = home_state(mode=mode, charge=25.0 if mode is EvMode.IDLE_FULL
                        else 10.0)
        assert step_ev(st, TYPE1, 450, 0.0, 0.9).mode is EvMode.AWAY


def test_zero_command_stops_positive_command_resumes():
    st = home_state()
    stopped = step_ev(st, TYPE1, 600, 0.0, 0.9)
    assert stopped.mode is EvMode.IDLE_STOPPED
    resumed = step_ev(stopped, TYPE1, 601, 0.06, 0.9)
    assert resumed.mode is EvMode.CHARGING
    assert resumed.charge_kwh == pytest.approx(5.0 + 0.06 * 0.9)


def test_energy_while_away_is_a_contract_violation():
    st = EvState(EvMode.AWAY, 5.0, 1050, 450, 30.0, 20.0)
    with pytest.raises(ValueError):
        step_ev(st, TYPE1, 600, 0.1, 0.9)


def test_away_between_trips_is_inert():
    st = EvState(EvMode.AWAY, 8.0, 1050, 450, 30.0, 20.0)
    out = step_ev(st, TYPE1, 700, 0.0, 0.9)
    assert out is st


def test_charge_equation_energy_conservation():
    st = home_state(charge=5.0)
    eff = 0.9
    total_in = 0.0
    for minute in range(600, 660):
        st = step_ev(st, TYPE1, minute, 0.12, eff)
        total_in += 0.12
        if st.charge_kwh >= 25.0:
            break
    assert st.charge_kwh == pytest.approx(5.0 + eff * total_in, abs=1e-9)


def test_initial_state_is_home():
    cfg = parse_scenario("")
    prof = sample_trip_profile(TYPE1, cfg, derive_stream(5, "trip", 0, 0))
    st = initial_state(prof, TYPE1)
    assert st.mode in (EvMode.CHARGING, EvMode.IDLE_FULL)
    assert 0.0 <= st.charge_kwh <= 25.0
