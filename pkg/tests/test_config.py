import pytest
from datetime import datetime

from hypothesis import given, strategies as st

from feedersim.config import (ConfigError, ScenarioConfig, SocMode,
                              TopologySpec, default_schedules,
                              parse_scenario, parse_schedules,
                              parse_topology, render_scenario,
                              render_topology, validate_bundle)
from feedersim.loads import APPLIANCES


def test_scenario_direct_field_mapping():
    cfg = parse_scenario("seed=42\npenetration=0.5\ncoordinated=true")
    assert cfg.seed == 42
    assert cfg.penetration_rate == 0.5
    assert cfg.coordinated is True
    assert cfg.tick_minutes == 1
    assert cfg.arrival_mean == 1050.0


def test_empty_scenario_uses_winter_defaults():
    cfg = parse_scenario("")
    assert cfg.penetration_rate == 0.0
    assert cfg.coordinated is False
    assert cfg.start == datetime(2012, 1, 3)
    assert cfg.end == datetime(2012, 1, 5)
    assert cfg.soc_mode is SocMode.SAMPLED_SOC


def test_summer_season_switches_window():
    cfg = parse_scenario("season=summer")
    assert cfg.start == datetime(2012, 8, 2)
    assert cfg.end == datetime(2012, 8, 4)


def test_penetration_out_of_range_rejected():
    with pytest.raises(ConfigError) as exc:
        parse_scenario("penetration=1.5")
    assert "penetration" in str(exc.value)
    assert "line 1" in str(exc.value)


def test_unknown_key_carries_line_number():
    with pytest.raises(ConfigError) as exc:
        parse_scenario("seed=1\nbogus=3")
    assert exc.value.line == 2
    assert exc.value.key == "bogus"


def test_missing_equals_is_syntax_error():
    with pytest.raises(ConfigError) as exc:
        parse_scenario("seed 42")
    assert exc.value.line == 1


def test_start_after_end_rejected():
    with pytest.raises(ConfigError):
        parse_scenario("start=2012-01-05T00:00\nend=2012-01-03T00:00")


def test_comments_and_crlf_accepted():
    cfg = parse_scenario("# a comment\r\nseed=7  # trailing\r\n")
    assert cfg.seed == 7


def test_topology_defaults_match_reference_grid():
    topo = parse_topology("")
    assert topo.node_count == 13
    assert topo.total_houses == 1000
    assert (topo.houses_min, topo.houses_max) == (3, 7)
    assert topo.kva_per_house == 5.0
    assert topo.substation_kva == 5000.0


def test_topology_forced_partition():
    topo = parse_topology("total_houses=10\nhouses_min=5\nhouses_max=5")
    assert topo.total_houses == 10
    assert topo.houses_min == topo.houses_max == 5


def test_topology_inverted_range_rejected():
    with pytest.raises(ConfigError):
        parse_topology("houses_min=7\nhouses_max=3")


def test_schedule_row_parses_with_default_jitter():
    duties = ",".join("0.5" for _ in range(24))
    specs = parse_schedules(f"lights,{duties}")
    assert len(specs) == 1
    assert specs[0].name == "lights"
    assert specs[0].hourly_duty == tuple([0.5] * 24)
    assert specs[0].jitter_cv == 0.15


def test_schedule_wrong_column_count():
    duties = ",".join("0.5" for _ in range(23))
    with pytest.raises(ConfigError) as exc:
        parse_schedules(f"lights,{duties}")
    assert exc.value.line == 1


def test_schedule_duplicate_name():
    duties = ",".join("0.1" for _ in range(24))
    with pytest.raises(ConfigError) as exc:
        parse_schedules(f"oven,{duties}\noven,{duties}")
    assert exc.value.key == "oven"


def test_schedule_duty_out_of_range():
    duties = ",".join("0.1" for _ in range(23)) + ",1.2"
    with pytest.raises(ConfigError):
        parse_schedules(f"oven,{duties}")


def test_validate_bundle_defaults_ok():
    bundle = validate_bundle(parse_scenario(""), parse_topology(""),
                             default_schedules())
    assert set(APPLIANCES) <= set(bundle.schedules)


def test_validate_bundle_missing_appliance():
    schedules = [s for s in default_schedules() if s.name != "water_heater"]
    with pytest.raises(ConfigError) as exc:
        validate_bundle(parse_scenario(""), parse_topology(""), schedules)
    assert "water_heater" in str(exc.value)


def test_validate_bundle_tick_must_divide_hour():
    with pytest.raises(ConfigError):
        validate_bundle(parse_scenario("tick_minutes=7"), parse_topology(""),
                        default_schedules())


minute_times = st.datetimes(
    min_value=datetime(2000, 1, 1), max_value=datetime(2030, 1, 1)).map(
        lambda d: d.replace(second=0, microsecond=0))


@given(
    seed=st.integers(0, 2**64 - 1),
    penetration=st.floats(0, 1, allow_nan=False),
    coordinated=st.booleans(),
    start=minute_times,
    tick=st.sampled_from([1, 5, 15, 60]),
    soc_mode=st.sampled_from(list(SocMode)),
)
def test_scenario_round_trip(seed, penetration, coordinated, start, tick,
                             soc_mode):
    from datetime import timedelta
    cfg = ScenarioConfig(seed=seed, penetration_rate=penetration,
                         coordinated=coordinated, start=start,
                         end=start + timedelta(days=1), tick_minutes=tick,
                         soc_mode=soc_mode)
    assert parse_scenario(render_scenario(cfg)) == cfg


@given(
    houses=st.integers(1, 5000),
    lo=st.integers(1, 10),
    span=st.integers(0, 10),
    frac=st.floats(0, 1, allow_nan=False),
)
def test_topology_round_trip(houses, lo, span, frac):
    topo = TopologySpec(total_houses=houses, houses_min=lo,
                        houses_max=lo + span, type2_fraction=frac)
    assert parse_topology(render_topology(topo)) == topo


def test_parsing_is_pure():
    text = "seed=9\npenetration=0.3"
    assert parse_scenario(text) == parse_scenario(text)
