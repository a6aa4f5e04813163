import pytest

from feedersim.config import TopologySpec
from feedersim.rng import derive_stream
from feedersim.topology import (GridBuildError, assign_evs, build_grid,
                                grid_dump_csv, transformer_rating)


def _grid(topo, seed=1, frac=0.5):
    return build_grid(topo, frac, derive_stream(seed, "grid"))


def test_transformer_rating_rule():
    assert transformer_rating(5, 5.0) == 25.0
    assert transformer_rating(1, 5.0) == 5.0
    assert transformer_rating(7, 5.0) == 35.0


def test_transformer_rating_rejects_empty():
    with pytest.raises(GridBuildError):
        transformer_rating(0, 5.0)


def test_default_partition_bounds():
    grid = _grid(TopologySpec())
    n_tr = len(grid.transformers)
    # ceil(1000/7) .. floor(1000/3) transformers
    assert 143 <= n_tr <= 333
    # All groups obey [3,7]; the final one may carry a merged remainder of
    # up to houses_min - 1 extra houses.
    for t in grid.transformers[:-1]:
        assert 3 <= len(t.house_ids) <= 7
        assert t.rating_kva in {15, 20, 25, 30, 35}
    last = grid.transformers[-1]
    assert 3 <= len(last.house_ids) <= 9
    assert last.rating_kva == len(last.house_ids) * 5.0


def test_forced_partition_single_transformer():
    grid = _grid(TopologySpec(total_houses=5, houses_min=5, houses_max=5))
    assert len(grid.transformers) == 1
    assert grid.transformers[0].rating_kva == 25.0


def test_too_few_houses_rejected():
    with pytest.raises(GridBuildError):
        _grid(TopologySpec(total_houses=2))


def test_partition_completeness():
    grid = _grid(TopologySpec(total_houses=200))
    seen = []
    for t in grid.transformers:
        seen.extend(t.house_ids)
    assert sorted(seen) == list(range(200))
    for house in grid.houses:
        t = grid.transformers[house.transformer_id]
        assert house.id in t.house_ids


def test_ratings_follow_house_count():
    grid = _grid(TopologySpec(total_houses=300))
    for t in grid.transformers:
        assert t.rating_kva == len(t.house_ids) * 5.0


def test_deterministic_under_seed():
    topo = TopologySpec(total_houses=150)
    assert _grid(topo, seed=7) == _grid(topo, seed=7)
    assert _grid(topo, seed=7) != _grid(topo, seed=8)


@pytest.mark.parametrize("rate,expected", [
    (0.0, 0), (0.1, 100), (0.2, 200), (0.3, 300), (0.5, 500), (1.0, 1000),
])
def test_ev_count_exactness(rate, expected):
    grid = _grid(TopologySpec())
    grid = assign_evs(grid, rate, derive_stream(3, "ev-assign"))
    assert grid.ev_count == expected


def test_ev_sets_are_nested_across_rates():
    grid = _grid(TopologySpec(total_houses=100))
    sets = []
    for rate in (0.1, 0.3, 0.6):
        g = assign_evs(grid, rate, derive_stream(11, "ev-assign"))
        sets.append({h.id for h in g.houses if h.has_ev})
    assert sets[0] <= sets[1] <= sets[2]


def test_node_assignment_within_range():
    grid = _grid(TopologySpec(total_houses=500))
    assert {t.node_id for t in grid.transformers} <= set(range(13))


def test_grid_dump_format():
    grid = _grid(TopologySpec(total_houses=20, houses_min=5, houses_max=5))
    grid = assign_evs(grid, 0.5, derive_stream(1, "ev-assign"))
    lines = grid_dump_csv(grid).strip().splitlines()
    assert lines[0] == "transformer_id,node_id,rating_kva,house_count,ev_count"
    assert len(lines) == 1 + len(grid.transformers)
    total_evs = sum(int(line.split(",")[4]) for line in lines[1:])
    assert total_evs == 10
