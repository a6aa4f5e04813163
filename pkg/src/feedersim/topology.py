"""Static grid construction.

Houses are partitioned into step-down transformer groups of random size,
groups are spread round-robin over the feeder nodes in a shuffled order,
and each transformer's rating follows the per-house kVA rule. EV placement
uses a prefix of one seeded house permutation, so a higher penetration
rate's EV set strictly contains a lower one (nested sampling).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .config import TopologySpec
from .loads import HouseType


class GridBuildError(ValueError):
    pass


@dataclass(frozen=True)
class Transformer:
    id: int
    node_id: int
    rating_kva: float
    house_ids: tuple


@dataclass(frozen=True)
class House:
    id: int
    profile: HouseType
    transformer_id: int
    has_ev: bool = False


@dataclass(frozen=True)
class Grid:
    transformers: tuple
    houses: tuple
    substation_rating_kva: float
    node_count: int

    @property
    def total_houses(self) -> int:
        return len(self.houses)

    @property
    def ev_count(self) -> int:
        return sum(1 for h in self.houses if h.has_ev)


def transformer_rating(house_count: int, kva_per_house: float) -> float:
    """Nameplate kVA for a transformer serving house_count houses."""
    if house_count < 1:
        raise GridBuildError("transformer must serve at least one house")
    return house_count * kva_per_house


def _group_sizes(total: int, lo: int, hi: int, rng) -> list:
    """Random partition of `total` into groups of size in [lo, hi].

    Sizes are drawn until fewer than `lo` houses remain; the remainder is
    merged into the last group, which may then exceed `hi` by up to lo-1.
    """
    if total < lo:
        raise GridBuildError(
            f"{total} houses cannot form a group of at least {lo}")
    sizes = []
    remaining = total
    while remaining >= lo:
        k = int(rng.integers(lo, hi + 1))
        k = min(k, remaining)
        sizes.append(k)
        remaining -= k
    if remaining:
        sizes[-1] += remaining
    return sizes


def build_grid(topo: TopologySpec, type2_fraction: float, rng) -> Grid:
    """Construct the static grid from a validated topology spec.

    Draw order from `rng` is fixed (group sizes, node shuffle, house types)
    so identical (topo, fraction, seed) yields an identical grid.
    """
    sizes = _group_sizes(topo.total_houses, topo.houses_min, topo.houses_max,
                         rng)
    node_order = [int(n) for n in rng.permutation(topo.node_count)]

    transformers = []
    houses = []
    next_house = 0
    for t_id, size in enumerate(sizes):
        node = node_order[t_id % topo.node_count]
        ids = tuple(range(next_house, next_house + size))
        next_house += size
        transformers.append(Transformer(
            t_id, node, transformer_rating(size, topo.kva_per_house), ids))
        for h_id in ids:
            profile = (HouseType.TYPE2 if rng.random() < type2_fraction
                       else HouseType.TYPE1)
            houses.append(House(h_id, profile, t_id))

    return Grid(tuple(transformers), tuple(houses),
                topo.substation_kva, topo.node_count)


def assign_evs(grid: Grid, penetration_rate: float, rng) -> Grid:
    """Give exactly round(rate x houses) houses an EV.

    The EV set is the first k entries of one seeded permutation, making EV
    sets nested across penetration rates for a fixed seed.
    """
    n = len(grid.houses)
    k = int(round(penetration_rate * n))
    order = rng.permutation(n)
    chosen = set(int(i) for i in order[:k])
    houses = tuple(replace(h, has_ev=(h.id in chosen)) for h in grid.houses)
    return replace(grid, houses=houses)


def grid_dump_csv(grid: Grid) -> str:
    """Diagnostic CSV, one row per transformer."""
    lines = ["transformer_id,node_id,rating_kva,house_count,ev_count"]
    by_id = {h.id: h for h in grid.houses}
    for t in grid.transformers:
        evs = sum(1 for h_id in t.house_ids if by_id[h_id].has_ev)
        lines.append(f"{t.id},{t.node_id},{t.rating_kva:g},"
                     f"{len(t.house_ids)},{evs}")
    return "\n".join(lines) + "\n"
