"""Breach detection and add-on seats restoring degressive proportionality.

Rounded representation ratios must not increase when walking from a more
populous state to a less populous one. Breaches are healed by adding seats
to the less populous state only; no seat is ever taken away.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from degprop.domain import MemberState, Registry, representation_ratio


class BreachMark(enum.Enum):
    NONE = "none"
    PRIMARY = "primary_breach"
    COLLATERAL = "collateral_breach"

    @property
    def symbol(self) -> str:
        return {"none": "", "primary_breach": "*", "collateral_breach": "†"}[self.value]


class RepairError(ValueError):
    def __init__(self, code: str, needed: int, cap: int):
        self.code = code
        self.needed = needed
        self.cap = cap
        super().__init__(
            f"{code}: restoring degressivity needs {needed} seats, above the cap of {cap}"
        )


@dataclass(frozen=True)
class StateRepair:
    state: MemberState
    add_on: int
    seats_dp: int
    ratio_before: int
    ratio_after: int
    mark: BreachMark

    @property
    def code(self) -> str:
        return self.state.code


@dataclass(frozen=True)
class RepairResult:
    rows: tuple[StateRepair, ...]

    @property
    def total_add_on(self) -> int:
        return sum(r.add_on for r in self.rows)

    @property
    def total_seats_dp(self) -> int:
        return sum(r.seats_dp for r in self.rows)

    @property
    def add_ons(self) -> dict[str, int]:
        return {r.code: r.add_on for r in self.rows if r.add_on}

    @property
    def seats_dp(self) -> dict[str, int]:
        return {r.code: r.seats_dp for r in self.rows}

    def __getitem__(self, code: str) -> StateRepair:
        for row in self.rows:
            if row.code == code:
                return row
        raise KeyError(code)


def breach_indices(populations: Sequence[int], seats: Sequence[int]) -> list[int]:
    """Indices whose rounded ratio strictly exceeds the minimum over all predecessors.

    ``populations`` must already be in registry order.
    """
    found = []
    running_min = None
    for i, (pop, s) in enumerate(zip(populations, seats)):
        ratio = representation_ratio(pop, s)
        if running_min is not None and ratio > running_min:
            found.append(i)
        running_min = ratio if running_min is None else min(running_min, ratio)
    return found


def is_degressive(populations: Sequence[int], seats: Sequence[int]) -> bool:
    return not breach_indices(populations, seats)


def scan_breaches(registry: Registry) -> list[tuple[str, BreachMark]]:
    states = registry.states
    idx = breach_indices(
        [s.population for s in states], [s.seats_status_quo for s in states]
    )
    return [(states[i].code, BreachMark.PRIMARY) for i in idx]


def min_seats_within_ratio(population: int, at_least: int, max_ratio: int) -> int:
    """Smallest ``s >= at_least`` with ``representation_ratio(population, s) <= max_ratio``.

    round(p/s) <= m  <=>  2p < (2m + 1) s  <=>  s > 2p / (2m + 1).
    """
    return max(at_least, 2 * population // (2 * max_ratio + 1) + 1)


def repair(registry: Registry) -> RepairResult:
    """Add the fewest seats needed for a non-increasing rounded-ratio column.

    Single pass in registry order against the running minimum of repaired
    ratios. States flagged by :func:`scan_breaches` are marked primary; other
    states that still receive seats are collateral.
    """
    primary = {code for code, _ in scan_breaches(registry)}
    rows = []
    running_min = None
    for state in registry.states:
        before = representation_ratio(state.population, state.seats_status_quo)
        if running_min is None:
            seats = state.seats_status_quo
        else:
            seats = min_seats_within_ratio(state.population, state.seats_status_quo, running_min)
        if seats > registry.cap_seats:
            raise RepairError(state.code, seats, registry.cap_seats)
        after = representation_ratio(state.population, seats)
        running_min = after if running_min is None else min(running_min, after)
        add_on = seats - state.seats_status_quo
        if state.code in primary:
            mark = BreachMark.PRIMARY
        elif add_on > 0:
            mark = BreachMark.COLLATERAL
        else:
            mark = BreachMark.NONE
        rows.append(StateRepair(state, add_on, seats, before, after, mark))
    return RepairResult(tuple(rows))
