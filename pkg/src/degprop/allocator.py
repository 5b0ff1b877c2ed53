"""Capped, minimum-restricted base-plus-divisor allocation.

Each state gets ``base_seats + ceil(population / divisor)`` seats, clamped
into ``[min_seats, cap_seats]``. The divisor is searched exactly over the
breakpoints ``population / k`` so that the clamped seats add up to the
requested house size.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from degprop.degressivity import RepairResult
from degprop.domain import Registry, ceil_div


class AllocationError(ValueError):
    pass


class InfeasibleHouseSize(AllocationError):
    def __init__(self, house_size: int, minimum: int, maximum: int):
        self.house_size = house_size
        self.minimum = minimum
        self.maximum = maximum
        if house_size < minimum:
            msg = f"house size {house_size} is below the minimum feasible size {minimum}"
        else:
            msg = f"house size {house_size} is above the maximum feasible size {maximum}"
        super().__init__(msg)


class TieError(AllocationError):
    """Several states step at the same divisor, so the total skips ``house_size``."""

    def __init__(self, house_size: int, divisor: Fraction, states: list[str], below: int, above: int):
        self.house_size = house_size
        self.divisor = divisor
        self.states = states
        self.below = below
        self.above = above
        super().__init__(
            f"house size {house_size} is not achievable: {', '.join(states)} gain seats "
            f"simultaneously at divisor {divisor}, jumping from {below} to {above} seats"
        )


class ClampState(enum.Enum):
    PROPORTIONAL = "proportional"
    CLAMPED_TO_MIN = "clamped_to_min"
    CAPPED = "capped"


@dataclass(frozen=True)
class MinimumRestrictions:
    """Lower seat bound per state code, in registry order."""

    min_seats: dict[str, int]

    @classmethod
    def from_repair(cls, registry: Registry, repaired: RepairResult) -> MinimumRestrictions:
        # the primary-law floor still applies to states whose repaired count is below it
        return cls({r.code: max(r.seats_dp, registry.floor_seats) for r in repaired.rows})

    def __getitem__(self, code: str) -> int:
        return self.min_seats[code]

    def validate(self, registry: Registry) -> None:
        if set(self.min_seats) != set(registry.codes):
            raise AllocationError("minimum restrictions do not cover exactly the registry states")
        for code, m in self.min_seats.items():
            if not registry.floor_seats <= m <= registry.cap_seats:
                raise AllocationError(
                    f"{code}: minimum {m} outside [{registry.floor_seats}, {registry.cap_seats}]"
                )


@dataclass(frozen=True)
class StateSeats:
    code: str
    unclamped: int
    seats: int
    clamp: ClampState


@dataclass(frozen=True)
class DivisorInterval:
    """Divisors ``lo <= d < hi``; ``hi is None`` means unbounded above.

    ``lo == 0`` stands for the open lower end ``0 < d``.
    """

    lo: Fraction
    hi: Fraction | None

    def __contains__(self, d) -> bool:
        d = Fraction(d)
        if d <= 0 or d < self.lo:
            return False
        return self.hi is None or d < self.hi


@dataclass(frozen=True)
class Allocation:
    house_size: int
    states: tuple[StateSeats, ...]
    divisor_interval: DivisorInterval
    representative_divisor: Fraction

    @property
    def seats(self) -> dict[str, int]:
        return {s.code: s.seats for s in self.states}

    def __getitem__(self, code: str) -> StateSeats:
        for s in self.states:
            if s.code == code:
                return s
        raise KeyError(code)


def _as_divisor(divisor) -> Fraction:
    if isinstance(divisor, float) or not isinstance(divisor, Rational):
        raise TypeError(f"divisor must be an int or Fraction, got {type(divisor).__name__}")
    divisor = Fraction(divisor)
    if divisor <= 0:
        raise ValueError(f"divisor must be positive, got {divisor}")
    return divisor


def seats_at_divisor(
    registry: Registry, restrictions: MinimumRestrictions, divisor
) -> list[StateSeats]:
    d = _as_divisor(divisor)
    out = []
    for state in registry.states:
        n = registry.base_seats + ceil_div(state.population * d.denominator, d.numerator)
        lo = restrictions[state.code]
        if n > registry.cap_seats:
            out.append(StateSeats(state.code, n, registry.cap_seats, ClampState.CAPPED))
        elif n < lo:
            out.append(StateSeats(state.code, n, lo, ClampState.CLAMPED_TO_MIN))
        else:
            out.append(StateSeats(state.code, n, n, ClampState.PROPORTIONAL))
    return out


def total_at_divisor(registry: Registry, restrictions: MinimumRestrictions, divisor) -> int:
    return sum(s.seats for s in seats_at_divisor(registry, restrictions, divisor))


def _step_range(registry: Registry, min_seats: int) -> range:
    # at d = p/k the count is base+k; just below it is base+k+1; that step lies
    # inside [min_seats, cap] iff min_seats <= base+k < cap
    return range(max(1, min_seats - registry.base_seats), registry.cap_seats - registry.base_seats)


def critical_divisors(registry: Registry, restrictions: MinimumRestrictions) -> list[Fraction]:
    """Every divisor at which some state's clamped seat count changes, descending."""
    values = set()
    for state in registry.states:
        for k in _step_range(registry, restrictions[state.code]):
            values.add(Fraction(state.population, k))
    return sorted(values, reverse=True)


def minimum_house_size(registry: Registry, restrictions: MinimumRestrictions) -> int:
    return sum(
        min(registry.cap_seats, max(restrictions[s.code], registry.base_seats + 1))
        for s in registry.states
    )


def maximum_house_size(registry: Registry) -> int:
    return registry.cap_seats * len(registry)


def _stepping_states(registry: Registry, restrictions: MinimumRestrictions, d: Fraction) -> list[str]:
    out = []
    for state in registry.states:
        k = state.population / d
        if k.denominator == 1 and k.numerator in _step_range(registry, restrictions[state.code]):
            out.append(state.code)
    return out


def find_divisor_interval(
    registry: Registry, restrictions: MinimumRestrictions, house_size: int
) -> DivisorInterval:
    """Maximal divisor interval on which the clamped seats total ``house_size``."""
    lo_total = minimum_house_size(registry, restrictions)
    hi_total = maximum_house_size(registry)
    if not lo_total <= house_size <= hi_total:
        raise InfeasibleHouseSize(house_size, lo_total, hi_total)
    crit = critical_divisors(registry, restrictions)
    m = len(crit)

    # region j is [crit[j], crit[j-1]); region m is (0, crit[m-1]).
    # Region totals are non-decreasing in j.
    def region_total(j: int) -> int:
        if j == m:
            return hi_total
        return total_at_divisor(registry, restrictions, crit[j])

    j = bisect.bisect_left(range(m + 1), house_size, key=region_total)
    total = region_total(j)
    if total == house_size:
        lo = crit[j] if j < m else Fraction(0)
        hi = crit[j - 1] if j > 0 else None
        return DivisorInterval(lo, hi)
    # j > 0 here: region 0 has the minimum total, which is <= house_size
    step = crit[j - 1]
    raise TieError(
        house_size,
        step,
        _stepping_states(registry, restrictions, step),
        region_total(j - 1),
        total,
    )


def pick_representative_divisor(interval: DivisorInterval) -> Fraction:
    """Roundest divisor in the interval.

    Finds the largest power of ten with a positive multiple inside the
    interval and returns the multiple nearest the midpoint (smaller on ties).
    An unbounded interval ``[lo, inf)`` is treated as ``[lo, 2 lo)``, or as
    ``(0, 2)`` when ``lo`` is zero too.
    """
    lo = interval.lo
    hi = interval.hi
    if hi is None:
        hi = 2 * lo if lo > 0 else Fraction(2)
    if not 0 <= lo < hi:
        raise ValueError(f"empty divisor interval [{lo}, {hi})")
    mid = (lo + hi) / 2
    exp = len(str(int(hi))) - 1 if hi >= 1 else 0
    while True:
        g = Fraction(10) ** exp
        first = max(1, ceil_div(lo.numerator * g.denominator, lo.denominator * g.numerator))
        last = ceil_div(hi.numerator * g.denominator, hi.denominator * g.numerator) - 1
        if first <= last:
            target = mid / g
            below = min(max(target.numerator // target.denominator, first), last)
            above = min(below + 1, last)
            m = below if target - below <= above - target else above
            return m * g
        exp -= 1


def allocate(
    registry: Registry, restrictions: MinimumRestrictions, house_size: int
) -> Allocation:
    interval = find_divisor_interval(registry, restrictions, house_size)
    divisor = pick_representative_divisor(interval)
    states = tuple(seats_at_divisor(registry, restrictions, divisor))
    return Allocation(house_size, states, interval, divisor)

