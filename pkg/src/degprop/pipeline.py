"""Stages A to C end to end, plus verification of the legal constraints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from degprop.allocator import (
    AllocationError,
    Allocation,
    ClampState,
    MinimumRestrictions,
    allocate,
)
from degprop.degressivity import RepairResult, breach_indices, repair
from degprop.domain import Registry, round_half_up


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class PipelineResult:
    registry: Registry
    repair: RepairResult
    restrictions: MinimumRestrictions
    allocation: Allocation
    verification: VerificationReport

    @property
    def ok(self) -> bool:
        return self.verification.passed

    @property
    def diff(self) -> dict[str, int]:
        seats = self.allocation.seats
        return {s.code: seats[s.code] - s.seats_status_quo for s in self.registry.states}


def _failing(codes: list[str]) -> str:
    return "violated by " + ", ".join(codes)


def verify(registry: Registry, seats: dict[str, int], house_size: int) -> VerificationReport:
    states = registry.states
    low = [s.code for s in states if seats[s.code] < s.seats_status_quo]
    below_floor = [s.code for s in states if seats[s.code] < registry.floor_seats]
    above_cap = [s.code for s in states if seats[s.code] > registry.cap_seats]
    breaches = breach_indices([s.population for s in states], [seats[s.code] for s in states])
    total = sum(seats.values())
    checks = (
        Check("no_loss", not low, _failing(low) if low else "every state keeps its status-quo seats"),
        Check(
            "floor",
            not below_floor,
            _failing(below_floor) if below_floor else f"all states have at least {registry.floor_seats}",
        ),
        Check(
            "cap",
            not above_cap,
            _failing(above_cap) if above_cap else f"all states have at most {registry.cap_seats}",
        ),
        Check(
            "degressivity_after_rounding",
            not breaches,
            _failing([states[i].code for i in breaches])
            if breaches
            else "rounded representation ratios are non-increasing",
        ),
        Check("total", total == house_size, f"{total} seats allocated, {house_size} requested"),
    )
    return VerificationReport(checks)


def run_pipeline(
    registry: Registry, house_size: int, repaired: RepairResult | None = None
) -> PipelineResult:
    """Repair, restrict, allocate and verify.

    A failed verification is reported in the result rather than raised;
    infeasible or tied house sizes raise :class:`AllocationError`.
    """
    if repaired is None:
        repaired = repair(registry)
    restrictions = MinimumRestrictions.from_repair(registry, repaired)
    allocation = allocate(registry, restrictions, house_size)
    report = verify(registry, allocation.seats, house_size)
    return PipelineResult(registry, repaired, restrictions, allocation, report)


@dataclass(frozen=True)
class QuotientDiagnostic:
    """Seat index before rounding for one state.

    ``index`` is ``base + population / divisor``. ``ratio_exact`` divides the
    population by that exact index; ``ratio_displayed`` divides it by the
    index as printed to one decimal. All three are ``None`` for states whose
    seats come from a clamp, since no rounding produced them.
    """

    code: str
    index: Fraction | None
    ratio_exact: int | None
    ratio_displayed: int | None
    rounded_ratio: int

    @property
    def applicable(self) -> bool:
        return self.index is not None

    @property
    def index_display(self) -> str:
        return "n/a" if self.index is None else format_one_decimal(self.index)


def round_one_decimal(value: Fraction) -> Fraction:
    return Fraction(round_half_up(value * 10), 10)


def format_one_decimal(value: Fraction) -> str:
    tenths = round_half_up(value * 10)
    sign = "-" if tenths < 0 else ""
    return f"{sign}{abs(tenths) // 10}.{abs(tenths) % 10}"


def quotients_before_rounding(registry: Registry, allocation: Allocation) -> list[QuotientDiagnostic]:
    """Informational only; verification uses rounded ratios."""
    out = []
    d = allocation.representative_divisor
    for state, seats in zip(registry.states, allocation.states):
        rounded = round_half_up(Fraction(state.population, seats.seats))
        if seats.clamp is not ClampState.PROPORTIONAL:
            out.append(QuotientDiagnostic(state.code, None, None, None, rounded))
            continue
        index = registry.base_seats + state.population / d
        out.append(
            QuotientDiagnostic(
                state.code,
                index,
                round_half_up(state.population / index),
                round_half_up(state.population / round_one_decimal(index)),
                rounded,
            )
        )
    return out


@dataclass(frozen=True)
class SweepEntry:
    house_size: int
    result: PipelineResult | None
    error: str | None = None


def sweep(registry: Registry, house_from: int, house_to: int) -> list[SweepEntry]:
    if house_from > house_to:
        raise ValueError(f"empty sweep range {house_from}..{house_to}")
    repaired = repair(registry)
    entries = []
    for h in range(house_from, house_to + 1):
        try:
            entries.append(SweepEntry(h, run_pipeline(registry, h, repaired)))
        except AllocationError as exc:
            entries.append(SweepEntry(h, None, str(exc)))
    return entries
