"""Member states, registries and the registry CSV format.

A registry is the ordered list of member states (most populous first)
together with the global seat parameters: base seats granted to every
state, the primary-law floor and the cap.

Exact arithmetic throughout: divisors and quotients are
:class:`fractions.Fraction`, ratios are integers.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, TextIO

HEADER = ("code", "name", "population", "seats_status_quo")

DEFAULT_BASE_SEATS = 5
DEFAULT_FLOOR_SEATS = 6
DEFAULT_CAP_SEATS = 96

EU27_FIXTURE = "eu27_qmv2017.csv"

_INT_RE = re.compile(r"-?[0-9]+")


class RegistryError(ValueError):
    """Malformed registry input or a violated registry invariant."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class MemberState:
    code: str
    name: str
    population: int
    seats_status_quo: int

    def __post_init__(self):
        if not self.code:
            raise RegistryError("state code must be non-empty")
        if len(f".{self.code}.{self.name}.".splitlines()) > 1:
            raise RegistryError(f"{self.code!r}: code and name must be single-line")
        if self.population < 1:
            raise RegistryError(f"{self.code}: population must be positive, got {self.population}")
        if self.seats_status_quo < 1:
            raise RegistryError(
                f"{self.code}: seats_status_quo must be positive, got {self.seats_status_quo}"
            )


def _order_key(state: MemberState):
    return (-state.population, state.code)


@dataclass(frozen=True)
class Registry:
    """Member states sorted by decreasing population (ties by code).

    The constructor sorts ``states`` and validates every invariant, so any
    Registry instance in circulation is well-formed.
    """

    states: tuple[MemberState, ...]
    base_seats: int = DEFAULT_BASE_SEATS
    floor_seats: int = DEFAULT_FLOOR_SEATS
    cap_seats: int = DEFAULT_CAP_SEATS
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        states = tuple(sorted(self.states, key=_order_key))
        object.__setattr__(self, "states", states)
        if not states:
            raise RegistryError("registry must contain at least one state")
        if self.base_seats < 0:
            raise RegistryError(f"base_seats must be non-negative, got {self.base_seats}")
        if self.floor_seats < 1:
            raise RegistryError(f"floor_seats must be positive, got {self.floor_seats}")
        if self.base_seats >= self.floor_seats:
            raise RegistryError(
                f"base_seats ({self.base_seats}) must be below floor_seats ({self.floor_seats})"
            )
        if self.floor_seats > self.cap_seats:
            raise RegistryError(
                f"floor_seats ({self.floor_seats}) exceeds cap_seats ({self.cap_seats})"
            )
        index = {}
        for i, state in enumerate(states):
            if state.code in index:
                raise RegistryError(f"duplicate state code {state.code!r}")
            if state.seats_status_quo > self.cap_seats:
                raise RegistryError(
                    f"{state.code}: seats_status_quo {state.seats_status_quo} "
                    f"exceeds cap_seats {self.cap_seats}"
                )
            index[state.code] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, code: str) -> MemberState:
        return self.states[self._index[code]]

    @property
    def codes(self) -> list[str]:
        return [s.code for s in self.states]

    @property
    def total_status_quo(self) -> int:
        return sum(s.seats_status_quo for s in self.states)

    def with_status_quo(self, seats: dict[str, int]) -> Registry:
        """Copy of the registry whose status-quo seats are replaced by ``seats``."""
        return replace(
            self,
            states=tuple(replace(s, seats_status_quo=seats[s.code]) for s in self.states),
        )


def representation_ratio(population: int, seats: int) -> int:
    """Population per seat, rounded to the nearest integer (halves up)."""
    if seats < 1:
        raise ValueError(f"seats must be positive, got {seats}")
    return (2 * population + seats) // (2 * seats)


def round_half_up(value: Fraction) -> int:
    return (2 * value.numerator + value.denominator) // (2 * value.denominator)


def ceil_div(numerator: int, denominator: int) -> int:
    return -(-numerator // denominator)


def _parse_int(text: str, column: str, line: int) -> int:
    text = text.strip()
    if not _INT_RE.fullmatch(text):
        raise RegistryError(f"{column} must be a base-10 integer, got {text!r}", line)
    return int(text)


def parse_registry(
    stream: TextIO | str,
    base_seats: int = DEFAULT_BASE_SEATS,
    floor_seats: int = DEFAULT_FLOOR_SEATS,
    cap_seats: int = DEFAULT_CAP_SEATS,
) -> Registry:
    """Read a registry from CSV text (``code,name,population,seats_status_quo``).

    Blank lines and lines starting with ``#`` are ignored. Errors carry the
    1-based line number of the offending row.
    """
    text = stream if isinstance(stream, str) else stream.read()
    header_seen = False
    states = []
    seen_codes: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        try:
            fields = next(csv.reader([raw]))
        except csv.Error as exc:
            raise RegistryError(f"malformed CSV: {exc}", lineno) from None
        fields = [f.strip() for f in fields]
        if not header_seen:
            if tuple(fields) != HEADER:
                raise RegistryError(
                    f"expected header {','.join(HEADER)!r}, got {raw.strip()!r}", lineno
                )
            header_seen = True
            continue
        if len(fields) != len(HEADER):
            raise RegistryError(f"expected {len(HEADER)} fields, got {len(fields)}", lineno)
        code, name, pop_text, seats_text = fields
        if not code:
            raise RegistryError("empty state code", lineno)
        if code in seen_codes:
            raise RegistryError(
                f"duplicate state code {code!r} (first seen on line {seen_codes[code]})", lineno
            )
        seen_codes[code] = lineno
        population = _parse_int(pop_text, "population", lineno)
        seats = _parse_int(seats_text, "seats_status_quo", lineno)
        if population < 1:
            raise RegistryError(f"{code}: population must be positive, got {population}", lineno)
        if seats < 1:
            raise RegistryError(f"{code}: seats_status_quo must be positive, got {seats}", lineno)
        if seats > cap_seats:
            raise RegistryError(
                f"{code}: seats_status_quo {seats} exceeds cap_seats {cap_seats}", lineno
            )
        states.append(MemberState(code, name, population, seats))
    if not header_seen:
        raise RegistryError("missing header row")
    return Registry(tuple(states), base_seats, floor_seats, cap_seats)


def serialize_registry(registry: Registry) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for s in registry.states:
        writer.writerow((s.code, s.name, s.population, s.seats_status_quo))
    return buf.getvalue()


def load_registry(path: str | Path, **params) -> Registry:
    with open(path, encoding="utf-8") as fh:
        return parse_registry(fh, **params)


def fixture_path(name: str = EU27_FIXTURE) -> Path:
    """Filesystem path of a data file bundled with the package."""
    return Path(str(resources.files("degprop") / "data" / name))


def load_eu27(**params) -> Registry:
    return load_registry(fixture_path(), **params)


def states_from_rows(rows: Iterable[tuple[str, str, int, int]], **params) -> Registry:
    return Registry(tuple(MemberState(*row) for row in rows), **params)
