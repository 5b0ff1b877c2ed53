import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degprop.allocator import (
    ClampState,
    DivisorInterval,
    InfeasibleHouseSize,
    MinimumRestrictions,
    TieError,
    allocate,
    critical_divisors,
    find_divisor_interval,
    minimum_house_size,
    pick_representative_divisor,
    seats_at_divisor,
    total_at_divisor,
)
from degprop.degressivity import repair
from degprop.domain import MemberState, Registry
from oracles import interval_oracle, seats_oracle, total_oracle
from strategies import registries


def restrictions_for(reg):
    return MinimumRestrictions.from_repair(reg, repair(reg))


@pytest.fixture
def toy_min(toy):
    return restrictions_for(toy)


@pytest.fixture(scope="module")
def eu27_min():
    from degprop.domain import load_eu27
    reg = load_eu27()
    return reg, restrictions_for(reg)


def test_restrictions_toy(toy_min):
    # B is repaired to 5, C stays at 2; both are raised to the floor of 6
    assert toy_min.min_seats == {"A": 10, "B": 6, "C": 6}


def test_seats_toy_at_three_million(toy, toy_min):
    got = {s.code: (s.seats, s.clamp) for s in seats_at_divisor(toy, toy_min, 3_000_000)}
    assert got == {
        "A": (10, ClampState.CLAMPED_TO_MIN),
        "B": (7, ClampState.PROPORTIONAL),
        "C": (6, ClampState.PROPORTIONAL),
    }
    assert seats_oracle(toy, toy_min.min_seats, 3_000_000) == {"A": 10, "B": 7, "C": 6}


@pytest.mark.parametrize("divisor, total", [(10_000_000, 22), (3_000_000, 23), (Fraction(5_000_000), 22)])
def test_total_toy(toy, toy_min, divisor, total):
    assert total_oracle(toy, toy_min.min_seats, divisor) == total
    assert total_at_divisor(toy, toy_min, divisor) == total


def test_exact_boundary_has_no_part_thereof(toy, toy_min):
    # at d = p/k exactly the ceiling is k
    b = {s.code: s for s in seats_at_divisor(toy, toy_min, 2_500_000)}["B"]
    assert b.unclamped == 5 + 2
    b = {s.code: s for s in seats_at_divisor(toy, toy_min, Fraction(2_499_999))}["B"]
    assert b.unclamped == 5 + 3


def test_eu27_at_890000(eu27_min):
    reg, mins = eu27_min
    seats = seats_at_divisor(reg, mins, 890_000)
    by = {s.code: s for s in seats}
    assert sum(s.seats for s in seats) == 700
    assert by["DE"].seats == 96 and by["DE"].clamp is ClampState.CAPPED
    extra = {s.code: s.seats - mins[s.code] for s in seats if s.seats != mins[s.code]}
    assert extra == {"FR": 2, "IT": 1, "ES": 2, "EE": 1}
    assert by["SI"].unclamped == 8 and by["SI"].clamp is ClampState.PROPORTIONAL
    # Poland down to Lithuania are held at their minimum restriction
    codes = reg.codes
    held = codes[codes.index("PL"):codes.index("LT") + 1]
    assert all(by[c].clamp is ClampState.CLAMPED_TO_MIN for c in held)
    assert seats_oracle(reg, mins.min_seats, 890_000) == {s.code: s.seats for s in seats}


def test_divisor_rejects_float_and_nonpositive(toy, toy_min):
    with pytest.raises(TypeError):
        seats_at_divisor(toy, toy_min, 3e6)
    with pytest.raises(ValueError):
        seats_at_divisor(toy, toy_min, 0)


def test_critical_divisors_toy(toy, toy_min):
    crit = critical_divisors(toy, toy_min)
    assert crit == sorted(crit, reverse=True)
    for d in (Fraction(5_000_000), Fraction(2_500_000), Fraction(1_000_000), Fraction(10_000_000, 6)):
        assert d in crit
    # A sits at its minimum of 10 until 5 + k passes it
    assert Fraction(10_000_000, 3) not in crit
    assert Fraction(10_000_000, 5) in crit


def test_critical_divisors_single_state():
    reg = Registry((MemberState("X", "x", 1_234_567, 6),))
    crit = critical_divisors(reg, MinimumRestrictions({"X": 6}))
    # stepping from 5+k to 5+k+1 stays inside [6, 96] for k = 1 .. 90
    assert crit == [Fraction(1_234_567, k) for k in range(1, 91)]


def test_pinned_state_has_no_critical_divisors():
    reg = Registry((MemberState("X", "x", 1_234_567, 96),))
    assert critical_divisors(reg, MinimumRestrictions({"X": 96})) == []
    iv = find_divisor_interval(reg, MinimumRestrictions({"X": 96}), 96)
    assert iv == DivisorInterval(Fraction(0), None)
    assert pick_representative_divisor(iv) == 1


@given(registries(max_states=4))
def test_critical_divisors_are_exactly_the_steps(reg):
    mins = restrictions_for(reg)
    crit = set(critical_divisors(reg, mins))
    for s in reg:
        for k in range(1, reg.cap_seats + 1):
            d = Fraction(s.population, k)
            here = seats_oracle(reg, mins.min_seats, d)[s.code]
            below = seats_oracle(reg, mins.min_seats, d * Fraction(10**9 - 1, 10**9))[s.code]
            if here != below:
                assert d in crit


def test_interval_toy(toy, toy_min):
    iv = find_divisor_interval(toy, toy_min, 23)
    assert iv == DivisorInterval(Fraction(2_500_000), Fraction(5_000_000))
    assert interval_oracle(toy, toy_min.min_seats, 23) == (iv.lo, iv.hi)


def test_interval_toy_minimum_is_unbounded(toy, toy_min):
    assert minimum_house_size(toy, toy_min) == 22
    iv = find_divisor_interval(toy, toy_min, 22)
    assert iv == DivisorInterval(Fraction(5_000_000), None)


@pytest.mark.parametrize("house, key", [(700, 890_000), (701, 888_600), (710, 850_000)])
def test_interval_eu27_contains_published_key(eu27_min, house, key):
    reg, mins = eu27_min
    iv = find_divisor_interval(reg, mins, house)
    assert key in iv
    assert interval_oracle(reg, mins.min_seats, house) == (iv.lo, iv.hi)


def test_infeasible_reports_minimum(eu27_min):
    reg, mins = eu27_min
    with pytest.raises(InfeasibleHouseSize, match="minimum feasible size 694") as info:
        find_divisor_interval(reg, mins, 693)
    assert info.value.minimum == 694
    with pytest.raises(InfeasibleHouseSize, match="maximum feasible size 2592"):
        find_divisor_interval(reg, mins, 2593)


def test_tie_is_reported():
    reg = Registry((MemberState("A", "a", 1_000_000, 6), MemberState("B", "b", 1_000_000, 6)))
    mins = MinimumRestrictions({"A": 6, "B": 6})
    with pytest.raises(TieError) as info:
        find_divisor_interval(reg, mins, 13)
    err = info.value
    assert err.states == ["A", "B"]
    assert (err.below, err.above) == (12, 14)
    assert err.divisor == 1_000_000
    assert interval_oracle(reg, mins.min_seats, 13) is None


@pytest.mark.parametrize(
    "lo, hi, expected",
    [
        (2_500_000, 5_000_000, 4_000_000),
        (7, 8, 7),
        (Fraction(66661621, 75), Fraction(23219211, 26), 890_000),
        (Fraction(1, 3), Fraction(1, 2), Fraction(4, 10)),
        (1000, 2000, 1000),
        (Fraction(0), Fraction(5), 2),
        (1500, 3500, 2000),
    ],
)
def test_pick_representative(lo, hi, expected):
    assert pick_representative_divisor(DivisorInterval(Fraction(lo), Fraction(hi))) == expected


@given(
    st.fractions(min_value=0, max_value=10**8, max_denominator=100),
    st.fractions(min_value=Fraction(1, 100), max_value=10**7, max_denominator=100),
)
def test_pick_representative_is_roundest(lo, width):
    iv = DivisorInterval(lo, lo + width)
    d = pick_representative_divisor(iv)
    assert d in iv
    for e in range(9, -6, -1):
        g = Fraction(10) ** e
        multiples = [m * g for m in range(max(1, math.ceil(lo / g)), math.ceil(iv.hi / g))]
        if multiples:
            break
    mid = (iv.lo + iv.hi) / 2
    best = min(multiples, key=lambda x: (abs(x - mid), x))
    assert d == best


@settings(max_examples=300, deadline=None)
@given(registries(max_states=4), st.integers(0, 60))
def test_interval_matches_oracle(reg, offset):
    mins = restrictions_for(reg)
    house = minimum_house_size(reg, mins) + offset
    expected = interval_oracle(reg, mins.min_seats, house)
    if expected is None:
        with pytest.raises(TieError):
            find_divisor_interval(reg, mins, house)
        return
    iv = find_divisor_interval(reg, mins, house)
    assert (iv.lo, iv.hi) == expected
    a = allocate(reg, mins, house)
    assert a.representative_divisor in a.divisor_interval
    assert sum(a.seats.values()) == house


@given(registries(), st.fractions(min_value=Fraction(1, 10), max_value=10**8, max_denominator=50),
       st.fractions(min_value=Fraction(1, 10), max_value=10**8, max_denominator=50))
def test_monotone_in_divisor(reg, d1, d2):
    mins = restrictions_for(reg)
    lo, hi = sorted((d1, d2))
    a = {s.code: s.seats for s in seats_at_divisor(reg, mins, lo)}
    b = {s.code: s.seats for s in seats_at_divisor(reg, mins, hi)}
    assert all(a[c] >= b[c] for c in a)
    assert total_at_divisor(reg, mins, lo) >= total_at_divisor(reg, mins, hi)


@given(registries(), st.fractions(min_value=Fraction(1, 10), max_value=10**8, max_denominator=50))
def test_clamp_classification(reg, d):
    mins = restrictions_for(reg)
    for s in seats_at_divisor(reg, mins, d):
        assert (s.clamp is ClampState.CAPPED) == (s.unclamped > reg.cap_seats)
        assert (s.clamp is ClampState.CLAMPED_TO_MIN) == (s.unclamped < mins[s.code])
        assert mins[s.code] <= s.seats <= reg.cap_seats


@given(registries(), st.fractions(min_value=Fraction(1, 10), max_value=10**8, max_denominator=50),
       st.integers(2, 1000))
def test_scale_invariance(reg, d, k):
    mins = restrictions_for(reg)
    scaled = Registry(
        tuple(MemberState(s.code, s.name, s.population * k, s.seats_status_quo) for s in reg)
    )
    assert seats_at_divisor(scaled, mins, d * k) == seats_at_divisor(reg, mins, d)
