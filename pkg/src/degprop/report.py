"""Plain-text, JSON and CSV renderings of repair and allocation results.

All output is deterministic: same input, same bytes.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from degprop.allocator import ClampState
from degprop.degressivity import RepairResult
from degprop.domain import Registry, round_half_up
from degprop.pipeline import (
    PipelineResult,
    SweepEntry,
    format_one_decimal,
    quotients_before_rounding,
)

STYLES = ("table1", "table2", "json", "csv")

_CLAMP_TAG = {ClampState.PROPORTIONAL: "", ClampState.CLAMPED_TO_MIN: " min", ClampState.CAPPED: " cap"}


def group_digits(n: int) -> str:
    return f"{n:,}".replace(",", " ")


def decimal_string(value: Fraction, places: int = 6) -> str:
    """Exact decimal if the fraction terminates, else rounded half-up to ``places``."""
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:
        places = max(twos, fives)
    scaled = round_half_up(value * 10**places)
    if places == 0:
        return str(scaled)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def _fraction_json(value: Fraction | None):
    if value is None:
        return None
    return {
        "numerator": value.numerator,
        "denominator": value.denominator,
        "decimal": decimal_string(value),
    }


def _table(headers: list[str], rows: list[list[str]], left: int = 1) -> str:
    """Fixed-width table; the first ``left`` columns are left-aligned."""
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]

    def line(cells):
        parts = [
            c.ljust(w) if i < left else c.rjust(w) for i, (c, w) in enumerate(zip(cells, widths))
        ]
        return "  ".join(parts).rstrip()

    rule = "  ".join("-" * w for w in widths)
    return "\n".join([line(headers), rule, *(line(r) for r in rows)])


def _table1_rows(repaired: RepairResult) -> list[list[str]]:
    rows = []
    for r in repaired.rows:
        rows.append([
            r.state.name,
            group_digits(r.state.population),
            str(r.state.seats_status_quo),
            group_digits(r.ratio_before) + (r.mark.symbol or " "),
            str(r.add_on) if r.add_on else "",
            str(r.seats_dp),
            group_digits(r.ratio_after) + " ",
        ])
    return rows


TABLE1_HEADERS = ["State", "Population", "2014", "RR2014", "Add-on", "2014DP", "RR2014DP"]
TABLE2_HEADERS = ["State", "Population", "Range", "Quotient", "Seats", "RR", "Diff"]


def render_repair(registry: Registry, repaired: RepairResult, style: str = "table1") -> str:
    if style == "json":
        return json.dumps(_repair_json(repaired), indent=2, ensure_ascii=False) + "\n"
    if style == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["code", "state", "population", "seats_status_quo", "ratio_before", "mark",
                    "add_on", "seats_dp", "ratio_after"])
        for r in repaired.rows:
            w.writerow([r.code, r.state.name, r.state.population, r.state.seats_status_quo,
                        r.ratio_before, r.mark.value, r.add_on, r.seats_dp, r.ratio_after])
        return buf.getvalue()
    if style not in ("table1", "table2"):
        raise ValueError(f"unknown report style {style!r}")
    rows = _table1_rows(repaired)
    rows.append([
        "Total", "", str(registry.total_status_quo), "", str(repaired.total_add_on),
        str(repaired.total_seats_dp), "",
    ])
    lines = [
        "Augmentation of the status-quo composition to achieve degressivity",
        "",
        _table(TABLE1_HEADERS, rows),
        "",
        "* breach of degressivity   † breach caused by an earlier add-on",
    ]
    return "\n".join(lines) + "\n"


def _repair_json(repaired: RepairResult) -> dict:
    return {
        "total_status_quo": sum(r.state.seats_status_quo for r in repaired.rows),
        "total_add_on": repaired.total_add_on,
        "total_seats_dp": repaired.total_seats_dp,
        "states": [
            {
                "code": r.code,
                "name": r.state.name,
                "population": r.state.population,
                "seats_status_quo": r.state.seats_status_quo,
                "ratio_before": r.ratio_before,
                "mark": r.mark.value,
                "add_on": r.add_on,
                "seats_dp": r.seats_dp,
                "ratio_after": r.ratio_after,
            }
            for r in repaired.rows
        ],
    }


def _range_text(result: PipelineResult, code: str) -> str:
    base = result.registry.base_seats
    lo = result.restrictions[code] - base
    hi = result.registry.cap_seats - base
    return f"{base}+[{lo}..{hi}]"


def _state_records(result: PipelineResult) -> list[dict]:
    registry = result.registry
    alloc = result.allocation
    d = alloc.representative_divisor
    diff = result.diff
    diag = {q.code: q for q in quotients_before_rounding(registry, alloc)}
    records = []
    for state, seats, rep in zip(registry.states, alloc.states, result.repair.rows):
        q = diag[state.code]
        records.append({
            "code": state.code,
            "name": state.name,
            "population": state.population,
            "seats_status_quo": state.seats_status_quo,
            "ratio_status_quo": rep.ratio_before,
            "mark": rep.mark.value,
            "add_on": rep.add_on,
            "seats_dp": rep.seats_dp,
            "ratio_dp": rep.ratio_after,
            "min_seats": result.restrictions[state.code],
            "max_seats": registry.cap_seats,
            "range": _range_text(result, state.code),
            "quotient": format_one_decimal(state.population / d),
            "unclamped_seats": seats.unclamped,
            "seats": seats.seats,
            "clamp": seats.clamp.value,
            "ratio": q.rounded_ratio,
            "index_before_rounding": None if q.index is None else q.index_display,
            "ratio_before_rounding": q.ratio_displayed,
            "diff": diff[state.code],
        })
    return records


def result_to_json(result: PipelineResult) -> dict:
    alloc = result.allocation
    return {
        "house_size": alloc.house_size,
        "parameters": {
            "base_seats": result.registry.base_seats,
            "floor_seats": result.registry.floor_seats,
            "cap_seats": result.registry.cap_seats,
        },
        "divisor": _fraction_json(alloc.representative_divisor),
        "divisor_interval": {
            "lo": _fraction_json(alloc.divisor_interval.lo),
            "hi": _fraction_json(alloc.divisor_interval.hi),
        },
        "totals": {
            "status_quo": result.registry.total_status_quo,
            "add_on": result.repair.total_add_on,
            "seats_dp": result.repair.total_seats_dp,
            "seats": sum(alloc.seats.values()),
        },
        "states": _state_records(result),
        "verification": verification_to_json(result),
    }


def verification_to_json(result: PipelineResult) -> dict:
    return {
        "passed": result.verification.passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in result.verification.checks
        ],
    }


def render_verification(result: PipelineResult) -> str:
    lines = [f"House size {result.allocation.house_size}, divisor "
             f"{decimal_string(result.allocation.representative_divisor)}"]
    for c in result.verification.checks:
        lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    lines.append(f"overall: {'PASS' if result.verification.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def render_report(result: PipelineResult, style: str = "table2") -> str:
    if style == "table1":
        return render_repair(result.registry, result.repair, "table1")
    if style == "json":
        return json.dumps(result_to_json(result), indent=2, ensure_ascii=False) + "\n"
    records = _state_records(result)
    if style == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["code", "state", "population", "range", "quotient", "seats", "clamp",
                    "rr", "diff"])
        for r in records:
            w.writerow([r["code"], r["name"], r["population"], r["range"], r["quotient"],
                        r["seats"], r["clamp"], r["ratio"], r["diff"]])
        return buf.getvalue()
    if style != "table2":
        raise ValueError(f"unknown report style {style!r}")
    clamp = {s.code: s.clamp for s in result.allocation.states}
    rows = [
        [
            r["name"],
            group_digits(r["population"]),
            r["range"],
            r["quotient"],
            f"{r['seats']}{_CLAMP_TAG[clamp[r['code']]]}",
            group_digits(r["ratio"]),
            f"{r['diff']:+d}" if r["diff"] else "0",
        ]
        for r in records
    ]
    rows.append(["Total", "", "", "", str(sum(r["seats"] for r in records)), "",
                 f"{sum(r['diff'] for r in records):+d}"])
    alloc = result.allocation
    interval = alloc.divisor_interval
    hi = "inf" if interval.hi is None else decimal_string(interval.hi, 1)
    lines = [
        f"No-loss allocation for a house of {alloc.house_size} seats",
        f"Divisor {group_digits_fraction(alloc.representative_divisor)} "
        f"(any divisor in [{decimal_string(interval.lo, 1)}, {hi}) gives the same seats)",
        "",
        _table(TABLE2_HEADERS, rows),
        "",
        "min: raised to the minimum restriction   cap: limited by the cap",
        f"verification: {'PASS' if result.verification.passed else 'FAIL'}"
        + "".join(f"; {c.name} FAILED ({c.detail})" for c in result.verification.checks
                  if not c.passed),
    ]
    return "\n".join(lines) + "\n"


def group_digits_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return group_digits(value.numerator)
    return decimal_string(value)


def render_sweep(entries: list[SweepEntry], style: str = "table2") -> str:
    if style == "json":
        payload = [
            {
                "house_size": e.house_size,
                "error": e.error,
                "result": None if e.result is None else result_to_json(e.result),
            }
            for e in entries
        ]
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    ok = [e for e in entries if e.result is not None]
    codes = ok[0].result.registry.codes if ok else []
    if style == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["house_size", "divisor", "verified", "error", *codes])
        for e in entries:
            if e.result is None:
                w.writerow([e.house_size, "", "", e.error, *([""] * len(codes))])
            else:
                seats = e.result.allocation.seats
                w.writerow([e.house_size, decimal_string(e.result.allocation.representative_divisor),
                            e.result.ok, "", *(seats[c] for c in codes)])
        return buf.getvalue()
    headers = ["State", *(str(e.house_size) for e in ok)]
    rows = [[c, *(str(e.result.allocation.seats[c]) for e in ok)] for c in codes]
    rows.append(["Divisor", *(group_digits_fraction(e.result.allocation.representative_divisor)
                              for e in ok)])
    rows.append(["Verified", *("yes" if e.result.ok else "no" for e in ok)])
    out = [_table(headers, rows)] if ok else []
    out += [e.error for e in entries if e.result is None]
    return "\n".join(out) + "\n"
