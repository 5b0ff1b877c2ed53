"""No-loss degressive apportionment of parliamentary seats."""

from degprop.allocator import (
    Allocation,
    AllocationError,
    ClampState,
    DivisorInterval,
    InfeasibleHouseSize,
    MinimumRestrictions,
    TieError,
    allocate,
    critical_divisors,
    find_divisor_interval,
    pick_representative_divisor,
    seats_at_divisor,
    total_at_divisor,
)
from degprop.degressivity import BreachMark, RepairError, RepairResult, repair, scan_breaches
from degprop.domain import (
    MemberState,
    Registry,
    RegistryError,
    load_eu27,
    load_registry,
    parse_registry,
    representation_ratio,
    serialize_registry,
)
from degprop.pipeline import (
    PipelineResult,
    VerificationReport,
    quotients_before_rounding,
    run_pipeline,
    sweep,
)
from degprop.report import render_report

__version__ = "0.1.0"
