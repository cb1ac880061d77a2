"""Battery-replacement planning for UAV fleets."""

import json

from ._core import (
    Error,
    Infeasible,
    MemoryBudgetExceeded,
    ParseError,
    PlanViolation,
    SearchBudgetExceeded,
    Timeout,
    ValidationError,
    distance,
    format_clock,
    generate_scenario,
    report,
    soc_cost,
    travel_time,
)
from ._core import plan as _plan

__all__ = [
    "Error",
    "Infeasible",
    "MemoryBudgetExceeded",
    "ParseError",
    "PlanViolation",
    "SearchBudgetExceeded",
    "Timeout",
    "ValidationError",
    "distance",
    "format_clock",
    "generate_scenario",
    "plan",
    "report",
    "soc_cost",
    "travel_time",
]


def plan(scenario_json, timeout=600.0, heuristic="schedule"):
    """Returns (plan JSON text, stats dict)."""
    text, stats = _plan(scenario_json, timeout, heuristic)
    return text, json.loads(stats)
