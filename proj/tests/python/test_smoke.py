import json
import math

import pytest

import uavswap


def small_scenario():
    return uavswap.generate_scenario(3, uavs=2, stations=2, batteries=4, waypoints=8, detour_cap=120.0)


def test_energy_helpers():
    assert uavswap.distance([0, 0], [3, 4]) == pytest.approx(5.0)
    assert uavswap.travel_time(100.0, 4.0) == pytest.approx(25.0)
    assert uavswap.soc_cost(60.0, 600.0) == pytest.approx(0.1)
    assert uavswap.format_clock(3725.0) == "62:05.00"


def test_bad_input_raises_validation_error():
    with pytest.raises(uavswap.ValidationError):
        uavswap.travel_time(10.0, 0.0)
    with pytest.raises(uavswap.Error):
        uavswap.distance([0, 0], [1, 2, 3])


def test_generate_is_deterministic():
    assert small_scenario() == small_scenario()
    doc = json.loads(small_scenario())
    assert len(doc["uavs"]) == 2
    assert len(doc["stations"]) == 2


def test_plan_and_report():
    scenario = small_scenario()
    plan_text, stats = uavswap.plan(scenario, timeout=60.0)
    plan = json.loads(plan_text)
    assert stats["expanded"] >= 1
    assert math.isfinite(plan["total_soc_cost"])

    out = uavswap.report(scenario, plan_text)
    assert set(out) == {"actions", "schedule", "soc_csv", "summary"}
    assert out["soc_csv"].splitlines()[0].startswith("time_s,uav_id")
    summary = json.loads(out["summary"])
    assert summary["total_soc_cost"] == pytest.approx(plan["total_soc_cost"])


def test_heuristics_agree_on_cost():
    scenario = small_scenario()
    costs = {h: json.loads(uavswap.plan(scenario, heuristic=h)[0])["total_soc_cost"] for h in ("schedule", "relaxed", "mission")}
    assert costs["relaxed"] == pytest.approx(costs["schedule"], abs=1e-9)
    assert costs["mission"] == pytest.approx(costs["schedule"], abs=1e-9)


def test_corrupted_plan_is_rejected():
    scenario = small_scenario()
    plan = json.loads(uavswap.plan(scenario)[0])
    plan["total_soc_cost"] += 0.5
    with pytest.raises(uavswap.PlanViolation):
        uavswap.report(scenario, json.dumps(plan))


def test_unknown_heuristic():
    with pytest.raises(uavswap.ValidationError):
        uavswap.plan(small_scenario(), heuristic="greedy")
