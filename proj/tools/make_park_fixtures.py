#!/usr/bin/env python3
"""Writes the park-style test fixtures: seven QGroundControl survey missions
over a city park and the UAV/station parameters for `uavswap import`.

Output is deterministic; rerun after changing the layout below.

    python3 tools/make_park_fixtures.py tests/fixtures/park
"""

import json
import math
import sys
from pathlib import Path

ORIGIN = (50.0755, 14.4378, 240.0)  # lat, lon, alt of the shared home pad
EARTH_RADIUS = 6371000.0
ALTITUDE = 40.0

# Survey blocks: south-west corner (m east, m north of home), width, height,
# number of lawnmower rows, and whether to store it as a QGC survey item.
BLOCKS = [
    ((-780.0, -520.0), 150.0, 230.0, 46, False),
    ((-360.0, -540.0), 140.0, 260.0, 52, True),
    ((60.0, -500.0), 160.0, 210.0, 40, False),
    ((480.0, -470.0), 130.0, 290.0, 58, False),
    ((-700.0, 120.0), 150.0, 320.0, 64, False),
    ((-120.0, 160.0), 145.0, 240.0, 48, False),
    ((420.0, 140.0), 155.0, 300.0, 60, True),
]

# (id, m east, m north, charged batteries)
STATIONS = [
    (201, -40.0, 0.0, 4),
    (202, -820.0, -140.0, 3),
    (203, 620.0, -120.0, 3),
    (204, -560.0, 560.0, 3),
    (205, 560.0, 600.0, 3),
    (206, -160.0, -700.0, 3),
]


def to_geo(east, north):
    lat0, lon0, _ = ORIGIN
    lat = lat0 + math.degrees(north / EARTH_RADIUS)
    lon = lon0 + math.degrees(east / (EARTH_RADIUS * math.cos(math.radians(lat0))))
    return round(lat, 8), round(lon, 8)


def lawnmower(corner, width, height, rows):
    x0, y0 = corner
    pts = []
    for r in range(rows):
        y = y0 + height * r / (rows - 1)
        xs = (x0, x0 + width) if r % 2 == 0 else (x0 + width, x0)
        pts += [(xs[0], y), (xs[1], y)]
    return pts


def simple_item(seq, command, lat, lon, alt, frame=3, params=None):
    p = params or [0, 0, 0, None]
    return {
        "AMSLAltAboveTerrain": None,
        "Altitude": alt,
        "AltitudeMode": 1,
        "autoContinue": True,
        "command": command,
        "doJumpId": seq,
        "frame": frame,
        "params": p + [lat, lon, alt],
        "type": "SimpleItem",
    }


def plan_document(block):
    corner, width, height, rows, as_survey = block
    home_lat, home_lon, home_alt = ORIGIN
    path = lawnmower(corner, width, height, rows)
    items = []
    seq = 1
    first_lat, first_lon = to_geo(*path[0])
    items.append(simple_item(seq, 22, first_lat, first_lon, ALTITUDE, params=[15, 0, 0, None]))
    seq += 1
    # Camera trigger distance: non-spatial, must be skipped by the reader.
    items.append({"autoContinue": True, "command": 206, "doJumpId": seq, "frame": 2,
                  "params": [25, 0, 1, 0, 0, 0, 0], "type": "SimpleItem"})
    seq += 1
    survey = []
    for east, north in path[1:]:
        lat, lon = to_geo(east, north)
        survey.append(simple_item(seq, 16, lat, lon, ALTITUDE))
        seq += 1
    if as_survey:
        polygon = [list(to_geo(corner[0] + dx, corner[1] + dy))
                   for dx, dy in ((0, 0), (width, 0), (width, height), (0, height))]
        items.append({
            "complexItemType": "survey",
            "type": "ComplexItem",
            "version": 5,
            "polygon": polygon,
            "TransectStyleComplexItem": {"Items": survey, "version": 2},
        })
    else:
        items += survey
    return {
        "fileType": "Plan",
        "geoFence": {"circles": [], "polygons": [], "version": 2},
        "groundStation": "QGroundControl",
        "mission": {
            "cruiseSpeed": 5,
            "firmwareType": 12,
            "hoverSpeed": 5,
            "items": items,
            "plannedHomePosition": [home_lat, home_lon, home_alt],
            "vehicleType": 2,
            "version": 2,
        },
        "rallyPoints": {"points": [], "version": 2},
        "version": 1,
    }


def params_document():
    stations = []
    for sid, east, north, count in STATIONS:
        lat, lon = to_geo(east, north)
        stations.append({
            "id": sid,
            "position": {"lat": lat, "lon": lon},
            "slots": 1,
            "batteries": count,
        })
    return {
        "config": {"min_soc": 0.2, "replacement_duration_s": 120,
                   "safety_margin_before_s": 30, "safety_margin_after_s": 30},
        "uav": {"speed_mps": 5.0, "max_flight_time_s": 900.0, "initial_soc": 1.0},
        "first_uav_id": 1,
        "stations": stations,
    }


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/park")
    out.mkdir(parents=True, exist_ok=True)
    for i, block in enumerate(BLOCKS, start=1):
        (out / f"uav{i}.plan").write_text(json.dumps(plan_document(block), indent=4) + "\n")
    (out / "params.json").write_text(json.dumps(params_document(), indent=2) + "\n")


if __name__ == "__main__":
    main()
