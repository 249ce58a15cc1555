# Copyright (c) 2026 The uasrisk Authors.
# All rights reserved.
#
# This software is licensed under the Apache License, Version 2.0 (the "License").
# You may not use this file except in compliance with the License. You may
# obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates the synthetic-city regression fixture under data/synthetic_city.

The city is a 10x10 grid of 100 m cells designed so every expected number is
hand-checkable: cell areas are exactly 10000 m^2, building unions are exact
integer rectangles, and the hourly restricted ratios come out to short
decimals.  expected_profile.csv is written with the same IEEE-754 arithmetic
and shortest round-trip formatting the tool uses, so tests can require exact
equality.

Layout (row r = y, col c = x, id C{r}{c}):
  - commercial core, rows 3-6 x cols 3-6 (16 cells): two overlapping
    buildings covering 5500 m^2 (shelter 0.55); busy by day, empty at night
  - nightlife cells (2,2) and (7,7): no buildings (shelter 0); busy at night
  - high-density residential ring around the core (30 cells): one 2000 m^2
    building (shelter 0.2); constant 600 people
  - low-density residential (48 cells): same building; constant 200 people
  - parks at the four corners: no buildings; constant 5 people

With the default scenario (fatality probability 0.09, failure rate
3.023e-5/h, threshold 1e-7) a cell is restricted when
count > 3.6755e2 / (1 - shelter):
  core > 816.78 at hours 8-19, nightlife > 367.55 at hours 0-4 and 20-23,
  high-density residential always, the rest never.
Hourly de facto restricted ratio: 0.32 (h0-4), 0.30 (h5-7), 0.46 (h8-19),
0.32 (h20-23); residential ratio is 0.30 for every hour.
"""

import json
import os

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data", "synthetic_city")
CELL = 100  # meters

CORE = {(r, c) for r in range(3, 7) for c in range(3, 7)}
NIGHTLIFE = {(2, 2), (7, 7)}
PARKS = {(0, 0), (0, 9), (9, 0), (9, 9)}
RING = {(r, c) for r in range(2, 8) for c in range(2, 8)} - CORE - NIGHTLIFE
HIGH_RES = RING | {(1, c) for c in range(2, 8)} | {(8, c) for c in range(2, 8)}

CORE_HOURLY = [150, 150, 150, 150, 150, 150, 400, 600, 1200, 2000, 2000, 2000,
               2000, 2200, 2200, 2000, 2000, 2000, 1200, 1000, 600, 400, 250, 180]
NIGHTLIFE_HOURLY = [700, 700, 700, 700, 400, 200, 100, 100, 100, 100, 100, 100,
                    100, 150, 150, 150, 150, 150, 300, 350, 500, 600, 700, 700]

RESIDENTIAL_COUNTS = {"core": 100, "nightlife": 150, "high": 600, "low": 200, "park": 5}


def classify(r, c):
    if (r, c) in CORE:
        return "core"
    if (r, c) in NIGHTLIFE:
        return "nightlife"
    if (r, c) in PARKS:
        return "park"
    if (r, c) in HIGH_RES:
        return "high"
    return "low"


def land_use(kind):
    return {"core": "commercial", "nightlife": "commercial", "park": "other",
            "high": "residential", "low": "residential"}[kind]


def defacto_count(kind, hour):
    if kind == "core":
        return CORE_HOURLY[hour]
    if kind == "nightlife":
        return NIGHTLIFE_HOURLY[hour]
    return {"high": 600, "low": 200, "park": 5}[kind]


def fmt(value):
    """Shortest round-trip decimal, matching std::to_chars output."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def cell_ring(r, c):
    x0, y0 = CELL * c, CELL * r
    x1, y1 = x0 + CELL, y0 + CELL
    return [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]


def rectangle(r, c, dx0, dy0, dx1, dy1):
    x0, y0 = CELL * c + dx0, CELL * r + dy0
    x1, y1 = CELL * c + dx1, CELL * r + dy1
    return [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]


def feature(geometry_ring, properties):
    return {"type": "Feature", "properties": properties,
            "geometry": {"type": "Polygon", "coordinates": [geometry_ring]}}


def main():
    os.makedirs(OUT_DIR, exist_ok=True)

    cells = []
    buildings = []
    defacto_rows = []
    residential_rows = []
    for r in range(10):
        for c in range(10):
            kind = classify(r, c)
            cell_id = f"C{r}{c}"
            cells.append(feature(cell_ring(r, c),
                                 {"cell_id": cell_id, "land_use": land_use(kind)}))
            if kind == "core":
                buildings.append(feature(rectangle(r, c, 10, 10, 60, 90),
                                         {"height_m": 60}))
                buildings.append(feature(rectangle(r, c, 40, 20, 90, 70),
                                         {"height_m": 40}))
            elif kind in ("high", "low"):
                height = 20 if kind == "high" else 10
                buildings.append(feature(rectangle(r, c, 30, 25, 70, 75),
                                         {"height_m": height}))
            for hour in range(24):
                defacto_rows.append((cell_id, hour, defacto_count(kind, hour)))
            residential_rows.append((cell_id, 0, RESIDENTIAL_COUNTS[kind]))

    with open(os.path.join(OUT_DIR, "cells.geojson"), "w") as f:
        json.dump({"type": "FeatureCollection", "features": cells}, f, indent=1)
        f.write("\n")
    with open(os.path.join(OUT_DIR, "buildings.geojson"), "w") as f:
        json.dump({"type": "FeatureCollection", "features": buildings}, f, indent=1)
        f.write("\n")
    with open(os.path.join(OUT_DIR, "population_defacto.csv"), "w") as f:
        f.write("cell_id,hour,count\n")
        for cell_id, hour, count in defacto_rows:
            f.write(f"{cell_id},{hour},{count}\n")
    with open(os.path.join(OUT_DIR, "population_residential.csv"), "w") as f:
        f.write("cell_id,hour,count\n")
        for cell_id, hour, count in residential_rows:
            f.write(f"{cell_id},{hour},{count}\n")
    with open(os.path.join(OUT_DIR, "config.json"), "w") as f:
        json.dump({
            "population_csv": "population_defacto.csv",
            "cells_geojson": "cells.geojson",
            "buildings_geojson": "buildings.geojson",
            "residential_csv": "population_residential.csv",
            "population_mode": "defacto",
        }, f, indent=1)
        f.write("\n")

    # Expected hourly profile, computed with the same float operations the
    # tool performs: area-weighted ratio = restricted_area / total_area,
    # difference = defacto - residential.
    total_area = 100 * 10000.0
    shelter = {"core": 0.55, "nightlife": 0.0, "high": 0.2, "low": 0.2, "park": 0.0}
    p_fatal = 0.09
    p_failure = 3.023e-5
    threshold = 1e-7

    def restricted(count, kind):
        density = count / 10000.0
        risk = density * (1.0 - shelter[kind]) * p_fatal * p_failure
        return risk > threshold

    lines = ["hour,restricted_ratio_defacto,restricted_ratio_residential,difference"]
    for hour in range(24):
        defacto_area = 0.0
        residential_area = 0.0
        for r in range(10):
            for c in range(10):
                kind = classify(r, c)
                if restricted(defacto_count(kind, hour), kind):
                    defacto_area += 10000.0
                if restricted(RESIDENTIAL_COUNTS[kind], kind):
                    residential_area += 10000.0
        defacto_ratio = defacto_area / total_area
        residential_ratio = residential_area / total_area
        difference = defacto_ratio - residential_ratio
        lines.append(f"{hour},{fmt(defacto_ratio)},{fmt(residential_ratio)},"
                     f"{fmt(difference)}")
    with open(os.path.join(OUT_DIR, "expected_profile.csv"), "w") as f:
        f.write("\n".join(lines) + "\n")

    print(f"wrote fixture to {os.path.normpath(OUT_DIR)}")


if __name__ == "__main__":
    main()
