// Copyright (c) 2026 The uasrisk Authors.
// All rights reserved.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_support.hpp"
#include "uasrisk/geometry.hpp"

using uasrisk::GeometryError;
using uasrisk::Point2D;
using uasrisk::Polygon;
using uasrisk::polygon_area;
using uasrisk::shelter_fraction;
using uasrisk::translated;
using uasrisk::union_intersection_area;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
    return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Polygon unit_square() { return rect(0.0, 0.0, 1.0, 1.0); }

}  // namespace

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), GeometryError);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);  // zero area
    CHECK_THROWS_AS(Polygon({{0, 0}, {0, 0}, {1, 1}}), GeometryError);  // duplicate
    const double nan = std::nan("");
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, nan}, {1, 1}}), GeometryError);
    // self-intersecting bow tie
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
}

TEST_CASE("polygon area") {
    CHECK(polygon_area(unit_square()) == 1.0);
    const Polygon triangle({{0, 0}, {4, 0}, {0, 3}});
    CHECK(polygon_area(triangle) == 6.0);
    const Polygon doubled({{0, 0}, {8, 0}, {0, 6}});
    CHECK(polygon_area(doubled) == 4.0 * polygon_area(triangle));
}

TEST_CASE("clockwise rings are normalized") {
    const Polygon clockwise({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(polygon_area(clockwise) == 1.0);
    CHECK(shelter_fraction(unit_square(), std::vector<Polygon>{clockwise}) == 1.0);
}

TEST_CASE("covered area with no buildings is zero") {
    CHECK(union_intersection_area(unit_square(), std::vector<Polygon>{}) == 0.0);
    CHECK(shelter_fraction(unit_square(), std::vector<Polygon>{}) == 0.0);
}

TEST_CASE("covered area for disjoint building is zero") {
    const std::vector<Polygon> far = {rect(5.0, 5.0, 6.0, 6.0)};
    CHECK(union_intersection_area(unit_square(), far) == 0.0);
}

TEST_CASE("identical building covers the full cell") {
    const std::vector<Polygon> same = {unit_square()};
    CHECK(union_intersection_area(unit_square(), same) == 1.0);
    CHECK(shelter_fraction(unit_square(), same) == 1.0);
}

TEST_CASE("building larger than the cell clips to the cell") {
    const std::vector<Polygon> big = {rect(-1.0, -1.0, 2.0, 2.0)};
    CHECK(union_intersection_area(unit_square(), big) == 1.0);
}

TEST_CASE("half cover is exact") {
    const std::vector<Polygon> half = {rect(0.0, 0.0, 0.5, 1.0)};
    CHECK(union_intersection_area(unit_square(), half) == 0.5);
    CHECK(shelter_fraction(unit_square(), half) == 0.5);
}

TEST_CASE("overlap is not double counted") {
    // [10,60]x[10,90] = 4000 and [40,90]x[20,70] = 2500 overlap in
    // [40,60]x[20,70] = 1000, so the union covers 5500 of the 10000 cell.
    const Polygon cell = rect(0.0, 0.0, 100.0, 100.0);
    const std::vector<Polygon> pair = {rect(10, 10, 60, 90), rect(40, 20, 90, 70)};
    CHECK(union_intersection_area(cell, pair) == 5500.0);
    CHECK(shelter_fraction(cell, pair) == 0.55);
}

TEST_CASE("duplicated buildings change nothing") {
    const Polygon cell = rect(0.0, 0.0, 100.0, 100.0);
    const std::vector<Polygon> once = {rect(10, 10, 60, 90), rect(40, 20, 90, 70)};
    std::vector<Polygon> twice = once;
    twice.insert(twice.end(), once.begin(), once.end());
    CHECK(union_intersection_area(cell, twice) == union_intersection_area(cell, once));
}

TEST_CASE("partial overlap of cell and building") {
    // building sticks out of the cell on two sides; only the inside counts
    const std::vector<Polygon> poking = {rect(0.5, -1.0, 2.0, 0.5)};
    CHECK(union_intersection_area(unit_square(), poking) == 0.25);
}

TEST_CASE("triangle building inside square cell") {
    const std::vector<Polygon> wedge = {Polygon({{0, 0}, {1, 0}, {0, 1}})};
    CHECK(union_intersection_area(unit_square(), wedge) == 0.5);
}

TEST_CASE("covered area stays within bounds on random scenes") {
    std::mt19937_64 engine(7001);
    for (int round = 0; round < 40; ++round) {
        const Polygon cell = unit_square();
        std::vector<Polygon> buildings;
        const int count = 1 + static_cast<int>(engine() % 5);
        for (int b = 0; b < count; ++b) {
            buildings.push_back(uasrisk::testing::random_convex_polygon(
                engine, uasrisk::testing::uniform_in(engine, -0.2, 1.2),
                uasrisk::testing::uniform_in(engine, -0.2, 1.2), 0.45));
        }
        const double covered = union_intersection_area(cell, buildings);
        CHECK(covered >= 0.0);
        CHECK(covered <= cell.area());
    }
}

TEST_CASE("adding a building never lowers the covered area") {
    std::mt19937_64 engine(7002);
    for (int round = 0; round < 25; ++round) {
        const Polygon cell = unit_square();
        std::vector<Polygon> buildings;
        double previous = 0.0;
        for (int b = 0; b < 4; ++b) {
            buildings.push_back(uasrisk::testing::random_convex_polygon(
                engine, uasrisk::testing::uniform_in(engine, 0.0, 1.0),
                uasrisk::testing::uniform_in(engine, 0.0, 1.0), 0.35));
            const double covered = union_intersection_area(cell, buildings);
            // slack for reassociated sums when the slab layout changes
            CHECK(covered >= previous - 1e-12);
            previous = covered;
        }
    }
}

TEST_CASE("covered area is translation invariant") {
    std::mt19937_64 engine(7003);
    for (int round = 0; round < 25; ++round) {
        const Polygon cell = unit_square();
        std::vector<Polygon> buildings;
        const int count = 1 + static_cast<int>(engine() % 4);
        for (int b = 0; b < count; ++b) {
            buildings.push_back(uasrisk::testing::random_convex_polygon(
                engine, uasrisk::testing::uniform_in(engine, 0.0, 1.0),
                uasrisk::testing::uniform_in(engine, 0.0, 1.0), 0.4));
        }
        const double base = union_intersection_area(cell, buildings);

        const double dx = uasrisk::testing::uniform_in(engine, -4.0, 4.0);
        const double dy = uasrisk::testing::uniform_in(engine, -4.0, 4.0);
        std::vector<Polygon> moved;
        for (const Polygon& b : buildings) moved.push_back(translated(b, dx, dy));
        const double shifted = union_intersection_area(translated(cell, dx, dy), moved);
        CHECK(shifted == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("duplicating every building is an exact no-op") {
    std::mt19937_64 engine(7004);
    for (int round = 0; round < 25; ++round) {
        const Polygon cell = unit_square();
        std::vector<Polygon> buildings;
        const int count = 1 + static_cast<int>(engine() % 4);
        for (int b = 0; b < count; ++b) {
            buildings.push_back(uasrisk::testing::random_convex_polygon(
                engine, uasrisk::testing::uniform_in(engine, 0.0, 1.0),
                uasrisk::testing::uniform_in(engine, 0.0, 1.0), 0.4));
        }
        std::vector<Polygon> doubled = buildings;
        doubled.insert(doubled.end(), buildings.begin(), buildings.end());
        CHECK(union_intersection_area(cell, doubled) ==
              union_intersection_area(cell, buildings));
    }
}

TEST_CASE("sweep agrees with the rasterized reference") {
    std::mt19937_64 engine(7005);
    for (int round = 0; round < 12; ++round) {
        const Polygon cell = unit_square();
        std::vector<Polygon> buildings;
        const int count = 1 + static_cast<int>(engine() % 5);
        for (int b = 0; b < count; ++b) {
            buildings.push_back(uasrisk::testing::random_convex_polygon(
                engine, uasrisk::testing::uniform_in(engine, -0.1, 1.1),
                uasrisk::testing::uniform_in(engine, -0.1, 1.1), 0.4));
        }
        const double fast = shelter_fraction(cell, buildings);
        const double reference =
            uasrisk::testing::supersampled_shelter_fraction(cell, buildings, 1024);
        CHECK(std::abs(fast - reference) <= 2e-3);
    }
}
