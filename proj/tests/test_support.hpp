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

#ifndef UASRISK_TEST_SUPPORT_HPP
#define UASRISK_TEST_SUPPORT_HPP

// Shared test helpers.  The covered-area oracle here is deliberately
// independent of the library's sweep implementation: it rasterizes the scene
// on a dense pixel-center grid, so agreement between the two is meaningful
// evidence rather than the same algorithm tested against itself.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "uasrisk/geometry.hpp"

namespace uasrisk::testing {

/// Uniform double in [0, 1) from a raw 64-bit engine (53-bit mantissa path).
inline double uniform01(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& engine, double low, double high) {
    return low + uniform01(engine) * (high - low);
}

namespace detail {

/// X-coordinates where the horizontal line at @p y crosses the ring,
/// using the half-open rule so vertices are counted once.
inline std::vector<double> row_crossings(std::span<const Point2D> ring, double y) {
    std::vector<double> xs;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2D& p = ring[i];
        const Point2D& q = ring[(i + 1) % n];
        if ((p.y <= y) != (q.y <= y)) {
            xs.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
        }
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

using Interval = std::pair<double, double>;

/// Inside intervals of a polygon along the horizontal line at @p y
/// (even-odd pairing of the sorted crossings).
inline std::vector<Interval> row_intervals(std::span<const Point2D> ring, double y) {
    const std::vector<double> xs = row_crossings(ring, y);
    std::vector<Interval> intervals;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
        if (xs[i + 1] > xs[i]) intervals.emplace_back(xs[i], xs[i + 1]);
    }
    return intervals;
}

inline std::vector<Interval> merge_intervals(std::vector<Interval> intervals) {
    std::sort(intervals.begin(), intervals.end());
    std::vector<Interval> merged;
    for (const Interval& interval : intervals) {
        if (!merged.empty() && interval.first <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, interval.second);
        } else {
            merged.push_back(interval);
        }
    }
    return merged;
}

inline std::vector<Interval> intersect_intervals(const std::vector<Interval>& a,
                                                 const std::vector<Interval>& b) {
    std::vector<Interval> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].first, b[j].first);
        const double hi = std::min(a[i].second, b[j].second);
        if (hi > lo) out.emplace_back(lo, hi);
        if (a[i].second < b[j].second) ++i; else ++j;
    }
    return out;
}

/// Pixel centers origin + (i + 0.5) * step, i in [0, count), that fall
/// inside [lo, hi].
inline std::int64_t pixels_in(double lo, double hi, double origin, double step,
                              std::int64_t count) {
    std::int64_t first = static_cast<std::int64_t>(std::ceil((lo - origin) / step - 0.5));
    std::int64_t last = static_cast<std::int64_t>(std::floor((hi - origin) / step - 0.5));
    first = std::max<std::int64_t>(first, 0);
    last = std::min(last, count - 1);
    return last >= first ? last - first + 1 : 0;
}

}  // namespace detail

/// Reference covered-area fraction: the share of pixel centers inside the
/// cell that are also inside at least one building, on a resolution^2 grid
/// over the cell's bounding box.  Row intervals make this equivalent to
/// point-in-polygon testing every pixel center, at a usable speed.
inline double supersampled_shelter_fraction(const Polygon& cell,
                                            const std::vector<Polygon>& buildings,
                                            int resolution = 2048) {
    const BoundingBox box = cell.bbox();
    const double step_x = (box.max_x - box.min_x) / resolution;
    const double step_y = (box.max_y - box.min_y) / resolution;
    if (!(step_x > 0.0) || !(step_y > 0.0)) return 0.0;

    std::int64_t cell_pixels = 0;
    std::int64_t covered_pixels = 0;
    for (int row = 0; row < resolution; ++row) {
        const double y = box.min_y + (row + 0.5) * step_y;
        const auto cell_rows = detail::row_intervals(cell.ring(), y);
        if (cell_rows.empty()) continue;
        for (const auto& [lo, hi] : cell_rows) {
            cell_pixels += detail::pixels_in(lo, hi, box.min_x, step_x, resolution);
        }

        std::vector<detail::Interval> building_rows;
        for (const Polygon& building : buildings) {
            const BoundingBox b = building.bbox();
            if (b.min_y > y || b.max_y < y || b.min_x > box.max_x || b.max_x < box.min_x) {
                continue;
            }
            for (const auto& interval : detail::row_intervals(building.ring(), y)) {
                building_rows.push_back(interval);
            }
        }
        const auto covered =
            detail::intersect_intervals(cell_rows, detail::merge_intervals(building_rows));
        for (const auto& [lo, hi] : covered) {
            covered_pixels += detail::pixels_in(lo, hi, box.min_x, step_x, resolution);
        }
    }
    if (cell_pixels == 0) return 0.0;
    return static_cast<double>(covered_pixels) / static_cast<double>(cell_pixels);
}

/// Random convex polygon: 3..8 distinct angles on an ellipse.  Vertices in
/// angular order around a center are convex and counterclockwise.
inline Polygon random_convex_polygon(std::mt19937_64& engine, double center_x,
                                     double center_y, double max_radius) {
    while (true) {
        const int vertex_count = 3 + static_cast<int>(engine() % 6);
        std::vector<double> angles;
        angles.reserve(vertex_count);
        for (int i = 0; i < vertex_count; ++i) {
            angles.push_back(uniform_in(engine, 0.0, 2.0 * 3.14159265358979323846));
        }
        std::sort(angles.begin(), angles.end());
        const double radius_x = uniform_in(engine, 0.2, 1.0) * max_radius;
        const double radius_y = uniform_in(engine, 0.2, 1.0) * max_radius;

        bool distinct = true;
        for (int i = 1; i < vertex_count; ++i) {
            if (angles[i] - angles[i - 1] < 1e-3) distinct = false;
        }
        if (angles.front() + 2.0 * 3.14159265358979323846 - angles.back() < 1e-3) {
            distinct = false;
        }
        if (!distinct) continue;

        std::vector<Point2D> ring;
        ring.reserve(vertex_count);
        for (const double angle : angles) {
            ring.push_back(
                {center_x + radius_x * std::cos(angle), center_y + radius_y * std::sin(angle)});
        }
        try {
            return Polygon(ring);
        } catch (const GeometryError&) {
            continue;  // nearly-degenerate sample; redraw
        }
    }
}

}  // namespace uasrisk::testing

#endif  // UASRISK_TEST_SUPPORT_HPP
