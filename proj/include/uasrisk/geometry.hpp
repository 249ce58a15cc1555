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

#ifndef UASRISK_GEOMETRY_HPP
#define UASRISK_GEOMETRY_HPP

/// @file geometry.hpp
/// @brief Planar polygon arithmetic: areas, clipped union areas, shelter
/// fractions.
///
/// Polygons are simple rings (no holes, no self-intersection) stored
/// counter-clockwise with positive area.  Coordinates must already be
/// projected to a planar meter grid; geographic latitude/longitude input is
/// a preprocessing concern and is not handled here.
///
/// The covered-area computation uses a vertical slab decomposition: the
/// x-axis is cut at every vertex and at every proper pairwise segment
/// crossing, so that within one slab boundary segments never cross and the
/// covered region decomposes into trapezoids.  Coverage counting makes
/// overlapping footprints count once.  On inputs whose vertices and
/// crossings are exactly representable (e.g. integer-coordinate rectangles)
/// the result is exact; otherwise accuracy is limited only by double
/// rounding in the slab sums.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "uasrisk/errors.hpp"

namespace uasrisk {

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    constexpr bool operator==(const Point2D&) const = default;
};

struct BoundingBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    [[nodiscard]] bool overlaps(const BoundingBox& other) const noexcept {
        return min_x <= other.max_x && other.min_x <= max_x &&
               min_y <= other.max_y && other.min_y <= max_y;
    }
};

namespace detail {

inline double cross(const Point2D& o, const Point2D& a, const Point2D& b) noexcept {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool on_segment(const Point2D& a, const Point2D& b, const Point2D& p) noexcept {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection test: true when [a,b] and [c,d] share any point.
inline bool segments_touch(const Point2D& a, const Point2D& b,
                           const Point2D& c, const Point2D& d) noexcept {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    if (d1 == 0 && on_segment(c, d, a)) return true;
    if (d2 == 0 && on_segment(c, d, b)) return true;
    if (d3 == 0 && on_segment(a, b, c)) return true;
    if (d4 == 0 && on_segment(a, b, d)) return true;
    return false;
}

inline double shoelace_signed_area(std::span<const Point2D> ring) noexcept {
    double sum = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2D& p = ring[i];
        const Point2D& q = ring[(i + 1) % n];
        sum += p.x * q.y - q.x * p.y;
    }
    return 0.5 * sum;
}

}  // namespace detail

/// Simple closed ring, stored counter-clockwise.  The constructor validates
/// the ring (finite vertices, no duplicate consecutive vertices, no
/// self-intersection, positive area) and flips clockwise input, so a
/// constructed Polygon always satisfies the class invariants.
class Polygon {
public:
    explicit Polygon(std::vector<Point2D> ring) : ring_(std::move(ring)) {
        validate_and_normalize();
    }

    [[nodiscard]] std::span<const Point2D> ring() const noexcept { return ring_; }
    [[nodiscard]] std::size_t size() const noexcept { return ring_.size(); }
    [[nodiscard]] double area() const noexcept { return area_; }
    [[nodiscard]] const BoundingBox& bbox() const noexcept { return bbox_; }

private:
    void validate_and_normalize() {
        const std::size_t n = ring_.size();
        if (n < 3) {
            throw GeometryError("polygon ring needs at least 3 vertices, got " +
                                std::to_string(n));
        }
        for (const Point2D& p : ring_) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
                throw GeometryError("polygon vertex is not finite");
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (ring_[i] == ring_[(i + 1) % n]) {
                throw GeometryError("polygon has duplicate consecutive vertices");
            }
        }

        double signed_area = detail::shoelace_signed_area(ring_);
        if (signed_area == 0.0) {
            throw GeometryError("polygon ring has zero area");
        }
        if (signed_area < 0.0) {
            std::reverse(ring_.begin(), ring_.end());
            signed_area = -signed_area;
        }
        area_ = signed_area;

        // Non-adjacent edges must not share any point; adjacent edges must
        // not fold back onto each other (zero-width spike).
        for (std::size_t i = 0; i < n; ++i) {
            const Point2D& a = ring_[i];
            const Point2D& b = ring_[(i + 1) % n];
            for (std::size_t j = i + 1; j < n; ++j) {
                const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
                if (adjacent) continue;
                const Point2D& c = ring_[j];
                const Point2D& d = ring_[(j + 1) % n];
                if (detail::segments_touch(a, b, c, d)) {
                    throw GeometryError("polygon is self-intersecting");
                }
            }
            const Point2D& c = ring_[(i + 2) % n];
            const double turn = detail::cross(a, b, c);
            if (turn == 0.0) {
                const double dot = (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y);
                if (dot < 0.0) {
                    throw GeometryError("polygon has a zero-width spike");
                }
            }
        }

        bbox_.min_x = bbox_.min_y = std::numeric_limits<double>::infinity();
        bbox_.max_x = bbox_.max_y = -std::numeric_limits<double>::infinity();
        for (const Point2D& p : ring_) {
            bbox_.min_x = std::min(bbox_.min_x, p.x);
            bbox_.min_y = std::min(bbox_.min_y, p.y);
            bbox_.max_x = std::max(bbox_.max_x, p.x);
            bbox_.max_y = std::max(bbox_.max_y, p.y);
        }
    }

    std::vector<Point2D> ring_;
    double area_ = 0.0;
    BoundingBox bbox_;
};

/// Shoelace area of a valid polygon, in square meters.  Always positive.
inline double polygon_area(const Polygon& p) noexcept { return p.area(); }

/// Polygon translated by (dx, dy).
inline Polygon translated(const Polygon& p, double dx, double dy) {
    std::vector<Point2D> ring(p.ring().begin(), p.ring().end());
    for (Point2D& v : ring) {
        v.x += dx;
        v.y += dy;
    }
    return Polygon(std::move(ring));
}

namespace detail {

// One non-vertical boundary segment, x-sorted.  `winding` is +1 when the
// polygon traversal runs left to right (interior above for CCW rings along
// the lower boundary), -1 otherwise; sweeping upward across the segment
// adds `winding` to the ring's winding number.
struct SlabSegment {
    double x0, y0, x1, y1;
    int winding;
    bool from_cell;
};

inline void collect_segments(const Polygon& poly, bool from_cell,
                             std::vector<SlabSegment>& segments,
                             std::vector<double>& xs) {
    const auto ring = poly.ring();
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2D& p = ring[i];
        const Point2D& q = ring[(i + 1) % n];
        xs.push_back(p.x);
        if (p.x == q.x) continue;  // vertical edges carry no slab area
        SlabSegment s;
        if (p.x < q.x) {
            s = {p.x, p.y, q.x, q.y, +1, from_cell};
        } else {
            s = {q.x, q.y, p.x, p.y, -1, from_cell};
        }
        segments.push_back(s);
    }
}

inline double segment_y_at(const SlabSegment& s, double x) noexcept {
    if (x == s.x0) return s.y0;
    if (x == s.x1) return s.y1;
    const double t = (x - s.x0) / (s.x1 - s.x0);
    return s.y0 + t * (s.y1 - s.y0);
}

}  // namespace detail

/// Area of cell ∩ (union of building footprints), in square meters.
/// Overlapping buildings never double-count.  Result lies in
/// [0, polygon_area(cell)].
inline double union_intersection_area(const Polygon& cell,
                                      std::span<const Polygon> buildings) {
    std::vector<detail::SlabSegment> segments;
    std::vector<double> xs;
    detail::collect_segments(cell, true, segments, xs);

    bool any_building = false;
    for (const Polygon& b : buildings) {
        if (!b.bbox().overlaps(cell.bbox())) continue;
        detail::collect_segments(b, false, segments, xs);
        any_building = true;
    }
    if (!any_building) return 0.0;

    // Slab boundaries: every vertex x plus every proper pairwise crossing x.
    // Crossings are needed so segment order by y is constant within a slab.
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& a = segments[i];
        const double sa = (a.y1 - a.y0) / (a.x1 - a.x0);
        const double ca = a.y0 - sa * a.x0;
        for (std::size_t j = i + 1; j < segments.size(); ++j) {
            const auto& b = segments[j];
            const double lo = std::max(a.x0, b.x0);
            const double hi = std::min(a.x1, b.x1);
            if (lo >= hi) continue;
            const double sb = (b.y1 - b.y0) / (b.x1 - b.x0);
            if (sa == sb) continue;  // parallel or collinear: no single crossing
            const double cb = b.y0 - sb * b.x0;
            const double x = (cb - ca) / (sa - sb);
            if (x > lo && x < hi) xs.push_back(x);
        }
    }

    const double cell_min_x = cell.bbox().min_x;
    const double cell_max_x = cell.bbox().max_x;
    std::erase_if(xs, [&](double x) { return x < cell_min_x || x > cell_max_x; });
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    struct Active {
        double ya, yb;  // y at the slab's left and right boundary
        double ymid;
        double slope;
        int winding;
        bool from_cell;
        std::size_t index;
    };
    std::vector<Active> active;

    double covered = 0.0;
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
        const double xa = xs[s];
        const double xb = xs[s + 1];
        if (!(xa < xb)) continue;

        active.clear();
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const auto& seg = segments[i];
            if (seg.x0 > xa || seg.x1 < xb) continue;
            Active a;
            a.ya = detail::segment_y_at(seg, xa);
            a.yb = detail::segment_y_at(seg, xb);
            a.ymid = 0.5 * (a.ya + a.yb);
            a.slope = (seg.y1 - seg.y0) / (seg.x1 - seg.x0);
            a.winding = seg.winding;
            a.from_cell = seg.from_cell;
            a.index = i;
            active.push_back(a);
        }
        std::sort(active.begin(), active.end(), [](const Active& l, const Active& r) {
            if (l.ymid != r.ymid) return l.ymid < r.ymid;
            if (l.slope != r.slope) return l.slope < r.slope;
            if (l.from_cell != r.from_cell) return l.from_cell < r.from_cell;
            return l.index < r.index;
        });

        int cell_winding = 0;
        long building_cover = 0;
        const double width = xb - xa;
        for (std::size_t i = 0; i < active.size(); ++i) {
            if (i > 0 && cell_winding >= 1 && building_cover >= 1) {
                const double ha = active[i].ya - active[i - 1].ya;
                const double hb = active[i].yb - active[i - 1].yb;
                covered += width * 0.5 * (ha + hb);
            }
            if (active[i].from_cell) {
                cell_winding += active[i].winding;
            } else {
                building_cover += active[i].winding;
            }
        }
    }

    return std::clamp(covered, 0.0, cell.area());
}

inline double union_intersection_area(const Polygon& cell,
                                      const std::vector<Polygon>& buildings) {
    return union_intersection_area(cell, std::span<const Polygon>(buildings));
}

/// Fraction of the cell area covered by the union of building footprints,
/// clamped to [0, 1].
inline double shelter_fraction(const Polygon& cell,
                               std::span<const Polygon> buildings) {
    const double covered = union_intersection_area(cell, buildings);
    return std::clamp(covered / cell.area(), 0.0, 1.0);
}

inline double shelter_fraction(const Polygon& cell,
                               const std::vector<Polygon>& buildings) {
    return shelter_fraction(cell, std::span<const Polygon>(buildings));
}

}  // namespace uasrisk

#endif  // UASRISK_GEOMETRY_HPP
