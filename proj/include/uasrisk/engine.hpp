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

#ifndef UASRISK_ENGINE_HPP
#define UASRISK_ENGINE_HPP

/// @file engine.hpp
/// @brief Risk surfaces, restriction maps, hourly profiles, and the
/// de-facto vs. residential comparison.
///
/// The engine evaluates the risk model over every (cell, hour) pair of a
/// dataset.  Shelter fractions are computed once per cell and shared across
/// all 24 hours; the shelter_evaluations counter on RiskSurface makes that
/// observable.  Computation may run on several threads, but each (cell,
/// hour) value is independent and written to its own slot, so results are
/// bit-identical at any thread count.  Iteration over results is always in
/// canonical order: cell_id lexicographic, then hour ascending.

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "uasrisk/errors.hpp"
#include "uasrisk/geometry.hpp"
#include "uasrisk/ingest.hpp"
#include "uasrisk/model.hpp"
#include "uasrisk/parallel.hpp"

namespace uasrisk {

inline constexpr int kHoursPerDay = 24;

/// Dense people counts per cell and hour, with mode semantics applied.
struct PopulationSeries {
    std::map<std::string, std::array<double, kHoursPerDay>> counts;
    std::vector<std::string> warnings;  // cells/hours filled with zero
};

/// Builds the dense series for the given mode.
///   - defacto: one row per (cell, hour); missing hours become 0 with a
///     warning
///   - residential: one row per cell at hour 0, broadcast to all 24 hours
/// Records naming a cell_id absent from `cells` raise ConsistencyError.
inline PopulationSeries build_population_series(const std::vector<PopulationRecord>& records,
                                                PopulationMode mode,
                                                const std::vector<CellFeature>& cells) {
    std::set<std::string> known;
    for (const auto& cell : cells) known.insert(cell.cell_id);

    PopulationSeries series;
    for (const auto& cell : cells) {
        series.counts[cell.cell_id].fill(0.0);
    }

    std::set<std::pair<std::string, int>> present;
    for (const auto& record : records) {
        if (!known.contains(record.cell_id)) {
            throw ConsistencyError("population references unknown cell_id '" +
                                   record.cell_id + "'");
        }
        if (mode == PopulationMode::Residential) {
            if (record.hour != 0) {
                throw ConsistencyError(
                    "residential population must use hour 0 only; cell '" +
                    record.cell_id + "' has a row at hour " + std::to_string(record.hour));
            }
            series.counts[record.cell_id].fill(record.count);
        } else {
            series.counts[record.cell_id][record.hour] = record.count;
        }
        present.emplace(record.cell_id, record.hour);
    }

    for (const auto& cell : cells) {
        if (mode == PopulationMode::Residential) {
            if (!present.contains({cell.cell_id, 0})) {
                series.warnings.push_back("cell " + cell.cell_id +
                                          " has no residential count; assuming 0");
            }
        } else {
            int missing = 0;
            for (int h = 0; h < kHoursPerDay; ++h) {
                if (!present.contains({cell.cell_id, h})) ++missing;
            }
            if (missing > 0) {
                series.warnings.push_back("cell " + cell.cell_id + " is missing " +
                                          std::to_string(missing) +
                                          " hourly counts; assuming 0");
            }
        }
    }
    return series;
}

/// Risk per (cell, hour), with the scenario and the per-cell shelter
/// fractions it was derived from.
struct RiskSurface {
    std::map<std::string, std::array<double, kHoursPerDay>> values;
    std::map<std::string, double> shelter;
    UasScenario scenario;
    std::size_t shelter_evaluations = 0;  // instrumentation: one per cell
};

/// Restriction flags per (cell, hour) plus the threshold they encode.
struct RestrictionMap {
    std::map<std::string, std::array<bool, kHoursPerDay>> flags;
    double threshold = 0.0;

    [[nodiscard]] std::size_t restricted_count() const noexcept {
        std::size_t count = 0;
        for (const auto& [id, hours] : flags) {
            for (const bool flag : hours) count += flag ? 1 : 0;
        }
        return count;
    }
};

/// Restricted share of the airspace per hour, each entry in [0, 1].
struct HourlyProfile {
    std::array<double, kHoursPerDay> ratio{};
};

/// Evaluates the risk model over every (cell, hour).  Density is
/// count / cell area; the shelter fraction of each cell is computed once
/// from all building footprints and reused for all hours.
inline RiskSurface compute_risk_surface(const std::vector<CellFeature>& cells,
                                        const std::vector<BuildingFeature>& buildings,
                                        const PopulationSeries& population,
                                        const UasScenario& scenario,
                                        unsigned threads = 1) {
    scenario.validate();
    for (const auto& [cell_id, hours] : population.counts) {
        bool found = false;
        for (const auto& cell : cells) {
            if (cell.cell_id == cell_id) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw ConsistencyError("population references unknown cell_id '" + cell_id + "'");
        }
    }

    std::vector<Polygon> footprints;
    footprints.reserve(buildings.size());
    for (const auto& building : buildings) footprints.push_back(building.footprint);

    const double p_fatal = scenario.impact_fatality_probability();
    const double p_failure = scenario.failure_rate_per_hour;

    std::vector<double> shelter(cells.size());
    std::vector<std::array<double, kHoursPerDay>> risks(cells.size());
    detail::parallel_for(cells.size(), threads, [&](std::size_t i) {
        const CellFeature& cell = cells[i];
        shelter[i] = shelter_fraction(cell.boundary, footprints);
        std::array<double, kHoursPerDay> row{};
        const auto counts = population.counts.find(cell.cell_id);
        for (int h = 0; h < kHoursPerDay; ++h) {
            const double count = counts != population.counts.end() ? counts->second[h] : 0.0;
            const double density = count / cell.area_m2;
            row[h] = risk_product(density, shelter[i], p_fatal, p_failure);
        }
        risks[i] = row;
    });

    RiskSurface surface;
    surface.scenario = scenario;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        surface.values[cells[i].cell_id] = risks[i];
        surface.shelter[cells[i].cell_id] = shelter[i];
    }
    surface.shelter_evaluations = cells.size();
    return surface;
}

/// Pointwise strict comparison of the surface against the threshold.
inline RestrictionMap classify_restricted(const RiskSurface& surface, double threshold) {
    if (!(threshold > 0.0)) {
        throw DomainError("classify_restricted: threshold must be positive");
    }
    RestrictionMap map;
    map.threshold = threshold;
    for (const auto& [cell_id, hours] : surface.values) {
        auto& flags = map.flags[cell_id];
        for (int h = 0; h < kHoursPerDay; ++h) {
            flags[h] = is_restricted(hours[h], threshold);
        }
    }
    return map;
}

enum class RatioWeighting { Area, CellCount };

/// Restricted share per hour, area-weighted (the primary reading; equals
/// plain counting on an equal-area grid).  Cells in the map but absent from
/// `cells` raise ConsistencyError.
inline HourlyProfile hourly_restricted_ratio(const RestrictionMap& map,
                                             const std::vector<CellFeature>& cells,
                                             RatioWeighting weighting = RatioWeighting::Area) {
    if (cells.empty()) {
        throw DomainError("hourly_restricted_ratio: no cells");
    }
    std::map<std::string, double> weight;
    double total = 0.0;
    for (const auto& cell : cells) {
        const double w = weighting == RatioWeighting::Area ? cell.area_m2 : 1.0;
        weight[cell.cell_id] = w;
        total += w;
    }
    HourlyProfile profile;
    for (int h = 0; h < kHoursPerDay; ++h) {
        double restricted = 0.0;
        for (const auto& [cell_id, flags] : map.flags) {
            const auto it = weight.find(cell_id);
            if (it == weight.end()) {
                throw ConsistencyError("restriction map references unknown cell_id '" +
                                       cell_id + "'");
            }
            if (flags[h]) restricted += it->second;
        }
        profile.ratio[h] = restricted / total;
    }
    return profile;
}

/// Count-based overload matching callers that only track a cell total; the
/// map's cells are weighted equally.
inline HourlyProfile hourly_restricted_ratio(const RestrictionMap& map,
                                             std::size_t total_cell_count) {
    if (total_cell_count == 0) {
        throw DomainError("hourly_restricted_ratio: total cell count is zero");
    }
    HourlyProfile profile;
    for (int h = 0; h < kHoursPerDay; ++h) {
        std::size_t restricted = 0;
        for (const auto& [cell_id, flags] : map.flags) {
            if (flags[h]) ++restricted;
        }
        profile.ratio[h] = static_cast<double>(restricted) /
                           static_cast<double>(total_cell_count);
    }
    return profile;
}

/// Hourly comparison between restriction maps derived from de-facto and
/// residential population.  Exposes area-weighted ratios (primary) and
/// plain cell-count ratios, plus the restricted-set deltas.
struct ModeComparison {
    struct HourDelta {
        double defacto_ratio = 0.0;      // area-weighted
        double residential_ratio = 0.0;  // area-weighted
        double difference = 0.0;         // defacto - residential
        double defacto_ratio_by_count = 0.0;
        double residential_ratio_by_count = 0.0;
        std::vector<std::string> gained;  // restricted for de facto only
        std::vector<std::string> lost;    // restricted for residential only
    };
    std::array<HourDelta, kHoursPerDay> hours;
};

inline ModeComparison compare_modes(const RestrictionMap& defacto,
                                    const RestrictionMap& residential,
                                    const std::vector<CellFeature>& cells) {
    std::set<std::string> defacto_ids;
    std::set<std::string> residential_ids;
    for (const auto& [id, flags] : defacto.flags) defacto_ids.insert(id);
    for (const auto& [id, flags] : residential.flags) residential_ids.insert(id);
    if (defacto_ids != residential_ids) {
        throw ConsistencyError("compare_modes: restriction maps cover different cell sets");
    }

    const HourlyProfile defacto_area = hourly_restricted_ratio(defacto, cells);
    const HourlyProfile residential_area = hourly_restricted_ratio(residential, cells);
    const HourlyProfile defacto_count = hourly_restricted_ratio(defacto, cells.size());
    const HourlyProfile residential_count =
        hourly_restricted_ratio(residential, cells.size());

    ModeComparison comparison;
    for (int h = 0; h < kHoursPerDay; ++h) {
        auto& delta = comparison.hours[h];
        delta.defacto_ratio = defacto_area.ratio[h];
        delta.residential_ratio = residential_area.ratio[h];
        delta.difference = delta.defacto_ratio - delta.residential_ratio;
        delta.defacto_ratio_by_count = defacto_count.ratio[h];
        delta.residential_ratio_by_count = residential_count.ratio[h];
        for (const auto& [cell_id, flags] : defacto.flags) {
            const bool d = flags[h];
            const bool r = residential.flags.at(cell_id)[h];
            if (d && !r) delta.gained.push_back(cell_id);
            if (!d && r) delta.lost.push_back(cell_id);
        }
    }
    return comparison;
}

}  // namespace uasrisk

#endif  // UASRISK_ENGINE_HPP
