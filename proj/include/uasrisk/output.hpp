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

#ifndef UASRISK_OUTPUT_HPP
#define UASRISK_OUTPUT_HPP

/// @file output.hpp
/// @brief Serializers for risk maps, profiles, sensitivity tables, and run
///        manifests.
///
/// Every writer produces its full payload as a string first; files are then
/// replaced atomically (write to a sibling temp file, rename over the target)
/// so a failed run never leaves a truncated output behind.  Doubles are
/// rendered with the shortest representation that round-trips, which keeps
/// repeated runs byte-identical across thread counts.

#include <array>
#include <charconv>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uasrisk/digest.hpp"
#include "uasrisk/engine.hpp"
#include "uasrisk/errors.hpp"
#include "uasrisk/ingest.hpp"
#include "uasrisk/morris.hpp"
#include "uasrisk/version.hpp"

namespace uasrisk {

/// Shortest decimal form of @p value that parses back to the same double.
inline std::string format_double(double value) {
    std::array<char, 40> buf;
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

/// Writes @p content to @p path by staging a sibling temp file and renaming it
/// over the target, so readers never observe a partial file.
inline void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path dir =
        path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    std::filesystem::path temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot open output file for writing: " + temp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(temp, ec);
            throw ConfigError("failed while writing output file: " + temp.string());
        }
    }
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        std::filesystem::remove(temp, ec);
        throw ConfigError("cannot move output into place: " + path.string());
    }
}

namespace detail {

inline std::string hour_suffix(int hour) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "h%02d", hour);
    return buf;
}

inline nlohmann::ordered_json ring_coordinates(const Polygon& polygon) {
    nlohmann::ordered_json ring = nlohmann::ordered_json::array();
    for (const Point2D& p : polygon.ring()) {
        ring.push_back(nlohmann::ordered_json::array({p.x, p.y}));
    }
    const Point2D& first = polygon.ring().front();
    ring.push_back(nlohmann::ordered_json::array({first.x, first.y}));
    return nlohmann::ordered_json::array({ring});
}

}  // namespace detail

/// Renders one feature per cell, ordered by cell id, carrying the shelter
/// factor plus per-hour risk and restriction properties for @p hours.
inline std::string write_riskmap_geojson(const std::vector<CellFeature>& cells,
                                         const RiskSurface& surface,
                                         const RestrictionMap& restricted,
                                         const std::vector<int>& hours) {
    std::map<std::string, const CellFeature*> ordered;
    for (const CellFeature& cell : cells) ordered.emplace(cell.cell_id, &cell);

    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (const auto& [cell_id, cell] : ordered) {
        const auto risk_it = surface.values.find(cell_id);
        const auto shelter_it = surface.shelter.find(cell_id);
        const auto flag_it = restricted.flags.find(cell_id);
        if (risk_it == surface.values.end() || shelter_it == surface.shelter.end() ||
            flag_it == restricted.flags.end()) {
            throw ConsistencyError("risk surface is missing cell '" + cell_id + "'");
        }

        nlohmann::ordered_json properties;
        properties["cell_id"] = cell_id;
        properties["land_use"] = to_string(cell->land_use);
        properties["shelter"] = shelter_it->second;
        for (const int hour : hours) {
            properties["risk_" + detail::hour_suffix(hour)] = risk_it->second[hour];
        }
        for (const int hour : hours) {
            properties["restricted_" + detail::hour_suffix(hour)] =
                static_cast<bool>(flag_it->second[hour]);
        }

        nlohmann::ordered_json feature;
        feature["type"] = "Feature";
        feature["properties"] = std::move(properties);
        feature["geometry"] = {{"type", "Polygon"},
                               {"coordinates", detail::ring_coordinates(cell->boundary)}};
        features.push_back(std::move(feature));
    }

    nlohmann::ordered_json collection;
    collection["type"] = "FeatureCollection";
    collection["features"] = std::move(features);
    return collection.dump(2) + "\n";
}

/// Writes an hour-indexed CSV with one named ratio column per entry in
/// @p columns, in the given order.
inline std::string write_profile_csv(
    const std::vector<std::pair<std::string, std::array<double, kHoursPerDay>>>& columns) {
    if (columns.empty()) throw DomainError("profile table needs at least one column");
    std::string csv = "hour";
    for (const auto& [name, values] : columns) {
        csv += ',';
        csv += name;
    }
    csv += '\n';
    for (int hour = 0; hour < kHoursPerDay; ++hour) {
        csv += std::to_string(hour);
        for (const auto& [name, values] : columns) {
            csv += ',';
            csv += format_double(values[hour]);
        }
        csv += '\n';
    }
    return csv;
}

/// Writes sensitivity statistics ordered by rank (most influential first).
/// The sigma field is left empty when a single trajectory makes the sample
/// standard deviation undefined.
inline std::string write_sensitivity_csv(const std::vector<MorrisStats>& stats) {
    std::vector<const MorrisStats*> by_rank;
    by_rank.reserve(stats.size());
    for (const MorrisStats& s : stats) by_rank.push_back(&s);
    std::sort(by_rank.begin(), by_rank.end(),
              [](const MorrisStats* a, const MorrisStats* b) { return a->rank < b->rank; });

    std::string csv = "parameter,mu,mu_star,sigma,rank\n";
    for (const MorrisStats* s : by_rank) {
        csv += s->name;
        csv += ',';
        csv += format_double(s->mu);
        csv += ',';
        csv += format_double(s->mu_star);
        csv += ',';
        if (s->sigma.has_value()) csv += format_double(*s->sigma);
        csv += ',';
        csv += std::to_string(s->rank);
        csv += '\n';
    }
    return csv;
}

/// Serializes population records back to the ingestion CSV schema.
inline std::string write_population_csv(const std::vector<PopulationRecord>& records) {
    std::string csv = "cell_id,hour,count\n";
    for (const PopulationRecord& record : records) {
        csv += record.cell_id;
        csv += ',';
        csv += std::to_string(record.hour);
        csv += ',';
        csv += format_double(record.count);
        csv += '\n';
    }
    return csv;
}

/// Serializes cell features back to the ingestion GeoJSON schema.
inline std::string write_cells_geojson(const std::vector<CellFeature>& cells) {
    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (const CellFeature& cell : cells) {
        nlohmann::ordered_json feature;
        feature["type"] = "Feature";
        feature["properties"] = {{"cell_id", cell.cell_id},
                                 {"land_use", to_string(cell.land_use)}};
        feature["geometry"] = {{"type", "Polygon"},
                               {"coordinates", detail::ring_coordinates(cell.boundary)}};
        features.push_back(std::move(feature));
    }
    nlohmann::ordered_json collection;
    collection["type"] = "FeatureCollection";
    collection["features"] = std::move(features);
    return collection.dump(2) + "\n";
}

/// Serializes building footprints back to the ingestion GeoJSON schema.
inline std::string write_buildings_geojson(const std::vector<BuildingFeature>& buildings) {
    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (const BuildingFeature& building : buildings) {
        nlohmann::ordered_json feature;
        feature["type"] = "Feature";
        feature["properties"] = nlohmann::ordered_json::object();
        if (building.height_m.has_value()) {
            feature["properties"]["height_m"] = *building.height_m;
        }
        feature["geometry"] = {{"type", "Polygon"},
                               {"coordinates", detail::ring_coordinates(building.footprint)}};
        features.push_back(std::move(feature));
    }
    nlohmann::ordered_json collection;
    collection["type"] = "FeatureCollection";
    collection["features"] = std::move(features);
    return collection.dump(2) + "\n";
}

/// Current time rendered as an ISO 8601 UTC timestamp.
inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

/// Provenance record written alongside every output file.  The manifest
/// carries everything needed to reproduce the run: the command, the effective
/// configuration, digests of all inputs, and the seed when randomness is
/// involved.  Timestamps live only here, never in data outputs, so the data
/// outputs stay byte-reproducible.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, std::string>> inputs;  ///< (path, sha256)
    std::optional<std::uint64_t> seed;
    std::string output_path;
    std::string timestamp = utc_timestamp();
};

inline std::string sha256_of_file(const std::filesystem::path& path) {
    return sha256_hex(detail::read_file(path.string()));
}

inline nlohmann::ordered_json manifest_json(const RunManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["command"] = manifest.command;
    doc["version"] = kVersion;
    doc["timestamp"] = manifest.timestamp;
    if (manifest.seed.has_value()) doc["seed"] = *manifest.seed;
    doc["config"] = manifest.config;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& [path, digest] : manifest.inputs) {
        inputs.push_back({{"path", path}, {"sha256", digest}});
    }
    doc["inputs"] = std::move(inputs);
    doc["output"] = manifest.output_path;
    return doc;
}

/// Writes the manifest next to its output file as `<output>.manifest.json`.
inline std::filesystem::path write_run_manifest(const RunManifest& manifest) {
    std::filesystem::path path(manifest.output_path);
    path += ".manifest.json";
    atomic_write_file(path, manifest_json(manifest).dump(2) + "\n");
    return path;
}

}  // namespace uasrisk

#endif  // UASRISK_OUTPUT_HPP
