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

#ifndef UASRISK_INGEST_HPP
#define UASRISK_INGEST_HPP

/// @file ingest.hpp
/// @brief Parsers for the three dataset formats and the scenario config.
///
/// Formats:
///   - population: CSV with header `cell_id,hour,count`, LF or CRLF,
///     `.` decimal point
///   - cells / buildings: RFC 7946 GeoJSON FeatureCollections of Polygon
///     features in planar meter coordinates (single ring; hole rings are
///     rejected)
///   - scenario config: a JSON object, keys listed at load_config
///
/// Every error carries the file plus a line number (CSV/JSON) or feature
/// index (GeoJSON).  Parsing is validating: no invalid domain object can be
/// obtained from these entry points.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uasrisk/errors.hpp"
#include "uasrisk/geometry.hpp"
#include "uasrisk/model.hpp"

namespace uasrisk {

struct PopulationRecord {
    std::string cell_id;
    int hour = 0;       // 0..23
    double count = 0.0; // people, non-negative
};

enum class LandUse { Residential, Commercial, Other };

inline std::string to_string(LandUse use) {
    switch (use) {
        case LandUse::Residential: return "residential";
        case LandUse::Commercial: return "commercial";
        case LandUse::Other: return "other";
    }
    return "other";
}

struct CellFeature {
    std::string cell_id;
    Polygon boundary;
    double area_m2;
    LandUse land_use = LandUse::Other;
};

struct BuildingFeature {
    Polygon footprint;
    std::optional<double> height_m;
};

enum class PopulationMode { Defacto, Residential };

/// Scenario config: the UasScenario plus dataset paths and population mode.
/// Relative dataset paths are resolved against the config file's directory.
struct ScenarioConfig {
    UasScenario scenario;
    std::filesystem::path population_csv;
    std::filesystem::path cells_geojson;
    std::filesystem::path buildings_geojson;
    std::optional<std::filesystem::path> residential_csv;
    PopulationMode population_mode = PopulationMode::Defacto;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

inline bool parse_double(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline bool parse_int(std::string_view text, int& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

}  // namespace detail

/// Parses an hourly population CSV.  Duplicate (cell_id, hour) keys, hours
/// outside 0..23, and non-numeric or negative counts are rejected with the
/// offending line number.
inline std::vector<PopulationRecord> load_population_csv(const std::filesystem::path& path) {
    const std::string content = detail::read_file(path);
    const std::string file = path.string();

    std::vector<PopulationRecord> records;
    std::set<std::pair<std::string, int>> seen;

    long line_number = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t eol = content.find('\n', pos);
        std::string_view line(content.data() + pos,
                              (eol == std::string::npos ? content.size() : eol) - pos);
        pos = (eol == std::string::npos) ? content.size() + 1 : eol + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        if (!header_seen) {
            if (line != "cell_id,hour,count") {
                throw ParseError(file, line_number,
                                 "missing or malformed header, expected 'cell_id,hour,count'");
            }
            header_seen = true;
            continue;
        }

        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 3) {
            throw ParseError(file, line_number, "expected 3 comma-separated fields, got " +
                                                    std::to_string(fields.size()));
        }
        PopulationRecord record;
        record.cell_id = std::string(fields[0]);
        if (record.cell_id.empty()) {
            throw ParseError(file, line_number, "empty cell_id");
        }
        if (!detail::parse_int(fields[1], record.hour)) {
            throw ParseError(file, line_number, "non-integer hour '" + std::string(fields[1]) + "'");
        }
        if (record.hour < 0 || record.hour > 23) {
            throw ParseError(file, line_number, "hour out of range: " + std::to_string(record.hour));
        }
        if (!detail::parse_double(fields[2], record.count) || !std::isfinite(record.count)) {
            throw ParseError(file, line_number, "non-numeric count '" + std::string(fields[2]) + "'");
        }
        if (record.count < 0.0) {
            throw ParseError(file, line_number, "negative count");
        }
        if (!seen.emplace(record.cell_id, record.hour).second) {
            throw ParseError(file, line_number, "duplicate (cell_id, hour) key " + record.cell_id +
                                                    "/" + std::to_string(record.hour));
        }
        records.push_back(std::move(record));
    }
    if (!header_seen) {
        throw ParseError(file, 1, "missing or malformed header, expected 'cell_id,hour,count'");
    }
    return records;
}

namespace detail {

inline nlohmann::json parse_json_file(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    try {
        return nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string(), 0, std::string("invalid JSON: ") + e.what());
    }
}

// Extracts the single ring of a GeoJSON Polygon feature as a validated
// uasrisk::Polygon.  `where` names the feature in error messages.
inline Polygon parse_polygon_geometry(const nlohmann::json& geometry,
                                      const std::string& file, long feature_index,
                                      const std::string& where) {
    if (!geometry.is_object() || !geometry.contains("type")) {
        throw ParseError(file, feature_index, where + ": missing geometry type");
    }
    const std::string type = geometry["type"].is_string()
                                 ? geometry["type"].get<std::string>()
                                 : std::string("<non-string>");
    if (type != "Polygon") {
        throw ParseError(file, feature_index,
                         where + ": geometry type must be Polygon, got '" + type + "'");
    }
    if (!geometry.contains("coordinates") || !geometry["coordinates"].is_array()) {
        throw ParseError(file, feature_index, where + ": missing Polygon coordinates");
    }
    const auto& rings = geometry["coordinates"];
    if (rings.empty()) {
        throw ParseError(file, feature_index, where + ": Polygon has no rings");
    }
    if (rings.size() > 1) {
        throw ParseError(file, feature_index,
                         where + ": Polygon has hole rings, which are not supported");
    }
    const auto& ring = rings[0];
    if (!ring.is_array() || ring.size() < 4) {
        throw ParseError(file, feature_index, where + ": ring needs at least 4 positions");
    }
    std::vector<Point2D> points;
    points.reserve(ring.size());
    for (const auto& position : ring) {
        if (!position.is_array() || position.size() < 2 ||
            !position[0].is_number() || !position[1].is_number()) {
            throw ParseError(file, feature_index, where + ": ring position is not [x, y]");
        }
        points.push_back({position[0].get<double>(), position[1].get<double>()});
    }
    if (points.front() == points.back()) {
        points.pop_back();
    } else {
        throw ParseError(file, feature_index, where + ": ring is not closed");
    }
    try {
        return Polygon(std::move(points));
    } catch (const GeometryError& e) {
        throw ParseError(file, feature_index, where + ": " + e.what());
    }
}

inline const nlohmann::json& feature_collection(const nlohmann::json& doc,
                                                const std::string& file) {
    if (!doc.is_object() || doc.value("type", std::string()) != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array()) {
        throw ParseError(file, 0, "expected a GeoJSON FeatureCollection");
    }
    return doc["features"];
}

}  // namespace detail

/// Parses grid-cell features.  Each feature must be a Polygon with a unique
/// `cell_id` property; `land_use` is optional.  Rings are normalized CCW and
/// the cell area is computed on load.
inline std::vector<CellFeature> load_cells_geojson(const std::filesystem::path& path) {
    const std::string file = path.string();
    const nlohmann::json doc = detail::parse_json_file(path);
    const auto& features = detail::feature_collection(doc, file);

    std::vector<CellFeature> cells;
    std::set<std::string> ids;
    long index = 0;
    for (const auto& feature : features) {
        const std::string where = "feature " + std::to_string(index);
        if (!feature.is_object() || feature.value("type", std::string()) != "Feature") {
            throw ParseError(file, index, where + ": not a Feature");
        }
        const auto& properties = feature.value("properties", nlohmann::json::object());
        if (!properties.contains("cell_id") || !properties["cell_id"].is_string()) {
            throw ParseError(file, index, where + ": missing string property 'cell_id'");
        }
        const std::string cell_id = properties["cell_id"].get<std::string>();
        if (!ids.insert(cell_id).second) {
            throw ParseError(file, index, where + ": duplicate cell_id '" + cell_id + "'");
        }
        LandUse use = LandUse::Other;
        if (properties.contains("land_use")) {
            if (!properties["land_use"].is_string()) {
                throw ParseError(file, index, where + ": land_use must be a string");
            }
            const std::string tag = properties["land_use"].get<std::string>();
            if (tag == "residential") {
                use = LandUse::Residential;
            } else if (tag == "commercial") {
                use = LandUse::Commercial;
            } else if (tag == "other") {
                use = LandUse::Other;
            } else {
                throw ParseError(file, index, where + ": unknown land_use '" + tag + "'");
            }
        }
        Polygon boundary = detail::parse_polygon_geometry(
            feature.value("geometry", nlohmann::json()), file, index,
            where + " (cell " + cell_id + ")");
        const double area = boundary.area();
        cells.push_back(CellFeature{cell_id, std::move(boundary), area, use});
        ++index;
    }
    return cells;
}

/// Parses building footprints.  `height_m` is optional and must be a
/// non-negative number when present; it is retained as metadata.
inline std::vector<BuildingFeature> load_buildings_geojson(const std::filesystem::path& path) {
    const std::string file = path.string();
    const nlohmann::json doc = detail::parse_json_file(path);
    const auto& features = detail::feature_collection(doc, file);

    std::vector<BuildingFeature> buildings;
    long index = 0;
    for (const auto& feature : features) {
        const std::string where = "feature " + std::to_string(index);
        if (!feature.is_object() || feature.value("type", std::string()) != "Feature") {
            throw ParseError(file, index, where + ": not a Feature");
        }
        std::optional<double> height;
        const auto& properties = feature.value("properties", nlohmann::json::object());
        if (properties.contains("height_m")) {
            if (!properties["height_m"].is_number()) {
                throw ParseError(file, index, where + ": height_m must be a number");
            }
            const double h = properties["height_m"].get<double>();
            if (!std::isfinite(h) || h < 0.0) {
                throw ParseError(file, index, where + ": height_m must be non-negative");
            }
            height = h;
        }
        Polygon footprint = detail::parse_polygon_geometry(
            feature.value("geometry", nlohmann::json()), file, index, where);
        buildings.push_back(BuildingFeature{std::move(footprint), height});
        ++index;
    }
    return buildings;
}

/// Loads the scenario config.  Recognized keys:
///   population_csv, cells_geojson, buildings_geojson  (required paths)
///   residential_csv   (optional path; requires population_mode "defacto")
///   mass_kg, altitude_m, failure_rate_per_hour, threshold
///   fatality_curve    (array of [kinetic energy J, probability] pairs)
///   population_mode   ("defacto" | "residential", default "defacto")
/// Missing scenario fields take the bundled defaults; unknown keys are
/// rejected by name.
inline ScenarioConfig load_config(const std::filesystem::path& path) {
    const nlohmann::json doc = detail::parse_json_file(path);
    if (!doc.is_object()) {
        throw ConfigError("config " + path.string() + " is not a JSON object");
    }

    static const std::set<std::string> known_keys = {
        "population_csv", "cells_geojson", "buildings_geojson", "residential_csv",
        "mass_kg", "altitude_m", "failure_rate_per_hour", "threshold",
        "fatality_curve", "population_mode"};
    for (const auto& [key, value] : doc.items()) {
        if (!known_keys.contains(key)) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }

    const std::filesystem::path base = path.parent_path();
    auto require_path = [&](const char* key) {
        if (!doc.contains(key) || !doc[key].is_string() ||
            doc[key].get<std::string>().empty()) {
            throw ConfigError(std::string("config: key '") + key +
                              "' must be a non-empty path");
        }
        std::filesystem::path p = doc[key].get<std::string>();
        return p.is_absolute() ? p : base / p;
    };
    auto number_or = [&](const char* key, double fallback) {
        if (!doc.contains(key)) return fallback;
        if (!doc[key].is_number()) {
            throw ConfigError(std::string("config: key '") + key + "' must be a number");
        }
        return doc[key].get<double>();
    };

    ScenarioConfig config;
    config.population_csv = require_path("population_csv");
    config.cells_geojson = require_path("cells_geojson");
    config.buildings_geojson = require_path("buildings_geojson");

    config.scenario.mass_kg = number_or("mass_kg", kDefaultMassKg);
    config.scenario.altitude_m = number_or("altitude_m", kDefaultAltitudeM);
    config.scenario.failure_rate_per_hour =
        number_or("failure_rate_per_hour", kDefaultFailureRatePerHour);
    config.scenario.threshold = number_or("threshold", kDefaultRiskThreshold);

    if (doc.contains("fatality_curve")) {
        if (!doc["fatality_curve"].is_array()) {
            throw ConfigError("config: key 'fatality_curve' must be an array of [J, p] pairs");
        }
        std::vector<FatalityCurve::Point> points;
        for (const auto& pair : doc["fatality_curve"]) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number()) {
                throw ConfigError("config: fatality_curve entries must be [J, p] pairs");
            }
            points.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        config.scenario.fatality_curve = FatalityCurve(std::move(points));
    }

    if (doc.contains("population_mode")) {
        if (!doc["population_mode"].is_string()) {
            throw ConfigError("config: key 'population_mode' must be a string");
        }
        const std::string mode = doc["population_mode"].get<std::string>();
        if (mode == "defacto") {
            config.population_mode = PopulationMode::Defacto;
        } else if (mode == "residential") {
            config.population_mode = PopulationMode::Residential;
        } else {
            throw ConfigError("config: population_mode must be 'defacto' or 'residential'");
        }
    }

    if (doc.contains("residential_csv")) {
        if (config.population_mode != PopulationMode::Defacto) {
            throw ConfigError("config: residential_csv requires population_mode 'defacto'");
        }
        config.residential_csv = require_path("residential_csv");
    }

    try {
        config.scenario.validate();
    } catch (const ConfigError&) {
        throw;
    }
    return config;
}

}  // namespace uasrisk

#endif  // UASRISK_INGEST_HPP
