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

// End-to-end acceptance audit.  Each numbered criterion prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero when any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "uasrisk/cli.hpp"

using namespace uasrisk;

namespace {

int failures = 0;

void report(int criterion, const std::string& label, bool ok,
            const std::string& detail = "") {
    std::printf("[%s] %d: %s%s\n", ok ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.empty() ? "" : ("  -- " + detail).c_str());
    if (!ok) ++failures;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const std::filesystem::path kFixture =
    std::filesystem::path(UASRISK_SOURCE_DIR) / "data" / "synthetic_city";

// 1: the default scenario's impact fatality probability sits in the
//    published single-digit-percent band, exactly at its anchor.
void criterion_fatality_anchor() {
    const UasScenario scenario;
    const double p = scenario.impact_fatality_probability();
    const bool in_band = p >= 0.08 && p <= 0.10;
    const bool exact = p == 0.09;
    report(1, "default impact fatality probability is 0.09 (within [0.08, 0.10])",
           in_band && exact, "got " + format_double(p));
}

// 2: the risk value equals the product of its four factors, recomputed
//    independently, over random inputs and on the worked example.
void criterion_formula_oracle() {
    std::mt19937_64 engine(20001);
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 1000 && ok; ++i) {
        const double density = testing::uniform_in(engine, 0.0, 2.0);
        const double shelter = testing::uniform_in(engine, 0.0, 1.0);
        const double fatal = testing::uniform_in(engine, 1e-6, 1.0);
        const double failure = testing::uniform_in(engine, 1e-9, 1e-3);

        UasScenario scenario;
        scenario.failure_rate_per_hour = failure;
        scenario.fatality_curve = FatalityCurve({{0.0, 0.0}, {1.0, fatal}});
        CellState state{"x", density, shelter};
        const double produced = population_risk(state, scenario);
        const double expected = density * (1.0 - shelter) * fatal * failure;
        const double scale = std::max(std::abs(expected), 1e-300);
        if (std::abs(produced - expected) / scale > 1e-12) {
            ok = false;
            detail = "mismatch at tuple " + std::to_string(i);
        }
    }
    const double worked = risk_product(0.2, 0.5, 0.09, 3.023e-5);
    if (std::abs(worked - 2.7207e-7) / 2.7207e-7 > 1e-12) {
        ok = false;
        detail = "worked example gave " + format_double(worked);
    }
    report(2, "risk equals density x (1 - shelter) x fatality x failure rate", ok, detail);
}

// 3: classification is strict; risk exactly at the threshold stays open.
void criterion_strict_threshold() {
    const bool at = is_restricted(1e-7, 1e-7);
    const bool above = is_restricted(1e-7 * (1.0 + 1e-9), 1e-7);
    report(3, "risk exactly at the threshold is not restricted, just above is",
           !at && above);
}

// 4: the covered-area sweep agrees with a dense rasterized reference on
//    random scenes and is exact on the degenerate ones.
void criterion_shelter_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 engine(20004);
    const Polygon cell({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    for (int round = 0; round < 200 && ok; ++round) {
        std::vector<Polygon> buildings;
        const int count = 1 + static_cast<int>(engine() % 5);
        for (int b = 0; b < count; ++b) {
            buildings.push_back(testing::random_convex_polygon(
                engine, testing::uniform_in(engine, -0.2, 1.2),
                testing::uniform_in(engine, -0.2, 1.2), 0.45));
        }
        const double fast = shelter_fraction(cell, buildings);
        const double reference =
            testing::supersampled_shelter_fraction(cell, buildings, 2048);
        worst = std::max(worst, std::abs(fast - reference));
        if (std::abs(fast - reference) > 1e-3) {
            ok = false;
            detail = "fixture " + std::to_string(round) + ": sweep " +
                     format_double(fast) + " vs reference " + format_double(reference);
        }
    }
    if (ok && shelter_fraction(cell, std::vector<Polygon>{}) != 0.0) {
        ok = false;
        detail = "empty scene is not exactly 0";
    }
    if (ok && shelter_fraction(cell, std::vector<Polygon>{cell}) != 1.0) {
        ok = false;
        detail = "full cover is not exactly 1";
    }
    const double seconds = elapsed_seconds(start);
    if (ok && seconds >= 60.0) {
        ok = false;
        detail = "took " + format_double(seconds) + " s";
    }
    if (ok) {
        detail = "200 fixtures, max |error| " + format_double(worst) + ", " +
                 format_double(seconds) + " s";
    }
    report(4, "covered-area sweep matches a 2048x2048 rasterized reference within 1e-3",
           ok, detail);
}

// 5: the screening statistics recover an analytic linear model exactly and
//    the absolute mean dominates the signed mean on random models.
void criterion_morris_analytic() {
    MorrisDesign design;
    design.levels_p = 4;
    design.delta = 2.0 / 3.0;
    design.trajectories_n = 50;
    const std::vector<ParameterSpec> specs = {
        {"x1", 0.0, 1.0}, {"x2", 0.0, 1.0}, {"x3", 0.0, 1.0}};
    const auto stats = run_study(
        specs, design,
        [](const std::vector<double>& x) { return 3.0 * x[0] + 5.0 * x[1] + 0.0 * x[2]; });
    const double expected[] = {3.0, 5.0, 0.0};
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (std::abs(stats[i].mu_star - expected[i]) > 1e-9 ||
            std::abs(stats[i].sigma.value_or(0.0)) > 1e-9) {
            ok = false;
            detail = stats[i].name + ": mu_star " + format_double(stats[i].mu_star) +
                     ", sigma " + format_double(stats[i].sigma.value_or(0.0));
        }
    }

    std::mt19937_64 engine(20005);
    for (int round = 0; round < 100 && ok; ++round) {
        MorrisDesign random_design;
        random_design.trajectories_n = 6;
        random_design.seed = engine();
        const int k = 2 + static_cast<int>(engine() % 3);
        std::vector<double> linear(k);
        std::vector<double> cross(k * k, 0.0);
        for (int i = 0; i < k; ++i) linear[i] = testing::uniform_in(engine, -5.0, 5.0);
        for (int a = 0; a < k; ++a) {
            for (int b = a + 1; b < k; ++b) {
                cross[a * k + b] = testing::uniform_in(engine, -3.0, 3.0);
            }
        }
        std::vector<ParameterSpec> random_specs;
        for (int i = 0; i < k; ++i) {
            random_specs.push_back({"p" + std::to_string(i), 0.0, 1.0});
        }
        const auto random_stats = run_study(
            random_specs, random_design, [&](const std::vector<double>& x) {
                double y = 0.0;
                for (int i = 0; i < k; ++i) y += linear[i] * x[i];
                for (int a = 0; a < k; ++a) {
                    for (int b = a + 1; b < k; ++b) y += cross[a * k + b] * x[a] * x[b];
                }
                return y;
            });
        for (const auto& s : random_stats) {
            if (s.mu_star < std::abs(s.mu) - 1e-12) {
                ok = false;
                detail = "mu_star < |mu| for " + s.name + " in round " +
                         std::to_string(round);
            }
        }
    }
    report(5, "screening recovers Y = 3 x1 + 5 x2 + 0 x3 (mu* within 1e-9, sigma 0)", ok,
           detail);
}

// 6: with the bundled ranges and default design, population density ranks
//    first by mu*.  The factors are near-tied by construction, so on failure
//    the full table is printed for inspection.
void criterion_density_ranks_first() {
    const auto specs = bundled_parameter_ranges();
    MorrisDesign design;
    design.seed = kDefaultSensitivitySeed;
    const auto stats = run_study(specs, design, bind_risk_model(specs));
    bool ok = false;
    for (const auto& s : stats) {
        if (s.name == "population_density" && s.rank == 1) ok = true;
    }
    report(6, "population density ranks first with the bundled ranges", ok);
    if (!ok) {
        for (const auto& s : stats) {
            std::printf("       %-24s mu %-14s mu* %-14s sigma %-14s rank %d\n",
                        s.name.c_str(), format_double(s.mu).c_str(),
                        format_double(s.mu_star).c_str(),
                        format_double(s.sigma.value_or(0.0)).c_str(), s.rank);
        }
    }
}

// 7: the synthetic-city fixture reproduces its committed hourly profile
//    exactly, peaks by day, and shows the day-night gap between population
//    modes.
void criterion_synthetic_city(const std::filesystem::path& out_dir) {
    bool ok = true;
    std::string detail;
    try {
        ProfileOptions options;
        options.config_path = (kFixture / "config.json").string();
        options.out_path = (out_dir / "profile.csv").string();
        run_profile(options);

        const std::string produced = slurp(options.out_path);
        const std::string expected = slurp(kFixture / "expected_profile.csv");
        if (produced != expected) {
            ok = false;
            detail = "profile.csv differs from the committed expectation";
        }

        const auto data = detail::load_datasets(options.config_path);
        const auto series =
            build_population_series(data.population, PopulationMode::Defacto, data.cells);
        const auto surface =
            compute_risk_surface(data.cells, data.buildings, series, data.config.scenario);
        const auto restricted = classify_restricted(surface, data.config.scenario.threshold);
        const auto profile = hourly_restricted_ratio(restricted, data.cells);
        if (ok && !(profile.ratio[13] > profile.ratio[3])) {
            ok = false;
            detail = "ratio at 13:00 (" + format_double(profile.ratio[13]) +
                     ") does not exceed 03:00 (" + format_double(profile.ratio[3]) + ")";
        }

        const auto residential_records = load_population_csv(*data.config.residential_csv);
        const auto residential_series = build_population_series(
            residential_records, PopulationMode::Residential, data.cells);
        const auto residential_surface = compute_risk_surface(
            data.cells, data.buildings, residential_series, data.config.scenario);
        const auto residential_map =
            classify_restricted(residential_surface, data.config.scenario.threshold);
        const auto comparison = compare_modes(restricted, residential_map, data.cells);
        if (ok && !(comparison.hours[13].difference > comparison.hours[3].difference)) {
            ok = false;
            detail = "mode difference at 13:00 (" +
                     format_double(comparison.hours[13].difference) +
                     ") does not exceed 03:00 (" +
                     format_double(comparison.hours[3].difference) + ")";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(7, "synthetic city: exact committed profile, day peak, day-night mode gap", ok,
           detail);
}

// 8: repeated runs and different thread counts produce byte-identical
//    data outputs.
void criterion_byte_determinism(const std::filesystem::path& out_dir) {
    bool ok = true;
    std::string detail;
    try {
        SensitivityOptions sensitivity;
        sensitivity.out_path = (out_dir / "d1.csv").string();
        run_sensitivity(sensitivity);
        sensitivity.out_path = (out_dir / "d2.csv").string();
        run_sensitivity(sensitivity);
        sensitivity.out_path = (out_dir / "d4.csv").string();
        sensitivity.threads = 4;
        run_sensitivity(sensitivity);
        const std::string base = slurp(out_dir / "d1.csv");
        if (base != slurp(out_dir / "d2.csv")) {
            ok = false;
            detail = "sensitivity differs between two identical runs";
        }
        if (ok && base != slurp(out_dir / "d4.csv")) {
            ok = false;
            detail = "sensitivity differs between 1 and 4 threads";
        }

        if (ok) {
            RiskmapOptions riskmap;
            riskmap.config_path = (kFixture / "config.json").string();
            riskmap.out_path = (out_dir / "m1.geojson").string();
            run_riskmap(riskmap);
            riskmap.out_path = (out_dir / "m4.geojson").string();
            riskmap.threads = 4;
            run_riskmap(riskmap);
            if (slurp(out_dir / "m1.geojson") != slurp(out_dir / "m4.geojson")) {
                ok = false;
                detail = "risk map differs between 1 and 4 threads";
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(8, "outputs are byte-identical across reruns and thread counts", ok, detail);
}

// 9: the full pipeline on the bundled fixture finishes within 10 seconds.
void criterion_pipeline_speed(const std::filesystem::path& out_dir) {
    bool ok = true;
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    try {
        RiskmapOptions riskmap;
        riskmap.config_path = (kFixture / "config.json").string();
        riskmap.out_path = (out_dir / "speed_map.geojson").string();
        run_riskmap(riskmap);

        ProfileOptions profile;
        profile.config_path = (kFixture / "config.json").string();
        profile.out_path = (out_dir / "speed_profile.csv").string();
        run_profile(profile);

        SensitivityOptions sensitivity;
        sensitivity.out_path = (out_dir / "speed_sensitivity.csv").string();
        run_sensitivity(sensitivity);
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double seconds = elapsed_seconds(start);
    if (ok && seconds >= 10.0) ok = false;
    if (detail.empty()) detail = format_double(seconds) + " s";
    report(9, "risk map + profile + sensitivity on the fixture complete in under 10 s",
           ok, detail);
}

}  // namespace

int main() {
    const std::filesystem::path out_dir =
        std::filesystem::temp_directory_path() /
        ("uasrisk-acceptance-" + std::to_string(::getpid()));
    std::filesystem::create_directories(out_dir);

    criterion_fatality_anchor();
    criterion_formula_oracle();
    criterion_strict_threshold();
    criterion_shelter_oracle();
    criterion_morris_analytic();
    criterion_density_ranks_first();
    criterion_synthetic_city(out_dir);
    criterion_byte_determinism(out_dir);
    criterion_pipeline_speed(out_dir);

    std::filesystem::remove_all(out_dir);
    if (failures == 0) {
        std::printf("all 9 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
