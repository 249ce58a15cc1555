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

// Command-line front end: riskmap, profile, and sensitivity subcommands.

#include <CLI11.hpp>

#include "uasrisk/cli.hpp"
#include "uasrisk/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Ground-risk mapping and restriction analysis for UAS operations"};
    app.set_version_flag("--version", uasrisk::kVersion);
    app.require_subcommand(1);

    uasrisk::RiskmapOptions riskmap;
    int riskmap_hour = -1;
    auto* riskmap_cmd = app.add_subcommand(
        "riskmap", "Write a per-cell risk and restriction map as GeoJSON");
    riskmap_cmd->add_option("config", riskmap.config_path, "Scenario config (JSON)")
        ->required();
    riskmap_cmd->add_option("--hour", riskmap_hour, "Single hour 0..23 (default: all)")
        ->check(CLI::Range(0, 23));
    riskmap_cmd->add_option("--out", riskmap.out_path, "Output GeoJSON path")->required();
    riskmap_cmd->add_option("--threads", riskmap.threads, "Worker threads")
        ->check(CLI::Range(1u, 256u));

    uasrisk::ProfileOptions profile;
    auto* profile_cmd = app.add_subcommand(
        "profile", "Write the hourly restricted-airspace ratio as CSV");
    profile_cmd->add_option("config", profile.config_path, "Scenario config (JSON)")
        ->required();
    profile_cmd->add_option("--out", profile.out_path, "Output CSV path")->required();
    profile_cmd->add_option("--threads", profile.threads, "Worker threads")
        ->check(CLI::Range(1u, 256u));

    uasrisk::SensitivityOptions sensitivity;
    std::string ranges_path;
    std::string sensitivity_out;
    double delta = 0.0;
    auto* sensitivity_cmd = app.add_subcommand(
        "sensitivity", "Write elementary-effects screening statistics as CSV");
    auto* ranges_opt = sensitivity_cmd->add_option(
        "--ranges", ranges_path, "Parameter ranges (JSON; default: bundled ranges)");
    sensitivity_cmd->add_option("--levels", sensitivity.levels, "Grid levels p")
        ->check(CLI::Range(2, 1000));
    auto* delta_opt = sensitivity_cmd->add_option(
        "--delta", delta, "Step size (default: p / (2 (p - 1)))");
    sensitivity_cmd->add_option("--trajectories", sensitivity.trajectories,
                                "Trajectory count n")
        ->check(CLI::Range(1, 1000000));
    sensitivity_cmd->add_option("--seed", sensitivity.seed, "Sampling seed");
    auto* out_opt = sensitivity_cmd->add_option("--out", sensitivity_out, "Output CSV path");
    sensitivity_cmd->add_option("--threads", sensitivity.threads, "Worker threads")
        ->check(CLI::Range(1u, 256u));
    sensitivity_cmd
        ->add_flag("--self-test", sensitivity.self_test,
                   "Verify the sampler on a known linear model and exit")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        if (error.get_exit_code() == 0) {
            return app.exit(error);  // --help / --version
        }
        app.exit(error);
        return 2;
    }

    if (riskmap_cmd->parsed()) {
        if (riskmap_cmd->count("--hour") > 0) riskmap.hour = riskmap_hour;
        return uasrisk::guarded([&] { uasrisk::run_riskmap(riskmap); });
    }
    if (profile_cmd->parsed()) {
        return uasrisk::guarded([&] { uasrisk::run_profile(profile); });
    }
    if (ranges_opt->count() > 0) sensitivity.ranges_path = ranges_path;
    if (delta_opt->count() > 0) sensitivity.delta = delta;
    if (out_opt->count() > 0) sensitivity.out_path = sensitivity_out;
    return uasrisk::guarded([&] { uasrisk::run_sensitivity(sensitivity); });
}
