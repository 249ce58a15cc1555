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

#ifndef UASRISK_MORRIS_HPP
#define UASRISK_MORRIS_HPP

/// @file morris.hpp
/// @brief Morris elementary-effects screening.
///
/// Parameters are sampled on a p-level grid over the unit hypercube and
/// perturbed one at a time by +-delta along n random trajectories.  Each
/// trajectory yields one elementary effect per parameter,
///
///     EE_i = (Y(x + e_i * step) - Y(x)) / step,    step = +-delta,
///
/// evaluated in unit-cube coordinates; the affine map to physical ranges
/// absorbs the scaling.  Per parameter the study reports mu (mean effect),
/// mu_star (mean absolute effect, the influence ranking key) and sigma
/// (sample standard deviation, flagging non-linearity or interaction).
///
/// @par Determinism contract
/// Trajectory j draws from std::mt19937_64 seeded with
/// splitmix64(seed ^ splitmix64(j)); bounded draws use unbiased rejection
/// sampling on the raw 64-bit output.  Both the engine and the mixer are
/// fixed by this library, so a (seed, design) pair maps to the same
/// trajectory list on every platform and release, and trajectories may be
/// generated or evaluated in parallel without changing the result.  Per
/// trajectory the draw order is: one admissible start level per parameter,
/// a Fisher-Yates permutation of the parameter order, then one direction
/// bit per step whose direction is not forced by the grid boundary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uasrisk/errors.hpp"
#include "uasrisk/parallel.hpp"

namespace uasrisk {

/// Physical range of one model input; the unit coordinate x maps to
/// low + x * (high - low).
struct ParameterSpec {
    std::string name;
    double low = 0.0;
    double high = 1.0;
};

/// Sampling design: p grid levels {0, 1/(p-1), ..., 1}, a step delta that
/// must be a whole number of grid intervals, and n trajectories.
struct MorrisDesign {
    int levels_p = 4;
    double delta = 2.0 / 3.0;  // p / (2 (p - 1)) for p = 4
    int trajectories_n = 100;
    std::uint64_t seed = 0;
};

/// Default step for a given level count: p / (2 (p - 1)).
inline double default_delta(int levels_p) {
    return static_cast<double>(levels_p) / (2.0 * (levels_p - 1));
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::mt19937_64 trajectory_engine(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

// Unbiased draw from [0, n) by rejection; avoids the implementation-defined
// std::uniform_int_distribution.
inline std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = engine();
    } while (v >= limit);
    return v % n;
}

struct DesignGrid {
    int levels_p;
    int step_levels;             // delta expressed in grid intervals
    double delta;                // step_levels / (levels_p - 1)
    std::vector<int> admissible; // start levels with at least one in-grid move
};

inline DesignGrid resolve_grid(const MorrisDesign& design) {
    if (design.levels_p < 2) {
        throw DesignError("morris design: levels_p must be at least 2");
    }
    if (design.trajectories_n < 1) {
        throw DesignError("morris design: trajectories_n must be at least 1");
    }
    if (!(design.delta > 0.0) || design.delta > 1.0) {
        throw DesignError("morris design: delta must lie in (0, 1]");
    }
    const int intervals = design.levels_p - 1;
    const double steps = design.delta * intervals;
    const int step_levels = static_cast<int>(std::lround(steps));
    if (step_levels < 1 || std::abs(steps - step_levels) > 1e-9) {
        throw DesignError("morris design: delta must be a whole number of grid "
                          "intervals 1/(levels_p-1)");
    }
    DesignGrid grid;
    grid.levels_p = design.levels_p;
    grid.step_levels = step_levels;
    grid.delta = static_cast<double>(step_levels) / intervals;
    for (int level = 0; level < design.levels_p; ++level) {
        if (level + step_levels <= intervals || level - step_levels >= 0) {
            grid.admissible.push_back(level);
        }
    }
    if (grid.admissible.empty()) {
        throw DesignError("morris design: no admissible start level");
    }
    return grid;
}

}  // namespace detail

/// One path through the level grid: k+1 points, consecutive points
/// differing in exactly one coordinate by +-delta, each parameter stepped
/// exactly once.
struct Trajectory {
    struct Step {
        std::size_t parameter;
        int direction;  // +1 or -1 in units of delta
    };
    std::vector<std::vector<double>> points;  // unit-cube coordinates
    std::vector<Step> steps;                  // points.size() - 1 entries
};

/// Per-parameter summary of the elementary effects.
struct MorrisStats {
    std::string name;
    double mu = 0.0;
    double mu_star = 0.0;
    std::optional<double> sigma;           // absent when only one effect exists
    std::vector<double> elementary_effects;
    int rank = 0;                          // 1 = largest mu_star
};

/// Deterministic trajectory sample for k parameters.  See the file-level
/// determinism contract for the exact seed -> trajectory mapping.
inline std::vector<Trajectory> generate_trajectories(const MorrisDesign& design,
                                                     std::size_t parameter_count) {
    if (parameter_count < 1) {
        throw DesignError("morris design: need at least one parameter");
    }
    const detail::DesignGrid grid = detail::resolve_grid(design);
    const int intervals = grid.levels_p - 1;

    std::vector<Trajectory> trajectories(design.trajectories_n);
    for (std::size_t j = 0; j < trajectories.size(); ++j) {
        auto engine = detail::trajectory_engine(design.seed, j);

        std::vector<int> levels(parameter_count);
        for (auto& level : levels) {
            level = grid.admissible[detail::uniform_below(engine, grid.admissible.size())];
        }

        std::vector<std::size_t> order(parameter_count);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = parameter_count - 1; i >= 1; --i) {
            const std::size_t pick = detail::uniform_below(engine, i + 1);
            std::swap(order[i], order[pick]);
        }

        Trajectory& trajectory = trajectories[j];
        auto push_point = [&] {
            std::vector<double> point(parameter_count);
            for (std::size_t c = 0; c < parameter_count; ++c) {
                point[c] = static_cast<double>(levels[c]) / intervals;
            }
            trajectory.points.push_back(std::move(point));
        };
        push_point();
        for (const std::size_t param : order) {
            const bool can_up = levels[param] + grid.step_levels <= intervals;
            const bool can_down = levels[param] - grid.step_levels >= 0;
            int direction;
            if (can_up && can_down) {
                direction = detail::uniform_below(engine, 2) == 0 ? +1 : -1;
            } else {
                direction = can_up ? +1 : -1;
            }
            levels[param] += direction * grid.step_levels;
            trajectory.steps.push_back({param, direction});
            push_point();
        }
    }
    return trajectories;
}

/// Model evaluated on physical parameter vectors.
using ModelFunction = std::function<double(const std::vector<double>&)>;

/// One elementary effect per parameter from one trajectory.  The model is
/// evaluated at the k+1 trajectory points mapped through the affine range
/// transform; each consecutive pair yields the effect of the parameter that
/// stepped, signed by the step direction.
inline std::vector<double> elementary_effects(const ModelFunction& model,
                                              const Trajectory& trajectory,
                                              const std::vector<ParameterSpec>& specs,
                                              double delta) {
    const std::size_t k = specs.size();
    std::vector<double> outputs(trajectory.points.size());
    std::vector<double> physical(k);
    for (std::size_t p = 0; p < trajectory.points.size(); ++p) {
        const auto& unit = trajectory.points[p];
        for (std::size_t c = 0; c < k; ++c) {
            physical[c] = specs[c].low + unit[c] * (specs[c].high - specs[c].low);
        }
        outputs[p] = model(physical);
        if (!std::isfinite(outputs[p])) {
            std::string where = "(";
            for (std::size_t c = 0; c < k; ++c) {
                where += (c ? ", " : "") + std::to_string(physical[c]);
            }
            throw EvaluationError("model returned a non-finite value at point " +
                                  std::to_string(p) + " " + where + ")");
        }
    }
    std::vector<double> effects(k, 0.0);
    for (std::size_t s = 0; s < trajectory.steps.size(); ++s) {
        const auto& step = trajectory.steps[s];
        effects[step.parameter] =
            (outputs[s + 1] - outputs[s]) / (step.direction * delta);
    }
    return effects;
}

/// mu, mu_star, sigma of one parameter's elementary effects.  sigma uses the
/// n-1 denominator and is absent for a single effect.
inline MorrisStats summarize(std::vector<double> effects) {
    if (effects.empty()) {
        throw DomainError("summarize: empty elementary-effects list");
    }
    const double n = static_cast<double>(effects.size());
    double sum = 0.0;
    double abs_sum = 0.0;
    for (const double e : effects) {
        sum += e;
        abs_sum += std::abs(e);
    }
    MorrisStats stats;
    stats.mu = sum / n;
    stats.mu_star = abs_sum / n;
    if (effects.size() >= 2) {
        double sq = 0.0;
        for (const double e : effects) {
            const double d = e - stats.mu;
            sq += d * d;
        }
        stats.sigma = std::sqrt(sq / (n - 1.0));
    }
    stats.elementary_effects = std::move(effects);
    return stats;
}

/// Full screening study: sample, evaluate, summarize, rank by mu_star
/// (descending; ties keep parameter order).  Deterministic for a fixed seed
/// at any thread count.
inline std::vector<MorrisStats> run_study(const std::vector<ParameterSpec>& specs,
                                          const MorrisDesign& design,
                                          const ModelFunction& model,
                                          unsigned threads = 1) {
    if (specs.empty()) {
        throw DesignError("morris study: need at least one parameter");
    }
    for (const auto& spec : specs) {
        if (!(spec.low < spec.high)) {
            throw DesignError("morris study: parameter '" + spec.name +
                              "' needs low < high");
        }
        for (const auto& other : specs) {
            if (&other != &spec && other.name == spec.name) {
                throw DesignError("morris study: duplicate parameter name '" +
                                  spec.name + "'");
            }
        }
    }
    const detail::DesignGrid grid = detail::resolve_grid(design);
    const auto trajectories = generate_trajectories(design, specs.size());

    std::vector<std::vector<double>> per_trajectory(trajectories.size());
    detail::parallel_for(trajectories.size(), threads, [&](std::size_t j) {
        per_trajectory[j] = elementary_effects(model, trajectories[j], specs, grid.delta);
    });

    std::vector<MorrisStats> stats;
    stats.reserve(specs.size());
    for (std::size_t c = 0; c < specs.size(); ++c) {
        std::vector<double> effects(trajectories.size());
        for (std::size_t j = 0; j < trajectories.size(); ++j) {
            effects[j] = per_trajectory[j][c];
        }
        MorrisStats s = summarize(std::move(effects));
        s.name = specs[c].name;
        stats.push_back(std::move(s));
    }

    std::vector<std::size_t> by_mu_star(stats.size());
    std::iota(by_mu_star.begin(), by_mu_star.end(), 0);
    std::stable_sort(by_mu_star.begin(), by_mu_star.end(),
                     [&](std::size_t a, std::size_t b) {
                         return stats[a].mu_star > stats[b].mu_star;
                     });
    for (std::size_t r = 0; r < by_mu_star.size(); ++r) {
        stats[by_mu_star[r]].rank = static_cast<int>(r + 1);
    }
    return stats;
}

}  // namespace uasrisk

#endif  // UASRISK_MORRIS_HPP
