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

#ifndef UASRISK_MODEL_HPP
#define UASRISK_MODEL_HPP

/// @file model.hpp
/// @brief Ground-fatality risk model for a falling unmanned aircraft.
///
/// The per-cell, per-hour risk is the product
///
///     risk = density * (1 - shelter) * p_fatal * p_failure
///
/// with density in people per square meter, shelter the covered-area
/// fraction of the cell, p_fatal the impact-fatality probability at the
/// free-fall kinetic energy, and p_failure the per-flight-hour loss-of-
/// control probability.  All functions are pure.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "uasrisk/errors.hpp"

namespace uasrisk {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

/// Free-fall impact energy m*g*h in joules.  No drag model is applied.
inline double kinetic_energy(double mass_kg, double altitude_m) {
    if (!std::isfinite(mass_kg) || !std::isfinite(altitude_m)) {
        throw DomainError("kinetic_energy: non-finite input");
    }
    if (mass_kg <= 0.0) {
        throw DomainError("kinetic_energy: mass must be positive");
    }
    if (altitude_m < 0.0) {
        throw DomainError("kinetic_energy: altitude must be non-negative");
    }
    return mass_kg * kStandardGravity * altitude_m;
}

/// Piecewise-linear fatality probability as a function of impact kinetic
/// energy.  The table starts at (0 J, 0) and is monotone; beyond the last
/// point the final probability is held.
class FatalityCurve {
public:
    using Point = std::pair<double, double>;  // (kinetic energy J, probability)

    explicit FatalityCurve(std::vector<Point> points) : points_(std::move(points)) {
        if (points_.empty()) {
            throw ConfigError("fatality curve is empty");
        }
        if (points_.front().first != 0.0 || points_.front().second != 0.0) {
            throw ConfigError("fatality curve must start at (0 J, 0)");
        }
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto& [e, p] = points_[i];
            if (!std::isfinite(e) || !std::isfinite(p)) {
                throw ConfigError("fatality curve contains non-finite values");
            }
            if (p < 0.0 || p > 1.0) {
                throw ConfigError("fatality curve probability out of [0,1]");
            }
            if (i > 0) {
                if (e <= points_[i - 1].first) {
                    throw ConfigError("fatality curve energies must be strictly increasing");
                }
                if (p < points_[i - 1].second) {
                    throw ConfigError("fatality curve probabilities must be non-decreasing");
                }
            }
        }
    }

    [[nodiscard]] const std::vector<Point>& points() const noexcept { return points_; }

    [[nodiscard]] double evaluate(double kinetic_energy_j) const {
        if (!std::isfinite(kinetic_energy_j) || kinetic_energy_j < 0.0) {
            throw DomainError("fatality curve evaluated at invalid energy");
        }
        if (kinetic_energy_j >= points_.back().first) {
            return points_.back().second;
        }
        // points_ spans [0, back); find the segment and interpolate.
        std::size_t hi = 1;
        while (points_[hi].first <= kinetic_energy_j) ++hi;
        const auto& [e0, p0] = points_[hi - 1];
        const auto& [e1, p1] = points_[hi];
        if (kinetic_energy_j == e0) return p0;
        const double t = (kinetic_energy_j - e0) / (e1 - e0);
        return p0 + t * (p1 - p0);
    }

private:
    std::vector<Point> points_;
};

/// Fatality probability for an unprotected person at the given impact
/// energy, by piecewise-linear interpolation over the curve.
inline double fatality_probability(const FatalityCurve& curve, double kinetic_energy_j) {
    return curve.evaluate(kinetic_energy_j);
}

// Calibrated defaults for the bundled scenario.  The single published
// anchor is 9% fatality for a 1.1 kg vehicle dropped from 30 m; the 1000 J
// saturation point is a calibration choice, not a measured value.
inline constexpr double kDefaultMassKg = 1.1;
inline constexpr double kDefaultAltitudeM = 30.0;
inline constexpr double kDefaultFailureRatePerHour = 3.023e-5;
inline constexpr double kDefaultRiskThreshold = 1e-7;
inline constexpr double kDefaultAnchorFatality = 0.09;

inline FatalityCurve default_fatality_curve() {
    const double anchor_energy = kinetic_energy(kDefaultMassKg, kDefaultAltitudeM);
    return FatalityCurve({{0.0, 0.0},
                          {anchor_energy, kDefaultAnchorFatality},
                          {1000.0, 1.0}});
}

/// Operational scenario: vehicle, altitude, reliability, fatality model,
/// and the acceptable level of safety.
struct UasScenario {
    double mass_kg = kDefaultMassKg;
    double altitude_m = kDefaultAltitudeM;
    double failure_rate_per_hour = kDefaultFailureRatePerHour;
    FatalityCurve fatality_curve = default_fatality_curve();
    double threshold = kDefaultRiskThreshold;

    void validate() const {
        if (!(mass_kg > 0.0) || !std::isfinite(mass_kg)) {
            throw ConfigError("scenario: mass_kg must be positive");
        }
        if (!(altitude_m >= 0.0) || !std::isfinite(altitude_m)) {
            throw ConfigError("scenario: altitude_m must be non-negative");
        }
        if (!(failure_rate_per_hour >= 0.0) || !(failure_rate_per_hour <= 1.0)) {
            throw ConfigError("scenario: failure_rate_per_hour must be in [0,1]");
        }
        if (!(threshold > 0.0) || !std::isfinite(threshold)) {
            throw ConfigError("scenario: threshold must be positive");
        }
    }

    /// Fatality probability at this scenario's free-fall impact energy.
    [[nodiscard]] double impact_fatality_probability() const {
        return fatality_curve.evaluate(kinetic_energy(mass_kg, altitude_m));
    }
};

/// One cell's exposure state at one hour.
struct CellState {
    std::string cell_id;
    double density = 0.0;  // people per square meter
    double shelter = 0.0;  // covered-area fraction in [0,1]
};

/// The bare risk product.  Factors multiply left to right in the order
/// density, exposure, fatality, failure.
inline double risk_product(double density, double shelter, double p_fatal,
                           double p_failure) noexcept {
    return density * (1.0 - shelter) * p_fatal * p_failure;
}

/// Per-flight-hour ground-fatality probability for one cell-hour.
inline double population_risk(const CellState& state, const UasScenario& scenario) {
    if (!(state.density >= 0.0) || !std::isfinite(state.density)) {
        throw DomainError("population_risk: density must be non-negative");
    }
    if (!(state.shelter >= 0.0) || !(state.shelter <= 1.0)) {
        throw DomainError("population_risk: shelter must be in [0,1]");
    }
    scenario.validate();
    return risk_product(state.density, state.shelter,
                        scenario.impact_fatality_probability(),
                        scenario.failure_rate_per_hour);
}

/// Strict comparison: a cell-hour is restricted only when its risk exceeds
/// the threshold; risk exactly at the threshold stays operable.
inline bool is_restricted(double risk, double threshold) {
    if (!(risk >= 0.0)) throw DomainError("is_restricted: risk must be non-negative");
    if (!(threshold > 0.0)) throw DomainError("is_restricted: threshold must be positive");
    return risk > threshold;
}

}  // namespace uasrisk

#endif  // UASRISK_MODEL_HPP
