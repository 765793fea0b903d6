// Copyright 2026 The fcsched Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fcsched/fleet.hpp"

namespace fcsched {

struct ScheduleReport {
  std::size_t horizon = 0;
  /// Absent when demand is not constant or is zero.
  std::optional<std::size_t> upper_bound;
  std::optional<double> normalized_horizon;
  std::size_t unmet_slots = 0;
  double overproduction_energy = 0.0;  // Wh
  std::vector<std::size_t> machine_starts;

  friend bool operator==(const ScheduleReport&, const ScheduleReport&) = default;
};

inline constexpr double kDemandTolerance = 1e-6;

/// Length of the longest prefix where sum_j f_j(t) >= sigma(t) * (1 - tol).
std::size_t production_horizon(const PowerSchedule& schedule, const DemandProfile& demand,
                               double tol = kDemandTolerance);

/// floor(sum_j 0.6 * pmax0_j * rul_max_j / sigma). Throws for sigma <= 0.
std::size_t upper_bound(const FleetInstance& instance, double sigma);

/// Decision horizon T = ceil(1.2 * UB) used for benchmark runs.
std::size_t decision_horizon(std::size_t upper_bound);

/// A machine counts as running in slot t when f_j(t) > 1e-6 * pmax0_j; a
/// start is a slot where it runs and did not run in the previous slot (or
/// t = 0).
ScheduleReport report(const PowerSchedule& schedule, const DemandProfile& demand,
                      const FleetInstance& instance, double tol = kDemandTolerance);

/// Raised when the oracle's search would exceed its node budget.
class SearchTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  std::uint64_t max_nodes = 10'000'000;
};

/// Exhaustive search over schedules with f_j(t) in {k / (levels - 1) *
/// fmax_j(t)}, constant demand sigma over slots 0..horizon. Returns the
/// longest achievable demand-meeting prefix (at most horizon + 1).
std::size_t oracle_best_horizon(const FleetInstance& instance, double sigma, std::size_t levels,
                                std::size_t horizon, const FmaxParams& params = {},
                                OracleLimits limits = {});

}  // namespace fcsched
