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

// Successive projections onto the demand, capacity-evolution and capacity
// bound constraint sets.

#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "fcsched/fleet.hpp"
#include "fcsched/solve_result.hpp"

namespace fcsched {

struct ProjectionConfig {
  std::size_t delta_t = 1;
  double epsilon_factor = 0.1;
  int max_iters = 10000;
  FmaxParams fmax_params;
  TimeBudget time_budget;
};

void validate(const ProjectionConfig& cfg, std::size_t slots);

/// Machine whose output is raised first: the smallest strictly positive
/// headroom fmax_j - f_j, lowest index on ties. Indices are 0-based.
std::optional<std::size_t> select_machine(std::span<const double> f_at_tend,
                                          std::span<const double> fmax_at_tend);

/// Raises outputs interval by interval (length delta_t) until the demand at
/// each interval end is met or no machine has headroom left. Never lowers an
/// entry.
PowerSchedule project_onto_demand(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                                  const DemandProfile& demand, std::size_t delta_t = 1);

/// f_j(t) <- min(f_j(t), fmax_j(t)).
PowerSchedule clip_to_fmax(const PowerSchedule& schedule, const FmaxTrajectory& fmax);

/// One forward pass over time applying, slot by slot, the capacity update,
/// the capacity clip and the demand projection. The result is feasible and
/// meets demand in every slot where the fleet still has headroom. Entries are
/// kept at or above `floor`.
struct ForwardRepair {
  PowerSchedule schedule;
  FmaxTrajectory fmax;
};
ForwardRepair repair_forward(const PowerSchedule& schedule, const FleetInstance& instance,
                             const DemandProfile& demand, const FmaxParams& params,
                             double floor = 0.0);

/// Iterates demand projection, fmax roll and clip until the schedule moves by
/// less than epsilon_factor * mean(demand) in Euclidean norm. An empty `init`
/// starts from the zero schedule.
SolveResult solve_projections(const FleetInstance& instance, const DemandProfile& demand,
                              const ProjectionConfig& cfg, const PowerSchedule& init = {});

}  // namespace fcsched
