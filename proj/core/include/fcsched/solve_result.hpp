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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcsched/fleet.hpp"

namespace fcsched {

enum class StopReason { kConverged, kMaxIterations, kTimeout };

std::string to_string(StopReason reason);
StopReason stop_reason_from_string(std::string_view text);

/// One sample of the penalized objective, both terms already weighted.
struct ObjectivePoint {
  int iteration = 0;
  double demand = 0.0;
  double slope = 0.0;
};

struct SolveResult {
  PowerSchedule schedule;
  FmaxTrajectory fmax;
  int iterations = 0;
  StopReason stop_reason = StopReason::kConverged;
  double wall_time_ms = 0.0;
  /// Value of the convergence measure when the solver stopped.
  double final_gap = 0.0;
  /// Mirror Prox only; empty for the projection solver.
  std::vector<ObjectivePoint> objective_trace;
};

/// Optional wall-clock budget shared by both solvers.
using TimeBudget = std::optional<std::chrono::duration<double>>;

}  // namespace fcsched
