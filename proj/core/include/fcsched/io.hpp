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

// JSON documents exchanged by the command-line tool.
//
//   instance  {"machines": [{"pmax0", "pmin", "slope", "rul_max"}, ...],
//              "slot_hours": h, "seed": s | null}
//   demand    {"demand": [sigma(0), ..., sigma(T)]}
//   schedule  {"schedule": [[f_1(0), ...], ..., [f_m(0), ...]]}
//   solution  schedule document plus "solver", "fmax", "demand",
//             "iterations", "stop_reason", "wall_time_ms", "final_gap",
//             "objective_trace"
//   report    ScheduleReport field names
//
// Doubles are written in shortest round-trip form, so reading a written
// document reproduces every value bit for bit.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "fcsched/evaluation.hpp"
#include "fcsched/fleet.hpp"
#include "fcsched/solve_result.hpp"

namespace fcsched {

/// Malformed input document. `what()` names the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Solution {
  std::string solver;
  DemandProfile demand;
  SolveResult result;
};

std::string instance_to_json(const FleetInstance& instance);
FleetInstance instance_from_json(const std::string& text);

std::string demand_to_json(const DemandProfile& demand);
DemandProfile demand_from_json(const std::string& text);

std::string schedule_to_json(const PowerSchedule& schedule);
PowerSchedule schedule_from_json(const std::string& text);

std::string solution_to_json(const Solution& solution);
Solution solution_from_json(const std::string& text);

std::string report_to_json(const ScheduleReport& report);
ScheduleReport report_from_json(const std::string& text);

std::string read_text(const std::filesystem::path& path);
/// Creates missing parent directories, then truncates and writes.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fcsched
