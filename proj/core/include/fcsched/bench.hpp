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

// Batch comparison of the two solvers over generated fleets.
//
// CSV layout (one row per machine count, alpha, seed, solver in that nesting
// order):
//
//   m,alpha,seed,solver,status,horizon,upper_bound,normalized_horizon,
//   iterations,wall_time_ms,unmet_slots,overproduction_Wh
//
// followed by '#'-prefixed summary lines with per-solver mean/min/max of
// normalized_horizon. status is converged, max_iterations, timeout or error.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fcsched/mirror_prox.hpp"
#include "fcsched/projection.hpp"

namespace fcsched {

enum class SolverKind { kProjections, kMirrorProx };

std::string to_string(SolverKind kind);
SolverKind solver_from_string(std::string_view text);

struct BenchPlan {
  std::vector<std::size_t> machine_counts{3, 25};
  std::vector<double> alphas{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::uint64_t> seeds = default_seeds();
  std::vector<SolverKind> solvers{SolverKind::kProjections, SolverKind::kMirrorProx};
  double time_budget_s = 1800.0;
  /// When false, wall_time_ms is written as 0 so output is byte-reproducible.
  bool record_timing = true;
  ProjectionConfig projection;
  MirrorProxConfig mirror_prox;

  /// Seeds 1..20.
  static std::vector<std::uint64_t> default_seeds();
};

void validate(const BenchPlan& plan);

struct BenchRow {
  std::size_t machines = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  SolverKind solver = SolverKind::kProjections;
  std::string status;
  std::size_t horizon = 0;
  std::size_t upper_bound = 0;
  double normalized_horizon = 0.0;
  int iterations = 0;
  double wall_time_ms = 0.0;
  std::size_t unmet_slots = 0;
  double overproduction_wh = 0.0;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct SolverSummary {
  SolverKind solver;
  std::size_t runs = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct BenchTable {
  std::vector<BenchRow> rows;

  [[nodiscard]] std::vector<SolverSummary> summary() const;
  /// True when no run ended in an error.
  [[nodiscard]] bool all_completed() const;
};

/// The fleet, demand and decision horizon a bench run uses.
struct BenchCase {
  FleetInstance instance;
  DemandProfile demand;
  std::size_t upper_bound = 0;
};
BenchCase make_case(std::size_t machines, double alpha, std::uint64_t seed);

/// Solves one case and fills a row; solver exceptions become status "error".
BenchRow run_case(const BenchCase& c, double alpha, SolverKind solver, const BenchPlan& plan);

using BenchProgress = std::function<void(const BenchRow& row, std::size_t done, std::size_t total)>;

/// Runs the plan on up to `jobs` threads. Rows come back in plan order.
BenchTable run_bench(const BenchPlan& plan, unsigned jobs = 1, const BenchProgress& progress = {});

class CsvParseError : public std::runtime_error {
 public:
  CsvParseError(std::size_t line, const std::string& message);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string write_csv(const BenchTable& table);
BenchTable parse_csv(std::string_view text);

/// Writes normalized_horizon.csv and wall_time.csv into out_dir; returns the
/// written paths.
std::vector<std::filesystem::path> emit_plotdata(const BenchTable& table,
                                                 const std::filesystem::path& out_dir);

/// Per-slot trace: t, f_1..f_m, fmax_1..fmax_m.
std::string trace_csv(const PowerSchedule& schedule, const FmaxTrajectory& fmax);

}  // namespace fcsched
