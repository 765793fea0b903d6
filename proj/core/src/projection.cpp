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

#include "fcsched/projection.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace fcsched {
namespace {

using Clock = std::chrono::steady_clock;

double column_total(const Matrix& f, std::size_t t) {
  double sum = 0.0;
  for (std::size_t j = 0; j < f.rows(); ++j) sum += f(j, t);
  return sum;
}

// Raises column t in place until demand is met or headroom runs out.
void raise_column(Matrix& f, const Matrix& fmax, std::size_t t, double sigma,
                  std::vector<double>& col_f, std::vector<double>& col_fmax) {
  const std::size_t m = f.rows();
  for (std::size_t j = 0; j < m; ++j) {
    col_f[j] = f(j, t);
    col_fmax[j] = fmax(j, t);
  }
  // At most m rounds: every round either meets demand or saturates a machine.
  for (std::size_t round = 0; round < m; ++round) {
    const double inc = sigma - column_total(f, t);
    if (inc <= 0.0) break;
    const auto pick = select_machine(col_f, col_fmax);
    if (!pick) break;
    const std::size_t j = *pick;
    f(j, t) = std::min(f(j, t) + inc, fmax(j, t));
    col_f[j] = f(j, t);
  }
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kConverged: return "converged";
    case StopReason::kMaxIterations: return "max_iterations";
    case StopReason::kTimeout: return "timeout";
  }
  return "unknown";
}

StopReason stop_reason_from_string(std::string_view text) {
  if (text == "converged") return StopReason::kConverged;
  if (text == "max_iterations") return StopReason::kMaxIterations;
  if (text == "timeout") return StopReason::kTimeout;
  throw DomainError(fmt::format("unknown stop reason '{}'", text));
}

void validate(const ProjectionConfig& cfg, std::size_t slots) {
  if (cfg.delta_t < 1 || cfg.delta_t > slots)
    throw DomainError(fmt::format("delta_t must lie in [1, {}], got {}", slots, cfg.delta_t));
  if (!(cfg.epsilon_factor > 0.0)) throw DomainError("epsilon_factor must be positive");
  if (cfg.max_iters < 1) throw DomainError("max_iters must be at least 1");
  validate(cfg.fmax_params);
}

std::optional<std::size_t> select_machine(std::span<const double> f_at_tend,
                                          std::span<const double> fmax_at_tend) {
  if (f_at_tend.size() != fmax_at_tend.size())
    throw DomainError("select_machine: length mismatch");
  std::optional<std::size_t> best;
  double best_gap = 0.0;
  for (std::size_t j = 0; j < f_at_tend.size(); ++j) {
    const double gap = std::max(fmax_at_tend[j] - f_at_tend[j], 0.0);
    if (gap > 0.0 && (!best || gap < best_gap)) {
      best = j;
      best_gap = gap;
    }
  }
  return best;
}

PowerSchedule project_onto_demand(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                                  const DemandProfile& demand, std::size_t delta_t) {
  const std::size_t m = schedule.machines();
  const std::size_t n = schedule.slots();
  if (fmax.machines() != m || fmax.slots() != n || demand.slots() != n)
    throw DomainError("project_onto_demand: dimension mismatch");
  if (delta_t < 1) throw DomainError("project_onto_demand: delta_t must be >= 1");

  PowerSchedule out = schedule;
  std::vector<double> col_f(m);
  std::vector<double> col_fmax(m);
  for (std::size_t start = 0; start < n; start += delta_t) {
    const std::size_t end = std::min(start + delta_t, n) - 1;
    raise_column(out.f, fmax.fmax, end, demand.values[end], col_f, col_fmax);
    if (end == start) continue;
    // Propagate the level reached at t_end over the interval; never lower.
    for (std::size_t j = 0; j < m; ++j) {
      const double level = out.f(j, end);
      for (std::size_t t = start; t < end; ++t) out.f(j, t) = std::max(out.f(j, t), level);
    }
  }
  return out;
}

PowerSchedule clip_to_fmax(const PowerSchedule& schedule, const FmaxTrajectory& fmax) {
  if (!schedule.f.same_shape(fmax.fmax)) throw DomainError("clip_to_fmax: shape mismatch");
  PowerSchedule out = schedule;
  auto v = out.f.values();
  const auto cap = fmax.fmax.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::min(v[i], cap[i]);
  return out;
}

ForwardRepair repair_forward(const PowerSchedule& schedule, const FleetInstance& instance,
                             const DemandProfile& demand, const FmaxParams& params,
                             double floor) {
  check_dimensions(schedule, instance, demand);
  const std::size_t m = schedule.machines();
  const std::size_t n = schedule.slots();
  ForwardRepair out{schedule, FmaxTrajectory(Matrix(m, n))};
  Matrix& f = out.schedule.f;
  Matrix& cap = out.fmax.fmax;
  std::vector<double> col_f(m);
  std::vector<double> col_fmax(m);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& spec = instance.machines[j];
      cap(j, t) = t == 0 ? spec.pmax0 : fmax_step(cap(j, t - 1), f(j, t - 1), spec, params);
      f(j, t) = std::min(std::max(f(j, t), 0.0), cap(j, t));
    }
    raise_column(f, cap, t, demand.values[t], col_f, col_fmax);
    for (std::size_t j = 0; j < m; ++j) f(j, t) = std::max(f(j, t), floor);
  }
  return out;
}

SolveResult solve_projections(const FleetInstance& instance, const DemandProfile& demand,
                              const ProjectionConfig& cfg, const PowerSchedule& init) {
  const auto started = Clock::now();
  validate(instance);
  validate(demand);
  validate(cfg, demand.slots());

  PowerSchedule f = init.f.empty() ? PowerSchedule(instance.size(), demand.slots()) : init;
  check_dimensions(f, instance, demand);
  for (const double v : f.f.values()) {
    if (!(v >= 0.0)) throw DomainError("solve_projections: init must be entrywise >= 0");
  }

  const double eps = cfg.epsilon_factor * demand.mean();
  SolveResult result;
  result.fmax = roll_fmax(f, instance, cfg.fmax_params);
  result.stop_reason = StopReason::kMaxIterations;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    PowerSchedule next = project_onto_demand(f, result.fmax, demand, cfg.delta_t);
    result.fmax = roll_fmax(next, instance, cfg.fmax_params);
    next = clip_to_fmax(next, result.fmax);
    const double moved = distance_l2(next.f, f.f);
    f = std::move(next);
    result.iterations = it;
    result.final_gap = moved;
    if (moved < eps || moved == 0.0) {
      result.stop_reason = StopReason::kConverged;
      break;
    }
    if (cfg.time_budget && Clock::now() - started > *cfg.time_budget) {
      result.stop_reason = StopReason::kTimeout;
      break;
    }
  }
  // Clipping lowers usage, so the rolled capacity can only grow; re-roll so
  // the reported trajectory is the one the schedule induces.
  result.fmax = roll_fmax(f, instance, cfg.fmax_params);
  result.schedule = std::move(f);
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - started).count();
  return result;
}

}  // namespace fcsched
