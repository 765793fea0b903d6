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

#include "fcsched/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace fcsched {

std::size_t production_horizon(const PowerSchedule& schedule, const DemandProfile& demand,
                               double tol) {
  if (schedule.slots() != demand.slots())
    throw DomainError("production_horizon: schedule and demand lengths differ");
  for (std::size_t t = 0; t < schedule.slots(); ++t) {
    if (schedule.total(t) < demand.values[t] * (1.0 - tol)) return t;
  }
  return schedule.slots();
}

std::size_t upper_bound(const FleetInstance& instance, double sigma) {
  if (!(sigma > 0.0)) throw DomainError(fmt::format("upper_bound needs sigma > 0, got {}", sigma));
  double energy = 0.0;
  for (const auto& spec : instance.machines) energy += 0.6 * spec.pmax0 * spec.rul_max;
  return static_cast<std::size_t>(std::floor(energy / sigma));
}

std::size_t decision_horizon(std::size_t upper_bound) {
  return static_cast<std::size_t>(std::ceil(1.2 * static_cast<double>(upper_bound)));
}

ScheduleReport report(const PowerSchedule& schedule, const DemandProfile& demand,
                      const FleetInstance& instance, double tol) {
  check_dimensions(schedule, instance, demand);
  ScheduleReport out;
  out.horizon = production_horizon(schedule, demand, tol);

  const double sigma = demand.mean();
  if (demand.is_constant() && sigma > 0.0) {
    out.upper_bound = upper_bound(instance, sigma);
    out.normalized_horizon = *out.upper_bound == 0
                                 ? 0.0
                                 : static_cast<double>(out.horizon) /
                                       static_cast<double>(*out.upper_bound);
  }

  for (std::size_t t = 0; t < schedule.slots(); ++t) {
    const double total = schedule.total(t);
    if (total < demand.values[t] * (1.0 - tol)) ++out.unmet_slots;
    out.overproduction_energy += std::max(total - demand.values[t], 0.0) * instance.slot_hours;
  }

  out.machine_starts.assign(schedule.machines(), 0);
  for (std::size_t j = 0; j < schedule.machines(); ++j) {
    const double on_level = 1e-6 * instance.machines[j].pmax0;
    bool was_on = false;
    for (std::size_t t = 0; t < schedule.slots(); ++t) {
      const bool on = schedule.f(j, t) > on_level;
      if (on && !was_on) ++out.machine_starts[j];
      was_on = on;
    }
  }
  return out;
}

namespace {

struct OracleSearch {
  const FleetInstance& instance;
  const FmaxParams& params;
  double sigma;
  std::size_t levels;
  std::size_t horizon;
  std::uint64_t max_nodes;
  std::uint64_t nodes = 0;
  std::size_t best = 0;
  std::vector<double> combo;

  bool done() const { return best == horizon + 1; }

  // Enumerates level choices machine by machine; at the last machine checks
  // demand and descends to slot t + 1.
  void choose(std::size_t t, std::size_t j, const std::vector<double>& fmax) {
    const std::size_t m = fmax.size();
    if (j == m) {
      double total = 0.0;
      for (const double v : combo) total += v;
      if (total < sigma * (1.0 - kDemandTolerance)) return;
      std::vector<double> next(m);
      for (std::size_t k = 0; k < m; ++k) {
        const double decay = params.mu * instance.machines[k].slope * std::pow(combo[k], params.upsilon);
        next[k] = std::max(0.0, fmax[k] + decay);
      }
      visit(t + 1, next);
      return;
    }
    for (std::size_t k = 0; k < levels && !done(); ++k) {
      combo[j] = static_cast<double>(k) / static_cast<double>(levels - 1) * fmax[j];
      choose(t, j + 1, fmax);
    }
  }

  void visit(std::size_t t, const std::vector<double>& fmax) {
    if (++nodes > max_nodes)
      throw SearchTooLarge(fmt::format(
          "oracle search exceeded {} nodes at slot {}; full tree has up to {:.3g} nodes",
          max_nodes, t,
          std::pow(static_cast<double>(levels), static_cast<double>(fmax.size() * (horizon + 1)))));
    best = std::max(best, t);
    if (t == horizon + 1 || done()) return;
    choose(t, 0, fmax);
  }
};

}  // namespace

std::size_t oracle_best_horizon(const FleetInstance& instance, double sigma, std::size_t levels,
                                std::size_t horizon, const FmaxParams& params,
                                OracleLimits limits) {
  validate(instance);
  validate(params);
  if (instance.size() > 3) throw DomainError("oracle supports at most 3 machines");
  if (levels < 2 || levels > 8) throw DomainError("oracle levels must lie in [2, 8]");
  if (!(sigma >= 0.0)) throw DomainError("oracle demand must be >= 0");
  if (sigma == 0.0) return horizon + 1;

  OracleSearch search{instance, params, sigma, levels, horizon, limits.max_nodes, 0, 0,
                      std::vector<double>(instance.size(), 0.0)};
  std::vector<double> fmax;
  for (const auto& spec : instance.machines) fmax.push_back(spec.pmax0);
  search.visit(0, fmax);
  return search.best;
}

}  // namespace fcsched
