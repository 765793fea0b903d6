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

#include "fcsched/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace fcsched {

double distance_l2(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw DomainError("distance_l2: shape mismatch");
  double acc = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double distance_max(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw DomainError("distance_max: shape mismatch");
  double worst = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) worst = std::max(worst, std::abs(av[i] - bv[i]));
  return worst;
}

MachineSpec MachineSpec::from_rul(double pmax0, double pmin, double rul_max) {
  MachineSpec spec{pmax0, pmin, rul_max > 0.0 ? -pmax0 / rul_max : 0.0, rul_max};
  validate(spec);
  return spec;
}

double DemandProfile::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

bool DemandProfile::is_constant() const {
  return std::all_of(values.begin(), values.end(),
                     [&](double v) { return v == values.front(); });
}

double PowerSchedule::total(std::size_t t) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < f.rows(); ++j) sum += f(j, t);
  return sum;
}

void validate(const MachineSpec& spec) {
  if (!(spec.pmax0 > 0.0) || !std::isfinite(spec.pmax0))
    throw DomainError(fmt::format("pmax0 must be positive, got {}", spec.pmax0));
  if (!(spec.pmin >= 0.0 && spec.pmin < spec.pmax0))
    throw DomainError(fmt::format("pmin must lie in [0, pmax0), got {}", spec.pmin));
  if (!(spec.slope < 0.0))
    throw DomainError(fmt::format("slope must be negative, got {}", spec.slope));
  if (!(spec.rul_max > 0.0) || !std::isfinite(spec.rul_max))
    throw DomainError(fmt::format("rul_max must be positive, got {}", spec.rul_max));
  const double expected = -spec.pmax0 / spec.rul_max;
  if (std::abs(spec.slope - expected) > 1e-9 * std::abs(expected))
    throw DomainError(fmt::format("slope {} inconsistent with -pmax0/rul_max = {}", spec.slope,
                                  expected));
}

void validate(const FleetInstance& instance) {
  if (instance.machines.empty()) throw DomainError("fleet needs at least one machine");
  if (!(instance.slot_hours > 0.0)) throw DomainError("slot_hours must be positive");
  for (const auto& spec : instance.machines) validate(spec);
}

void validate(const DemandProfile& demand) {
  if (demand.values.empty()) throw DomainError("demand profile needs at least one slot");
  for (const double v : demand.values) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DomainError(fmt::format("demand entries must be finite and >= 0, got {}", v));
  }
}

void validate(const FmaxParams& params) {
  if (!(params.mu >= 0.0 && params.mu <= 1.0)) throw DomainError("mu must lie in [0, 1]");
  if (!(params.upsilon >= 0.0 && params.upsilon <= 1.0))
    throw DomainError("upsilon must lie in [0, 1]");
}

void check_dimensions(const PowerSchedule& schedule, const FleetInstance& instance,
                      const DemandProfile& demand) {
  if (schedule.machines() != instance.size() || schedule.slots() != demand.slots()) {
    throw DomainError(fmt::format("schedule is {}x{}, expected {}x{}", schedule.machines(),
                                  schedule.slots(), instance.size(), demand.slots()));
  }
}

double fmax_step(double prev_fmax, double prev_f, const MachineSpec& spec,
                 const FmaxParams& params) {
  if (!(prev_fmax >= 0.0) || !(prev_f >= 0.0))
    throw DomainError(fmt::format("fmax_step needs non-negative inputs, got fmax={} f={}",
                                  prev_fmax, prev_f));
  if (prev_f == 0.0) return prev_fmax;
  return std::max(0.0, prev_fmax + params.mu * spec.slope * std::pow(prev_f, params.upsilon));
}

FmaxTrajectory roll_fmax(const PowerSchedule& schedule, const FleetInstance& instance,
                         const FmaxParams& params) {
  if (schedule.machines() != instance.size())
    throw DomainError(fmt::format("schedule has {} rows for {} machines", schedule.machines(),
                                  instance.size()));
  const std::size_t slots = schedule.slots();
  Matrix fmax(schedule.machines(), slots);
  for (std::size_t j = 0; j < schedule.machines(); ++j) {
    const MachineSpec& spec = instance.machines[j];
    if (slots == 0) continue;
    fmax(j, 0) = spec.pmax0;
    for (std::size_t t = 1; t < slots; ++t)
      fmax(j, t) = fmax_step(fmax(j, t - 1), schedule.f(j, t - 1), spec, params);
  }
  return FmaxTrajectory(std::move(fmax));
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kNegative:
      return "negative";
    case Violation::Kind::kAboveFmax:
      return "above_fmax";
    case Violation::Kind::kFmaxIncreasing:
      return "fmax_increasing";
  }
  return "unknown";
}

FeasibilityReport check_feasibility(const PowerSchedule& schedule, const FleetInstance& instance,
                                    const FmaxParams& params, double tol) {
  if (schedule.machines() != instance.size())
    throw DomainError("check_feasibility: schedule rows do not match fleet size");
  FeasibilityReport report;
  // Negative entries are reported; the roll treats them as idle slots.
  PowerSchedule usage = schedule;
  for (double& v : usage.f.values()) v = std::max(v, 0.0);
  const FmaxTrajectory rolled = roll_fmax(usage, instance, params);

  for (std::size_t j = 0; j < schedule.machines(); ++j) {
    for (std::size_t t = 0; t < schedule.slots(); ++t) {
      const double f = schedule.f(j, t);
      const double cap = rolled.fmax(j, t);
      if (f < 0.0) report.violations.push_back({Violation::Kind::kNegative, j, t, -f});
      if (f > cap * (1.0 + tol))
        report.violations.push_back({Violation::Kind::kAboveFmax, j, t, f - cap});
      if (t > 0 && cap > rolled.fmax(j, t - 1))
        report.violations.push_back(
            {Violation::Kind::kFmaxIncreasing, j, t, cap - rolled.fmax(j, t - 1)});
    }
  }
  return report;
}

}  // namespace fcsched
