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

// Fleet of degrading power sources (fuel-cell stacks) and the usage-driven
// capacity model shared by both solvers and the evaluator.
//
// Time is discrete: slot t = 0..T. A machine delivering f_j(t) in slot t loses
// capacity for slot t + 1 according to
//
//   fmax_j(t + 1) = max(0, fmax_j(t) + mu * slope_j * f_j(t)^upsilon)
//
// with slope_j = -pmax0_j / rul_max_j < 0, so an idle machine keeps its
// capacity and a used one decays sub-linearly in its output.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcsched/matrix.hpp"

namespace fcsched {

/// Thrown when an input violates a documented precondition or type invariant.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Static characteristics of one machine. Powers in W, slope in W per slot.
struct MachineSpec {
  double pmax0 = 0.0;
  double pmin = 0.0;
  double slope = 0.0;
  double rul_max = 0.0;

  /// Builds a spec whose slope makes capacity reach zero at rul_max.
  static MachineSpec from_rul(double pmax0, double pmin, double rul_max);

  friend bool operator==(const MachineSpec&, const MachineSpec&) = default;
};

struct FleetInstance {
  std::vector<MachineSpec> machines;
  double slot_hours = 1.0;
  std::optional<std::uint64_t> seed;

  [[nodiscard]] std::size_t size() const { return machines.size(); }

  friend bool operator==(const FleetInstance&, const FleetInstance&) = default;
};

/// Demand sigma(t) in W for t = 0..T.
struct DemandProfile {
  std::vector<double> values;

  [[nodiscard]] std::size_t slots() const { return values.size(); }
  /// Mean demand; zero for an empty profile.
  [[nodiscard]] double mean() const;
  /// True when every entry equals the first one.
  [[nodiscard]] bool is_constant() const;

  friend bool operator==(const DemandProfile&, const DemandProfile&) = default;
};

/// Decision variable: f_j(t), one row per machine.
struct PowerSchedule {
  Matrix f;

  PowerSchedule() = default;
  explicit PowerSchedule(Matrix values) : f(std::move(values)) {}
  PowerSchedule(std::size_t machines, std::size_t slots, double fill = 0.0)
      : f(machines, slots, fill) {}

  [[nodiscard]] std::size_t machines() const { return f.rows(); }
  [[nodiscard]] std::size_t slots() const { return f.cols(); }
  [[nodiscard]] double total(std::size_t t) const;

  friend bool operator==(const PowerSchedule&, const PowerSchedule&) = default;
};

/// Usage-dependent capacity fmax_j(t), one row per machine.
struct FmaxTrajectory {
  Matrix fmax;

  FmaxTrajectory() = default;
  explicit FmaxTrajectory(Matrix values) : fmax(std::move(values)) {}

  [[nodiscard]] std::size_t machines() const { return fmax.rows(); }
  [[nodiscard]] std::size_t slots() const { return fmax.cols(); }

  friend bool operator==(const FmaxTrajectory&, const FmaxTrajectory&) = default;
};

/// Degradation exponents of the capacity recurrence.
struct FmaxParams {
  double mu = 0.2;
  double upsilon = 0.3;
};

void validate(const MachineSpec& spec);
void validate(const FleetInstance& instance);
void validate(const DemandProfile& demand);
void validate(const FmaxParams& params);

/// Throws DomainError unless the schedule is machines x slots for this pair.
void check_dimensions(const PowerSchedule& schedule, const FleetInstance& instance,
                      const DemandProfile& demand);

/// Capacity for the next slot after delivering prev_f with capacity prev_fmax.
double fmax_step(double prev_fmax, double prev_f, const MachineSpec& spec,
                 const FmaxParams& params);

/// fmax trajectory induced by a schedule; row j starts at pmax0_j.
FmaxTrajectory roll_fmax(const PowerSchedule& schedule, const FleetInstance& instance,
                         const FmaxParams& params);

struct Violation {
  enum class Kind { kNegative, kAboveFmax, kFmaxIncreasing };
  Kind kind;
  std::size_t machine;  // 0-based; reported 1-based
  std::size_t slot;
  double magnitude;     // amount by which the bound is exceeded, in W
};

std::string to_string(Violation::Kind kind);

struct FeasibilityReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool feasible() const { return violations.empty(); }
};

/// Checks 0 <= f_j(t) <= fmax_j(t) * (1 + tol) against roll_fmax(schedule).
FeasibilityReport check_feasibility(const PowerSchedule& schedule, const FleetInstance& instance,
                                    const FmaxParams& params, double tol = 1e-9);

}  // namespace fcsched
