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

// Entropic Mirror Prox on a penalized objective
//
//   lambda_dem * h_dem(F) + lambda_slope * h_slope(F) + anchor term
//
// with exponential penalties for unmet demand and for departures from the
// capacity recurrence. Penalties are evaluated on x = F / power_unit; all
// gradients below are with respect to x. The multiplicative update
// x' = x * exp(-lambda * G) does not depend on the unit, only G does.

#pragma once

#include <cstddef>
#include <stdexcept>

#include "fcsched/fleet.hpp"
#include "fcsched/solve_result.hpp"

namespace fcsched {

/// Raised when a gradient entry is NaN or infinite.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How each iterate is made feasible after the double step.
enum class Enforcement {
  /// Roll fmax from the iterate, then clip.
  kClip,
  /// Slot-by-slot capacity update, clip and demand projection in one pass.
  kForwardRepair,
};

struct MirrorProxConfig {
  double lambda_step = 1e-2;
  double lambda_dem = 100.0;
  double lambda_slope = 100.0;
  double gamma = 100.0;
  double delta = 100.0;
  double mu_prime = 0.2;
  double upsilon_prime = 0.3;
  double w_grad = 1.0;
  double epsilon_factor = 0.1;
  int max_iters = 50000;
  double f_floor = 1e-8;
  /// Watts per working unit.
  double power_unit = 1000.0;
  bool clip_midpoint = true;
  Enforcement enforcement = Enforcement::kForwardRepair;
  FmaxParams fmax_params;
  TimeBudget time_budget;

  /// Watt units, lambda_step 5e-5, mu' = upsilon' = 1, clip enforcement and
  /// no midpoint clip. Kept for comparison; it stalls at the floor on
  /// watt-scale fleets.
  static MirrorProxConfig watt_scale();
};

void validate(const MirrorProxConfig& cfg);

struct ProxState {
  PowerSchedule f_current;
  PowerSchedule f_mid;
  FmaxTrajectory fmax;
  int iteration = 0;
};

/// Initial state: every entry at f_floor, fmax rolled from it.
ProxState initial_state(const FleetInstance& instance, std::size_t slots,
                        const MirrorProxConfig& cfg);

double h_dem(const PowerSchedule& schedule, const DemandProfile& demand,
             const MirrorProxConfig& cfg);
double h_slope(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
               const FleetInstance& instance, const MirrorProxConfig& cfg);

/// lambda_dem * h_dem + lambda_slope * h_slope.
double penalty_objective(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                         const DemandProfile& demand, const FleetInstance& instance,
                         const MirrorProxConfig& cfg);

Matrix grad_h_dem(const PowerSchedule& schedule, const DemandProfile& demand,
                  const MirrorProxConfig& cfg);
Matrix grad_h_slope(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                    const FleetInstance& instance, const MirrorProxConfig& cfg);

/// lambda_dem * grad_h_dem + lambda_slope * grad_h_slope. Throws
/// NumericalError naming the first non-finite entry.
Matrix penalty_gradient(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                        const DemandProfile& demand, const FleetInstance& instance,
                        const MirrorProxConfig& cfg);

/// ln(f) + 1 entrywise, f clamped to f_floor first.
Matrix mirror_grad(const PowerSchedule& schedule, double f_floor = 1e-8);
/// exp(d - 1) entrywise with d capped at 700, floored at f_floor.
PowerSchedule mirror_inv(const Matrix& dual, double f_floor = 1e-8);

/// project_onto_demand with delta_t = 1.
PowerSchedule demand_anchor(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                            const DemandProfile& demand);

/// One extragradient double step followed by feasibility enforcement.
ProxState mp_iteration(const ProxState& state, const FleetInstance& instance,
                       const DemandProfile& demand, const MirrorProxConfig& cfg);

/// Stops when both the step length ||F_new - F||_2 / lambda_step and the
/// anchor gap ||F - F_proj||_2 fall below epsilon_factor * mean(demand).
SolveResult solve_mirror_prox(const FleetInstance& instance, const DemandProfile& demand,
                              const MirrorProxConfig& cfg);

}  // namespace fcsched
