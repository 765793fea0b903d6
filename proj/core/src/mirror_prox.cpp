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

#include "fcsched/mirror_prox.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fcsched/projection.hpp"

namespace fcsched {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kExpCap = 700.0;
constexpr std::size_t kTraceLimit = 1000;
// Initial sampling period of the objective trace, in iterations.
constexpr int kTraceStride = 16;

double capped_exp(double arg) { return std::exp(std::min(arg, kExpCap)); }

void check_slots(const PowerSchedule& schedule, const DemandProfile& demand) {
  if (schedule.slots() != demand.slots())
    throw DomainError(fmt::format("schedule has {} slots, demand has {}", schedule.slots(),
                                  demand.slots()));
}

void check_fmax(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                const FleetInstance& instance) {
  if (!schedule.f.same_shape(fmax.fmax) || schedule.machines() != instance.size())
    throw DomainError("schedule, fmax and fleet dimensions differ");
}

// exp(-gamma * residual(t)) in working units, per slot.
template <typename Fn>
void for_each_demand_term(const PowerSchedule& schedule, const DemandProfile& demand,
                          const MirrorProxConfig& cfg, Fn&& fn) {
  const double unit = cfg.power_unit;
  for (std::size_t t = 0; t < schedule.slots(); ++t) {
    const double residual = (schedule.total(t) - demand.values[t]) / unit;
    fn(t, capped_exp(-cfg.gamma * residual));
  }
}

// Slope term for machine j between slots t-1 and t, with its x^upsilon' and
// the exponential factor.
struct SlopeTerm {
  double x;
  double x_pow;
  double weight;
};

template <typename Fn>
void for_each_slope_term(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                         const FleetInstance& instance, const MirrorProxConfig& cfg, Fn&& fn) {
  const double unit = cfg.power_unit;
  for (std::size_t j = 0; j < schedule.machines(); ++j) {
    const double a = instance.machines[j].slope / unit;
    const auto frow = schedule.f.row(j);
    const auto crow = fmax.fmax.row(j);
    for (std::size_t t = 1; t < schedule.slots(); ++t) {
      const double x = frow[t - 1] / unit;
      const double x_pow = std::pow(x, cfg.upsilon_prime);
      const double drop = (crow[t] - crow[t - 1]) / unit;
      fn(j, t, SlopeTerm{x, x_pow, capped_exp(cfg.delta * (drop - cfg.mu_prime * a * x_pow))});
    }
  }
}

// F * exp(-lambda G), i.e. mirror_inv(mirror_grad(F) - lambda G) without the
// log/exp round trip.
PowerSchedule dual_step(const PowerSchedule& f, const Matrix& grad, double lambda,
                        double floor) {
  PowerSchedule out = f;
  auto v = out.f.values();
  const auto g = grad.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::max(v[i] * capped_exp(-lambda * g[i]), floor);
  return out;
}

void add_anchor(Matrix& grad, const PowerSchedule& f, const PowerSchedule& f_proj,
                const MirrorProxConfig& cfg) {
  if (cfg.w_grad == 0.0) return;
  auto g = grad.values();
  const auto fv = f.f.values();
  const auto pv = f_proj.f.values();
  const double scale = cfg.w_grad / cfg.power_unit;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * (fv[i] - pv[i]);
}

void floor_and_cap(PowerSchedule& f, const FmaxTrajectory& fmax, double floor) {
  auto v = f.f.values();
  const auto c = fmax.fmax.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(std::min(v[i], c[i]), floor);
}

void record_trace(std::vector<ObjectivePoint>& trace, int& stride, const ProxState& state,
                  const FleetInstance& instance, const DemandProfile& demand,
                  const MirrorProxConfig& cfg) {
  if (state.iteration % stride != 0) return;
  trace.push_back({state.iteration, cfg.lambda_dem * h_dem(state.f_current, demand, cfg),
                   cfg.lambda_slope * h_slope(state.f_current, state.fmax, instance, cfg)});
  if (trace.size() < kTraceLimit) return;
  // Keep every other sample and halve the sampling rate from here on.
  std::size_t kept = 0;
  for (std::size_t i = 1; i < trace.size(); i += 2) trace[kept++] = trace[i];
  trace.resize(kept);
  stride *= 2;
}

}  // namespace

MirrorProxConfig MirrorProxConfig::watt_scale() {
  MirrorProxConfig cfg;
  cfg.lambda_step = 5e-5;
  cfg.mu_prime = 1.0;
  cfg.upsilon_prime = 1.0;
  cfg.power_unit = 1.0;
  cfg.clip_midpoint = false;
  cfg.enforcement = Enforcement::kClip;
  return cfg;
}

void validate(const MirrorProxConfig& cfg) {
  if (!(cfg.lambda_step >= 0.0)) throw DomainError("lambda_step must be >= 0");
  if (!(cfg.lambda_dem > 0.0) || !(cfg.lambda_slope > 0.0))
    throw DomainError("penalty weights must be positive");
  if (!(cfg.gamma > 0.0) || !(cfg.delta > 0.0))
    throw DomainError("gamma and delta must be positive");
  if (!(cfg.mu_prime > 0.0) || !(cfg.upsilon_prime > 0.0))
    throw DomainError("mu' and upsilon' must be positive");
  if (!(cfg.w_grad >= 0.0)) throw DomainError("w_grad must be >= 0");
  if (!(cfg.epsilon_factor > 0.0)) throw DomainError("epsilon_factor must be positive");
  if (cfg.max_iters < 1) throw DomainError("max_iters must be at least 1");
  if (!(cfg.f_floor > 0.0)) throw DomainError("f_floor must be positive");
  if (!(cfg.power_unit > 0.0) || !std::isfinite(cfg.power_unit))
    throw DomainError("power_unit must be positive");
  validate(cfg.fmax_params);
}

ProxState initial_state(const FleetInstance& instance, std::size_t slots,
                        const MirrorProxConfig& cfg) {
  ProxState state;
  state.f_current = PowerSchedule(instance.size(), slots, cfg.f_floor);
  state.f_mid = state.f_current;
  state.fmax = roll_fmax(state.f_current, instance, cfg.fmax_params);
  return state;
}

double h_dem(const PowerSchedule& schedule, const DemandProfile& demand,
             const MirrorProxConfig& cfg) {
  check_slots(schedule, demand);
  long double sum = 0.0L;
  for_each_demand_term(schedule, demand, cfg, [&](std::size_t, double e) { sum += e; });
  return static_cast<double>(sum / static_cast<long double>(schedule.slots()));
}

double h_slope(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
               const FleetInstance& instance, const MirrorProxConfig& cfg) {
  check_fmax(schedule, fmax, instance);
  long double sum = 0.0L;
  for_each_slope_term(schedule, fmax, instance, cfg,
                      [&](std::size_t, std::size_t, const SlopeTerm& term) { sum += term.weight; });
  return static_cast<double>(sum);
}

double penalty_objective(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                         const DemandProfile& demand, const FleetInstance& instance,
                         const MirrorProxConfig& cfg) {
  const long double dem = h_dem(schedule, demand, cfg);
  const long double slope = h_slope(schedule, fmax, instance, cfg);
  return static_cast<double>(cfg.lambda_dem * dem + cfg.lambda_slope * slope);
}

Matrix grad_h_dem(const PowerSchedule& schedule, const DemandProfile& demand,
                  const MirrorProxConfig& cfg) {
  check_slots(schedule, demand);
  Matrix grad(schedule.machines(), schedule.slots());
  const double coeff = -cfg.gamma / static_cast<double>(schedule.slots());
  for_each_demand_term(schedule, demand, cfg, [&](std::size_t t, double e) {
    for (std::size_t j = 0; j < grad.rows(); ++j) grad(j, t) = coeff * e;
  });
  return grad;
}

Matrix grad_h_slope(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                    const FleetInstance& instance, const MirrorProxConfig& cfg) {
  check_fmax(schedule, fmax, instance);
  Matrix grad(schedule.machines(), schedule.slots());
  const double floor = cfg.f_floor / cfg.power_unit;
  const double up = cfg.upsilon_prime;
  for_each_slope_term(schedule, fmax, instance, cfg,
                      [&](std::size_t j, std::size_t t, const SlopeTerm& term) {
                        const double a = instance.machines[j].slope / cfg.power_unit;
                        // x^(up-1) from the power already computed when x is above the floor.
                        const double factor = up == 1.0 ? 1.0
                                              : term.x >= floor && term.x > 0.0
                                                  ? term.x_pow / term.x
                                                  : std::pow(floor, up - 1.0);
                        grad(j, t - 1) = -cfg.delta * cfg.mu_prime * up * a * factor * term.weight;
                      });
  return grad;
}

Matrix penalty_gradient(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                        const DemandProfile& demand, const FleetInstance& instance,
                        const MirrorProxConfig& cfg) {
  Matrix grad = grad_h_dem(schedule, demand, cfg);
  const Matrix slope = grad_h_slope(schedule, fmax, instance, cfg);
  for (std::size_t j = 0; j < grad.rows(); ++j) {
    for (std::size_t t = 0; t < grad.cols(); ++t) {
      double& g = grad(j, t);
      g = cfg.lambda_dem * g + cfg.lambda_slope * slope(j, t);
      if (!std::isfinite(g))
        throw NumericalError(fmt::format("non-finite gradient at machine {}, slot {} (f = {})",
                                         j + 1, t, schedule.f(j, t)));
    }
  }
  return grad;
}

Matrix mirror_grad(const PowerSchedule& schedule, double f_floor) {
  Matrix out = schedule.f;
  for (double& v : out.values()) v = std::log(std::max(v, f_floor)) + 1.0;
  return out;
}

PowerSchedule mirror_inv(const Matrix& dual, double f_floor) {
  PowerSchedule out{dual};
  for (double& v : out.f.values()) {
    if (!std::isfinite(v) && !(v < 0.0)) throw NumericalError("mirror_inv: non-finite dual entry");
    v = std::max(std::exp(std::min(v, kExpCap) - 1.0), f_floor);
  }
  return out;
}

PowerSchedule demand_anchor(const PowerSchedule& schedule, const FmaxTrajectory& fmax,
                            const DemandProfile& demand) {
  return project_onto_demand(schedule, fmax, demand, 1);
}

ProxState mp_iteration(const ProxState& state, const FleetInstance& instance,
                       const DemandProfile& demand, const MirrorProxConfig& cfg) {
  const PowerSchedule& f = state.f_current;
  const PowerSchedule f_proj = demand_anchor(f, state.fmax, demand);

  Matrix g1 = penalty_gradient(f, state.fmax, demand, instance, cfg);
  add_anchor(g1, f, f_proj, cfg);
  ProxState next;
  next.f_mid = dual_step(f, g1, cfg.lambda_step, cfg.f_floor);
  if (cfg.clip_midpoint) floor_and_cap(next.f_mid, state.fmax, cfg.f_floor);

  Matrix g2 = penalty_gradient(next.f_mid, state.fmax, demand, instance, cfg);
  add_anchor(g2, f, f_proj, cfg);
  PowerSchedule stepped = dual_step(f, g2, cfg.lambda_step, cfg.f_floor);

  if (cfg.enforcement == Enforcement::kForwardRepair) {
    auto repaired = repair_forward(stepped, instance, demand, cfg.fmax_params, cfg.f_floor);
    next.f_current = std::move(repaired.schedule);
    next.fmax = std::move(repaired.fmax);
  } else {
    next.fmax = roll_fmax(stepped, instance, cfg.fmax_params);
    floor_and_cap(stepped, next.fmax, cfg.f_floor);
    next.f_current = std::move(stepped);
  }
  next.iteration = state.iteration + 1;
  return next;
}

SolveResult solve_mirror_prox(const FleetInstance& instance, const DemandProfile& demand,
                              const MirrorProxConfig& cfg) {
  const auto started = Clock::now();
  validate(instance);
  validate(demand);
  validate(cfg);

  ProxState state = initial_state(instance, demand.slots(), cfg);
  SolveResult result;
  result.stop_reason = StopReason::kMaxIterations;
  int stride = kTraceStride;

  const bool no_demand =
      std::all_of(demand.values.begin(), demand.values.end(), [](double v) { return v == 0.0; });
  if (no_demand) {
    // The floor schedule already meets a zero demand.
    state.iteration = 1;
    result.stop_reason = StopReason::kConverged;
  }

  const double eps = cfg.epsilon_factor * demand.mean();
  while (!no_demand && state.iteration < cfg.max_iters) {
    ProxState next = mp_iteration(state, instance, demand, cfg);
    const double moved = distance_l2(next.f_current.f, state.f_current.f);
    const double stationarity = moved == 0.0 ? 0.0
                                : cfg.lambda_step > 0.0
                                    ? moved / cfg.lambda_step
                                    : std::numeric_limits<double>::infinity();
    const double gap =
        distance_l2(next.f_current.f, demand_anchor(next.f_current, next.fmax, demand).f);
    state = std::move(next);
    record_trace(result.objective_trace, stride, state, instance, demand, cfg);
    result.final_gap = std::max(stationarity, gap);
    if (stationarity < eps && gap < eps) {
      result.stop_reason = StopReason::kConverged;
      break;
    }
    if (cfg.time_budget && Clock::now() - started > *cfg.time_budget) {
      result.stop_reason = StopReason::kTimeout;
      break;
    }
  }

  if (result.objective_trace.empty() || result.objective_trace.back().iteration != state.iteration)
    result.objective_trace.push_back(
        {state.iteration, cfg.lambda_dem * h_dem(state.f_current, demand, cfg),
         cfg.lambda_slope * h_slope(state.f_current, state.fmax, instance, cfg)});
  if (result.objective_trace.size() > kTraceLimit)
    result.objective_trace.erase(result.objective_trace.begin());

  // Drop the floor where capacity is exhausted; less usage leaves the
  // rolled capacity at least as high, so the result stays feasible.
  result.schedule = clip_to_fmax(state.f_current, state.fmax);
  result.fmax = roll_fmax(result.schedule, instance, cfg.fmax_params);
  result.iterations = state.iteration;
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - started).count();
  return result;
}

}  // namespace fcsched
