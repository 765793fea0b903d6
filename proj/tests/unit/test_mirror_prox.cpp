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

#include <doctest.h>

#include <cmath>
#include <random>

#include "fcsched/evaluation.hpp"
#include "fcsched/instance_gen.hpp"
#include "fcsched/mirror_prox.hpp"
#include "fcsched/projection.hpp"
#include "support.hpp"

using namespace fcsched;
using fcsched::testing::constant;
using fcsched::testing::fleet;
using fcsched::testing::rel_diff;
using fcsched::testing::schedule;

namespace {

MirrorProxConfig unit_watts() {
  MirrorProxConfig cfg;
  cfg.power_unit = 1.0;
  return cfg;
}

// Watt units with sharpness scaled down so the exponentials stay finite.
MirrorProxConfig unit_watts_soft() {
  MirrorProxConfig cfg = unit_watts();
  cfg.gamma = 0.1;
  cfg.delta = 0.1;
  return cfg;
}

// Central differences of the penalized objective, fmax frozen, step 1e-6 in
// working units.
Matrix finite_difference(const PowerSchedule& f, const FmaxTrajectory& fmax,
                         const DemandProfile& d, const FleetInstance& inst,
                         const MirrorProxConfig& cfg) {
  const double h = 1e-6;
  Matrix out(f.machines(), f.slots());
  for (std::size_t j = 0; j < f.machines(); ++j) {
    for (std::size_t t = 0; t < f.slots(); ++t) {
      PowerSchedule up = f, down = f;
      up.f(j, t) += h * cfg.power_unit;
      down.f(j, t) -= h * cfg.power_unit;
      out(j, t) = (penalty_objective(up, fmax, d, inst, cfg) -
                   penalty_objective(down, fmax, d, inst, cfg)) /
                  (2.0 * h);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("h_dem") {
  const auto cfg = unit_watts();
  CHECK(h_dem(schedule({{2.0, 3.0}, {1.0, 1.0}}), DemandProfile{{3.0, 4.0}}, cfg) ==
        doctest::Approx(1.0));
  CHECK(h_dem(schedule({{5.0 + std::log(2.0) / 100.0}}), constant(5.0, 1), cfg) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h_dem(schedule({{4.99}}), constant(5.0, 1), cfg) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  // Saturated exponent stays finite.
  CHECK(std::isfinite(h_dem(schedule({{0.0}}), constant(1e6, 1), cfg)));
}

TEST_CASE("h_slope") {
  auto cfg = unit_watts();
  cfg.mu_prime = 1.0;
  cfg.upsilon_prime = 1.0;
  const auto inst = fleet({10.0, 8.0}, {20.0, 16.0});
  SUBCASE("recurrence satisfied exactly") {
    FmaxParams exact{1.0, 1.0};
    const auto f = schedule({{1.0, 2.0, 0.5}, {0.5, 0.25, 1.0}});
    CHECK(h_slope(f, roll_fmax(f, inst, exact), inst, cfg) == doctest::Approx(4.0));
  }
  SUBCASE("idle fleet") {
    const PowerSchedule f(2, 4);
    CHECK(h_slope(f, roll_fmax(f, inst, {}), inst, cfg) == doctest::Approx(6.0));
  }
  SUBCASE("single violation") {
    const auto one = fleet({10.0}, {20.0});
    const PowerSchedule f(1, 2);
    const FmaxTrajectory fmax(schedule({{10.0, 10.01}}).f);
    CHECK(h_slope(f, fmax, one, cfg) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  }
}

TEST_CASE("gradient structure") {
  auto cfg = unit_watts();
  const auto f = schedule({{1.0, 2.0, 3.0}, {2.0, 1.0, 0.5}, {0.1, 0.2, 0.3}});
  const auto d = DemandProfile{{3.1, 2.0, 3.8}};
  const Matrix g = grad_h_dem(f, d, cfg);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(g(0, t) == g(1, t));
    CHECK(g(1, t) == g(2, t));
  }
  CHECK(g(0, 0) == doctest::Approx(-100.0 / 3.0));

  const auto inst = fleet({10.0, 8.0, 6.0}, {20.0, 16.0, 12.0});
  cfg.mu_prime = 1.0;
  cfg.upsilon_prime = 1.0;
  FmaxParams exact{1.0, 1.0};
  const Matrix s = grad_h_slope(f, roll_fmax(f, inst, exact), inst, cfg);
  for (std::size_t j = 0; j < 3; ++j) {
    // Zero exponent: -delta * mu' * a_j, positive since a_j < 0.
    CHECK(s(j, 0) == doctest::Approx(-100.0 * inst.machines[j].slope));
    CHECK(s(j, 0) > 0.0);
    CHECK(s(j, 2) == 0.0);
  }
}

TEST_CASE("gradients match central finite differences") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + trial % 3;
    const std::size_t n = 2 + trial % 4;
    GeneratorConfig gen;
    gen.machines = m;
    gen.seed = 100 + trial;
    const auto inst = generate_fleet(gen);
    PowerSchedule f(m, n);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t t = 0; t < n; ++t) f.f(j, t) = 1.0 + unit(rng) * (inst.machines[j].pmax0 - 1.0);
    DemandProfile d{std::vector<double>(n)};
    for (std::size_t t = 0; t < n; ++t) d.values[t] = f.total(t) + (unit(rng) - 0.5) * 40.0;
    const auto fmax = roll_fmax(f, inst, {});
    for (const auto& cfg : {MirrorProxConfig{}, unit_watts_soft()}) {
      if (cfg.power_unit == 1.0 && trial % 2 == 1) continue;
      const Matrix g = penalty_gradient(f, fmax, d, inst, cfg);
      const Matrix fd = finite_difference(f, fmax, d, inst, cfg);
      for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(rel_diff(g.values()[i], fd.values()[i]) < 1e-5);
    }
  }
}

TEST_CASE("mirror map") {
  CHECK(mirror_grad(schedule({{1.0}}))(0, 0) == 1.0);
  CHECK(mirror_grad(schedule({{std::exp(1.0)}}))(0, 0) == doctest::Approx(2.0));
  CHECK(mirror_grad(schedule({{0.0}}))(0, 0) == doctest::Approx(std::log(1e-8) + 1.0));
  CHECK(mirror_inv(Matrix(1, 1, 1.0)).f(0, 0) == 1.0);
  CHECK(mirror_inv(Matrix(1, 1, 2.0)).f(0, 0) == doctest::Approx(std::exp(1.0)));
  CHECK(mirror_inv(Matrix(1, 1, std::log(0.5) + 1.0)).f(0, 0) == doctest::Approx(0.5));
  CHECK(std::isfinite(mirror_inv(Matrix(1, 1, 1e6)).f(0, 0)));
  CHECK(mirror_inv(Matrix(1, 1, -1e6)).f(0, 0) == 1e-8);
  const auto f = schedule({{1e-3, 0.7, 12.0, 480.0}});
  const auto back = mirror_inv(mirror_grad(f));
  for (std::size_t t = 0; t < 4; ++t) CHECK(rel_diff(back.f(0, t), f.f(0, t)) < 1e-12);
}

TEST_CASE("demand anchor") {
  const auto fmax = FmaxTrajectory(Matrix(2, 3, 10.0));
  const auto met = schedule({{3.0, 3.0, 3.0}, {2.0, 2.0, 2.0}});
  CHECK(demand_anchor(met, fmax, constant(5.0, 3)) == met);
  CHECK(demand_anchor(met, fmax, constant(0.0, 3)) == met);
  const auto short_at_1 = schedule({{3.0, 1.0, 3.0}, {2.0, 2.0, 2.0}});
  const auto proj = demand_anchor(short_at_1, fmax, constant(5.0, 3));
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t t = 0; t < 3; ++t)
      if (!(j == 1 && t == 1)) CHECK(proj.f(j, t) == short_at_1.f(j, t));
  // Machine 2 has the smaller headroom (8 vs 9) and takes the increment.
  CHECK(proj.f(1, 1) == 4.0);
}

TEST_CASE("mp_iteration by hand") {
  MirrorProxConfig cfg = MirrorProxConfig::watt_scale();
  cfg.lambda_step = 1e-3;
  cfg.lambda_dem = cfg.lambda_slope = 1.0;
  cfg.gamma = cfg.delta = 1.0;
  cfg.w_grad = 0.0;
  const auto inst = fleet({10.0}, {20.0});
  const double a = -0.5;
  ProxState s;
  s.f_current = schedule({{2.0, 3.0}});
  s.fmax = roll_fmax(s.f_current, inst, cfg.fmax_params);
  const DemandProfile d{{4.0, 4.0}};

  const double c0 = s.fmax.fmax(0, 0), c1 = s.fmax.fmax(0, 1);
  auto grad = [&](double x0, double x1) {
    const double g0 = -0.5 * std::exp(-(x0 - 4.0)) - a * std::exp(c1 - c0 - a * x0);
    const double g1 = -0.5 * std::exp(-(x1 - 4.0));
    return std::pair{g0, g1};
  };
  const auto [g0, g1] = grad(2.0, 3.0);
  const double y0 = std::exp(std::log(2.0) + 1.0 - 1e-3 * g0 - 1.0);
  const double y1 = std::exp(std::log(3.0) + 1.0 - 1e-3 * g1 - 1.0);
  const auto [h0, h1] = grad(y0, y1);
  const double x0 = std::exp(std::log(2.0) - 1e-3 * h0);
  const double x1 = std::exp(std::log(3.0) - 1e-3 * h1);

  const ProxState next = mp_iteration(s, inst, d, cfg);
  CHECK(next.iteration == 1);
  CHECK(rel_diff(next.f_mid.f(0, 0), y0) < 1e-12);
  CHECK(rel_diff(next.f_mid.f(0, 1), y1) < 1e-12);
  CHECK(rel_diff(next.f_current.f(0, 0), x0) < 1e-12);
  CHECK(rel_diff(next.f_current.f(0, 1), x1) < 1e-12);
}

TEST_CASE("zero step only enforces feasibility") {
  MirrorProxConfig cfg;
  cfg.lambda_step = 0.0;
  cfg.enforcement = Enforcement::kClip;
  const auto inst = fleet({10.0, 8.0}, {20.0, 16.0});
  ProxState s;
  s.f_current = schedule({{10.0, 10.0, 1.0}, {2.0, 2.0, 2.0}});
  s.fmax = roll_fmax(s.f_current, inst, cfg.fmax_params);
  const auto next = mp_iteration(s, inst, constant(9.0, 3), cfg);
  const auto expected = clip_to_fmax(s.f_current, roll_fmax(s.f_current, inst, cfg.fmax_params));
  CHECK(next.f_current == expected);
}

TEST_CASE("non-finite gradient is reported") {
  MirrorProxConfig cfg = unit_watts();
  cfg.gamma = 1e10;
  const auto inst = fleet({10.0}, {20.0});
  const auto f = schedule({{1.0, 1.0}});
  CHECK_THROWS_AS(penalty_gradient(f, roll_fmax(f, inst, {}), constant(9.0, 2), inst, cfg),
                  NumericalError);
}

TEST_CASE("config validation") {
  MirrorProxConfig cfg;
  cfg.f_floor = 0.0;
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = {};
  cfg.power_unit = -1.0;
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = {};
  cfg.lambda_step = -1.0;
  CHECK_THROWS_AS(validate(cfg), DomainError);
  CHECK_NOTHROW(validate(MirrorProxConfig::watt_scale()));
}

TEST_CASE("solve_mirror_prox") {
  SUBCASE("zero demand") {
    const auto inst = fleet({500.0, 480.0}, {1500.0, 1300.0});
    const auto r = solve_mirror_prox(inst, constant(0.0, 20), {});
    CHECK(r.iterations == 1);
    CHECK(r.stop_reason == StopReason::kConverged);
    for (double v : r.schedule.f.values()) CHECK(v == 1e-8);
  }
  const auto inst = generate_fleet(GeneratorConfig{3, 5});
  const double sigma = 0.4 * nominal_total(inst);
  const std::size_t ub = upper_bound(inst, sigma);
  const auto demand = constant(sigma, decision_horizon(ub) + 1);
  SUBCASE("small fleet beats projections and stays feasible") {
    const auto mp = solve_mirror_prox(inst, demand, {});
    const auto pr = solve_projections(inst, demand, {});
    CHECK(mp.stop_reason == StopReason::kConverged);
    CHECK(check_feasibility(mp.schedule, inst, {}, 1e-9).feasible());
    CHECK(mp.fmax == roll_fmax(mp.schedule, inst, {}));
    const std::size_t h_mp = production_horizon(mp.schedule, demand);
    CHECK(h_mp > production_horizon(pr.schedule, demand));
    CHECK(h_mp <= ub);
    CHECK_FALSE(mp.objective_trace.empty());
    CHECK(mp.objective_trace.size() <= 1000);
    CHECK(mp.objective_trace.back().iteration == mp.iterations);

    // Demand penalty over the last 10% of iterations: no rise beyond 1%.
    const int from = mp.iterations - mp.iterations / 10;
    double lowest = 0.0;
    bool seen = false;
    for (const auto& p : mp.objective_trace) {
      if (p.iteration < from) continue;
      if (seen) CHECK(p.demand <= lowest * 1.01 + 1e-12);
      lowest = seen ? std::min(lowest, p.demand) : p.demand;
      seen = true;
    }
  }
  SUBCASE("deterministic") {
    MirrorProxConfig cfg;
    cfg.max_iters = 50;
    const auto a = solve_mirror_prox(inst, demand, cfg);
    const auto b = solve_mirror_prox(inst, demand, cfg);
    CHECK(a.schedule == b.schedule);
    CHECK(a.iterations == b.iterations);
    CHECK(a.stop_reason == StopReason::kMaxIterations);
  }
  SUBCASE("time budget") {
    MirrorProxConfig cfg;
    cfg.time_budget = std::chrono::duration<double>(1e-9);
    const auto r = solve_mirror_prox(inst, demand, cfg);
    CHECK(r.stop_reason == StopReason::kTimeout);
    CHECK(r.iterations == 1);
    CHECK(check_feasibility(r.schedule, inst, {}, 1e-9).feasible());
  }
  SUBCASE("watt-scale preset stalls at the floor") {
    MirrorProxConfig cfg = MirrorProxConfig::watt_scale();
    cfg.max_iters = 200;
    const auto r = solve_mirror_prox(inst, demand, cfg);
    CHECK(production_horizon(r.schedule, demand) == 0);
    CHECK(check_feasibility(r.schedule, inst, {}, 1e-9).feasible());
  }
}
