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

#include "fcsched/evaluation.hpp"
#include "fcsched/instance_gen.hpp"
#include "fcsched/projection.hpp"
#include "oracle_constants.hpp"
#include "support.hpp"

using namespace fcsched;
using fcsched::testing::constant;
using fcsched::testing::fleet;
using fcsched::testing::schedule;

TEST_CASE("select_machine") {
  const std::vector<double> fmax{5.0, 8.0, 3.0};
  const std::vector<double> f{5.0, 6.0, 1.0};
  CHECK(select_machine(f, fmax) == std::optional<std::size_t>{1});
  CHECK_FALSE(select_machine(fmax, fmax).has_value());
  const std::vector<double> cap{10.0};
  const std::vector<double> zero{0.0};
  CHECK(select_machine(zero, cap) == std::optional<std::size_t>{0});
  CHECK_THROWS_AS(select_machine(zero, fmax), DomainError);
}

TEST_CASE("project_onto_demand") {
  SUBCASE("two machines meet demand") {
    const auto out = project_onto_demand(schedule({{4.0}, {3.0}}),
                                         FmaxTrajectory(schedule({{9.0}, {5.0}}).f),
                                         constant(10.0, 1));
    CHECK(out.f(0, 0) == 5.0);
    CHECK(out.f(1, 0) == 5.0);
  }
  SUBCASE("zero demand is identity") {
    const auto in = schedule({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(project_onto_demand(in, FmaxTrajectory(Matrix(2, 2, 9.0)), constant(0.0, 2)) == in);
  }
  SUBCASE("demand above capacity saturates every machine") {
    const auto out = project_onto_demand(schedule({{1.0}, {0.0}}),
                                         FmaxTrajectory(schedule({{4.0}, {3.0}}).f),
                                         constant(50.0, 1));
    CHECK(out.f(0, 0) == 4.0);
    CHECK(out.f(1, 0) == 3.0);
  }
  SUBCASE("interval propagation never lowers entries") {
    const auto in = schedule({{6.0, 0.0, 0.0}});
    const auto out =
        project_onto_demand(in, FmaxTrajectory(schedule({{9.0, 8.0, 7.0}}).f), constant(2.0, 3), 3);
    CHECK(out.f(0, 0) == 6.0);
    CHECK(out.f(0, 1) == 2.0);
    CHECK(out.f(0, 2) == 2.0);
  }
}

TEST_CASE("project_onto_demand properties on random inputs") {
  const auto inst = generate_fleet(GeneratorConfig{4, 11});
  for (std::size_t dt : {1u, 3u, 7u}) {
    PowerSchedule f(4, 30);
    for (std::size_t i = 0; i < f.f.size(); ++i)
      f.f.values()[i] = 40.0 * static_cast<double>((i * 37) % 11);
    const auto fmax = roll_fmax(f, inst, {});
    const auto out = project_onto_demand(f, fmax, constant(1200.0, 30), dt);
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t t = 0; t < 30; ++t) {
        CHECK(out.f(j, t) >= f.f(j, t));
        const std::size_t t_end = std::min((t / dt + 1) * dt, std::size_t{30}) - 1;
        if (out.f(j, t) > f.f(j, t)) CHECK(out.f(j, t) <= fmax.fmax(j, t_end));
      }
    }
  }
}

TEST_CASE("clip_to_fmax") {
  const auto fmax = FmaxTrajectory(schedule({{5.0, 5.0}, {2.0, 9.0}}).f);
  CHECK(clip_to_fmax(schedule({{1.0, 2.0}, {2.0, 3.0}}), fmax) == schedule({{1.0, 2.0}, {2.0, 3.0}}));
  CHECK(clip_to_fmax(schedule({{7.0, 2.0}, {2.0, 10.0}}), fmax) == schedule({{5.0, 2.0}, {2.0, 9.0}}));
}

TEST_CASE("repair_forward meets demand while capacity lasts") {
  const auto inst = fleet({500.0, 480.0}, {20.0, 16.0});
  const auto demand = constant(600.0, 12);
  const auto out = repair_forward(PowerSchedule(2, 12), inst, demand, {}, 0.0);
  CHECK(out.fmax == roll_fmax(out.schedule, inst, {}));
  CHECK(check_feasibility(out.schedule, inst, {}).feasible());
  for (std::size_t t = 0; t < 12; ++t) {
    const double cap = out.fmax.fmax(0, t) + out.fmax.fmax(1, t);
    if (cap >= 600.0) CHECK(out.schedule.total(t) == doctest::Approx(600.0));
  }
}

TEST_CASE("solve_projections") {
  SUBCASE("zero demand converges at once") {
    const auto inst = fleet({500.0, 480.0}, {1500.0, 1300.0});
    const auto r = solve_projections(inst, constant(0.0, 10), {});
    CHECK(r.iterations == 1);
    CHECK(r.stop_reason == StopReason::kConverged);
    CHECK(r.schedule == PowerSchedule(2, 10));
  }
  SUBCASE("single machine matches the greedy recurrence") {
    const auto inst = fleet({10.0}, {100.0});
    const auto demand = constant(5.0, 2001);
    const auto r = solve_projections(inst, demand, {});
    CHECK(r.stop_reason == StopReason::kConverged);
    CHECK(production_horizon(r.schedule, demand) == testdata::kGreedySingleHorizon);
    for (std::size_t t = testdata::kGreedySingleHorizon; t < 2001; ++t)
      CHECK(r.fmax.fmax(0, t) < 5.0);
    CHECK(check_feasibility(r.schedule, inst, {}).feasible());
  }
  SUBCASE("generated fleet") {
    const auto c = generate_fleet(GeneratorConfig{5, 3});
    const double sigma = 0.5 * nominal_total(c);
    const auto demand = constant(sigma, decision_horizon(upper_bound(c, sigma)) + 1);
    ProjectionConfig cfg;
    const auto r = solve_projections(c, demand, cfg);
    CHECK(r.stop_reason == StopReason::kConverged);
    CHECK(check_feasibility(r.schedule, c, {}, 1e-9).feasible());
    CHECK(r.fmax == roll_fmax(r.schedule, c, {}));
    const std::size_t h = production_horizon(r.schedule, demand);
    CHECK(h > 0);
    CHECK(h <= upper_bound(c, sigma));
    const double eps = cfg.epsilon_factor * sigma;
    for (std::size_t t = 0; t < h; ++t) CHECK(r.schedule.total(t) >= sigma - eps);

    // One more sweep moves the schedule by less than the threshold.
    auto again = project_onto_demand(r.schedule, r.fmax, demand, 1);
    again = clip_to_fmax(again, roll_fmax(again, c, {}));
    CHECK(distance_max(again.f, r.schedule.f) < eps);
  }
  SUBCASE("coarser intervals") {
    const auto c = generate_fleet(GeneratorConfig{3, 9});
    const auto demand = constant(0.4 * nominal_total(c), 400);
    ProjectionConfig cfg;
    cfg.delta_t = 10;
    const auto r = solve_projections(c, demand, cfg);
    CHECK(check_feasibility(r.schedule, c, {}, 1e-9).feasible());
  }
  SUBCASE("config and init validation") {
    const auto inst = fleet({10.0}, {100.0});
    ProjectionConfig cfg;
    cfg.delta_t = 0;
    CHECK_THROWS_AS(solve_projections(inst, constant(1.0, 3), cfg), DomainError);
    CHECK_THROWS_AS(solve_projections(inst, constant(1.0, 3), {}, schedule({{-1.0, 0.0, 0.0}})),
                    DomainError);
  }
  SUBCASE("iteration cap") {
    const auto c = generate_fleet(GeneratorConfig{3, 9});
    ProjectionConfig cfg;
    cfg.max_iters = 1;
    cfg.epsilon_factor = 1e-12;
    const auto r = solve_projections(c, constant(0.4 * nominal_total(c), 500), cfg);
    CHECK(r.stop_reason == StopReason::kMaxIterations);
    CHECK(r.iterations == 1);
  }
}

TEST_CASE("stop reason names") {
  for (auto s : {StopReason::kConverged, StopReason::kMaxIterations, StopReason::kTimeout})
    CHECK(stop_reason_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(stop_reason_from_string("nope"), DomainError);
}
