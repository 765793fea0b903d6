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

// Values printed by tests/oracles/brute_force_oracle.py. Do not edit by hand.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace fcsched::testdata {

inline constexpr double kFmaxStep10At32 = 9.717157287525382;   // pmax0=10, rul=20, f=32
inline constexpr double kFmaxAfterOneSlot = 9.800473768503112;  // pmax0=10, rul=20, f=10
inline constexpr std::size_t kGreedySingleHorizon = 155;         // pmax0=10, rul=100, sigma=5

struct OracleCase {
  const char* name;
  std::vector<double> pmax0;
  std::vector<double> rul;
  double sigma;
  std::size_t levels;
  std::size_t horizon;
  std::size_t expected;
  std::size_t upper_bound;
};

inline std::vector<OracleCase> oracle_cases() {
  return {
      {"single_low_demand", {10.0}, {100.0}, 5.0, 3, 50, 51, 120},
      {"single_high_demand", {10.0}, {100.0}, 9.0, 3, 50, 26, 66},
      {"single_unreachable", {10.0}, {100.0}, 11.0, 3, 50, 0, 54},
      {"pair_heavy_load", {500.0, 480.0}, {20.0, 16.0}, 600.0, 3, 50, 7, 17},
      {"pair_on_off", {500.0, 450.0}, {12.0, 10.0}, 500.0, 2, 50, 5, 12},
      {"pair_near_full", {520.0, 490.0}, {30.0, 25.0}, 700.0, 3, 50, 8, 23},
      {"pair_shared_load", {500.0, 500.0}, {10.0, 12.0}, 400.0, 3, 50, 8, 16},
  };
}

// Low-power fleets where the energy bound does not hold.
inline std::vector<OracleCase> small_power_cases() {
  return {
      {"small_pair_two_levels", {10.0, 8.0}, {15.0, 12.0}, 8.0, 2, 50, 26, 18},
      {"small_pair_tight", {10.0, 8.0}, {20.0, 16.0}, 12.0, 3, 10, 11, 16},
  };
}

}  // namespace fcsched::testdata
