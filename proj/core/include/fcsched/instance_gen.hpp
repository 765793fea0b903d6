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

#pragma once

#include <cstddef>
#include <cstdint>

#include "fcsched/fleet.hpp"

namespace fcsched {

/// Random fleet parameters. Each machine draws rul_max then pmax0, uniformly
/// within center * (1 +/- spread), from a std::mt19937_64 seeded with `seed`.
/// Uniform variates use the top 53 bits of each 64-bit output, so instances
/// are bit-identical across standard libraries.
struct GeneratorConfig {
  std::size_t machines = 25;
  std::uint64_t seed = 0;
  double rul_center = 1500.0;
  double rul_spread = 0.20;
  double pmax_center = 500.0;
  double pmax_spread = 0.05;
  double pmin_ratio = 0.15;
  double pnom_ratio = 0.75;
};

/// Demand as a fraction of the fleet's nominal power.
struct LoadFactor {
  double alpha = 0.4;
};

void validate(const GeneratorConfig& cfg);

FleetInstance generate_fleet(const GeneratorConfig& cfg);

/// Sum over machines of pnom_ratio * pmax0.
double nominal_total(const FleetInstance& instance, double pnom_ratio = 0.75);

/// sigma(t) = alpha * nominal_total(instance, 0.75) for t = 0..horizon.
DemandProfile constant_demand(const FleetInstance& instance, LoadFactor alpha,
                              std::size_t horizon);

}  // namespace fcsched
