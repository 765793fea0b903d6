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

#include "fcsched/instance_gen.hpp"

#include <random>

#include <fmt/format.h>

namespace fcsched {
namespace {

// 53-bit mantissa fill; std::uniform_real_distribution is not portable.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_around(std::mt19937_64& rng, double center, double spread) {
  const double lo = center * (1.0 - spread);
  const double hi = center * (1.0 + spread);
  return lo + (hi - lo) * unit_draw(rng);
}

}  // namespace

void validate(const GeneratorConfig& cfg) {
  if (cfg.machines < 1) throw DomainError("generator needs at least one machine");
  if (!(cfg.rul_center > 0.0) || !(cfg.pmax_center > 0.0))
    throw DomainError("generator centers must be positive");
  if (!(cfg.rul_spread >= 0.0 && cfg.rul_spread < 1.0) ||
      !(cfg.pmax_spread >= 0.0 && cfg.pmax_spread < 1.0))
    throw DomainError("generator spreads must lie in [0, 1)");
  if (!(cfg.pmin_ratio > 0.0 && cfg.pmin_ratio < 1.0) ||
      !(cfg.pnom_ratio > 0.0 && cfg.pnom_ratio < 1.0))
    throw DomainError("generator ratios must lie in (0, 1)");
}

FleetInstance generate_fleet(const GeneratorConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  FleetInstance instance;
  instance.seed = cfg.seed;
  instance.machines.reserve(cfg.machines);
  for (std::size_t j = 0; j < cfg.machines; ++j) {
    const double rul = uniform_around(rng, cfg.rul_center, cfg.rul_spread);
    const double pmax0 = uniform_around(rng, cfg.pmax_center, cfg.pmax_spread);
    instance.machines.push_back(MachineSpec::from_rul(pmax0, cfg.pmin_ratio * pmax0, rul));
  }
  return instance;
}

double nominal_total(const FleetInstance& instance, double pnom_ratio) {
  double total = 0.0;
  for (const auto& spec : instance.machines) total += pnom_ratio * spec.pmax0;
  return total;
}

DemandProfile constant_demand(const FleetInstance& instance, LoadFactor alpha,
                              std::size_t horizon) {
  if (!(alpha.alpha >= 0.0 && alpha.alpha <= 1.0))
    throw DomainError(fmt::format("load factor must lie in [0, 1], got {}", alpha.alpha));
  const double sigma = alpha.alpha * nominal_total(instance, 0.75);
  return DemandProfile{std::vector<double>(horizon + 1, sigma)};
}

}  // namespace fcsched
