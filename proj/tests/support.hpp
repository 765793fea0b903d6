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

#include <cmath>
#include <vector>

#include "fcsched/fleet.hpp"

namespace fcsched::testing {

inline FleetInstance fleet(const std::vector<double>& pmax0, const std::vector<double>& rul) {
  FleetInstance out;
  for (std::size_t j = 0; j < pmax0.size(); ++j)
    out.machines.push_back(MachineSpec::from_rul(pmax0[j], 0.15 * pmax0[j], rul[j]));
  return out;
}

inline PowerSchedule schedule(const std::vector<std::vector<double>>& rows) {
  PowerSchedule out(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t t = 0; t < rows[j].size(); ++t) out.f(j, t) = rows[j][t];
  return out;
}

inline DemandProfile constant(double sigma, std::size_t slots) {
  return DemandProfile{std::vector<double>(slots, sigma)};
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace fcsched::testing
