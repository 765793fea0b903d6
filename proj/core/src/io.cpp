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

#include "fcsched/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace fcsched {
namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()));
  }
}

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name))
    throw ParseError(fmt::format("missing field '{}'", name));
  return doc.at(name);
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(fmt::format("'{}' must be a number", where));
  return value.get<double>();
}

std::vector<double> numbers(const json& value, const std::string& where) {
  if (!value.is_array()) throw ParseError(fmt::format("'{}' must be an array", where));
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i)
    out.push_back(number(value[i], fmt::format("{}[{}]", where, i)));
  return out;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(json(std::vector<double>(row.begin(), row.end())));
  }
  return rows;
}

Matrix matrix_from(const json& value, const char* name) {
  if (!value.is_array()) throw ParseError(fmt::format("'{}' must be an array of rows", name));
  const std::size_t rows = value.size();
  const std::size_t cols = rows == 0 ? 0 : value[0].size();
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = numbers(value[r], fmt::format("{}[{}]", name, r));
    if (row.size() != cols)
      throw ParseError(fmt::format("'{}' row {} has {} entries, expected {}", name, r, row.size(),
                                   cols));
    std::copy(row.begin(), row.end(), out.row(r).begin());
  }
  return out;
}

json instance_json(const FleetInstance& instance) {
  json machines = json::array();
  for (const auto& s : instance.machines)
    machines.push_back(
        {{"pmax0", s.pmax0}, {"pmin", s.pmin}, {"slope", s.slope}, {"rul_max", s.rul_max}});
  json doc = {{"machines", machines}, {"slot_hours", instance.slot_hours}};
  doc["seed"] = instance.seed ? json(*instance.seed) : json(nullptr);
  return doc;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

template <typename Fn>
auto checked(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

std::string instance_to_json(const FleetInstance& instance) {
  return dump(instance_json(instance));
}

FleetInstance instance_from_json(const std::string& text) {
  return checked([&] {
    const json doc = parse(text);
    FleetInstance out;
    const json& machines = field(doc, "machines");
    if (!machines.is_array()) throw ParseError("'machines' must be an array");
    for (std::size_t j = 0; j < machines.size(); ++j) {
      const json& m = machines[j];
      const auto at = [&](const char* name) {
        return number(field(m, name), fmt::format("machines[{}].{}", j, name));
      };
      out.machines.push_back({at("pmax0"), at("pmin"), at("slope"), at("rul_max")});
    }
    if (doc.contains("slot_hours")) out.slot_hours = number(doc.at("slot_hours"), "slot_hours");
    if (doc.contains("seed") && !doc.at("seed").is_null()) {
      if (!doc.at("seed").is_number_unsigned()) throw ParseError("'seed' must be an unsigned integer");
      out.seed = doc.at("seed").get<std::uint64_t>();
    }
    validate(out);
    return out;
  });
}

std::string demand_to_json(const DemandProfile& demand) {
  return dump(json{{"demand", demand.values}});
}

DemandProfile demand_from_json(const std::string& text) {
  return checked([&] {
    DemandProfile out{numbers(field(parse(text), "demand"), "demand")};
    validate(out);
    return out;
  });
}

std::string schedule_to_json(const PowerSchedule& schedule) {
  return dump(json{{"schedule", matrix_json(schedule.f)}});
}

PowerSchedule schedule_from_json(const std::string& text) {
  return checked(
      [&] { return PowerSchedule(matrix_from(field(parse(text), "schedule"), "schedule")); });
}

std::string solution_to_json(const Solution& solution) {
  const SolveResult& r = solution.result;
  json trace = json::array();
  for (const auto& p : r.objective_trace)
    trace.push_back({{"iteration", p.iteration}, {"demand", p.demand}, {"slope", p.slope}});
  json doc = {{"solver", solution.solver},
              {"demand", solution.demand.values},
              {"schedule", matrix_json(r.schedule.f)},
              {"fmax", matrix_json(r.fmax.fmax)},
              {"iterations", r.iterations},
              {"stop_reason", to_string(r.stop_reason)},
              {"wall_time_ms", r.wall_time_ms},
              {"final_gap", r.final_gap},
              {"objective_trace", trace}};
  return dump(doc);
}

Solution solution_from_json(const std::string& text) {
  return checked([&] {
    const json doc = parse(text);
    Solution out;
    out.solver = field(doc, "solver").get<std::string>();
    out.demand.values = numbers(field(doc, "demand"), "demand");
    SolveResult& r = out.result;
    r.schedule = PowerSchedule(matrix_from(field(doc, "schedule"), "schedule"));
    r.fmax = FmaxTrajectory(matrix_from(field(doc, "fmax"), "fmax"));
    r.iterations = field(doc, "iterations").get<int>();
    r.stop_reason = stop_reason_from_string(field(doc, "stop_reason").get<std::string>());
    r.wall_time_ms = number(field(doc, "wall_time_ms"), "wall_time_ms");
    if (doc.contains("final_gap")) r.final_gap = number(doc.at("final_gap"), "final_gap");
    if (doc.contains("objective_trace")) {
      for (const json& p : doc.at("objective_trace"))
        r.objective_trace.push_back({field(p, "iteration").get<int>(),
                                     number(field(p, "demand"), "objective_trace.demand"),
                                     number(field(p, "slope"), "objective_trace.slope")});
    }
    if (r.schedule.slots() != out.demand.slots())
      throw ParseError("solution schedule and demand lengths differ");
    return out;
  });
}

std::string report_to_json(const ScheduleReport& report) {
  json doc = {{"horizon", report.horizon},
              {"unmet_slots", report.unmet_slots},
              {"overproduction_energy", report.overproduction_energy},
              {"machine_starts", report.machine_starts}};
  doc["upper_bound"] = report.upper_bound ? json(*report.upper_bound) : json(nullptr);
  doc["normalized_horizon"] =
      report.normalized_horizon ? json(*report.normalized_horizon) : json(nullptr);
  return dump(doc);
}

ScheduleReport report_from_json(const std::string& text) {
  return checked([&] {
    const json doc = parse(text);
    ScheduleReport out;
    out.horizon = field(doc, "horizon").get<std::size_t>();
    out.unmet_slots = field(doc, "unmet_slots").get<std::size_t>();
    out.overproduction_energy = number(field(doc, "overproduction_energy"), "overproduction_energy");
    out.machine_starts = field(doc, "machine_starts").get<std::vector<std::size_t>>();
    if (const json& ub = field(doc, "upper_bound"); !ub.is_null()) out.upper_bound = ub.get<std::size_t>();
    if (const json& nh = field(doc, "normalized_horizon"); !nh.is_null())
      out.normalized_horizon = number(nh, "normalized_horizon");
    return out;
  });
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace fcsched
