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

#include "fcsched/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "fcsched/evaluation.hpp"
#include "fcsched/instance_gen.hpp"
#include "fcsched/io.hpp"

namespace fcsched {
namespace {

constexpr std::string_view kHeader =
    "m,alpha,seed,solver,status,horizon,upper_bound,normalized_horizon,iterations,"
    "wall_time_ms,unmet_slots,overproduction_Wh";
constexpr std::size_t kColumns = 12;

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* name) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw CsvParseError(line, fmt::format("bad {} value '{}'", name, text));
  return value;
}

}  // namespace

std::string to_string(SolverKind kind) {
  return kind == SolverKind::kProjections ? "projections" : "mirror-prox";
}

SolverKind solver_from_string(std::string_view text) {
  if (text == "projections") return SolverKind::kProjections;
  if (text == "mirror-prox") return SolverKind::kMirrorProx;
  throw DomainError(fmt::format("unknown solver '{}' (expected projections or mirror-prox)", text));
}

std::vector<std::uint64_t> BenchPlan::default_seeds() {
  std::vector<std::uint64_t> seeds(20);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
  return seeds;
}

void validate(const BenchPlan& plan) {
  if (plan.machine_counts.empty() || plan.alphas.empty() || plan.seeds.empty() ||
      plan.solvers.empty())
    throw DomainError("bench plan lists must be non-empty");
  if (!(plan.time_budget_s > 0.0)) throw DomainError("bench time budget must be positive");
  for (const double a : plan.alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw DomainError(fmt::format("alpha {} outside (0, 1]", a));
  }
  for (const auto m : plan.machine_counts) {
    if (m < 1) throw DomainError("machine counts must be >= 1");
  }
  validate(plan.mirror_prox);
}

BenchCase make_case(std::size_t machines, double alpha, std::uint64_t seed) {
  GeneratorConfig gen;
  gen.machines = machines;
  gen.seed = seed;
  BenchCase c;
  c.instance = generate_fleet(gen);
  const double sigma = constant_demand(c.instance, LoadFactor{alpha}, 0).values.front();
  c.upper_bound = upper_bound(c.instance, sigma);
  c.demand = constant_demand(c.instance, LoadFactor{alpha}, decision_horizon(c.upper_bound));
  return c;
}

BenchRow run_case(const BenchCase& c, double alpha, SolverKind solver, const BenchPlan& plan) {
  BenchRow row;
  row.machines = c.instance.size();
  row.alpha = alpha;
  row.seed = c.instance.seed.value_or(0);
  row.solver = solver;
  row.upper_bound = c.upper_bound;
  const std::chrono::duration<double> budget(plan.time_budget_s);
  try {
    SolveResult result;
    if (solver == SolverKind::kProjections) {
      ProjectionConfig cfg = plan.projection;
      cfg.time_budget = budget;
      result = solve_projections(c.instance, c.demand, cfg);
    } else {
      MirrorProxConfig cfg = plan.mirror_prox;
      cfg.time_budget = budget;
      result = solve_mirror_prox(c.instance, c.demand, cfg);
    }
    const ScheduleReport rep = report(result.schedule, c.demand, c.instance);
    row.status = to_string(result.stop_reason);
    row.horizon = rep.horizon;
    row.normalized_horizon = rep.normalized_horizon.value_or(0.0);
    row.iterations = result.iterations;
    row.wall_time_ms = plan.record_timing ? result.wall_time_ms : 0.0;
    row.unmet_slots = rep.unmet_slots;
    row.overproduction_wh = rep.overproduction_energy;
  } catch (const std::exception&) {
    row.status = "error";
  }
  return row;
}

BenchTable run_bench(const BenchPlan& plan, unsigned jobs, const BenchProgress& progress) {
  validate(plan);
  struct Task {
    std::size_t machines;
    double alpha;
    std::uint64_t seed;
    SolverKind solver;
  };
  std::vector<Task> tasks;
  for (const auto m : plan.machine_counts)
    for (const double a : plan.alphas)
      for (const auto s : plan.seeds)
        for (const auto solver : plan.solvers) tasks.push_back({m, a, s, solver});

  BenchTable table;
  table.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      table.rows[i] = run_case(make_case(t.machines, t.alpha, t.seed), t.alpha, t.solver, plan);
      if (progress) {
        const std::lock_guard lock(progress_mutex);
        progress(table.rows[i], ++done, tasks.size());
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return table;
}

std::vector<SolverSummary> BenchTable::summary() const {
  std::vector<SolverSummary> out;
  for (const auto kind : {SolverKind::kProjections, SolverKind::kMirrorProx}) {
    SolverSummary s{kind};
    double sum = 0.0;
    for (const auto& r : rows) {
      if (r.solver != kind) continue;
      const double v = r.normalized_horizon;
      s.min = s.runs == 0 ? v : std::min(s.min, v);
      s.max = s.runs == 0 ? v : std::max(s.max, v);
      sum += v;
      ++s.runs;
    }
    if (s.runs == 0) continue;
    s.mean = sum / static_cast<double>(s.runs);
    out.push_back(s);
  }
  return out;
}

bool BenchTable::all_completed() const {
  return std::none_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.status == "error"; });
}

CsvParseError::CsvParseError(std::size_t line, const std::string& message)
    : std::runtime_error(fmt::format("line {}: {}", line, message)), line_(line) {}

std::string write_csv(const BenchTable& table) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& r : table.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.machines, r.alpha, r.seed,
                       to_string(r.solver), r.status, r.horizon, r.upper_bound,
                       r.normalized_horizon, r.iterations, r.wall_time_ms, r.unmet_slots,
                       r.overproduction_wh);
  }
  out += "# summary: solver,runs,mean_normalized_horizon,min_normalized_horizon,"
         "max_normalized_horizon\n";
  for (const auto& s : table.summary())
    out += fmt::format("# {},{},{},{},{}\n", to_string(s.solver), s.runs, s.mean, s.min, s.max);
  return out;
}

BenchTable parse_csv(std::string_view text) {
  BenchTable table;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) throw CsvParseError(line_no, "unexpected header");
      header_seen = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != kColumns)
      throw CsvParseError(line_no,
                          fmt::format("expected {} columns, found {}", kColumns, cells.size()));
    BenchRow r;
    r.machines = parse_field<std::size_t>(cells[0], line_no, "m");
    r.alpha = parse_field<double>(cells[1], line_no, "alpha");
    r.seed = parse_field<std::uint64_t>(cells[2], line_no, "seed");
    try {
      r.solver = solver_from_string(cells[3]);
    } catch (const DomainError& e) {
      throw CsvParseError(line_no, e.what());
    }
    r.status = std::string(cells[4]);
    r.horizon = parse_field<std::size_t>(cells[5], line_no, "horizon");
    r.upper_bound = parse_field<std::size_t>(cells[6], line_no, "upper_bound");
    r.normalized_horizon = parse_field<double>(cells[7], line_no, "normalized_horizon");
    r.iterations = parse_field<int>(cells[8], line_no, "iterations");
    r.wall_time_ms = parse_field<double>(cells[9], line_no, "wall_time_ms");
    r.unmet_slots = parse_field<std::size_t>(cells[10], line_no, "unmet_slots");
    r.overproduction_wh = parse_field<double>(cells[11], line_no, "overproduction_Wh");
    table.rows.push_back(std::move(r));
  }
  if (!header_seen) throw CsvParseError(line_no == 0 ? 1 : line_no, "missing header");
  return table;
}

std::vector<std::filesystem::path> emit_plotdata(const BenchTable& table,
                                                 const std::filesystem::path& out_dir) {
  std::string horizons = "alpha,solver,normalized_horizon\n";
  std::string times = "alpha,solver,wall_time_ms\n";
  for (const auto& r : table.rows) {
    horizons += fmt::format("{},{},{}\n", r.alpha, to_string(r.solver), r.normalized_horizon);
    times += fmt::format("{},{},{}\n", r.alpha, to_string(r.solver), r.wall_time_ms);
  }
  const std::vector<std::filesystem::path> paths{out_dir / "normalized_horizon.csv",
                                                 out_dir / "wall_time.csv"};
  write_text(paths[0], horizons);
  write_text(paths[1], times);
  return paths;
}

std::string trace_csv(const PowerSchedule& schedule, const FmaxTrajectory& fmax) {
  if (!schedule.f.same_shape(fmax.fmax)) throw DomainError("trace_csv: shape mismatch");
  const std::size_t m = schedule.machines();
  std::string out = "t";
  for (std::size_t j = 1; j <= m; ++j) out += fmt::format(",f_{}", j);
  for (std::size_t j = 1; j <= m; ++j) out += fmt::format(",fmax_{}", j);
  out += '\n';
  for (std::size_t t = 0; t < schedule.slots(); ++t) {
    out += fmt::format("{}", t);
    for (std::size_t j = 0; j < m; ++j) out += fmt::format(",{}", schedule.f(j, t));
    for (std::size_t j = 0; j < m; ++j) out += fmt::format(",{}", fmax.fmax(j, t));
    out += '\n';
  }
  return out;
}

}  // namespace fcsched
