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

#include "cli.hpp"

#include <charconv>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fcsched/bench.hpp"
#include "fcsched/evaluation.hpp"
#include "fcsched/instance_gen.hpp"
#include "fcsched/io.hpp"
#include "fcsched/mirror_prox.hpp"
#include "fcsched/projection.hpp"

namespace fcsched::cli {
namespace {

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kUsage = 2;

// Bad flag values detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned jobs = 1;
  bool quiet = false;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text(g.out, text);
  }
}

void note(const Globals& g, const std::string& text) {
  if (!g.quiet) std::cerr << text << '\n';
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError(fmt::format("invalid {} '{}'", what, text));
  return value;
}

// "1,2,5-8" -> 1 2 5 6 7 8
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(text)) {
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_number<std::uint64_t>(item, "seed"));
      continue;
    }
    const auto lo = parse_number<std::uint64_t>(item.substr(0, dash), "seed");
    const auto hi = parse_number<std::uint64_t>(item.substr(dash + 1), "seed");
    if (hi < lo) throw UsageError(fmt::format("empty seed range '{}'", item));
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

struct DemandSource {
  std::string demand_file;
  std::optional<double> alpha;
  std::optional<std::size_t> horizon;
};

void add_demand_options(CLI::App* cmd, DemandSource& src) {
  auto* alpha = cmd->add_option("--alpha", src.alpha, "Constant demand as a fraction of nominal power");
  auto* file = cmd->add_option("--demand", src.demand_file, "Demand JSON file");
  alpha->excludes(file);
  cmd->add_option("--horizon", src.horizon,
                  "Decision horizon T for --alpha (default ceil(1.2 * upper bound))");
}

DemandProfile resolve_demand(const DemandSource& src, const FleetInstance& instance) {
  if (!src.demand_file.empty()) return demand_from_json(read_text(src.demand_file));
  if (!src.alpha) throw UsageError("one of --alpha or --demand is required");
  if (!(*src.alpha > 0.0 && *src.alpha <= 1.0))
    throw UsageError(fmt::format("--alpha must lie in (0, 1], got {}", *src.alpha));
  std::size_t horizon = 0;
  if (src.horizon) {
    horizon = *src.horizon;
  } else {
    const double sigma = constant_demand(instance, LoadFactor{*src.alpha}, 0).values.front();
    horizon = decision_horizon(upper_bound(instance, sigma));
  }
  return constant_demand(instance, LoadFactor{*src.alpha}, horizon);
}

struct GenArgs {
  GeneratorConfig cfg;
  double slot_hours = 1.0;
};

int run_gen(const Globals& g, GenArgs args) {
  args.cfg.seed = g.seed.value_or(0);
  FleetInstance instance = generate_fleet(args.cfg);
  instance.slot_hours = args.slot_hours;
  validate(instance);
  emit(g, instance_to_json(instance));
  return kOk;
}

struct SolveArgs {
  std::string solver;
  std::string instance;
  DemandSource demand;
  ProjectionConfig projection;
  MirrorProxConfig mirror_prox;
  bool watt_scale = false;
  std::optional<double> time_budget;
  std::string trace;
};

int run_solve(const Globals& g, SolveArgs& args, const CLI::App& cmd) {
  const SolverKind kind = [&] {
    try {
      return solver_from_string(args.solver);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }();
  const FleetInstance instance = instance_from_json(read_text(args.instance));
  const DemandProfile demand = resolve_demand(args.demand, instance);

  Solution solution{to_string(kind), demand, {}};
  if (kind == SolverKind::kProjections) {
    ProjectionConfig cfg = args.projection;
    if (args.time_budget) cfg.time_budget = std::chrono::duration<double>(*args.time_budget);
    try {
      validate(cfg, demand.slots());
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    solution.result = solve_projections(instance, demand, cfg);
  } else {
    MirrorProxConfig cfg = args.mirror_prox;
    if (args.watt_scale) {
      // Explicit flags still override the preset.
      MirrorProxConfig preset = MirrorProxConfig::watt_scale();
      const auto given = [&](const char* name) { return cmd.count(name) > 0; };
      if (!given("--lambda")) cfg.lambda_step = preset.lambda_step;
      if (!given("--mu-prime")) cfg.mu_prime = preset.mu_prime;
      if (!given("--upsilon-prime")) cfg.upsilon_prime = preset.upsilon_prime;
      if (!given("--power-unit")) cfg.power_unit = preset.power_unit;
      cfg.clip_midpoint = preset.clip_midpoint;
      cfg.enforcement = preset.enforcement;
    }
    if (args.time_budget) cfg.time_budget = std::chrono::duration<double>(*args.time_budget);
    try {
      validate(cfg);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    solution.result = solve_mirror_prox(instance, demand, cfg);
  }

  const ScheduleReport rep = report(solution.result.schedule, demand, instance);
  note(g, fmt::format("{}: {} after {} iterations, horizon {} of {} slots, {:.1f} ms",
                      solution.solver, to_string(solution.result.stop_reason),
                      solution.result.iterations, rep.horizon, demand.slots(),
                      solution.result.wall_time_ms));
  if (!args.trace.empty())
    write_text(args.trace, trace_csv(solution.result.schedule, solution.result.fmax));
  emit(g, solution_to_json(solution));
  return kOk;
}

struct EvalArgs {
  std::string instance;
  std::string solution;
};

int run_eval(const Globals& g, const EvalArgs& args) {
  const FleetInstance instance = instance_from_json(read_text(args.instance));
  const Solution solution = solution_from_json(read_text(args.solution));
  const ScheduleReport rep = report(solution.result.schedule, solution.demand, instance);
  const FeasibilityReport feas = check_feasibility(solution.result.schedule, instance, {});
  if (!feas.feasible())
    note(g, fmt::format("warning: {} feasibility violations", feas.violations.size()));
  emit(g, report_to_json(rep));
  return kOk;
}

struct UbArgs {
  std::string instance;
  double alpha = 0.0;
};

int run_ub(const Globals& g, const UbArgs& args) {
  if (!(args.alpha > 0.0 && args.alpha <= 1.0))
    throw UsageError(fmt::format("--alpha must lie in (0, 1], got {}", args.alpha));
  const FleetInstance instance = instance_from_json(read_text(args.instance));
  const double sigma = constant_demand(instance, LoadFactor{args.alpha}, 0).values.front();
  const std::size_t ub = upper_bound(instance, sigma);
  emit(g, fmt::format("{{\"sigma\": {}, \"upper_bound\": {}, \"decision_horizon\": {}}}\n", sigma,
                      ub, decision_horizon(ub)));
  return kOk;
}

struct BenchArgs {
  std::string machines = "3,25";
  std::string alphas = "0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  std::string seeds;
  std::string solvers = "projections,mirror-prox";
  double time_budget = 1800.0;
  bool no_timing = false;
};

BenchPlan build_plan(const Globals& g, const BenchArgs& args) {
  BenchPlan plan;
  plan.machine_counts.clear();
  for (const auto& m : split_list(args.machines))
    plan.machine_counts.push_back(parse_number<std::size_t>(m, "machine count"));
  plan.alphas.clear();
  for (const auto& a : split_list(args.alphas)) plan.alphas.push_back(parse_number<double>(a, "alpha"));
  if (!args.seeds.empty()) {
    plan.seeds = parse_seeds(args.seeds);
  } else if (g.seed) {
    plan.seeds = {*g.seed};
  }
  plan.solvers.clear();
  for (const auto& s : split_list(args.solvers)) {
    try {
      plan.solvers.push_back(solver_from_string(s));
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  plan.time_budget_s = args.time_budget;
  plan.record_timing = !args.no_timing;
  try {
    validate(plan);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return plan;
}

int run_bench_cmd(const Globals& g, const BenchArgs& args) {
  const BenchPlan plan = build_plan(g, args);
  BenchProgress progress;
  if (!g.quiet) {
    progress = [](const BenchRow& r, std::size_t done, std::size_t total) {
      std::cerr << fmt::format("[{}/{}] m={} alpha={} seed={} {}: {} H/UB={:.4f}\n", done, total,
                               r.machines, r.alpha, r.seed, to_string(r.solver), r.status,
                               r.normalized_horizon);
    };
  }
  const BenchTable table = run_bench(plan, g.jobs, progress);
  emit(g, write_csv(table));
  return table.all_completed() ? kOk : kRuntimeFailure;
}

struct PlotArgs {
  std::string csv;
  std::string instance;
  std::string solution;
};

int run_plotdata(const Globals& g, const PlotArgs& args) {
  if (g.out.empty()) throw UsageError("plotdata needs --out DIR");
  std::vector<std::filesystem::path> written;
  if (!args.csv.empty()) written = emit_plotdata(parse_csv(read_text(args.csv)), g.out);
  if (!args.solution.empty()) {
    const Solution solution = solution_from_json(read_text(args.solution));
    const auto path = std::filesystem::path(g.out) / "trace.csv";
    write_text(path, trace_csv(solution.result.schedule, solution.result.fmax));
    written.push_back(path);
  }
  if (written.empty()) throw UsageError("plotdata needs --csv and/or --solution");
  for (const auto& p : written) note(g, fmt::format("wrote {}", p.string()));
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Scheduling of degrading power sources: generate, solve, evaluate, benchmark"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed (gen; single-seed bench)");
  app.add_option("--out", g.out, "Output file (directory for plotdata); stdout if omitted");
  app.add_option("--jobs", g.jobs, "Parallel bench runs")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random fleet instance");
  gen_cmd->add_option("--machines,-m", gen.cfg.machines, "Machine count")->required();
  gen_cmd->add_option("--rul-center", gen.cfg.rul_center, "Mean maximal RUL (slots)");
  gen_cmd->add_option("--rul-spread", gen.cfg.rul_spread, "Relative RUL spread");
  gen_cmd->add_option("--pmax-center", gen.cfg.pmax_center, "Mean initial max power (W)");
  gen_cmd->add_option("--pmax-spread", gen.cfg.pmax_spread, "Relative power spread");
  gen_cmd->add_option("--pmin-ratio", gen.cfg.pmin_ratio, "pmin as a fraction of pmax0");
  gen_cmd->add_option("--slot-hours", gen.slot_hours, "Slot duration (h)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("--solver", solve.solver, "projections or mirror-prox")->required();
  solve_cmd->add_option("--instance", solve.instance, "Instance JSON")->required();
  add_demand_options(solve_cmd, solve.demand);
  solve_cmd->add_option("--time-budget", solve.time_budget, "Wall-clock budget (s)");
  solve_cmd->add_option("--trace", solve.trace, "Also write a per-slot f/fmax trace CSV");
  solve_cmd->add_option("--delta-t", solve.projection.delta_t, "Projection interval length");
  solve_cmd->add_option("--epsilon-factor", solve.projection.epsilon_factor,
                        "Stopping threshold as a fraction of mean demand");
  auto& mp = solve.mirror_prox;
  solve_cmd->add_option("--lambda", mp.lambda_step, "Mirror Prox step size");
  solve_cmd->add_option("--lambda-dem", mp.lambda_dem, "Demand penalty weight");
  solve_cmd->add_option("--lambda-slope", mp.lambda_slope, "Slope penalty weight");
  solve_cmd->add_option("--gamma", mp.gamma, "Demand penalty sharpness");
  solve_cmd->add_option("--delta", mp.delta, "Slope penalty sharpness");
  solve_cmd->add_option("--mu-prime", mp.mu_prime, "Slope penalty mu'");
  solve_cmd->add_option("--upsilon-prime", mp.upsilon_prime, "Slope penalty upsilon'");
  solve_cmd->add_option("--w-grad", mp.w_grad, "Anchor weight");
  solve_cmd->add_option("--f-floor", mp.f_floor, "Positive floor of iterates (W)");
  solve_cmd->add_option("--power-unit", mp.power_unit, "Watts per working unit");
  solve_cmd->add_flag("--watt-scale", solve.watt_scale,
                      "Watt units, lambda 5e-5, mu' = upsilon' = 1, plain clip");
  auto* max_iters = solve_cmd->add_option("--max-iters", mp.max_iters, "Iteration cap");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Report metrics of a solution");
  eval_cmd->add_option("--instance", eval.instance, "Instance JSON")->required();
  eval_cmd->add_option("--solution", eval.solution, "Solution JSON")->required();

  UbArgs ub;
  auto* ub_cmd = app.add_subcommand("ub", "Energy upper bound on the production horizon");
  ub_cmd->add_option("--instance", ub.instance, "Instance JSON")->required();
  ub_cmd->add_option("--alpha", ub.alpha, "Load factor")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the solver comparison and write CSV");
  bench_cmd->add_option("--machines", bench.machines, "Comma-separated machine counts");
  bench_cmd->add_option("--alphas", bench.alphas, "Comma-separated load factors");
  bench_cmd->add_option("--seeds", bench.seeds, "Seeds, e.g. 1-20 or 1,4,9 (default 1-20)");
  bench_cmd->add_option("--solvers", bench.solvers, "Comma-separated solvers");
  bench_cmd->add_option("--time-budget", bench.time_budget, "Per-run budget (s)");
  bench_cmd->add_flag("--no-timing", bench.no_timing,
                      "Write wall_time_ms as 0 so output is byte-reproducible");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plotdata", "Write plot-ready CSV files");
  plot_cmd->add_option("--csv", plot.csv, "Bench CSV");
  plot_cmd->add_option("--solution", plot.solution, "Solution JSON for a trace export");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(g, gen);
    if (*solve_cmd) {
      solve.projection.max_iters = max_iters->count() > 0 ? mp.max_iters : solve.projection.max_iters;
      return run_solve(g, solve, *solve_cmd);
    }
    if (*eval_cmd) return run_eval(g, eval);
    if (*ub_cmd) return run_ub(g, ub);
    if (*bench_cmd) return run_bench_cmd(g, bench);
    if (*plot_cmd) return run_plotdata(g, plot);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsage;
}

}  // namespace fcsched::cli
