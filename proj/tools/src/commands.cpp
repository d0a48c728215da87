#include "ergoplan_cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include <spdlog/spdlog.h>

#include "ergoplan/dynamics/trajectory_csv.hpp"
#include "ergoplan/error.hpp"
#include "ergoplan/mission/compiler.hpp"
#include "ergoplan/mission/scenario_io.hpp"
#include "ergoplan/stl/robustness.hpp"
#include "ergoplan/stl/sexpr.hpp"

namespace ergoplan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fs::filesystem_error("cannot write", path, std::make_error_code(std::errc::permission_denied));
  out << content;
  if (!out) throw fs::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
  spdlog::info("wrote {}", path.string());
}

void write_json(const fs::path& path, const json& doc) { write_file(path, doc.dump(2) + "\n"); }

void write_trajectory(const fs::path& path, const dynamics::Trajectory& traj, const mission::PayloadSignal& payload) {
  std::ostringstream ss;
  dynamics::write_trajectory_csv(ss, traj, &payload.values);
  write_file(path, ss.str());
}

/// Longest run of consecutive samples inside `box` and the time a run first
/// reaches `need` samples.
HoldSummary hold_in(const dynamics::Trajectory& traj, const Box3& box, std::size_t need) {
  HoldSummary h;
  const double dt = traj.grid.sampling_period();
  std::size_t run = 0;
  std::size_t longest = 0;
  for (std::size_t k = 0; k < traj.grid.sample_count(); ++k) {
    run = box.contains(traj.position(k)) ? run + 1 : 0;
    longest = std::max(longest, run);
    if (run == need && !h.completed_at) h.completed_at = traj.grid.time(k);
  }
  h.longest = longest > 0 ? dt * static_cast<double>(longest - 1) : 0.0;
  return h;
}

template <class Fn>
int guarded(const char* command, Fn&& fn) {
  try {
    return fn();
  } catch (const Infeasible& e) {
    spdlog::error("{}: infeasible route: {}", command, e.what());
    return kInfeasibleRoute;
  } catch (const ParseError& e) {
    spdlog::error("{}: parse error: {}", command, e.what());
    return kInputError;
  } catch (const InvalidScenario& e) {
    spdlog::error("{}: invalid scenario: {}", command, e.what());
    return kInputError;
  } catch (const HeadingNotAxisAligned& e) {
    spdlog::error("{}: invalid scenario: {}", command, e.what());
    return kInputError;
  } catch (const EmptyScenario& e) {
    spdlog::error("{}: invalid scenario: {}", command, e.what());
    return kInputError;
  } catch (const LengthMismatch& e) {
    spdlog::error("{}: {}", command, e.what());
    return kInputError;
  } catch (const UnknownChannel& e) {
    spdlog::error("{}: {}", command, e.what());
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}: {}", command, e.what());
    return kInputError;
  } catch (const std::exception& e) {
    spdlog::error("{}: internal error: {}", command, e.what());
    return kInternalError;
  }
}

fs::path prepare_out_dir(const fs::path& dir) {
  fs::create_directories(dir);
  return dir;
}

mission::Scenario effective_scenario(const mission::Scenario& s, const RunOptions& options) {
  mission::Scenario out = s;
  if (options.no_energy_term) out.energy_weight = 0.0;
  return out;
}

void log_result(const PlanRun& run) {
  spdlog::info("energy weight {}: exact robustness {:.6g}, energy {:.6g} (warm start {:.6g}), {} steps, {}",
               run.energy_weight, run.validation.exact_robustness, run.result.energy, run.result.warm_start_energy,
               run.result.iterations, run.validation.pass ? "satisfied" : "NOT satisfied");
  for (const auto& [name, rho] : run.validation.clauses) spdlog::debug("  clause {}: {:.6g}", name, rho);
}

void write_plan_artifacts(const fs::path& dir, const PlanRun& run, const std::string& scenario_name,
                          const RunOptions& options) {
  prepare_out_dir(dir);
  write_json(dir / "route.json", route_json(run.routing, options.seed));
  write_trajectory(dir / "trajectory.csv", run.result.trajectory, run.validation.payload);
  write_json(dir / "report.json", report_json(run, scenario_name, options));
  write_file(dir / "solver_log.csv", solver_log_csv(run.result));
}

}  // namespace

MissionSummary summarize(const dynamics::Trajectory& traj, const mission::Scenario& scenario) {
  MissionSummary m;
  const std::size_t need_han = scenario.grid.samples_in(scenario.handover_time) + 1;
  const std::size_t need_rs = scenario.grid.samples_in(scenario.refill_time) + 1;
  bool all_done = true;
  double last = 0.0;
  for (const auto& op : scenario.operators) {
    HoldSummary h = hold_in(traj, op.handover_box, need_han);
    h.id = op.id;
    h.kind = "handover";
    if (h.completed_at) {
      last = std::max(last, *h.completed_at);
    } else {
      all_done = false;
    }
    m.holds.push_back(std::move(h));
  }
  std::optional<double> first_refill;
  for (const auto& rs : scenario.refill_stations) {
    HoldSummary h = hold_in(traj, rs.box, need_rs);
    h.id = rs.id;
    h.kind = "refill";
    if (h.completed_at && (!first_refill || *h.completed_at < *first_refill)) first_refill = h.completed_at;
    m.holds.push_back(std::move(h));
  }
  if (!scenario.refill_stations.empty()) {
    if (first_refill) {
      last = std::max(last, *first_refill);
    } else {
      all_done = false;
    }
  }
  if (all_done) m.completion_time = last;

  for (std::size_t k = 0; k < traj.grid.sample_count(); ++k) {
    const Vec3 p = traj.position(k);
    bool bad = std::any_of(scenario.obstacles.begin(), scenario.obstacles.end(),
                           [&](const Box3& b) { return b.contains(p); });
    for (const auto& op : scenario.operators) bad = bad || op.behind_box.contains(p);
    if (bad) ++m.forbidden_samples;
  }
  return m;
}

Routing compute_routing(const mission::Scenario& scenario) {
  Routing r;
  r.graph = route::build_graph(scenario);
  r.solution = route::solve_ilp(r.graph, scenario.capacity);
  r.plan = route::extract_route(r.solution, r.graph);
  r.warm = route::warm_start(r.plan, scenario);
  spdlog::info("route objective {:.6g} m over {} visits, {} branch-and-bound nodes, {} cuts", r.plan.objective,
               r.plan.visits.size(), r.solution.nodes, r.solution.cuts);
  if (r.warm.horizon_exceeded) {
    spdlog::warn("warm start needs {:.3f} s, more than the {:.3f} s horizon; truncated", r.warm.route_duration,
                 scenario.grid.horizon());
  }
  return r;
}

trajopt::SolverConfig solver_config(const RunOptions& options) {
  trajopt::SolverConfig c;
  if (options.max_outer) c.max_outer_iterations = *options.max_outer;
  if (options.penalty_growth) c.penalty_growth = *options.penalty_growth;
  c.seed = options.seed;
  c.finite_difference_check = true;
  c.validate();
  return c;
}

PlanRun run_plan(const mission::Scenario& scenario, const Routing& routing, const RunOptions& options) {
  const mission::Scenario s = effective_scenario(scenario, options);
  PlanRun run;
  run.routing = routing;
  run.config = solver_config(options);
  run.energy_weight = s.energy_weight;
  const stl::Formula formula = mission::compile_formula(s);
  run.result = trajopt::solve(s, formula, routing.warm.trajectory, run.config);
  run.validation = trajopt::validate(run.result, s);
  run.summary = summarize(run.result.trajectory, s);
  log_result(run);
  return run;
}

json route_json(const Routing& routing, std::uint64_t seed) {
  json visits = json::array();
  for (const auto& v : routing.plan.visits) {
    visits.push_back({{"kind", std::string(route::to_string(v.kind))},
                      {"id", v.id},
                      {"point", vec_json(v.point)},
                      {"hold", v.hold}});
  }
  json edges = json::array();
  for (std::size_t e = 0; e < routing.graph.edges.size(); ++e) {
    if (routing.solution.multiplicity[e] == 0) continue;
    const auto& edge = routing.graph.edges[e];
    edges.push_back({{"from", routing.graph.vertices[edge.u].id},
                     {"to", routing.graph.vertices[edge.v].id},
                     {"multiplicity", routing.solution.multiplicity[e]},
                     {"length", edge.weight}});
  }
  return {{"seed", seed},
          {"objective", routing.plan.objective},
          {"visits", visits},
          {"edges", edges},
          {"branch_and_bound_nodes", routing.solution.nodes},
          {"lazy_cuts", routing.solution.cuts}};
}

json report_json(const PlanRun& run, const std::string& scenario_name, const RunOptions& options) {
  const auto& res = run.result;
  const auto& val = run.validation;
  json clauses = json::object();
  for (const auto& [name, rho] : val.clauses) clauses[name] = rho;
  json holds = json::array();
  for (const auto& h : run.summary.holds) {
    holds.push_back({{"id", h.id}, {"kind", h.kind}, {"longest_s", h.longest}, {"completed_at_s", optional_json(h.completed_at)}});
  }
  json log = json::array();
  for (const auto& e : res.log) {
    log.push_back({{"iter", e.iteration},
                   {"penalty_weight", e.penalty_weight},
                   {"J", e.objective},
                   {"rho_exact", e.exact_robustness},
                   {"rho_smooth", e.smooth_robustness},
                   {"energy", e.energy},
                   {"max_residual", e.max_residual}});
  }
  json route_ids = json::array();
  for (const auto& v : run.routing.plan.visits) route_ids.push_back(v.id);
  return {
      {"seed", options.seed},
      {"scenario", scenario_name},
      {"no_energy_term", options.no_energy_term},
      {"energy_weight", run.energy_weight},
      {"solver",
       {{"max_outer", run.config.max_outer_iterations},
        {"max_inner", run.config.max_inner_iterations},
        {"initial_penalty", run.config.initial_penalty},
        {"penalty_growth", run.config.penalty_growth}}},
      {"route", {{"objective", run.routing.plan.objective}, {"visits", route_ids}}},
      {"warm_start",
       {{"route_duration_s", run.routing.warm.route_duration},
        {"horizon_exceeded", run.routing.warm.horizon_exceeded},
        {"energy", res.warm_start_energy}}},
      {"satisfied", val.pass},
      {"exact_robustness", val.exact_robustness},
      {"smooth_robustness", res.smooth_robustness},
      {"clauses", clauses},
      {"energy", res.energy},
      {"residuals",
       {{"velocity", val.residuals.velocity},
        {"acceleration", val.residuals.acceleration},
        {"slack", val.residuals.slack}}},
      {"iterations", res.iterations},
      {"gradient_check_error", res.gradient_check_error},
      {"horizon_s", run.result.trajectory.grid.horizon()},
      {"completion_time_s", optional_json(run.summary.completion_time)},
      {"holds", holds},
      {"forbidden_samples", run.summary.forbidden_samples},
      {"log", log},
  };
}

json ablation_json(const PlanRun& with_energy, const PlanRun& without_energy, std::uint64_t seed) {
  const auto e_with = dynamics::energy(with_energy.result.trajectory);
  const auto e_without = dynamics::energy(without_energy.result.trajectory);
  double peak = 0.0;
  for (double x : e_without.per_sample) peak = std::max(peak, x);
  const double scale = peak > 0.0 ? 1.0 / peak : 1.0;
  json t = json::array();
  json p_with = json::array();
  json p_without = json::array();
  const auto& grid = without_energy.result.trajectory.grid;
  for (std::size_t k = 0; k < e_without.per_sample.size(); ++k) {
    t.push_back(grid.time(k));
    p_with.push_back(e_with.per_sample[k] * scale);
    p_without.push_back(e_without.per_sample[k] * scale);
  }
  const double reduction = e_without.total > 0.0 ? 100.0 * (e_without.total - e_with.total) / e_without.total : 0.0;
  auto summary = [](const PlanRun& r) {
    return json{{"energy_weight", r.energy_weight},
                {"energy", r.result.energy},
                {"exact_robustness", r.validation.exact_robustness},
                {"satisfied", r.validation.pass}};
  };
  return {{"seed", seed},
          {"with_energy_term", summary(with_energy)},
          {"without_energy_term", summary(without_energy)},
          {"reduction_percent", reduction},
          {"profiles",
           {{"normalization", "per-transition energy a^2*T_s divided by the peak of the run without the energy term"},
            {"peak", peak},
            {"t", t},
            {"with_energy_term", p_with},
            {"without_energy_term", p_without}}}};
}

std::string solver_log_csv(const trajopt::PlanResult& result) {
  std::string out = kSolverLogHeader;
  out += '\n';
  char buf[256];
  for (const auto& e : result.log) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", e.iteration, e.penalty_weight, e.objective,
                  e.exact_robustness, e.smooth_robustness, e.energy, e.max_residual);
    out += buf;
  }
  return out;
}

int cmd_route(const fs::path& scenario_file, const RunOptions& options) {
  return guarded("route", [&] {
    const mission::Scenario s = mission::load_scenario(scenario_file);
    Routing r;
    r.graph = route::build_graph(s);
    r.solution = route::solve_ilp(r.graph, s.capacity);
    r.plan = route::extract_route(r.solution, r.graph);
    spdlog::info("route objective {:.6g} m over {} visits", r.plan.objective, r.plan.visits.size());
    write_json(prepare_out_dir(options.out_dir) / "route.json", route_json(r, options.seed));
    return static_cast<int>(kOk);
  });
}

int cmd_plan(const fs::path& scenario_file, const RunOptions& options) {
  return guarded("plan", [&] {
    const mission::Scenario s = mission::load_scenario(scenario_file);
    const Routing routing = compute_routing(s);
    const PlanRun run = run_plan(s, routing, options);
    write_plan_artifacts(options.out_dir, run, scenario_file.generic_string(), options);
    write_file(options.out_dir / "formula.stl", stl::to_sexpr(mission::compile_formula(effective_scenario(s, options))) + "\n");
    return static_cast<int>(run.validation.pass ? kOk : kUnsatisfied);
  });
}

int cmd_check(const fs::path& trajectory_file, const fs::path& scenario_file,
              const std::optional<fs::path>& formula_file, const std::optional<fs::path>& out_dir) {
  return guarded("check", [&] {
    const mission::Scenario s = mission::load_scenario(scenario_file);
    std::ifstream in(trajectory_file);
    if (!in) throw ParseError("cannot open trajectory file " + trajectory_file.string());
    const dynamics::TrajectoryFile file = dynamics::read_trajectory_csv(in);
    const trajopt::ValidationReport report = trajopt::validate(file.trajectory, s);
    bool pass = report.pass;

    json clauses = json::object();
    for (const auto& [name, rho] : report.clauses) clauses[name] = rho;
    json doc = {{"trajectory", trajectory_file.generic_string()},
                {"scenario", scenario_file.generic_string()},
                {"exact_robustness", report.exact_robustness},
                {"clauses", clauses},
                {"residuals",
                 {{"velocity", report.residuals.velocity},
                  {"acceleration", report.residuals.acceleration},
                  {"slack", report.residuals.slack}}},
                {"energy", report.energy}};
    if (formula_file) {
      std::ifstream fin(*formula_file);
      if (!fin) throw ParseError("cannot open formula file " + formula_file->string());
      std::ostringstream text;
      text << fin.rdbuf();
      const stl::Formula f = stl::parse_sexpr(text.str());
      const double rho = stl::eval_robust(f, mission::make_signal(file.trajectory, report.payload), 0);
      doc["formula"] = formula_file->generic_string();
      doc["formula_robustness"] = rho;
      pass = pass && rho > 0.0;
    }
    doc["pass"] = pass;
    const std::string text = doc.dump(2) + "\n";
    std::fwrite(text.data(), 1, text.size(), stdout);
    if (out_dir) write_json(prepare_out_dir(*out_dir) / "check.json", doc);
    for (const auto& [name, rho] : report.clauses) {
      if (rho <= 0.0) spdlog::warn("clause {} violated (robustness {:.6g})", name, rho);
    }
    return static_cast<int>(pass ? kOk : kUnsatisfied);
  });
}

int cmd_ablation(const fs::path& scenario_file, const RunOptions& options) {
  return guarded("ablation", [&] {
    const mission::Scenario s = mission::load_scenario(scenario_file);
    const Routing routing = compute_routing(s);
    RunOptions with = options;
    with.no_energy_term = false;
    RunOptions without = options;
    without.no_energy_term = true;
    auto job = std::async(std::launch::async, [&] { return run_plan(s, routing, without); });
    const PlanRun run_with = run_plan(s, routing, with);
    const PlanRun run_without = job.get();

    write_plan_artifacts(options.out_dir / "with_energy_term", run_with, scenario_file.generic_string(), with);
    write_plan_artifacts(options.out_dir / "without_energy_term", run_without, scenario_file.generic_string(), without);
    const json doc = ablation_json(run_with, run_without, options.seed);
    write_json(options.out_dir / "ablation.json", doc);
    spdlog::info("energy {:.6g} with the term, {:.6g} without: {:.2f}% reduction", run_with.result.energy,
                 run_without.result.energy, doc["reduction_percent"].get<double>());
    return static_cast<int>(run_with.validation.pass && run_without.validation.pass ? kOk : kUnsatisfied);
  });
}

}  // namespace ergoplan::cli
