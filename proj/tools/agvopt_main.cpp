#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "agv/baseline.hpp"
#include "agv/fact_io.hpp"
#include "agv/genbench.hpp"
#include "agv/oracle.hpp"
#include "agv/optimizer.hpp"
#include "agv/validation.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

agv::Scenario load_scenario(const std::string& path) { return agv::parse_facts(slurp(path)); }

json conflict_to_json(const agv::Conflict& c) {
  json j;
  j["kind"] = agv::to_string(c.kind);
  switch (c.kind) {
    case agv::Conflict::Kind::NodeConflict:
      j["node"] = agv::term_node(c.node);
      j["time"] = c.time;
      j["vehicles"] = {agv::term_vehicle(c.vehicle_a), agv::term_vehicle(c.vehicle_b)};
      break;
    case agv::Conflict::Kind::SwapConflict:
      j["edges"] = {{agv::term_node(c.edge.from), agv::term_node(c.edge.to)},
                    {agv::term_node(c.other_edge.from), agv::term_node(c.other_edge.to)}};
      j["time"] = c.time;
      j["vehicles"] = {agv::term_vehicle(c.vehicle_a), agv::term_vehicle(c.vehicle_b)};
      break;
    case agv::Conflict::Kind::ConnectivityViolation:
    case agv::Conflict::Kind::IllegalHalt:
      j["vehicle"] = agv::term_vehicle(c.vehicle);
      j["route_index"] = c.route_index;
      break;
    case agv::Conflict::Kind::DeadlineMiss:
      j["task"] = agv::term_task(c.task);
      j["subtask_index"] = c.subtask_index;
      break;
    case agv::Conflict::Kind::UnorderedSharedTasks:
      j["vehicle"] = c.vehicle >= 0 ? agv::term_vehicle(c.vehicle) : "?";
      break;
  }
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

json report_to_json(const agv::ValidationReport& report) {
  json j;
  j["feasible"] = report.feasible;
  auto arr = json::array();
  for (const auto& c : report.conflicts) arr.push_back(conflict_to_json(c));
  j["conflicts"] = std::move(arr);
  if (report.schedule) {
    json completions = json::object();
    for (const auto& [ref, done] : report.schedule->completions) {
      completions[agv::term_task(ref.task)].push_back(
          {{"subtask", ref.index}, {"route_index", done.route_index}, {"time", done.time}});
    }
    j["completions"] = std::move(completions);
  }
  if (report.objectives)
    j["objectives"] = {{"ms", report.objectives->ms},
                       {"rl", report.objectives->rl},
                       {"cn", report.objectives->cn},
                       {"on", report.objectives->on}};
  return j;
}

int cmd_validate(const std::string& in, const std::string& sol_path, const std::string& out) {
  agv::Scenario s = load_scenario(in);
  agv::ParsedSolution parsed = agv::parse_solution(slurp(sol_path), s);
  agv::ValidationReport report = agv::validate(s, parsed.solution);
  spill(out, report_to_json(report).dump(2) + "\n");
  if (report.feasible) {
    std::cerr << "feasible, objectives " << agv::to_string(*report.objectives) << "\n";
    return 0;
  }
  std::cerr << "infeasible, " << report.conflicts.size() << " finding(s); first: "
            << report.conflicts.front().describe() << "\n";
  return 1;
}

int cmd_solve(const std::string& in, const std::string& out, agv::SolverConfig cfg,
              bool progress) {
  agv::Scenario s = load_scenario(in);
  if (progress)
    cfg.on_incumbent = [](const agv::ObjectiveVector& v, long long nodes, long long ms) {
      std::cerr << "incumbent " << agv::to_string(v) << " nodes=" << nodes << " elapsed_ms=" << ms
                << "\n";
    };
  agv::SolveOutcome outcome = agv::solve(s, cfg);
  std::cerr << "status " << agv::to_string(outcome.status) << ", nodes "
            << outcome.stats.nodes_expanded << ", incumbents " << outcome.stats.incumbent_updates
            << ", elapsed_ms " << outcome.stats.elapsed_ms << "\n";
  if (outcome.solution) {
    std::string status = outcome.status == agv::SolveStatus::kOptimal ? "optimal" : "feasible";
    spill(out, agv::emit_solution(*outcome.solution, outcome.objectives, status));
    std::cerr << "objectives " << agv::to_string(*outcome.objectives) << "\n";
    return 0;
  }
  if (outcome.status == agv::SolveStatus::kInfeasible) {
    agv::Solution empty;
    spill(out, agv::emit_solution(empty, std::nullopt, "infeasible"));
  }
  return 1;
}

int cmd_enumerate(const std::string& in, std::optional<long long> limit, bool closure,
                  const std::string& witness_out) {
  agv::Scenario s = load_scenario(in);
  agv::Canonicalization canon;
  canon.routes_end_at_last_completion = !closure;
  json j;
  j["canonicalization"] = {
      {"routes_end_at_last_completion", canon.routes_end_at_last_completion},
      {"idle_vehicles_empty_route", canon.idle_vehicles_empty_route}};
  agv::EnumerationResult res = agv::enumerate_feasible(s, canon, limit);
  j["feasible_count"] = res.feasible_count;
  j["limit_reached"] = res.limit_reached;
  if (!closure) {
    if (auto best = agv::best_by_enumeration(s, canon)) {
      j["optima_count"] = best->optima_count;
      j["objectives"] = {{"ms", best->objectives.ms},
                         {"rl", best->objectives.rl},
                         {"cn", best->objectives.cn},
                         {"on", best->objectives.on}};
      if (!witness_out.empty())
        spill(witness_out, agv::emit_solution(best->witness, best->objectives, "optimal"));
    } else {
      j["optima_count"] = 0;
    }
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_baseline(const std::string& in, const std::string& out) {
  agv::Scenario s = load_scenario(in);
  agv::GreedyResult res = agv::greedy_round_robin(s);
  if (res.ok()) {
    spill(out, agv::emit_solution(*res.solution, res.objectives, "feasible"));
    std::cerr << "feasible, objectives " << agv::to_string(*res.objectives) << "\n";
    return 0;
  }
  json j;
  j["status"] = res.failure->kind == agv::GreedyFailure::Kind::kDeadlock ? "deadlock" : "deadline";
  j["detail"] = res.failure->detail;
  json cyc = json::array();
  for (agv::VehicleId c : res.failure->wait_cycle) cyc.push_back(agv::term_vehicle(c));
  j["wait_cycle"] = std::move(cyc);
  json nodes = json::array();
  for (agv::NodeId n : res.failure->contended_nodes) nodes.push_back(agv::term_node(n));
  j["contended_nodes"] = std::move(nodes);
  spill(out, j.dump(2) + "\n");
  std::cerr << "failure: " << res.failure->detail << "\n";
  return 1;
}

int cmd_gen(const agv::GenParams& params, const std::string& out) {
  agv::Scenario s = agv::generate(params);
  spill(out, agv::emit_facts(s));
  return 0;
}

int cmd_bench(const std::string& dir, const agv::BenchOptions& opts, const std::string& out) {
  spill(out, agv::run_bench(dir, opts));
  return 0;
}

int cmd_convert(const std::string& in, const std::string& out, std::string to) {
  if (to.empty()) {
    auto dot = out.rfind('.');
    std::string ext = dot == std::string::npos ? "" : out.substr(dot);
    to = ext == ".json" ? "json" : "facts";
  }
  std::string text = slurp(in);
  agv::Scenario s;
  if (text.find_first_not_of(" \t\r\n") != std::string::npos && text[text.find_first_not_of(" \t\r\n")] == '{')
    s = agv::scenario_from_json(json::parse(text));
  else
    s = agv::parse_facts(text);
  if (to == "json")
    spill(out, agv::scenario_to_json(s).dump(2) + "\n");
  else
    spill(out, agv::emit_facts(s));
  return 0;
}

int cmd_emit_atoms(const std::string& in, const std::string& sol_path, const std::string& out) {
  agv::Scenario s = load_scenario(in);
  agv::ParsedSolution parsed = agv::parse_solution(slurp(sol_path), s);
  spill(out, agv::emit_atoms(s, parsed.solution));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transport-task routing toolkit: validate, solve, enumerate, baseline, gen, bench"};
  app.require_subcommand(1);

  std::string in, sol_path, out, witness_out;
  long long budget_ms = 0;
  int threads = 1;
  bool prove = false, progress = false, staged = false, closure = false;
  long long limit = 0;

  auto* validate_cmd = app.add_subcommand("validate", "check a solution against an instance");
  validate_cmd->add_option("-i,--instance", in)->required();
  validate_cmd->add_option("-s,--solution", sol_path)->required();
  validate_cmd->add_option("-o,--output", out);

  auto* solve_cmd = app.add_subcommand("solve", "compute a lexicographically optimal plan");
  solve_cmd->add_option("-i,--instance", in)->required();
  solve_cmd->add_option("-o,--output", out);
  solve_cmd->add_option("--budget-ms", budget_ms);
  solve_cmd->add_option("--threads", threads);
  solve_cmd->add_flag("--prove-optimal", prove);
  solve_cmd->add_flag("--staged", staged, "minimize objectives one priority level at a time");
  solve_cmd->add_flag("--progress", progress);

  auto* enum_cmd = app.add_subcommand("enumerate", "count feasible solutions exhaustively");
  enum_cmd->add_option("-i,--instance", in)->required();
  enum_cmd->add_option("--limit", limit);
  enum_cmd->add_flag("--closure", closure, "count with post-completion activity (stable-model closure)");
  enum_cmd->add_option("-o,--output", witness_out, "write the optimal witness solution here");

  auto* base_cmd = app.add_subcommand("baseline", "greedy round-robin scheduler");
  base_cmd->add_option("-i,--instance", in)->required();
  base_cmd->add_option("-o,--output", out);

  agv::GenParams params;
  unsigned long long seed = 1;
  auto* gen_cmd = app.add_subcommand("gen", "generate a corridor-layout instance");
  gen_cmd->add_option("--nodes", params.nodes);
  gen_cmd->add_option("--edges", params.edges);
  gen_cmd->add_option("--halt-frac", params.halt_fraction);
  gen_cmd->add_option("--park-frac", params.park_fraction);
  gen_cmd->add_option("--tasks", params.tasks);
  gen_cmd->add_option("--subtasks-min", params.subtasks_min);
  gen_cmd->add_option("--subtasks-max", params.subtasks_max);
  int total_subtasks = -1;
  gen_cmd->add_option("--total-subtasks", total_subtasks);
  gen_cmd->add_option("--vehicles", params.vehicles);
  gen_cmd->add_option("--slack", params.deadline_slack);
  gen_cmd->add_option("--bidir-frac", params.bidirectional_fraction);
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("-o,--output", out);

  std::string dir, solvers_csv = "optimizer,baseline";
  int jobs = 1;
  auto* bench_cmd = app.add_subcommand("bench", "run solvers over a directory of instances");
  bench_cmd->add_option("--dir", dir)->required();
  bench_cmd->add_option("--solvers", solvers_csv, "comma list of optimizer,baseline,oracle");
  bench_cmd->add_option("--budget-ms", budget_ms);
  bench_cmd->add_option("--threads", threads);
  bench_cmd->add_option("--jobs", jobs);
  bench_cmd->add_option("--out", out);

  std::string to;
  auto* convert_cmd = app.add_subcommand("convert", "convert an instance between facts and JSON");
  convert_cmd->add_option("-i,--instance", in)->required();
  convert_cmd->add_option("-o,--output", out)->required();
  convert_cmd->add_option("--to", to)->check(CLI::IsMember({"facts", "json"}));

  auto* atoms_cmd = app.add_subcommand("emit-atoms", "emit solution atoms for external checks");
  atoms_cmd->add_option("-i,--instance", in)->required();
  atoms_cmd->add_option("-s,--solution", sol_path)->required();
  atoms_cmd->add_option("-o,--output", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(in, sol_path, out);
    if (app.got_subcommand(solve_cmd)) {
      agv::SolverConfig cfg;
      if (budget_ms > 0) cfg.budget_ms = budget_ms;
      cfg.threads = threads;
      cfg.prove_optimal = prove;
      cfg.stage_mode =
          staged ? agv::SolverConfig::StageMode::kStaged : agv::SolverConfig::StageMode::kVector;
      return cmd_solve(in, out, cfg, progress);
    }
    if (app.got_subcommand(enum_cmd))
      return cmd_enumerate(in, limit > 0 ? std::optional<long long>(limit) : std::nullopt, closure,
                           witness_out);
    if (app.got_subcommand(base_cmd)) return cmd_baseline(in, out);
    if (app.got_subcommand(gen_cmd)) {
      params.seed = seed;
      if (total_subtasks >= 0) params.total_subtasks = total_subtasks;
      return cmd_gen(params, out);
    }
    if (app.got_subcommand(bench_cmd)) {
      agv::BenchOptions opts;
      opts.solvers.clear();
      std::stringstream ss(solvers_csv);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) opts.solvers.push_back(item);
      if (budget_ms > 0) opts.budget_ms = budget_ms;
      opts.threads = threads;
      opts.jobs = jobs;
      return cmd_bench(dir, opts, out);
    }
    if (app.got_subcommand(convert_cmd)) return cmd_convert(in, out, to);
    if (app.got_subcommand(atoms_cmd)) return cmd_emit_atoms(in, sol_path, out);
  } catch (const agv::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const agv::ScenarioError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (const agv::SolutionIoError& e) {
    std::cerr << "invalid solution document: " << e.what() << "\n";
    return 2;
  } catch (const agv::InfeasibleParamsError& e) {
    std::cerr << "invalid generator parameters: " << e.what() << "\n";
    return 2;
  } catch (const agv::InfeasibleSolutionError& e) {
    std::cerr << "infeasible solution: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
