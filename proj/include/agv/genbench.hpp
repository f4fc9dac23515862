#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agv/model.hpp"
#include "agv/optimizer.hpp"

namespace agv {

struct InfeasibleParamsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Factory-corridor style layout: a one-way ring of corridor nodes with
/// cross-links (a configurable fraction bidirectional) and park bays hanging
/// off the ring.
struct GenParams {
  int nodes = 25;
  int edges = 35;
  double halt_fraction = 0.4;
  double park_fraction = 0.12;
  int tasks = 10;
  int subtasks_min = 3;
  int subtasks_max = 5;
  std::optional<int> total_subtasks;  // exact total across all tasks
  int vehicles = 4;
  double deadline_slack = 1.6;  // multiplier over the round-robin completion bound
  double bidirectional_fraction = 0.25;
  unsigned long long seed = 1;
};

// Deterministic for a fixed seed; the result always passes build_scenario
// and every task is feasible in isolation for its round-robin vehicle.
Scenario generate(const GenParams& p);

struct BenchOptions {
  std::vector<std::string> solvers = {"optimizer", "baseline"};  // of optimizer|baseline|oracle
  std::optional<long long> budget_ms;
  int threads = 1;  // per optimizer run
  int jobs = 1;     // parallel (instance, solver) cells
};

// Runs each requested solver on every .lp file in `dir`; returns CSV with
// header instance,solver,status,ms,rl,cn,on,wall_ms,nodes_expanded,proven_optimal
// ordered by (instance, solver). Unreadable instances become status=error rows.
std::string run_bench(const std::filesystem::path& dir, const BenchOptions& opts);

}  // namespace agv
