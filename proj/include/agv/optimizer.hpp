#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "agv/model.hpp"

namespace agv {

struct SolverConfig {
  std::optional<long long> budget_ms;
  int threads = 1;
  bool prove_optimal = true;
  unsigned long long seed = 0;  // reserved for randomized restarts; default deterministic
  enum class StageMode { kVector, kStaged } stage_mode = StageMode::kVector;
  // invoked on every incumbent improvement: vector, nodes expanded, elapsed ms
  std::function<void(const ObjectiveVector&, long long, long long)> on_incumbent;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kBudgetExhaustedNoSolution };

const char* to_string(SolveStatus status);

struct SolveStats {
  long long nodes_expanded = 0;
  long long incumbent_updates = 0;
  bool proof_complete = false;
  long long elapsed_ms = 0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<Solution> solution;
  std::optional<ObjectiveVector> objectives;
  SolveStats stats;
};

// Lexicographic branch-and-bound over task assignment, per-vehicle task
// order and time-expanded joint routes. With prove_optimal and no budget the
// returned vector is the lexicographic minimum over all canonical feasible
// solutions. Deterministic for threads == 1.
SolveOutcome solve(const Scenario& s, const SolverConfig& cfg = {});

/// A partial search state reduced to what the bound needs; used for
/// admissibility tests.
struct VehicleSnapshot {
  VehicleId vehicle = -1;
  NodeId node = -1;
  Time elapsed = 0;
  std::vector<NodeId> remaining_subtasks;
};

// Component-wise admissible lower bound: no feasible completion of the state
// has a smaller objective vector (component-wise, hence lexicographically).
ObjectiveVector bound_of(const Scenario& s, const std::vector<VehicleSnapshot>& vehicles,
                         const std::map<VehicleId, Route>& committed_routes);

}  // namespace agv
