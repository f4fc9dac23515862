#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agv/model.hpp"

namespace agv {

struct GreedyFailure {
  enum class Kind { kDeadlock, kDeadline } kind;
  std::string detail;
  std::vector<VehicleId> wait_cycle;       // vehicles forming the cycle (deadlock)
  std::vector<NodeId> contended_nodes;     // locked nodes the blocked legs need
};

struct GreedyResult {
  std::optional<Solution> solution;        // set on success
  std::optional<ObjectiveVector> objectives;
  std::optional<GreedyFailure> failure;    // set on failure
  bool ok() const { return solution.has_value(); }
};

// Round-robin task assignment with shortest-path legs and whole-leg node
// locks, mirroring a simple greedy dispatcher: a vehicle locks every node on
// the path to its next subtask for the leg's whole time window, may wait
// only at park nodes (one park stay at a time), and always holds its current
// node. A vehicle blocked at a non-park node can never start its leg; a
// wait-for cycle among blocked vehicles is a deadlock, any other unmet task
// is a deadline failure. Successful runs always validate feasible.
GreedyResult greedy_round_robin(const Scenario& s);

}  // namespace agv
