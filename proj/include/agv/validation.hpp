#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "agv/model.hpp"

namespace agv {

struct SubtaskRef {
  TaskId task = -1;
  int index = 0;  // 1-based
  auto operator<=>(const SubtaskRef&) const = default;
};

struct Completion {
  int route_index = 0;  // 1-based position of the completing stop, g(t[j])
  Time time = 0;        // sum of durations up to and including the stop
};

/// Per-subtask completion indices and times, plus the per-vehicle order in
/// which halts were made.
struct CompletionSchedule {
  std::map<SubtaskRef, Completion> completions;
  std::map<VehicleId, std::vector<SubtaskRef>> halt_trace;
};

/// Occupation time sets u(c,x) for nodes and edges, with time 0 added at
/// each initial location. Times beyond the horizon are retained.
struct OccupationMap {
  std::map<std::pair<VehicleId, NodeId>, std::vector<Time>> node_times;
  std::map<std::pair<VehicleId, Edge>, std::vector<Time>> edge_times;

  void merge(const OccupationMap& other);
};

struct Conflict {
  enum class Kind {
    NodeConflict,
    SwapConflict,
    ConnectivityViolation,
    IllegalHalt,
    DeadlineMiss,
    UnorderedSharedTasks,
  };
  Kind kind;
  NodeId node = -1;
  Time time = -1;
  VehicleId vehicle_a = -1;  // unordered pair, a < b
  VehicleId vehicle_b = -1;
  Edge edge{};
  Edge other_edge{};
  VehicleId vehicle = -1;
  int route_index = -1;  // 1-based
  TaskId task = -1;
  int subtask_index = -1;  // 1-based
  std::string detail;

  std::string describe() const;
};

const char* to_string(Conflict::Kind kind);

// Condition 1: each element must depart from the endpoint of its
// predecessor (r_0 = start). Returns the first violation, if any.
std::optional<Conflict> check_connectivity(const Scenario& s, const Route& route, NodeId start);

// Conditions 2 and 3 for one solution; first violation wins.
std::variant<CompletionSchedule, Conflict> completion_schedule(const Scenario& s,
                                                               const Solution& sol);

// Condition 4 occupation sets for a single vehicle's route.
OccupationMap occupation_times(const Scenario& s, VehicleId c, const Route& route);

// Condition 4 checks over a merged occupation map; conflicts are data.
std::vector<Conflict> check_conflicts(const Scenario& s, const OccupationMap& occ);

struct ValidationReport {
  bool feasible = false;
  std::vector<Conflict> conflicts;
  std::optional<CompletionSchedule> schedule;
  std::optional<ObjectiveVector> objectives;
};

ValidationReport validate(const Scenario& s, const Solution& sol);

// The four objectives of a feasible solution; throws InfeasibleSolutionError
// (defined in fact_io.hpp) if validation fails.
ObjectiveVector evaluate(const Scenario& s, const Solution& sol);

// Plain objective arithmetic without feasibility checks.
ObjectiveVector objectives_of(const Scenario& s, const Solution& sol);

}  // namespace agv
