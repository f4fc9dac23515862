#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace agv {

using NodeId = int;
using VehicleId = int;
using TaskId = int;
using Duration = long long;  // clock cycles
using Time = long long;

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  auto operator<=>(const Edge&) const = default;
};

inline Edge reversed(Edge e) { return Edge{e.to, e.from}; }

struct Task {
  std::vector<NodeId> subtasks;  // halt nodes, visited in order
  Duration deadline = 0;
};

/// Immutable routing scenario: directed graph, halt/park nodes with
/// durations, transport tasks, vehicles with distinct initial locations.
struct Scenario {
  std::set<NodeId> nodes;
  std::map<Edge, Duration> edges;
  std::map<NodeId, Duration> halts;
  std::map<NodeId, Duration> parks;
  std::map<TaskId, Task> tasks;
  std::map<VehicleId, NodeId> vehicles;  // initial locations

  bool has_node(NodeId v) const { return nodes.count(v) != 0; }
  bool has_edge(NodeId a, NodeId b) const { return edges.count(Edge{a, b}) != 0; }
  bool is_halt(NodeId v) const { return halts.count(v) != 0; }
  bool is_park(NodeId v) const { return parks.count(v) != 0; }
  bool is_stop_node(NodeId v) const { return is_halt(v) || is_park(v); }

  Duration edge_duration(NodeId a, NodeId b) const { return edges.at(Edge{a, b}); }
  // halt or park duration of v; throws if v is neither
  Duration stop_duration(NodeId v) const {
    auto it = halts.find(v);
    if (it != halts.end()) return it->second;
    return parks.at(v);
  }
};

enum class ScenarioErrorCode {
  DuplicateInitialLocation,
  HaltParkOverlap,
  SubtaskNotHaltNode,
  NonPositiveDuration,
  UndeclaredNodeInEdge,
  EmptySubtaskSequence,
  SelfLoopEdge,
  UndeclaredNode,
  MissingDeclaration,
  DuplicateDeclaration,
};

const char* to_string(ScenarioErrorCode code);

struct ScenarioError : std::runtime_error {
  ScenarioErrorCode code;
  ScenarioError(ScenarioErrorCode c, const std::string& msg)
      : std::runtime_error(msg), code(c) {}
};

/// Raw declarations as they appear in an instance file, before validation.
struct ScenarioParts {
  std::vector<NodeId> nodes;
  struct EdgeDecl { NodeId from; NodeId to; Duration duration; };
  std::vector<EdgeDecl> edges;
  struct StopDecl { NodeId node; Duration duration; };
  std::vector<StopDecl> halts;
  std::vector<StopDecl> parks;
  struct TaskDecl { TaskId id; std::optional<Duration> deadline; };
  std::vector<TaskDecl> tasks;
  struct SubtaskDecl { TaskId task; int index; NodeId location; };  // 1-based index
  std::vector<SubtaskDecl> subtasks;
  struct VehicleDecl { VehicleId id; std::optional<NodeId> start; };
  std::vector<VehicleDecl> vehicles;
};

// Validates all scenario invariants; throws ScenarioError with the first
// diagnostic found.
Scenario build_scenario(const ScenarioParts& parts);

// Max task deadline; 0 for a scenario without tasks.
Time horizon(const Scenario& s);

// One entry per lexicographically consecutive predecessor pair (v', v'', v)
// with edges (v',v),(v'',v), ordered by (v, v').
std::vector<std::tuple<NodeId, NodeId, NodeId>> less_pairs(const Scenario& s);

// All pairs {(v,v'),(v',v)} with both directions present, listed once with
// first.from < first.to.
std::vector<std::pair<Edge, Edge>> bidirectional_pairs(const Scenario& s);

struct RouteElement {
  enum class Kind { Move, Stop };
  Kind kind = Kind::Stop;
  NodeId from = 0;  // Stop: the stop node (== to)
  NodeId to = 0;

  static RouteElement move(NodeId a, NodeId b) { return {Kind::Move, a, b}; }
  static RouteElement stop(NodeId v) { return {Kind::Stop, v, v}; }
  bool is_move() const { return kind == Kind::Move; }
  NodeId source() const { return from; }
  NodeId target() const { return to; }
  auto operator<=>(const RouteElement&) const = default;
};

using Route = std::vector<RouteElement>;

// Sum of element durations along a route.
Duration route_duration(const Scenario& s, const Route& route);

struct Solution {
  std::map<TaskId, VehicleId> assignment;
  std::map<VehicleId, std::vector<TaskId>> order;  // per-vehicle task sequence
  std::map<VehicleId, Route> routes;

  bool operator==(const Solution&) const = default;
};

/// Lexicographically ordered objective vector; smaller is better.
struct ObjectiveVector {
  long long ms = 0;  // makespan
  long long rl = 0;  // route length
  long long cn = 0;  // crossing number
  long long on = 0;  // overlap number
  auto operator<=>(const ObjectiveVector&) const = default;
};

std::string to_string(const ObjectiveVector& v);

/// All-pairs duration-weighted shortest paths (Dijkstra per node).
class ShortestPaths {
 public:
  static constexpr Duration kUnreachable = -1;

  explicit ShortestPaths(const Scenario& s);

  Duration dist(NodeId from, NodeId to) const;
  bool reachable(NodeId from, NodeId to) const { return dist(from, to) >= 0; }
  // Lexicographically smallest shortest path as a node sequence including
  // both endpoints; nullopt if unreachable.
  std::optional<std::vector<NodeId>> path(NodeId from, NodeId to) const;

 private:
  std::vector<NodeId> ids_;  // sorted
  std::vector<std::vector<Duration>> dist_;
  std::vector<std::vector<std::pair<NodeId, Duration>>> out_;  // by dense index
  int index_of(NodeId v) const;
};

struct CompletionBound {
  std::optional<Duration> duration;  // nullopt if some subtask is unreachable
  int unreachable_index = -1;        // 1-based index of the first unreachable subtask
};

// Least possible sum of move and halt durations to serve the subtasks in
// order from `start`, ignoring other vehicles. A lower bound on the duration
// of any feasible route serving the same subtasks.
CompletionBound min_completion_time(const Scenario& s, const ShortestPaths& sp,
                                    NodeId start, std::span<const NodeId> subtasks);
CompletionBound min_completion_time(const Scenario& s, NodeId start,
                                    std::span<const NodeId> subtasks);

}  // namespace agv
