#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "agv/model.hpp"

namespace agv::detail {

// Index-compacted view of a scenario for search loops: dense node/edge ids,
// sorted adjacency, stop kinds and an all-pairs distance matrix.
struct DenseScenario {
  const Scenario* s = nullptr;
  std::vector<NodeId> node_ids;  // sorted
  int n = 0;

  struct Arc {
    int to;
    Duration dur;
    int edge_id;
  };
  std::vector<std::vector<Arc>> out;  // per node, sorted by target node id

  std::vector<Edge> edge_list;    // by edge id
  std::vector<Duration> edge_dur;
  std::vector<int> edge_rev;      // reverse edge id or -1

  enum StopKind { kNone = 0, kHalt = 1, kPark = 2 };
  std::vector<int> stop_kind;
  std::vector<Duration> stop_dur;  // 0 where kNone

  std::vector<std::vector<Duration>> dist;  // -1 unreachable
  Time horizon_time = 0;

  explicit DenseScenario(const Scenario& sc) : s(&sc) {
    node_ids.assign(sc.nodes.begin(), sc.nodes.end());
    n = static_cast<int>(node_ids.size());
    out.resize(n);
    stop_kind.assign(n, kNone);
    stop_dur.assign(n, 0);
    for (const auto& [v, d] : sc.halts) {
      stop_kind[index_of(v)] = kHalt;
      stop_dur[index_of(v)] = d;
    }
    for (const auto& [v, d] : sc.parks) {
      stop_kind[index_of(v)] = kPark;
      stop_dur[index_of(v)] = d;
    }
    for (const auto& [e, d] : sc.edges) {
      int id = static_cast<int>(edge_list.size());
      edge_list.push_back(e);
      edge_dur.push_back(d);
      out[index_of(e.from)].push_back(Arc{index_of(e.to), d, id});
    }
    for (auto& arcs : out)
      std::sort(arcs.begin(), arcs.end(),
                [this](const Arc& a, const Arc& b) { return node_ids[a.to] < node_ids[b.to]; });
    edge_rev.assign(edge_list.size(), -1);
    for (size_t i = 0; i < edge_list.size(); ++i) {
      auto it = std::lower_bound(edge_list.begin(), edge_list.end(), reversed(edge_list[i]));
      if (it != edge_list.end() && *it == reversed(edge_list[i]))
        edge_rev[i] = static_cast<int>(it - edge_list.begin());
    }
    ShortestPaths sp(sc);
    dist.assign(n, std::vector<Duration>(n, ShortestPaths::kUnreachable));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) dist[i][k] = sp.dist(node_ids[i], node_ids[k]);
    horizon_time = horizon(sc);
  }

  int index_of(NodeId v) const {
    auto it = std::lower_bound(node_ids.begin(), node_ids.end(), v);
    if (it == node_ids.end() || *it != v)
      throw std::out_of_range("unknown node " + std::to_string(v));
    return static_cast<int>(it - node_ids.begin());
  }
};

// Concatenated subtask positions of an ordered task list, with per-position
// deadlines and the precomputed chain/gate arrays used for exact deadline
// pruning and admissible completion bounds.
struct FrontierPlan {
  std::vector<int> stops;           // dense node index per position
  std::vector<Duration> stop_cost;  // halt duration per position
  std::vector<Duration> deadline;   // owning task's deadline per position
  std::vector<TaskId> owner;
  std::vector<int> owner_index;     // 1-based subtask index within the task
  std::vector<Duration> chain;      // chain[k] = sum_{j<=k} (dist(S_{j-1},S_j)+d(S_j)), chain[0]=0 anchor
  std::vector<Duration> gate;       // gate[k] = min_{k'>=k} (deadline[k'] - chain[k'])
  bool reachable = true;

  // Remaining completion bound from dense node v at position k.
  // Returns -1 if unreachable.
  Duration min_remaining(const DenseScenario& ds, int v, size_t k) const {
    if (k >= stops.size()) return 0;
    Duration d = ds.dist[v][stops[k]];
    if (d < 0) return -1;
    return d + stop_cost[k] + (chain.back() - chain[k]);
  }

  // True iff every remaining completion can still meet its deadline when the
  // vehicle sits at dense node v at elapsed time tau.
  bool within_deadlines(const DenseScenario& ds, int v, Time tau, size_t k) const {
    if (k >= stops.size()) return true;
    Duration d = ds.dist[v][stops[k]];
    if (d < 0) return false;
    return tau + d + stop_cost[k] - chain[k] <= gate[k];
  }
};

inline FrontierPlan make_frontier_plan(const DenseScenario& ds,
                                       const std::vector<TaskId>& ordered_tasks) {
  FrontierPlan plan;
  for (TaskId t : ordered_tasks) {
    const Task& task = ds.s->tasks.at(t);
    for (size_t j = 0; j < task.subtasks.size(); ++j) {
      plan.stops.push_back(ds.index_of(task.subtasks[j]));
      plan.stop_cost.push_back(ds.s->halts.at(task.subtasks[j]));
      plan.deadline.push_back(task.deadline);
      plan.owner.push_back(t);
      plan.owner_index.push_back(static_cast<int>(j) + 1);
    }
  }
  const size_t m = plan.stops.size();
  plan.chain.assign(m, 0);
  for (size_t k = 1; k < m; ++k) {
    Duration hop = ds.dist[plan.stops[k - 1]][plan.stops[k]];
    if (hop < 0) {
      plan.reachable = false;
      return plan;
    }
    plan.chain[k] = plan.chain[k - 1] + hop + plan.stop_cost[k];
  }
  plan.gate.assign(m, 0);
  Duration running = std::numeric_limits<Duration>::max();
  for (size_t k = m; k-- > 0;) {
    running = std::min(running, plan.deadline[k] - plan.chain[k]);
    plan.gate[k] = running;
  }
  return plan;
}

}  // namespace agv::detail
