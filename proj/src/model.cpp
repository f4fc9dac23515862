#include "agv/model.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace agv {

const char* to_string(ScenarioErrorCode code) {
  switch (code) {
    case ScenarioErrorCode::DuplicateInitialLocation: return "DuplicateInitialLocation";
    case ScenarioErrorCode::HaltParkOverlap: return "HaltParkOverlap";
    case ScenarioErrorCode::SubtaskNotHaltNode: return "SubtaskNotHaltNode";
    case ScenarioErrorCode::NonPositiveDuration: return "NonPositiveDuration";
    case ScenarioErrorCode::UndeclaredNodeInEdge: return "UndeclaredNodeInEdge";
    case ScenarioErrorCode::EmptySubtaskSequence: return "EmptySubtaskSequence";
    case ScenarioErrorCode::SelfLoopEdge: return "SelfLoopEdge";
    case ScenarioErrorCode::UndeclaredNode: return "UndeclaredNode";
    case ScenarioErrorCode::MissingDeclaration: return "MissingDeclaration";
    case ScenarioErrorCode::DuplicateDeclaration: return "DuplicateDeclaration";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(ScenarioErrorCode code, const std::string& detail) {
  throw ScenarioError(code, std::string(to_string(code)) + ": " + detail);
}

}  // namespace

Scenario build_scenario(const ScenarioParts& parts) {
  Scenario s;
  for (NodeId v : parts.nodes) s.nodes.insert(v);

  for (const auto& h : parts.halts) {
    if (!s.has_node(h.node))
      fail(ScenarioErrorCode::UndeclaredNode, "halt node " + std::to_string(h.node));
    if (h.duration <= 0)
      fail(ScenarioErrorCode::NonPositiveDuration, "halt duration of node " + std::to_string(h.node));
    auto [it, fresh] = s.halts.emplace(h.node, h.duration);
    if (!fresh && it->second != h.duration)
      fail(ScenarioErrorCode::DuplicateDeclaration, "halt node " + std::to_string(h.node) + " declared with two durations");
  }
  for (const auto& p : parts.parks) {
    if (!s.has_node(p.node))
      fail(ScenarioErrorCode::UndeclaredNode, "park node " + std::to_string(p.node));
    if (p.duration <= 0)
      fail(ScenarioErrorCode::NonPositiveDuration, "park duration of node " + std::to_string(p.node));
    if (s.is_halt(p.node))
      fail(ScenarioErrorCode::HaltParkOverlap, "node " + std::to_string(p.node) + " is both halt and park");
    auto [it, fresh] = s.parks.emplace(p.node, p.duration);
    if (!fresh && it->second != p.duration)
      fail(ScenarioErrorCode::DuplicateDeclaration, "park node " + std::to_string(p.node) + " declared with two durations");
  }

  for (const auto& e : parts.edges) {
    if (!s.has_node(e.from) || !s.has_node(e.to))
      fail(ScenarioErrorCode::UndeclaredNodeInEdge,
           "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ")");
    if (e.from == e.to)
      fail(ScenarioErrorCode::SelfLoopEdge, "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ")");
    if (e.duration <= 0)
      fail(ScenarioErrorCode::NonPositiveDuration,
           "move duration of edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ")");
    auto [it, fresh] = s.edges.emplace(Edge{e.from, e.to}, e.duration);
    if (!fresh && it->second != e.duration)
      fail(ScenarioErrorCode::DuplicateDeclaration,
           "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ") declared with two durations");
  }

  for (const auto& t : parts.tasks) {
    if (!t.deadline)
      fail(ScenarioErrorCode::MissingDeclaration, "task " + std::to_string(t.id) + " has no deadline");
    if (*t.deadline <= 0)
      fail(ScenarioErrorCode::NonPositiveDuration, "deadline of task " + std::to_string(t.id));
    auto [it, fresh] = s.tasks.emplace(t.id, Task{{}, *t.deadline});
    if (!fresh && it->second.deadline != *t.deadline)
      fail(ScenarioErrorCode::DuplicateDeclaration, "task " + std::to_string(t.id) + " declared with two deadlines");
  }

  // Group subtasks and require contiguous 1..m indices per task.
  std::map<TaskId, std::map<int, NodeId>> grouped;
  for (const auto& st : parts.subtasks) {
    if (!s.tasks.count(st.task))
      fail(ScenarioErrorCode::MissingDeclaration,
           "subtask references undeclared task " + std::to_string(st.task));
    if (!s.has_node(st.location))
      fail(ScenarioErrorCode::UndeclaredNode,
           "subtask location " + std::to_string(st.location));
    if (!s.is_halt(st.location))
      fail(ScenarioErrorCode::SubtaskNotHaltNode,
           "subtask of task " + std::to_string(st.task) + " at non-halt node " + std::to_string(st.location));
    auto [it, fresh] = grouped[st.task].emplace(st.index, st.location);
    if (!fresh && it->second != st.location)
      fail(ScenarioErrorCode::DuplicateDeclaration,
           "subtask " + std::to_string(st.task) + "[" + std::to_string(st.index) + "] declared twice");
  }
  for (auto& [tid, task] : s.tasks) {
    auto git = grouped.find(tid);
    if (git == grouped.end() || git->second.empty())
      fail(ScenarioErrorCode::EmptySubtaskSequence, "task " + std::to_string(tid));
    int expect = 1;
    for (const auto& [idx, loc] : git->second) {
      if (idx != expect)
        fail(ScenarioErrorCode::MissingDeclaration,
             "task " + std::to_string(tid) + " is missing subtask index " + std::to_string(expect));
      task.subtasks.push_back(loc);
      ++expect;
    }
  }

  std::map<NodeId, VehicleId> seen_start;
  for (const auto& c : parts.vehicles) {
    if (!c.start)
      fail(ScenarioErrorCode::MissingDeclaration, "vehicle " + std::to_string(c.id) + " has no initial location");
    if (!s.has_node(*c.start))
      fail(ScenarioErrorCode::UndeclaredNode, "initial location " + std::to_string(*c.start));
    auto [it, fresh] = s.vehicles.emplace(c.id, *c.start);
    if (!fresh && it->second != *c.start)
      fail(ScenarioErrorCode::DuplicateDeclaration, "vehicle " + std::to_string(c.id) + " declared with two locations");
    auto [sit, sfresh] = seen_start.emplace(*c.start, c.id);
    if (!sfresh && sit->second != c.id)
      fail(ScenarioErrorCode::DuplicateInitialLocation,
           "vehicles " + std::to_string(sit->second) + " and " + std::to_string(c.id) +
               " both start at node " + std::to_string(*c.start));
  }

  return s;
}

Time horizon(const Scenario& s) {
  Time h = 0;
  for (const auto& [id, t] : s.tasks) h = std::max(h, t.deadline);
  return h;
}

std::vector<std::tuple<NodeId, NodeId, NodeId>> less_pairs(const Scenario& s) {
  std::map<NodeId, std::vector<NodeId>> preds;
  for (const auto& [e, d] : s.edges) preds[e.to].push_back(e.from);
  std::vector<std::tuple<NodeId, NodeId, NodeId>> out;
  for (auto& [v, ps] : preds) {
    std::sort(ps.begin(), ps.end());
    for (size_t i = 0; i + 1 < ps.size(); ++i) out.emplace_back(ps[i], ps[i + 1], v);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<2>(a), std::get<0>(a)) < std::tie(std::get<2>(b), std::get<0>(b));
  });
  return out;
}

std::vector<std::pair<Edge, Edge>> bidirectional_pairs(const Scenario& s) {
  std::vector<std::pair<Edge, Edge>> out;
  for (const auto& [e, d] : s.edges) {
    if (e.from < e.to && s.edges.count(reversed(e)))
      out.emplace_back(e, reversed(e));
  }
  return out;
}

Duration route_duration(const Scenario& s, const Route& route) {
  Duration total = 0;
  for (const auto& el : route)
    total += el.is_move() ? s.edge_duration(el.from, el.to) : s.stop_duration(el.from);
  return total;
}

std::string to_string(const ObjectiveVector& v) {
  std::ostringstream os;
  os << "(" << v.ms << "," << v.rl << "," << v.cn << "," << v.on << ")";
  return os.str();
}

ShortestPaths::ShortestPaths(const Scenario& s) {
  ids_.assign(s.nodes.begin(), s.nodes.end());
  const size_t n = ids_.size();
  out_.resize(n);
  for (const auto& [e, d] : s.edges)
    out_[index_of(e.from)].emplace_back(e.to, d);
  dist_.assign(n, std::vector<Duration>(n, kUnreachable));
  using Item = std::pair<Duration, int>;
  for (size_t src = 0; src < n; ++src) {
    auto& dist = dist_[src];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0;
    pq.emplace(0, static_cast<int>(src));
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != dist[u]) continue;
      for (const auto& [to, w] : out_[u]) {
        int v = index_of(to);
        if (dist[v] < 0 || d + w < dist[v]) {
          dist[v] = d + w;
          pq.emplace(dist[v], v);
        }
      }
    }
  }
}

int ShortestPaths::index_of(NodeId v) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) throw std::out_of_range("unknown node " + std::to_string(v));
  return static_cast<int>(it - ids_.begin());
}

Duration ShortestPaths::dist(NodeId from, NodeId to) const {
  return dist_[index_of(from)][index_of(to)];
}

std::optional<std::vector<NodeId>> ShortestPaths::path(NodeId from, NodeId to) const {
  if (!reachable(from, to)) return std::nullopt;
  // Walk forward, always taking the smallest successor that stays on a
  // shortest path; yields the lexicographically smallest shortest path.
  std::vector<NodeId> seq{from};
  int cur = index_of(from);
  const int goal = index_of(to);
  while (cur != goal) {
    Duration remain = dist_[cur][goal];
    NodeId best = -1;
    int best_idx = -1;
    for (const auto& [nxt, w] : out_[cur]) {
      int ni = index_of(nxt);
      if (dist_[ni][goal] >= 0 && w + dist_[ni][goal] == remain && (best_idx < 0 || nxt < best)) {
        best = nxt;
        best_idx = ni;
      }
    }
    cur = best_idx;
    seq.push_back(best);
  }
  return seq;
}

CompletionBound min_completion_time(const Scenario& s, const ShortestPaths& sp,
                                    NodeId start, std::span<const NodeId> subtasks) {
  Duration total = 0;
  NodeId cur = start;
  for (size_t i = 0; i < subtasks.size(); ++i) {
    Duration d = sp.dist(cur, subtasks[i]);
    if (d < 0) return CompletionBound{std::nullopt, static_cast<int>(i) + 1};
    total += d + s.stop_duration(subtasks[i]);
    cur = subtasks[i];
  }
  return CompletionBound{total, -1};
}

CompletionBound min_completion_time(const Scenario& s, NodeId start,
                                    std::span<const NodeId> subtasks) {
  ShortestPaths sp(s);
  return min_completion_time(s, sp, start, subtasks);
}

}  // namespace agv
