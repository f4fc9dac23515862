#include "agv/validation.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

#include "agv/fact_io.hpp"

namespace agv {

const char* to_string(Conflict::Kind kind) {
  switch (kind) {
    case Conflict::Kind::NodeConflict: return "NodeConflict";
    case Conflict::Kind::SwapConflict: return "SwapConflict";
    case Conflict::Kind::ConnectivityViolation: return "ConnectivityViolation";
    case Conflict::Kind::IllegalHalt: return "IllegalHalt";
    case Conflict::Kind::DeadlineMiss: return "DeadlineMiss";
    case Conflict::Kind::UnorderedSharedTasks: return "UnorderedSharedTasks";
  }
  return "?";
}

std::string Conflict::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case Conflict::Kind::NodeConflict:
      os << ": vehicles " << vehicle_a << " and " << vehicle_b << " at node " << node
         << " at time " << time;
      break;
    case Conflict::Kind::SwapConflict:
      os << ": vehicles " << vehicle_a << " and " << vehicle_b << " swap on (" << edge.from
         << "," << edge.to << ")/(" << other_edge.from << "," << other_edge.to << ") at time "
         << time;
      break;
    case Conflict::Kind::ConnectivityViolation:
      os << ": vehicle " << vehicle << " route element " << route_index;
      break;
    case Conflict::Kind::IllegalHalt:
      os << ": vehicle " << vehicle << " route element " << route_index;
      break;
    case Conflict::Kind::DeadlineMiss:
      os << ": task " << task << " subtask " << subtask_index;
      break;
    case Conflict::Kind::UnorderedSharedTasks:
      os << ": vehicle " << vehicle;
      break;
  }
  if (!detail.empty()) os << " (" << detail << ")";
  return os.str();
}

std::optional<Conflict> check_connectivity(const Scenario& s, const Route& route, NodeId start) {
  NodeId endpoint = start;
  for (size_t i = 0; i < route.size(); ++i) {
    const auto& el = route[i];
    Conflict c;
    c.kind = Conflict::Kind::ConnectivityViolation;
    c.route_index = static_cast<int>(i) + 1;
    if (el.is_move()) {
      if (!s.has_edge(el.from, el.to)) {
        c.detail = "move along a connection not in the graph";
        return c;
      }
      if (el.from != endpoint) {
        c.detail = "move departs from " + std::to_string(el.from) + " but the vehicle is at " +
                   std::to_string(endpoint);
        return c;
      }
      endpoint = el.to;
    } else {
      if (el.from != endpoint) {
        c.detail = "stop at " + std::to_string(el.from) + " but the vehicle is at " +
                   std::to_string(endpoint);
        return c;
      }
    }
  }
  return std::nullopt;
}

namespace {

// Walks all routes; collects every condition-2/3 violation found, not only
// the first, so that reports can name all broken tasks. Vehicles listed in
// `skip` (broken connectivity) are not walked.
struct CompletionWalk {
  CompletionSchedule schedule;
  std::vector<Conflict> violations;
};

CompletionWalk walk_completions(const Scenario& s, const Solution& sol,
                                const std::set<VehicleId>& skip = {}) {
  CompletionWalk out;

  // Assignment/order consistency: every task on exactly one vehicle, order
  // sequences matching the assignment.
  std::map<TaskId, VehicleId> order_owner;
  for (const auto& [c, seq] : sol.order) {
    std::set<TaskId> seen;
    for (TaskId t : seq) {
      if (!seen.insert(t).second) {
        Conflict v;
        v.kind = Conflict::Kind::UnorderedSharedTasks;
        v.vehicle = c;
        v.detail = "task " + std::to_string(t) + " listed twice";
        out.violations.push_back(v);
      }
      auto [it, fresh] = order_owner.emplace(t, c);
      if (!fresh) {
        Conflict v;
        v.kind = Conflict::Kind::UnorderedSharedTasks;
        v.vehicle = c;
        v.detail = "task " + std::to_string(t) + " ordered on two vehicles";
        out.violations.push_back(v);
      }
    }
  }
  for (const auto& [t, task] : s.tasks) {
    auto ait = sol.assignment.find(t);
    auto oit = order_owner.find(t);
    if (ait == sol.assignment.end() || oit == order_owner.end() || ait->second != oit->second) {
      Conflict v;
      v.kind = Conflict::Kind::UnorderedSharedTasks;
      v.vehicle = ait != sol.assignment.end() ? ait->second : -1;
      v.detail = "task " + std::to_string(t) + " assignment and order disagree";
      out.violations.push_back(v);
    }
  }
  if (!out.violations.empty()) return out;

  for (const auto& [c, start] : s.vehicles) {
    if (skip.count(c)) continue;
    // Pending subtasks in execution order for this vehicle.
    std::vector<SubtaskRef> pending;
    auto oit = sol.order.find(c);
    if (oit != sol.order.end())
      for (TaskId t : oit->second)
        for (size_t j = 0; j < s.tasks.at(t).subtasks.size(); ++j)
          pending.push_back(SubtaskRef{t, static_cast<int>(j) + 1});

    Route empty;
    auto rit = sol.routes.find(c);
    const Route& route = rit == sol.routes.end() ? empty : rit->second;

    size_t next = 0;
    Time prefix = 0;
    bool aborted = false;
    for (size_t i = 0; i < route.size() && !aborted; ++i) {
      const auto& el = route[i];
      if (el.is_move()) {
        prefix += s.edge_duration(el.from, el.to);
        continue;
      }
      NodeId v = el.from;
      if (s.is_park(v)) {
        prefix += s.parks.at(v);
        continue;
      }
      if (!s.is_halt(v)) {
        Conflict viol;
        viol.kind = Conflict::Kind::IllegalHalt;
        viol.vehicle = c;
        viol.route_index = static_cast<int>(i) + 1;
        viol.detail = "stop at node " + std::to_string(v) + " which is neither halt nor park";
        out.violations.push_back(viol);
        aborted = true;  // stop duration undefined, cannot keep walking
        continue;
      }
      prefix += s.halts.at(v);
      if (next >= pending.size() || s.tasks.at(pending[next].task).subtasks[pending[next].index - 1] != v) {
        Conflict viol;
        viol.kind = Conflict::Kind::IllegalHalt;
        viol.vehicle = c;
        viol.route_index = static_cast<int>(i) + 1;
        viol.detail = next >= pending.size()
                          ? "halt after all assigned subtasks are complete"
                          : "next pending subtask is at node " +
                                std::to_string(s.tasks.at(pending[next].task)
                                                   .subtasks[pending[next].index - 1]);
        out.violations.push_back(viol);
        continue;
      }
      const SubtaskRef ref = pending[next];
      ++next;
      out.schedule.completions[ref] = Completion{static_cast<int>(i) + 1, prefix};
      out.schedule.halt_trace[c].push_back(ref);
      const Duration deadline = s.tasks.at(ref.task).deadline;
      if (prefix > deadline) {
        Conflict viol;
        viol.kind = Conflict::Kind::DeadlineMiss;
        viol.task = ref.task;
        viol.subtask_index = ref.index;
        viol.vehicle = c;
        viol.detail = "completed at " + std::to_string(prefix) + " > deadline " +
                      std::to_string(deadline);
        out.violations.push_back(viol);
      }
    }
    if (!aborted && next < pending.size()) {
      Conflict viol;
      viol.kind = Conflict::Kind::DeadlineMiss;
      viol.task = pending[next].task;
      viol.subtask_index = pending[next].index;
      viol.vehicle = c;
      viol.detail = "subtask never completed";
      out.violations.push_back(viol);
    }
  }
  return out;
}

}  // namespace

std::variant<CompletionSchedule, Conflict> completion_schedule(const Scenario& s,
                                                               const Solution& sol) {
  CompletionWalk walk = walk_completions(s, sol);
  if (!walk.violations.empty()) return walk.violations.front();
  return walk.schedule;
}

OccupationMap occupation_times(const Scenario& s, VehicleId c, const Route& route) {
  OccupationMap occ;
  occ.node_times[{c, s.vehicles.at(c)}].push_back(0);
  Time prefix = 0;
  for (const auto& el : route) {
    if (el.is_move()) {
      const Duration d = s.edge_duration(el.from, el.to);
      auto& et = occ.edge_times[{c, Edge{el.from, el.to}}];
      for (Duration k = 1; k <= d; ++k) et.push_back(prefix + k);
      prefix += d;
      occ.node_times[{c, el.to}].push_back(prefix);  // arrival instant
    } else {
      const Duration d = s.stop_duration(el.from);
      auto& nt = occ.node_times[{c, el.from}];
      for (Duration k = 1; k <= d; ++k) nt.push_back(prefix + k);
      prefix += d;
    }
  }
  for (auto& [key, times] : occ.node_times) {
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
  }
  for (auto& [key, times] : occ.edge_times) {
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
  }
  return occ;
}

void OccupationMap::merge(const OccupationMap& other) {
  for (const auto& [key, times] : other.node_times) {
    auto& dst = node_times[key];
    dst.insert(dst.end(), times.begin(), times.end());
    std::sort(dst.begin(), dst.end());
    dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
  }
  for (const auto& [key, times] : other.edge_times) {
    auto& dst = edge_times[key];
    dst.insert(dst.end(), times.begin(), times.end());
    std::sort(dst.begin(), dst.end());
    dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
  }
}

std::vector<Conflict> check_conflicts(const Scenario& s, const OccupationMap& occ) {
  std::vector<Conflict> out;

  std::map<NodeId, std::vector<std::pair<VehicleId, const std::vector<Time>*>>> by_node;
  for (const auto& [key, times] : occ.node_times) by_node[key.second].emplace_back(key.first, &times);
  for (const auto& [v, users] : by_node) {
    for (size_t i = 0; i < users.size(); ++i)
      for (size_t k = i + 1; k < users.size(); ++k) {
        std::vector<Time> common;
        std::set_intersection(users[i].second->begin(), users[i].second->end(),
                              users[k].second->begin(), users[k].second->end(),
                              std::back_inserter(common));
        for (Time t : common) {
          Conflict c;
          c.kind = Conflict::Kind::NodeConflict;
          c.node = v;
          c.time = t;
          c.vehicle_a = std::min(users[i].first, users[k].first);
          c.vehicle_b = std::max(users[i].first, users[k].first);
          out.push_back(c);
        }
      }
  }

  std::map<Edge, std::vector<std::pair<VehicleId, const std::vector<Time>*>>> by_edge;
  for (const auto& [key, times] : occ.edge_times) by_edge[key.second].emplace_back(key.first, &times);
  for (const auto& [e, erev] : bidirectional_pairs(s)) {
    auto fit = by_edge.find(e);
    auto rit = by_edge.find(erev);
    if (fit == by_edge.end() || rit == by_edge.end()) continue;
    for (const auto& [ca, ta] : fit->second)
      for (const auto& [cb, tb] : rit->second) {
        if (ca == cb) continue;
        std::vector<Time> common;
        std::set_intersection(ta->begin(), ta->end(), tb->begin(), tb->end(),
                              std::back_inserter(common));
        for (Time t : common) {
          Conflict c;
          c.kind = Conflict::Kind::SwapConflict;
          c.edge = e;
          c.other_edge = erev;
          c.time = t;
          c.vehicle_a = std::min(ca, cb);
          c.vehicle_b = std::max(ca, cb);
          out.push_back(c);
        }
      }
  }
  return out;
}

ObjectiveVector objectives_of(const Scenario& s, const Solution& sol) {
  ObjectiveVector obj;
  std::map<VehicleId, std::set<Edge>> used;
  for (const auto& [c, ignored] : s.vehicles) used[c];
  for (const auto& [c, route] : sol.routes) {
    Duration total = route_duration(s, route);
    obj.ms = std::max(obj.ms, total);
    obj.rl += total;
    for (const auto& el : route)
      if (el.is_move()) used[c].insert(Edge{el.from, el.to});
  }
  std::vector<std::pair<VehicleId, const std::set<Edge>*>> per_vehicle;
  for (const auto& [c, edges] : used) per_vehicle.emplace_back(c, &edges);

  for (size_t i = 0; i < per_vehicle.size(); ++i) {
    for (size_t k = i + 1; k < per_vehicle.size(); ++k) {
      const auto& ea = *per_vehicle[i].second;
      const auto& eb = *per_vehicle[k].second;
      // cn: nodes both vehicles enter via distinct predecessors.
      std::map<NodeId, std::set<NodeId>> preds_a, preds_b;
      for (const Edge& e : ea) preds_a[e.to].insert(e.from);
      for (const Edge& e : eb) preds_b[e.to].insert(e.from);
      for (const auto& [v, pa] : preds_a) {
        auto bit = preds_b.find(v);
        if (bit == preds_b.end()) continue;
        const auto& pb = bit->second;
        bool crossing = pa.size() > 1 || pb.size() > 1 || *pa.begin() != *pb.begin();
        if (crossing) ++obj.cn;
      }
      // on: triples over same or opposite connections, set semantics.
      std::set<std::pair<NodeId, NodeId>> node_pairs;
      for (const Edge& e : ea) node_pairs.emplace(std::min(e.from, e.to), std::max(e.from, e.to));
      for (const auto& [lo, hi] : node_pairs) {
        long long in_a = 0, in_b = 0;
        for (const Edge dir : {Edge{lo, hi}, Edge{hi, lo}}) {
          if (!s.edges.count(dir)) continue;
          in_a += ea.count(dir) ? 1 : 0;
          in_b += eb.count(dir) ? 1 : 0;
        }
        obj.on += in_a * in_b;
      }
    }
  }
  return obj;
}

ValidationReport validate(const Scenario& s, const Solution& sol) {
  ValidationReport report;

  std::set<VehicleId> broken;
  OccupationMap merged;
  for (const auto& [c, start] : s.vehicles) {
    Route empty;
    auto rit = sol.routes.find(c);
    const Route& route = rit == sol.routes.end() ? empty : rit->second;
    if (auto viol = check_connectivity(s, route, start)) {
      viol->vehicle = c;
      report.conflicts.push_back(*viol);
      broken.insert(c);  // completion and occupation are ill-defined past a broken link
      continue;
    }
    merged.merge(occupation_times(s, c, route));
  }

  CompletionWalk walk = walk_completions(s, sol, broken);
  report.conflicts.insert(report.conflicts.end(), walk.violations.begin(), walk.violations.end());

  auto occ_conflicts = check_conflicts(s, merged);
  report.conflicts.insert(report.conflicts.end(), occ_conflicts.begin(), occ_conflicts.end());

  report.feasible = report.conflicts.empty();
  report.schedule = std::move(walk.schedule);
  if (report.feasible) report.objectives = objectives_of(s, sol);
  return report;
}

ObjectiveVector evaluate(const Scenario& s, const Solution& sol) {
  ValidationReport report = validate(s, sol);
  if (!report.feasible)
    throw InfeasibleSolutionError(
        "solution is infeasible: " +
        (report.conflicts.empty() ? std::string("?") : report.conflicts.front().describe()));
  return *report.objectives;
}

}  // namespace agv
