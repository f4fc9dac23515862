#include "agv/baseline.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "agv/validation.hpp"
#include "dense.hpp"

namespace agv {

namespace {

using detail::DenseScenario;
using detail::FrontierPlan;

constexpr Time kOpen = std::numeric_limits<Time>::max() / 4;

struct Window {
  Time lo = 0;
  Time hi = 0;  // kOpen while the vehicle still sits on the node
  int veh = -1;
};

struct VehicleSim {
  VehicleId id = -1;
  int node = -1;       // dense index
  Time tau = 0;        // route clock
  size_t k = 0;        // next frontier position
  FrontierPlan plan;
  Route route;
  std::vector<TaskId> ordered_tasks;
  size_t hold = 0;     // index of the open window on `node`
  bool done = false;
  // diagnosis of the last failed start attempt
  std::vector<int> blocked_by;
  std::vector<NodeId> blocked_nodes;
};

struct LegPlan {
  std::vector<int> path;  // dense nodes, cur..target
  Duration dur = 0;       // moves + halt
};

struct Simulation {
  const Scenario& s;
  const DenseScenario ds;
  ShortestPaths sp;
  std::vector<VehicleSim> vehicles;
  std::vector<std::vector<Window>> locks;  // per dense node

  explicit Simulation(const Scenario& sc) : s(sc), ds(sc), sp(sc) {
    locks.resize(ds.n);
    std::vector<TaskId> task_ids;
    for (const auto& [t, task] : s.tasks) task_ids.push_back(t);
    std::vector<VehicleId> vehicle_ids;
    for (const auto& [c, v] : s.vehicles) vehicle_ids.push_back(c);
    std::map<VehicleId, std::vector<TaskId>> assigned;
    for (size_t i = 0; i < task_ids.size(); ++i)
      assigned[vehicle_ids[i % vehicle_ids.size()]].push_back(task_ids[i]);
    for (VehicleId c : vehicle_ids) {
      VehicleSim v;
      v.id = c;
      v.node = ds.index_of(s.vehicles.at(c));
      v.ordered_tasks = assigned[c];
      v.plan = detail::make_frontier_plan(ds, v.ordered_tasks);
      v.done = v.plan.stops.empty();
      v.hold = locks[v.node].size();
      locks[v.node].push_back({0, kOpen, static_cast<int>(vehicles.size())});
      vehicles.push_back(std::move(v));
    }
  }

  std::optional<LegPlan> plan_leg(const VehicleSim& v) const {
    auto nodes = sp.path(ds.node_ids[v.node], ds.node_ids[v.plan.stops[v.k]]);
    if (!nodes) return std::nullopt;
    LegPlan leg;
    for (NodeId n : *nodes) leg.path.push_back(ds.index_of(n));
    for (size_t i = 0; i + 1 < leg.path.size(); ++i)
      leg.dur += s.edge_duration(ds.node_ids[leg.path[i]], ds.node_ids[leg.path[i + 1]]);
    leg.dur += v.plan.stop_cost[v.k];
    return leg;
  }

  // All foreign windows intersecting [lo,hi] on the leg's nodes.
  void collect_blockers(int self, const LegPlan& leg, Time lo, Time hi,
                        std::vector<int>& vehs, std::vector<NodeId>& nodes) const {
    vehs.clear();
    nodes.clear();
    for (int n : leg.path)
      for (const Window& w : locks[n]) {
        if (w.veh == self) continue;
        if (w.lo <= hi && lo <= w.hi) {
          vehs.push_back(w.veh);
          nodes.push_back(ds.node_ids[n]);
        }
      }
  }

  void commit_leg(int vi, const LegPlan& leg) {
    VehicleSim& v = vehicles[vi];
    const Time start = v.tau;
    const Time end = start + leg.dur;
    locks[v.node][v.hold].hi = start;  // close the current hold
    for (int n : leg.path) locks[n].push_back({start, end, vi});
    for (size_t i = 0; i + 1 < leg.path.size(); ++i)
      v.route.push_back(RouteElement::move(ds.node_ids[leg.path[i]], ds.node_ids[leg.path[i + 1]]));
    v.route.push_back(RouteElement::stop(ds.node_ids[leg.path.back()]));
    v.node = leg.path.back();
    v.tau = end;
    v.k += 1;
    v.hold = locks[v.node].size();
    locks[v.node].push_back({end, kOpen, vi});
    if (v.k == v.plan.stops.size()) v.done = true;
  }
};

}  // namespace

GreedyResult greedy_round_robin(const Scenario& s) {
  GreedyResult result;
  Simulation sim(s);
  auto& vehicles = sim.vehicles;

  auto fail_deadline = [&](const std::string& detail) {
    GreedyFailure f;
    f.kind = GreedyFailure::Kind::kDeadline;
    f.detail = detail;
    result.failure = f;
    return result;
  };

  // Event loop in route time. A vehicle acts when no other vehicle's lock
  // window intersects its next leg window; it may bridge a blocked leg with
  // park stays when sitting on a park node. Vehicles that cannot act keep
  // their clocks; the loop ends when nobody can commit anything.
  while (true) {
    std::vector<int> pending;
    for (int i = 0; i < static_cast<int>(vehicles.size()); ++i)
      if (!vehicles[i].done) pending.push_back(i);
    if (pending.empty()) break;
    std::sort(pending.begin(), pending.end(), [&](int a, int b) {
      return std::tie(vehicles[a].tau, vehicles[a].id) < std::tie(vehicles[b].tau, vehicles[b].id);
    });

    // first vehicle able to act wins, in (clock, id) order
    bool progressed = false;
    for (int vi : pending) {
      VehicleSim& v = vehicles[vi];
      auto leg = sim.plan_leg(v);
      if (!leg)
        return fail_deadline("subtask " + std::to_string(v.plan.owner[v.k]) + "[" +
                             std::to_string(v.plan.owner_index[v.k]) +
                             "] is unreachable for vehicle " + std::to_string(v.id));
      if (v.tau + leg->dur > v.plan.deadline[v.k])
        return fail_deadline("task " + std::to_string(v.plan.owner[v.k]) +
                             " cannot meet its deadline from time " + std::to_string(v.tau));
      sim.collect_blockers(vi, *leg, v.tau, v.tau + leg->dur, v.blocked_by, v.blocked_nodes);
      if (v.blocked_by.empty()) {
        sim.commit_leg(vi, *leg);
        progressed = true;
        break;
      }
      // blocked: wait one park stay if possible; park stops are route
      // elements, so they must clear windows booked through this node
      if (sim.ds.stop_kind[v.node] == DenseScenario::kPark) {
        const Duration d = sim.ds.stop_dur[v.node];
        if (v.plan.within_deadlines(sim.ds, v.node, v.tau + d, v.k)) {
          bool clear = true;
          for (const Window& w : sim.locks[v.node])
            if (w.veh != vi && w.lo <= v.tau + d && v.tau <= w.hi) {
              v.blocked_by.push_back(w.veh);
              v.blocked_nodes.push_back(sim.ds.node_ids[v.node]);
              clear = false;
            }
          if (clear) {
            v.route.push_back(RouteElement::stop(sim.ds.node_ids[v.node]));
            v.tau += d;
            progressed = true;
            break;
          }
        }
      }
    }
    if (progressed) continue;

    // No vehicle can act: every pending vehicle is permanently blocked (its
    // leg window is fixed) or out of slack. Classify via the wait-for graph.
    std::map<VehicleId, std::vector<VehicleId>> waits;
    std::map<VehicleId, std::vector<NodeId>> needs;
    std::map<VehicleId, int> index_of;
    for (int vi : pending) index_of[vehicles[vi].id] = vi;
    for (int vi : pending) {
      VehicleSim& v = vehicles[vi];
      for (size_t i = 0; i < v.blocked_by.size(); ++i) {
        waits[v.id].push_back(vehicles[v.blocked_by[i]].id);
        needs[v.id].push_back(v.blocked_nodes[i]);
      }
    }
    // cycle detection over blocked vehicles
    std::vector<VehicleId> cycle;
    for (const auto& [start_id, ignored] : waits) {
      std::vector<VehicleId> chain{start_id};
      std::set<VehicleId> seen{start_id};
      VehicleId cur = start_id;
      while (true) {
        auto it = waits.find(cur);
        if (it == waits.end() || it->second.empty()) break;
        VehicleId nxt = it->second.front();
        if (seen.count(nxt)) {
          auto pos = std::find(chain.begin(), chain.end(), nxt);
          cycle.assign(pos, chain.end());
          break;
        }
        chain.push_back(nxt);
        seen.insert(nxt);
        cur = nxt;
      }
      if (!cycle.empty()) break;
    }
    GreedyFailure f;
    if (!cycle.empty()) {
      f.kind = GreedyFailure::Kind::kDeadlock;
      f.wait_cycle = cycle;
      std::set<NodeId> contended;
      for (VehicleId c : cycle)
        for (NodeId n : needs[c]) contended.insert(n);
      f.contended_nodes.assign(contended.begin(), contended.end());
      std::ostringstream os;
      os << "wait cycle:";
      for (VehicleId c : cycle) os << " " << c;
      os << "; contended nodes:";
      for (NodeId n : f.contended_nodes) os << " " << n;
      f.detail = os.str();
    } else {
      f.kind = GreedyFailure::Kind::kDeadline;
      std::ostringstream os;
      os << "blocked vehicles cannot meet their deadlines:";
      for (int vi : pending) os << " " << vehicles[vi].id;
      f.detail = os.str();
      for (const auto& [c, ns] : needs)
        for (NodeId n : ns) f.contended_nodes.push_back(n);
    }
    result.failure = f;
    return result;
  }

  Solution sol;
  for (const auto& v : vehicles) {
    sol.order[v.id] = v.ordered_tasks;
    sol.routes[v.id] = v.route;
    for (TaskId t : v.ordered_tasks) sol.assignment[t] = v.id;
  }
  ValidationReport report = validate(s, sol);
  if (!report.feasible)
    throw std::logic_error("greedy produced an invalid plan: " +
                           report.conflicts.front().describe());
  result.solution = std::move(sol);
  result.objectives = report.objectives;
  return result;
}

}  // namespace agv
