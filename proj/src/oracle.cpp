#include "agv/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "dense.hpp"

namespace agv {

namespace {

using detail::DenseScenario;
using detail::FrontierPlan;

struct BitRow {
  std::vector<std::uint64_t> w;
  void resize(size_t bits) { w.assign((bits + 63) / 64, 0); }
  void set(size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool intersects(const BitRow& o) const {
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i] & o.w[i]) return true;
    return false;
  }
};

// One enumerated timed trace of a single vehicle.
struct EnumRoute {
  Route elements;
  Duration total = 0;              // duration sum of the emitted elements
  BitRow node_occ;                 // (node, time) occupation grid
  std::vector<BitRow> swap_occ;    // per bidirectional pair, two direction rows
  std::vector<std::uint64_t> edges_used;  // bitmask over edge ids
};

struct Grids {
  Time h = 0;
  int n = 0;
  std::vector<std::pair<int, int>> bidir;  // (edge_id, reverse_id), edge_id < reverse_id
  std::vector<int> edge_slot;              // edge id -> 2*pair + side, or -1

  explicit Grids(const DenseScenario& ds) {
    h = ds.horizon_time;
    n = ds.n;
    edge_slot.assign(ds.edge_list.size(), -1);
    for (size_t e = 0; e < ds.edge_list.size(); ++e) {
      int r = ds.edge_rev[e];
      if (r >= 0 && static_cast<int>(e) < r) {
        edge_slot[e] = static_cast<int>(bidir.size()) * 2;
        edge_slot[r] = static_cast<int>(bidir.size()) * 2 + 1;
        bidir.emplace_back(static_cast<int>(e), r);
      }
    }
  }
  size_t node_bits() const { return static_cast<size_t>(n) * (h + 1); }
  size_t bit_of(int node, Time t) const { return static_cast<size_t>(node) * (h + 1) + t; }
};

bool compatible(const Grids& g, const EnumRoute& a, const EnumRoute& b) {
  if (a.node_occ.intersects(b.node_occ)) return false;
  for (size_t p = 0; p < g.bidir.size(); ++p) {
    if (a.swap_occ[2 * p].intersects(b.swap_occ[2 * p + 1])) return false;
    if (a.swap_occ[2 * p + 1].intersects(b.swap_occ[2 * p])) return false;
  }
  return true;
}

class VehicleEnumerator {
 public:
  VehicleEnumerator(const DenseScenario& ds, const Grids& g, const Canonicalization& canon)
      : ds_(ds), g_(g), canon_(canon) {}

  std::vector<EnumRoute> run(int start, const FrontierPlan& plan) {
    out_.clear();
    if (!plan.reachable) return {};
    plan_ = &plan;
    start_ = start;
    elements_.clear();
    dfs(start, 0, 0);
    return std::move(out_);
  }

 private:
  const DenseScenario& ds_;
  const Grids& g_;
  Canonicalization canon_;
  const FrontierPlan* plan_ = nullptr;
  int start_ = 0;
  std::vector<RouteElement> elements_;
  std::vector<EnumRoute> out_;

  void emit(std::optional<std::pair<int, Time>> park_forever) {
    EnumRoute r;
    r.elements = elements_;
    r.node_occ.resize(g_.node_bits());
    r.swap_occ.assign(g_.bidir.size() * 2, {});
    for (auto& row : r.swap_occ) row.resize(g_.h + 1);
    r.edges_used.assign((ds_.edge_list.size() + 63) / 64, 0);
    r.node_occ.set(g_.bit_of(start_, 0));
    Time prefix = 0;
    for (const auto& el : elements_) {
      if (el.is_move()) {
        int from = ds_.index_of(el.from);
        int to = ds_.index_of(el.to);
        int eid = -1;
        for (const auto& arc : ds_.out[from])
          if (arc.to == to) { eid = arc.edge_id; break; }
        Duration d = ds_.edge_dur[eid];
        r.edges_used[eid >> 6] |= std::uint64_t{1} << (eid & 63);
        if (int slot = g_.edge_slot[eid]; slot >= 0)
          for (Duration k = 1; k <= d; ++k)
            if (prefix + k <= g_.h) r.swap_occ[slot].set(prefix + k);
        prefix += d;
        if (prefix <= g_.h) r.node_occ.set(g_.bit_of(to, prefix));
      } else {
        int v = ds_.index_of(el.from);
        Duration d = ds_.stop_dur[v];
        for (Duration k = 1; k <= d; ++k)
          if (prefix + k <= g_.h) r.node_occ.set(g_.bit_of(v, prefix + k));
        prefix += d;
      }
    }
    r.total = prefix;
    if (park_forever) {
      auto [v, from_t] = *park_forever;
      for (Time t = from_t + 1; t <= g_.h; ++t) r.node_occ.set(g_.bit_of(v, t));
    }
    out_.push_back(std::move(r));
  }

  void dfs(int v, Time tau, size_t k) {
    const FrontierPlan& plan = *plan_;
    if (k == plan.stops.size()) {
      if (canon_.routes_end_at_last_completion) {
        emit(std::nullopt);
      } else {
        extend(v, tau);
      }
      return;
    }
    if (!plan.within_deadlines(ds_, v, tau, k)) return;
    for (const auto& arc : ds_.out[v]) {
      elements_.push_back(RouteElement::move(ds_.node_ids[v], ds_.node_ids[arc.to]));
      dfs(arc.to, tau + arc.dur, k);
      elements_.pop_back();
    }
    if (ds_.stop_kind[v] == DenseScenario::kHalt) {
      if (plan.stops[k] == v && tau + plan.stop_cost[k] <= plan.deadline[k]) {
        elements_.push_back(RouteElement::stop(ds_.node_ids[v]));
        dfs(v, tau + plan.stop_cost[k], k + 1);
        elements_.pop_back();
      }
    } else if (ds_.stop_kind[v] == DenseScenario::kPark) {
      elements_.push_back(RouteElement::stop(ds_.node_ids[v]));
      dfs(v, tau + ds_.stop_dur[v], k);
      elements_.pop_back();
    }
  }

  // Stable-model closure: activity after the last completion. At a park node
  // the no-more-moves outcome occupies the node up to the horizon and counts
  // once; elsewhere the trace simply ends. Trailing park stops that fit the
  // horizon are kept in the emitted route as a representative.
  void extend(int v, Time tau) {
    if (ds_.stop_kind[v] == DenseScenario::kPark) {
      const Duration d = ds_.stop_dur[v];
      size_t fitted = elements_.size();
      for (Time t = tau; t + d <= g_.h; t += d)
        elements_.push_back(RouteElement::stop(ds_.node_ids[v]));
      emit(std::make_pair(v, tau));
      elements_.resize(fitted);
      for (long long stays = 0;; ++stays) {
        Time t0 = tau + stays * d;
        for (const auto& arc : ds_.out[v]) {
          if (t0 + arc.dur > g_.h) continue;
          for (long long i = 0; i < stays; ++i)
            elements_.push_back(RouteElement::stop(ds_.node_ids[v]));
          elements_.push_back(RouteElement::move(ds_.node_ids[v], ds_.node_ids[arc.to]));
          extend(arc.to, t0 + arc.dur);
          elements_.resize(elements_.size() - 1 - stays);
        }
        if (t0 + d > g_.h) break;
      }
    } else {
      emit(std::nullopt);
      for (const auto& arc : ds_.out[v]) {
        if (tau + arc.dur > g_.h) continue;
        elements_.push_back(RouteElement::move(ds_.node_ids[v], ds_.node_ids[arc.to]));
        extend(arc.to, tau + arc.dur);
        elements_.pop_back();
      }
    }
  }
};

struct ObjectiveScratch {
  // Oracle-local objective arithmetic over edge-use masks; deliberately a
  // separate code path from validation::objectives_of.
  static ObjectiveVector vector_of(const DenseScenario& ds,
                                   const std::vector<const EnumRoute*>& picks) {
    ObjectiveVector obj;
    for (const EnumRoute* r : picks) {
      obj.ms = std::max(obj.ms, static_cast<long long>(r->total));
      obj.rl += r->total;
    }
    const size_t ec = ds.edge_list.size();
    auto uses = [&](const EnumRoute* r, size_t e) {
      return (r->edges_used[e >> 6] >> (e & 63)) & 1;
    };
    for (size_t i = 0; i < picks.size(); ++i)
      for (size_t k = i + 1; k < picks.size(); ++k) {
        const EnumRoute* a = picks[i];
        const EnumRoute* b = picks[k];
        // crossings: common successor node entered via distinct predecessors
        for (int v = 0; v < ds.n; ++v) {
          std::vector<NodeId> pa, pb;
          for (size_t e = 0; e < ec; ++e) {
            if (ds.index_of(ds.edge_list[e].to) != v) continue;
            if (uses(a, e)) pa.push_back(ds.edge_list[e].from);
            if (uses(b, e)) pb.push_back(ds.edge_list[e].from);
          }
          if (!pa.empty() && !pb.empty() &&
              !(pa.size() == 1 && pb.size() == 1 && pa[0] == pb[0]))
            ++obj.cn;
        }
        // overlaps: products over direction groups
        for (size_t e = 0; e < ec; ++e) {
          int r = ds.edge_rev[e];
          if (r >= 0 && static_cast<int>(e) > r) continue;  // count each pair once
          long long in_a = uses(a, e) + (r >= 0 ? uses(a, r) : 0);
          long long in_b = uses(b, e) + (r >= 0 ? uses(b, r) : 0);
          obj.on += in_a * in_b;
        }
      }
    return obj;
  }
};

struct EnumerationDriver {
  const Scenario& s;
  const DenseScenario ds;
  const Grids grids;
  Canonicalization canon;
  std::optional<long long> limit;
  const std::function<bool(const Solution&)>* sink = nullptr;
  // best-tracking (used by best_by_enumeration)
  bool track_best = false;
  std::optional<ObjectiveVector> best;
  long long optima_count = 0;
  Solution best_witness;

  long long count = 0;
  bool stopped = false;

  std::vector<VehicleId> vehicle_ids;
  std::vector<TaskId> task_ids;

  explicit EnumerationDriver(const Scenario& sc, const Canonicalization& c)
      : s(sc), ds(sc), grids(ds), canon(c) {
    for (const auto& [cid, v] : s.vehicles) vehicle_ids.push_back(cid);
    for (const auto& [tid, t] : s.tasks) task_ids.push_back(tid);
  }

  void run() {
    std::vector<int> choice(task_ids.size(), 0);
    assign_rec(choice, 0);
  }

  void assign_rec(std::vector<int>& choice, size_t t) {
    if (stopped) return;
    if (t == task_ids.size()) {
      run_assignment(choice);
      return;
    }
    if (vehicle_ids.empty()) return;  // tasks exist but no vehicles: infeasible
    for (size_t c = 0; c < vehicle_ids.size() && !stopped; ++c) {
      choice[t] = static_cast<int>(c);
      assign_rec(choice, t + 1);
    }
  }

  void run_assignment(const std::vector<int>& choice) {
    std::map<VehicleId, std::vector<TaskId>> assigned;
    for (VehicleId c : vehicle_ids) assigned[c];
    for (size_t t = 0; t < task_ids.size(); ++t)
      assigned[vehicle_ids[choice[t]]].push_back(task_ids[t]);

    // Permutations per vehicle, lexicographic by task id; infeasible ones
    // (even ignoring conflicts) contribute nothing and are dropped early.
    struct PerVehicle {
      VehicleId id;
      int start;
      std::vector<std::vector<TaskId>> perms;
      std::vector<FrontierPlan> plans;
    };
    std::vector<PerVehicle> per;
    for (VehicleId c : vehicle_ids) {
      PerVehicle pv;
      pv.id = c;
      pv.start = ds.index_of(s.vehicles.at(c));
      std::vector<TaskId> tasks = assigned[c];
      std::sort(tasks.begin(), tasks.end());
      if (tasks.empty()) {
        pv.perms.push_back({});
        pv.plans.push_back(FrontierPlan{});
      } else {
        do {
          FrontierPlan plan = make_frontier_plan(ds, tasks);
          if (plan.reachable && plan.within_deadlines(ds, pv.start, 0, 0)) {
            pv.perms.push_back(tasks);
            pv.plans.push_back(std::move(plan));
          }
        } while (std::next_permutation(tasks.begin(), tasks.end()));
      }
      if (pv.perms.empty()) return;  // no order works for this vehicle
      per.push_back(std::move(pv));
    }

    // Route sets are cached per (vehicle, order) and reused across order
    // combinations of the other vehicles.
    VehicleEnumerator route_enum(ds, grids, canon);
    std::vector<std::vector<std::vector<EnumRoute>>> routes(per.size());
    for (size_t i = 0; i < per.size(); ++i) {
      routes[i].resize(per[i].perms.size());
      for (size_t p = 0; p < per[i].perms.size(); ++p) {
        if (per[i].perms[p].empty() && canon.idle_vehicles_empty_route) {
          EnumRoute idle;
          idle.node_occ.resize(grids.node_bits());
          idle.swap_occ.assign(grids.bidir.size() * 2, {});
          for (auto& row : idle.swap_occ) row.resize(grids.h + 1);
          idle.edges_used.assign((ds.edge_list.size() + 63) / 64, 0);
          idle.node_occ.set(grids.bit_of(per[i].start, 0));
          routes[i][p].push_back(std::move(idle));
        } else {
          routes[i][p] = route_enum.run(per[i].start, per[i].plans[p]);
        }
        if (routes[i][p].empty()) {
          // a vehicle with no admissible route under some order may still
          // succeed under another; only an all-empty vehicle kills the branch
        }
      }
    }

    std::vector<size_t> perm_pick(per.size(), 0);
    order_rec(per, routes, perm_pick, 0);
  }

  template <typename Per>
  void order_rec(const Per& per, const std::vector<std::vector<std::vector<EnumRoute>>>& routes,
                 std::vector<size_t>& perm_pick, size_t i) {
    if (stopped) return;
    if (i == per.size()) {
      std::vector<const EnumRoute*> picks(per.size(), nullptr);
      join_rec(per, routes, perm_pick, picks, 0);
      return;
    }
    for (size_t p = 0; p < per[i].perms.size() && !stopped; ++p) {
      perm_pick[i] = p;
      order_rec(per, routes, perm_pick, i + 1);
    }
  }

  template <typename Per>
  void join_rec(const Per& per, const std::vector<std::vector<std::vector<EnumRoute>>>& routes,
                const std::vector<size_t>& perm_pick, std::vector<const EnumRoute*>& picks,
                size_t i) {
    if (stopped) return;
    if (i == per.size()) {
      accept(per, perm_pick, picks);
      return;
    }
    for (const EnumRoute& r : routes[i][perm_pick[i]]) {
      bool ok = true;
      for (size_t k = 0; k < i && ok; ++k)
        ok = compatible(grids, *picks[k], r);
      if (!ok) continue;
      picks[i] = &r;
      join_rec(per, routes, perm_pick, picks, i + 1);
      if (stopped) return;
    }
  }

  template <typename Per>
  void accept(const Per& per, const std::vector<size_t>& perm_pick,
              const std::vector<const EnumRoute*>& picks) {
    ++count;
    if (track_best) {
      ObjectiveVector v = ObjectiveScratch::vector_of(ds, picks);
      if (!best || v < *best) {
        best = v;
        optima_count = 1;
        best_witness = build_solution(per, perm_pick, picks);
      } else if (v == *best) {
        ++optima_count;
      }
    }
    if (sink && *sink) {
      if (!(*sink)(build_solution(per, perm_pick, picks))) {
        stopped = true;
        return;
      }
    }
    if (limit && count >= *limit) stopped = true;
  }

  template <typename Per>
  Solution build_solution(const Per& per, const std::vector<size_t>& perm_pick,
                          const std::vector<const EnumRoute*>& picks) const {
    Solution sol;
    for (size_t i = 0; i < per.size(); ++i) {
      sol.order[per[i].id] = per[i].perms[perm_pick[i]];
      for (TaskId t : per[i].perms[perm_pick[i]]) sol.assignment[t] = per[i].id;
      sol.routes[per[i].id] = picks[i]->elements;
    }
    return sol;
  }
};

}  // namespace

EnumerationResult enumerate_feasible(const Scenario& s, const Canonicalization& canon,
                                     std::optional<long long> limit,
                                     const std::function<bool(const Solution&)>& sink) {
  EnumerationDriver driver(s, canon);
  driver.limit = limit;
  driver.sink = &sink;
  driver.run();
  return EnumerationResult{driver.count, driver.stopped};
}

std::optional<BestByEnumeration> best_by_enumeration(const Scenario& s,
                                                     const Canonicalization& canon) {
  Canonicalization canonical = canon;
  canonical.routes_end_at_last_completion = true;  // optima are canonical by definition
  EnumerationDriver driver(s, canonical);
  driver.track_best = true;
  driver.run();
  if (!driver.best) return std::nullopt;
  BestByEnumeration out;
  out.objectives = *driver.best;
  out.optima_count = driver.optima_count;
  out.witness = driver.best_witness;
  out.feasible_count = driver.count;
  return out;
}

}  // namespace agv
