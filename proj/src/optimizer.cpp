#include "agv/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "agv/validation.hpp"
#include "dense.hpp"

namespace agv {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kBudgetExhaustedNoSolution: return "budget_exhausted_no_solution";
  }
  return "?";
}

namespace {

using detail::DenseScenario;
using detail::FrontierPlan;
using Clock = std::chrono::steady_clock;

constexpr long long kHuge = std::numeric_limits<long long>::max() / 4;

struct Incumbent {
  ObjectiveVector vec;
  Solution solution;
};

struct SharedSearch {
  std::mutex mu;
  std::atomic<const Incumbent*> best{nullptr};
  std::vector<std::unique_ptr<const Incumbent>> owned;  // guarded by mu
  std::atomic<long long> nodes{0};
  std::atomic<long long> updates{0};
  std::atomic<bool> stop{false};
  std::optional<Clock::time_point> deadline;
  Clock::time_point started = Clock::now();
  std::function<void(const ObjectiveVector&, long long, long long)> on_incumbent;

  long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
  }

  bool try_improve(const ObjectiveVector& v, const Solution& sol) {
    std::lock_guard<std::mutex> lock(mu);
    const Incumbent* cur = best.load(std::memory_order_acquire);
    if (cur && !(v < cur->vec)) return false;
    auto next = std::make_unique<Incumbent>(Incumbent{v, sol});
    best.store(next.get(), std::memory_order_release);
    owned.push_back(std::move(next));
    updates.fetch_add(1, std::memory_order_relaxed);
    if (on_incumbent) on_incumbent(v, nodes.load(std::memory_order_relaxed), elapsed_ms());
    return true;
  }
};

// Objective comparison strategy: the default vector mode prunes on the whole
// lexicographic vector; staged mode minimizes one component under exact caps
// on the more significant ones.
struct StagePolicy {
  bool staged = false;
  int stage = 0;                      // 0..3, component being minimized
  std::array<long long, 4> caps{};    // exact optima of earlier stages
  std::atomic<long long>* stage_best = nullptr;  // scalar incumbent of this stage

  static long long component(const ObjectiveVector& v, int i) {
    switch (i) {
      case 0: return v.ms;
      case 1: return v.rl;
      case 2: return v.cn;
      default: return v.on;
    }
  }

  bool prune(const ObjectiveVector& bound, const SharedSearch& shared) const {
    if (!staged) {
      const Incumbent* cur = shared.best.load(std::memory_order_acquire);
      return cur && !(bound < cur->vec);
    }
    for (int i = 0; i < stage; ++i)
      if (component(bound, i) > caps[i]) return true;
    return component(bound, stage) >= stage_best->load(std::memory_order_acquire);
  }

  bool leaf_acceptable(const ObjectiveVector& v) const {
    if (!staged) return true;
    for (int i = 0; i < stage; ++i)
      if (component(v, i) > caps[i]) return false;
    return true;
  }
};

struct VehicleState {
  VehicleId id = -1;
  int start = -1;
  int node = -1;
  Time tau = 0;
  size_t k = 0;
  FrontierPlan plan;
  Route route;
};

struct OccEntry {
  Time lo, hi;
  int veh;
};

// Joint time-expanded route search for one fixed (assignment, order) branch.
class JointRouteSearch {
 public:
  JointRouteSearch(const DenseScenario& ds, SharedSearch& shared, const StagePolicy& policy)
      : ds_(ds), shared_(shared), policy_(policy) {
    node_occ_.resize(ds.n);
    edge_occ_.resize(ds.edge_list.size());
    use_count_.resize(ds.edge_list.size());
    in_used_.resize(ds.n);
  }

  // vehicles: one state per vehicle, orders already fixed via plan
  void run(std::vector<VehicleState>& vehicles) {
    vehicles_ = &vehicles;
    const int c = static_cast<int>(vehicles.size());
    pair_mark_.assign(static_cast<size_t>(c) * c * ds_.n, 0);
    for (auto& stack : node_occ_) stack.clear();
    for (auto& stack : edge_occ_) stack.clear();
    for (auto& uc : use_count_) uc.assign(c, 0);
    for (auto& iu : in_used_) iu.assign(c, {});
    cn_ = 0;
    on_ = 0;
    for (int i = 0; i < c; ++i) {
      node_occ_[vehicles[i].start].push_back({0, 0, i});
      vehicles[i].node = vehicles[i].start;
      vehicles[i].tau = 0;
      vehicles[i].k = 0;
      vehicles[i].route.clear();
    }
    step();
    flush_nodes();
    for (int i = 0; i < c; ++i) node_occ_[vehicles[i].start].pop_back();
  }

 private:
  const DenseScenario& ds_;
  SharedSearch& shared_;
  const StagePolicy& policy_;
  std::vector<VehicleState>* vehicles_ = nullptr;

  std::vector<std::vector<OccEntry>> node_occ_;  // per dense node
  std::vector<std::vector<OccEntry>> edge_occ_;  // per edge id
  std::vector<std::vector<int>> use_count_;      // edge id -> per-vehicle count
  std::vector<std::vector<std::vector<int>>> in_used_;  // node -> vehicle -> used in-edge ids
  std::vector<uint8_t> pair_mark_;               // (a*C+b)*n + node, a<b
  long long cn_ = 0;
  long long on_ = 0;
  long long unflushed_ = 0;

  void count_node() {
    if (++unflushed_ >= 512) flush_nodes();
  }

  void flush_nodes() {
    shared_.nodes.fetch_add(unflushed_, std::memory_order_relaxed);
    unflushed_ = 0;
    if (shared_.deadline && Clock::now() >= *shared_.deadline)
      shared_.stop.store(true, std::memory_order_relaxed);
  }

  bool stopped() const { return shared_.stop.load(std::memory_order_relaxed); }

  bool node_free(int node, Time lo, Time hi, int veh) const {
    for (const auto& e : node_occ_[node])
      if (e.veh != veh && e.lo <= hi && lo <= e.hi) return false;
    return true;
  }

  bool swap_free(int edge_id, Time lo, Time hi, int veh) const {
    int rev = ds_.edge_rev[edge_id];
    if (rev < 0) return true;
    for (const auto& e : edge_occ_[rev])
      if (e.veh != veh && e.lo <= hi && lo <= e.hi) return false;
    return true;
  }

  size_t mark_index(int a, int b, int node) const {
    if (a > b) std::swap(a, b);
    const int c = static_cast<int>(vehicles_->size());
    return (static_cast<size_t>(a) * c + b) * ds_.n + node;
  }

  struct MoveUndo {
    bool first_use = false;
    long long on_delta = 0;
    std::vector<size_t> marks;
  };

  MoveUndo commit_edge_use(int veh, int edge_id) {
    MoveUndo undo;
    if (++use_count_[edge_id][veh] != 1) return undo;
    undo.first_use = true;
    const int c = static_cast<int>(vehicles_->size());
    const int rev = ds_.edge_rev[edge_id];
    const int target = ds_.index_of(ds_.edge_list[edge_id].to);
    const NodeId source = ds_.edge_list[edge_id].from;
    for (int j = 0; j < c; ++j) {
      if (j == veh) continue;
      if (use_count_[edge_id][j] > 0) ++undo.on_delta;
      if (rev >= 0 && use_count_[rev][j] > 0) ++undo.on_delta;
      size_t mi = mark_index(veh, j, target);
      if (!pair_mark_[mi]) {
        bool crossing = false;
        for (int f : in_used_[target][j])
          if (ds_.edge_list[f].from != source) {
            crossing = true;
            break;
          }
        if (crossing) {
          pair_mark_[mi] = 1;
          undo.marks.push_back(mi);
        }
      }
    }
    on_ += undo.on_delta;
    cn_ += static_cast<long long>(undo.marks.size());
    in_used_[target][veh].push_back(edge_id);
    return undo;
  }

  void rollback_edge_use(int veh, int edge_id, const MoveUndo& undo) {
    if (undo.first_use) {
      const int target = ds_.index_of(ds_.edge_list[edge_id].to);
      in_used_[target][veh].pop_back();
      on_ -= undo.on_delta;
      cn_ -= static_cast<long long>(undo.marks.size());
      for (size_t mi : undo.marks) pair_mark_[mi] = 0;
    }
    --use_count_[edge_id][veh];
  }

  ObjectiveVector bound() const {
    long long ms = 0, rl = 0;
    for (const auto& v : *vehicles_) {
      long long est = v.tau;
      if (v.k < v.plan.stops.size()) {
        Duration rest = v.plan.min_remaining(ds_, v.node, v.k);
        est = rest < 0 ? kHuge : v.tau + rest;
      }
      ms = std::max(ms, est);
      rl += est;
    }
    return ObjectiveVector{ms, rl, cn_, on_};
  }

  void step() {
    count_node();
    if (stopped()) return;

    auto& vehicles = *vehicles_;
    int pick = -1;
    for (int i = 0; i < static_cast<int>(vehicles.size()); ++i) {
      if (vehicles[i].k >= vehicles[i].plan.stops.size()) continue;
      if (pick < 0 || vehicles[i].tau < vehicles[pick].tau ||
          (vehicles[i].tau == vehicles[pick].tau && vehicles[i].id < vehicles[pick].id))
        pick = i;
    }
    if (pick < 0) {
      leaf();
      return;
    }
    if (policy_.prune(bound(), shared_)) return;

    auto& v = vehicles[pick];
    const FrontierPlan& plan = v.plan;
    const size_t k = v.k;
    const int node = v.node;
    const Time tau = v.tau;

    // halt to complete the next pending subtask
    if (ds_.stop_kind[node] == DenseScenario::kHalt && plan.stops[k] == node) {
      const Duration d = plan.stop_cost[k];
      if (tau + d <= plan.deadline[k] && node_free(node, tau + 1, tau + d, pick)) {
        node_occ_[node].push_back({tau + 1, tau + d, pick});
        v.route.push_back(RouteElement::stop(ds_.node_ids[node]));
        v.tau = tau + d;
        v.k = k + 1;
        step();
        v.k = k;
        v.tau = tau;
        v.route.pop_back();
        node_occ_[node].pop_back();
      }
    }

    // moves, best-estimate first
    struct Cand {
      Duration est;
      NodeId target_id;
      const DenseScenario::Arc* arc;
    };
    std::vector<Cand> cands;
    for (const auto& arc : ds_.out[node]) {
      const Time arrive = tau + arc.dur;
      if (!plan.within_deadlines(ds_, arc.to, arrive, k)) continue;
      if (!node_free(arc.to, arrive, arrive, pick)) continue;
      if (!swap_free(arc.edge_id, tau + 1, arrive, pick)) continue;
      Duration rest = plan.min_remaining(ds_, arc.to, k);
      cands.push_back(Cand{rest < 0 ? kHuge : arrive + rest, ds_.node_ids[arc.to], &arc});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return std::tie(a.est, a.target_id) < std::tie(b.est, b.target_id);
    });
    for (const Cand& cand : cands) {
      const auto& arc = *cand.arc;
      const Time arrive = tau + arc.dur;
      edge_occ_[arc.edge_id].push_back({tau + 1, arrive, pick});
      node_occ_[arc.to].push_back({arrive, arrive, pick});
      MoveUndo undo = commit_edge_use(pick, arc.edge_id);
      v.route.push_back(RouteElement::move(ds_.node_ids[node], ds_.node_ids[arc.to]));
      v.node = arc.to;
      v.tau = arrive;
      step();
      v.tau = tau;
      v.node = node;
      v.route.pop_back();
      rollback_edge_use(pick, arc.edge_id, undo);
      node_occ_[arc.to].pop_back();
      edge_occ_[arc.edge_id].pop_back();
      if (stopped()) return;
    }

    // wait at a park node
    if (ds_.stop_kind[node] == DenseScenario::kPark) {
      const Duration d = ds_.stop_dur[node];
      if (plan.within_deadlines(ds_, node, tau + d, k) && node_free(node, tau + 1, tau + d, pick)) {
        node_occ_[node].push_back({tau + 1, tau + d, pick});
        v.route.push_back(RouteElement::stop(ds_.node_ids[node]));
        v.tau = tau + d;
        step();
        v.tau = tau;
        v.route.pop_back();
        node_occ_[node].pop_back();
      }
    }
  }

  void leaf() {
    auto& vehicles = *vehicles_;
    ObjectiveVector v{0, 0, cn_, on_};
    for (const auto& s : vehicles) {
      v.ms = std::max(v.ms, static_cast<long long>(s.tau));
      v.rl += s.tau;
    }
    if (!policy_.leaf_acceptable(v)) return;
    if (policy_.staged) {
      long long cur = policy_.stage_best->load(std::memory_order_acquire);
      if (StagePolicy::component(v, policy_.stage) >= cur) return;
    }
    Solution sol;
    for (const auto& s : vehicles) {
      sol.routes[s.id] = s.route;
      sol.order[s.id] = {};
      for (size_t i = 0; i < s.plan.owner.size(); ++i)
        if (s.plan.owner_index[i] == 1) sol.order[s.id].push_back(s.plan.owner[i]);
      for (TaskId t : sol.order[s.id]) sol.assignment[t] = s.id;
    }
    if (policy_.staged) {
      // scalar incumbent for this stage; full vector kept for reporting
      std::lock_guard<std::mutex> lock(shared_.mu);
      long long cur = policy_.stage_best->load(std::memory_order_relaxed);
      long long mine = StagePolicy::component(v, policy_.stage);
      if (mine < cur) {
        policy_.stage_best->store(mine, std::memory_order_release);
        auto next = std::make_unique<Incumbent>(Incumbent{v, std::move(sol)});
        shared_.best.store(next.get(), std::memory_order_release);
        shared_.owned.push_back(std::move(next));
        shared_.updates.fetch_add(1, std::memory_order_relaxed);
        if (shared_.on_incumbent)
          shared_.on_incumbent(v, shared_.nodes.load(std::memory_order_relaxed),
                               shared_.elapsed_ms());
      }
    } else {
      shared_.try_improve(v, sol);
    }
  }
};

// Assignment and order layers. Tasks are assigned in id order over vehicles
// in id order; per-vehicle orders are explored lexicographically; each full
// (assignment, order) branch runs the joint route search.
class BranchDriver {
 public:
  BranchDriver(const Scenario& s, const DenseScenario& ds, SharedSearch& shared,
               const StagePolicy& policy)
      : s_(s), ds_(ds), shared_(shared), policy_(policy), joint_(ds, shared, policy) {
    for (const auto& [cid, start] : s.vehicles) {
      vehicle_ids_.push_back(cid);
      starts_.push_back(ds.index_of(start));
    }
    for (const auto& [tid, t] : s.tasks) task_ids_.push_back(tid);
    // lone-task completion bounds, used to gate assignment prefixes
    lone_cost_.assign(vehicle_ids_.size(), std::vector<Duration>(task_ids_.size(), -1));
    for (size_t c = 0; c < vehicle_ids_.size(); ++c)
      for (size_t t = 0; t < task_ids_.size(); ++t) {
        FrontierPlan plan = detail::make_frontier_plan(ds_, {task_ids_[t]});
        lone_cost_[c][t] =
            plan.reachable ? plan.min_remaining(ds_, starts_[c], 0) : Duration{-1};
      }
  }

  // Explores assignments whose first `prefix.size()` choices are fixed.
  void run_subtree(const std::vector<int>& prefix) {
    choice_.assign(task_ids_.size(), 0);
    std::copy(prefix.begin(), prefix.end(), choice_.begin());
    assign_rec(prefix.size());
  }

  size_t task_count() const { return task_ids_.size(); }
  size_t vehicle_count() const { return vehicle_ids_.size(); }

  // Admissible prefix gate: some task can no longer be served by its vehicle
  // within its own deadline, or the bound already loses to the incumbent.
  bool prefix_viable(const std::vector<int>& prefix) {
    std::vector<long long> load_halts(vehicle_ids_.size(), 0);
    std::vector<long long> load_max(vehicle_ids_.size(), 0);
    long long unassigned_halts = 0;
    for (size_t t = 0; t < task_ids_.size(); ++t) {
      long long halts = 0;
      for (NodeId v : s_.tasks.at(task_ids_[t]).subtasks) halts += s_.halts.at(v);
      if (t < prefix.size()) {
        int c = prefix[t];
        Duration lone = lone_cost_[c][t];
        if (lone < 0 || lone > s_.tasks.at(task_ids_[t]).deadline) return false;
        load_halts[c] += halts;
        load_max[c] = std::max(load_max[c], lone);
      } else {
        unassigned_halts += halts;
      }
    }
    ObjectiveVector b{0, unassigned_halts, 0, 0};
    for (size_t c = 0; c < vehicle_ids_.size(); ++c) {
      long long est = std::max(load_max[c], load_halts[c]);
      b.ms = std::max(b.ms, est);
      b.rl += est;
    }
    return !policy_.prune(b, shared_);
  }

 private:
  const Scenario& s_;
  const DenseScenario& ds_;
  SharedSearch& shared_;
  const StagePolicy& policy_;
  JointRouteSearch joint_;
  std::vector<VehicleId> vehicle_ids_;
  std::vector<int> starts_;
  std::vector<TaskId> task_ids_;
  std::vector<std::vector<Duration>> lone_cost_;
  std::vector<int> choice_;

  void assign_rec(size_t t) {
    if (shared_.stop.load(std::memory_order_relaxed)) return;
    if (t == task_ids_.size()) {
      run_orders();
      return;
    }
    for (size_t c = 0; c < vehicle_ids_.size(); ++c) {
      choice_[t] = static_cast<int>(c);
      std::vector<int> prefix(choice_.begin(), choice_.begin() + t + 1);
      if (!prefix_viable(prefix)) continue;
      assign_rec(t + 1);
    }
  }

  void run_orders() {
    std::vector<std::vector<std::vector<TaskId>>> perms(vehicle_ids_.size());
    for (size_t c = 0; c < vehicle_ids_.size(); ++c) {
      std::vector<TaskId> mine;
      for (size_t t = 0; t < task_ids_.size(); ++t)
        if (choice_[t] == static_cast<int>(c)) mine.push_back(task_ids_[t]);
      if (mine.empty()) {
        perms[c].push_back({});
        continue;
      }
      std::sort(mine.begin(), mine.end());
      do {
        perms[c].push_back(mine);
      } while (std::next_permutation(mine.begin(), mine.end()));
    }
    std::vector<size_t> pick(vehicle_ids_.size(), 0);
    order_rec(perms, pick, 0);
  }

  void order_rec(const std::vector<std::vector<std::vector<TaskId>>>& perms,
                 std::vector<size_t>& pick, size_t c) {
    if (shared_.stop.load(std::memory_order_relaxed)) return;
    if (c == perms.size()) {
      std::vector<VehicleState> states(vehicle_ids_.size());
      for (size_t i = 0; i < vehicle_ids_.size(); ++i) {
        states[i].id = vehicle_ids_[i];
        states[i].start = starts_[i];
        states[i].plan = detail::make_frontier_plan(ds_, perms[i][pick[i]]);
        if (!states[i].plan.reachable ||
            !states[i].plan.within_deadlines(ds_, states[i].start, 0, 0))
          return;
      }
      joint_.run(states);
      return;
    }
    for (size_t p = 0; p < perms[c].size(); ++p) {
      // quick order gate: serving in this order must meet every deadline
      FrontierPlan plan = detail::make_frontier_plan(ds_, perms[c][p]);
      if (!plan.reachable || !plan.within_deadlines(ds_, starts_[c], 0, 0)) continue;
      pick[c] = p;
      order_rec(perms, pick, c + 1);
    }
  }
};

Solution empty_solution(const Scenario& s) {
  Solution sol;
  for (const auto& [c, v] : s.vehicles) {
    sol.order[c] = {};
    sol.routes[c] = {};
  }
  return sol;
}

// Assignment prefixes used as parallel work units.
std::vector<std::vector<int>> make_roots(size_t tasks, size_t vehicles, int threads) {
  size_t depth = 0;
  if (threads > 1 && vehicles > 1) {
    size_t want = static_cast<size_t>(threads) * 4;
    size_t count = 1;
    while (depth < tasks && depth < 4 && count < want) {
      count *= vehicles;
      ++depth;
    }
  }
  std::vector<std::vector<int>> roots;
  std::vector<int> cur(depth, 0);
  while (true) {
    roots.push_back(cur);
    size_t i = depth;
    while (i > 0) {
      if (++cur[i - 1] < static_cast<int>(vehicles)) break;
      cur[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  if (depth == 0) roots.assign(1, {});
  return roots;
}

void run_pass(const Scenario& s, const DenseScenario& ds, SharedSearch& shared,
              const StagePolicy& policy, int threads) {
  auto roots = make_roots(s.tasks.size(), s.vehicles.size(), threads);
  std::atomic<size_t> next{0};
  auto work = [&]() {
    BranchDriver driver(s, ds, shared, policy);
    while (!shared.stop.load(std::memory_order_relaxed)) {
      size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= roots.size()) break;
      if (!roots[i].empty() && !driver.prefix_viable(roots[i])) continue;
      driver.run_subtree(roots[i]);
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
}

}  // namespace

SolveOutcome solve(const Scenario& s, const SolverConfig& cfg) {
  SolveOutcome out;
  SharedSearch shared;
  shared.on_incumbent = cfg.on_incumbent;
  if (cfg.budget_ms) shared.deadline = Clock::now() + std::chrono::milliseconds(*cfg.budget_ms);

  if (s.tasks.empty()) {
    out.status = SolveStatus::kOptimal;
    out.solution = empty_solution(s);
    out.objectives = ObjectiveVector{};
    out.stats.proof_complete = true;
    if (cfg.on_incumbent) cfg.on_incumbent(*out.objectives, 0, 0);
    out.stats.incumbent_updates = 1;
    return out;
  }

  const DenseScenario ds(s);
  const int threads = std::max(1, cfg.threads);

  if (cfg.stage_mode == SolverConfig::StageMode::kVector) {
    StagePolicy policy;
    run_pass(s, ds, shared, policy, threads);
  } else {
    StagePolicy policy;
    policy.staged = true;
    std::atomic<long long> stage_best{kHuge};
    policy.stage_best = &stage_best;
    for (int stage = 0; stage < 4 && !shared.stop.load(); ++stage) {
      policy.stage = stage;
      stage_best.store(kHuge);
      run_pass(s, ds, shared, policy, threads);
      long long got = stage_best.load();
      if (got >= kHuge) break;  // stage found nothing: infeasible overall
      policy.caps[stage] = got;
    }
  }

  out.stats.nodes_expanded = shared.nodes.load();
  out.stats.incumbent_updates = shared.updates.load();
  out.stats.elapsed_ms = shared.elapsed_ms();
  const bool budget_hit = shared.stop.load();
  out.stats.proof_complete = !budget_hit;

  const Incumbent* best = shared.best.load();
  if (!best) {
    out.status = budget_hit ? SolveStatus::kBudgetExhaustedNoSolution : SolveStatus::kInfeasible;
    return out;
  }
  out.solution = best->solution;
  // vehicles with no tasks keep their (empty) entries
  for (const auto& [c, v] : s.vehicles) {
    out.solution->order.try_emplace(c);
    out.solution->routes.try_emplace(c);
  }
  out.objectives = best->vec;
  out.status = budget_hit ? SolveStatus::kFeasible : SolveStatus::kOptimal;
  return out;
}

ObjectiveVector bound_of(const Scenario& s, const std::vector<VehicleSnapshot>& vehicles,
                         const std::map<VehicleId, Route>& committed_routes) {
  const DenseScenario ds(s);
  ObjectiveVector b;
  for (const auto& v : vehicles) {
    long long est = v.elapsed;
    if (!v.remaining_subtasks.empty()) {
      // chain the remaining subtasks by shortest paths
      Duration total = 0;
      int cur = ds.index_of(v.node);
      bool ok = true;
      for (NodeId stop : v.remaining_subtasks) {
        int si = ds.index_of(stop);
        Duration hop = ds.dist[cur][si];
        if (hop < 0) {
          ok = false;
          break;
        }
        total += hop + s.halts.at(stop);
        cur = si;
      }
      est = ok ? v.elapsed + total : kHuge;
    }
    b.ms = std::max(b.ms, est);
    b.rl += est;
  }
  Solution partial;
  partial.routes = committed_routes;
  ObjectiveVector committed = objectives_of(s, partial);
  b.cn = committed.cn;
  b.on = committed.on;
  return b;
}

}  // namespace agv
