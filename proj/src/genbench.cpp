#include "agv/genbench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "agv/baseline.hpp"
#include "agv/fact_io.hpp"
#include "agv/oracle.hpp"
#include "agv/validation.hpp"

namespace agv {

namespace {

// Seeded draws through explicit modulo so emitted instances are identical
// across standard libraries.
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(unsigned long long seed) : engine(seed) {}
  long long below(long long n) { return n <= 1 ? 0 : static_cast<long long>(engine() % n); }
  long long between(long long lo, long long hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return static_cast<double>(engine() % 1000000) < p * 1000000.0; }
};

}  // namespace

Scenario generate(const GenParams& p) {
  if (p.nodes < 3) throw InfeasibleParamsError("need at least 3 nodes");
  if (p.vehicles < 1) throw InfeasibleParamsError("need at least one vehicle");
  if (p.vehicles > p.nodes)
    throw InfeasibleParamsError("more vehicles than nodes: distinct initial locations impossible");
  if (p.tasks < 0 || p.subtasks_min < 1 || p.subtasks_max < p.subtasks_min)
    throw InfeasibleParamsError("bad task/subtask counts");
  if (p.halt_fraction < 0 || p.halt_fraction > 1 || p.park_fraction < 0 || p.park_fraction > 1 ||
      p.bidirectional_fraction < 0 || p.bidirectional_fraction > 1)
    throw InfeasibleParamsError("fractions must be within [0,1]");
  if (p.deadline_slack < 1.0) throw InfeasibleParamsError("deadline slack must be >= 1");
  if (p.total_subtasks &&
      (*p.total_subtasks < p.tasks * p.subtasks_min || *p.total_subtasks > p.tasks * p.subtasks_max))
    throw InfeasibleParamsError("total_subtasks outside the per-task range");

  Rng rng(p.seed);

  int park_count = static_cast<int>(std::lround(p.park_fraction * p.nodes));
  park_count = std::min({park_count, p.nodes - 3, p.nodes / 2});
  int ring = p.nodes - park_count;
  // ring + two stub edges per park bay must fit the edge budget
  while (park_count > 0 && ring + 2 * park_count > p.edges) --park_count, ++ring;
  if (p.edges < ring) throw InfeasibleParamsError("edge budget below ring size");

  ScenarioParts parts;
  for (int v = 1; v <= p.nodes; ++v) parts.nodes.push_back(v);

  std::set<std::pair<NodeId, NodeId>> edge_set;
  auto add_edge = [&](NodeId a, NodeId b, Duration d) {
    if (edge_set.emplace(a, b).second) parts.edges.push_back({a, b, d});
  };
  for (int i = 1; i <= ring; ++i) add_edge(i, i % ring + 1, rng.between(2, 5));

  // park bays: in and out stubs to distinct ring nodes
  std::vector<int> bay_anchor;
  for (int b = 0; b < park_count; ++b) {
    NodeId park = ring + 1 + b;
    int anchor;
    do {
      anchor = static_cast<int>(rng.between(1, ring));
    } while (std::count(bay_anchor.begin(), bay_anchor.end(), anchor));
    bay_anchor.push_back(anchor);
    Duration d = rng.between(1, 3);
    add_edge(anchor, park, d);
    add_edge(park, anchor, d);
    parts.parks.push_back({park, rng.between(1, 3)});
  }

  // cross-links between ring nodes
  long long budget = p.edges - static_cast<long long>(parts.edges.size());
  int guard = 0;
  while (budget > 0 && guard < 10000) {
    ++guard;
    NodeId a = static_cast<NodeId>(rng.between(1, ring));
    NodeId b = static_cast<NodeId>(rng.between(1, ring));
    if (a == b || edge_set.count({a, b})) continue;
    Duration d = rng.between(2, 5);
    bool both = p.bidirectional_fraction > 0 && budget >= 2 && !edge_set.count({b, a}) &&
                rng.chance(p.bidirectional_fraction);
    add_edge(a, b, d);
    --budget;
    if (both) {
      add_edge(b, a, d);
      --budget;
    }
  }
  if (budget > 0) throw InfeasibleParamsError("graph too dense for the requested edge count");

  int halt_count = static_cast<int>(std::lround(p.halt_fraction * p.nodes));
  halt_count = std::min(halt_count, ring);
  if (p.tasks > 0) halt_count = std::max(halt_count, 1);
  std::vector<NodeId> ring_nodes(ring);
  for (int i = 0; i < ring; ++i) ring_nodes[i] = i + 1;
  for (int i = 0; i < halt_count; ++i) {
    long long pick = rng.between(i, ring - 1);
    std::swap(ring_nodes[i], ring_nodes[pick]);
    parts.halts.push_back({ring_nodes[i], rng.between(2, 4)});
  }
  std::vector<NodeId> halt_nodes(ring_nodes.begin(), ring_nodes.begin() + halt_count);
  std::sort(halt_nodes.begin(), halt_nodes.end());

  std::vector<NodeId> all_nodes = parts.nodes;
  for (int i = 0; i < p.vehicles; ++i) {
    long long pick = rng.between(i, p.nodes - 1);
    std::swap(all_nodes[i], all_nodes[pick]);
    parts.vehicles.push_back({i + 1, all_nodes[i]});
  }

  // subtask counts: start at the minimum, spread any remainder round-robin
  std::vector<int> counts(p.tasks, p.subtasks_min);
  if (p.total_subtasks) {
    int extra = *p.total_subtasks - p.tasks * p.subtasks_min;
    for (int i = 0; extra > 0; i = (i + 1) % p.tasks)
      if (counts[i] < p.subtasks_max) {
        ++counts[i];
        --extra;
      }
  } else {
    for (int i = 0; i < p.tasks; ++i)
      counts[i] = static_cast<int>(rng.between(p.subtasks_min, p.subtasks_max));
  }
  for (int t = 0; t < p.tasks; ++t) {
    parts.tasks.push_back({t + 1, std::nullopt});
    for (int j = 0; j < counts[t]; ++j) {
      NodeId loc = halt_nodes[rng.below(static_cast<long long>(halt_nodes.size()))];
      parts.subtasks.push_back({t + 1, j + 1, loc});
    }
  }

  // deadlines: slack times the cumulative completion bound under the
  // provisional round-robin assignment
  {
    ScenarioParts probe = parts;
    for (auto& t : probe.tasks) t.deadline = 1;  // placeholder for validation
    Scenario draft = build_scenario(probe);
    ShortestPaths sp(draft);
    std::vector<Time> clock(p.vehicles, 0);
    std::vector<NodeId> at(p.vehicles);
    for (int c = 0; c < p.vehicles; ++c) at[c] = draft.vehicles.at(c + 1);
    for (int t = 0; t < p.tasks; ++t) {
      int c = t % p.vehicles;
      const auto& subs = draft.tasks.at(t + 1).subtasks;
      CompletionBound bound = min_completion_time(draft, sp, at[c], subs);
      if (!bound.duration)
        throw InfeasibleParamsError("generated layout leaves a subtask unreachable");
      clock[c] += *bound.duration;
      at[c] = subs.back();
      parts.tasks[t].deadline =
          static_cast<Duration>(std::llround(std::ceil(p.deadline_slack * clock[c])));
    }
  }

  return build_scenario(parts);
}

namespace {

struct BenchRow {
  std::string instance;
  std::string solver;
  std::string status;
  std::optional<ObjectiveVector> obj;
  long long wall_ms = 0;
  long long nodes = 0;
  std::optional<bool> proven;
};

std::string row_to_csv(const BenchRow& r) {
  std::ostringstream os;
  os << r.instance << "," << r.solver << "," << r.status << ",";
  if (r.obj) os << r.obj->ms << "," << r.obj->rl << "," << r.obj->cn << "," << r.obj->on;
  else os << ",,,";
  os << "," << r.wall_ms << "," << r.nodes << ",";
  if (r.proven) os << (*r.proven ? "true" : "false");
  return os.str();
}

BenchRow run_cell(const std::filesystem::path& file, const std::string& solver,
                  const BenchOptions& opts) {
  BenchRow row;
  row.instance = file.filename().string();
  row.solver = solver;
  auto started = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 started)
        .count();
  };
  Scenario s;
  try {
    std::ifstream in(file);
    std::stringstream buf;
    buf << in.rdbuf();
    s = parse_facts(buf.str());
  } catch (const std::exception&) {
    row.status = "error";
    row.wall_ms = elapsed();
    return row;
  }
  try {
    if (solver == "optimizer") {
      SolverConfig cfg;
      cfg.budget_ms = opts.budget_ms;
      cfg.threads = opts.threads;
      SolveOutcome outcome = solve(s, cfg);
      row.status = to_string(outcome.status);
      row.obj = outcome.objectives;
      row.nodes = outcome.stats.nodes_expanded;
      row.proven = outcome.stats.proof_complete;
    } else if (solver == "baseline") {
      GreedyResult res = greedy_round_robin(s);
      if (res.ok()) {
        row.status = "feasible";
        row.obj = res.objectives;
      } else {
        row.status =
            res.failure->kind == GreedyFailure::Kind::kDeadlock ? "deadlock" : "deadline";
      }
      row.proven = false;
    } else if (solver == "oracle") {
      auto best = best_by_enumeration(s);
      if (best) {
        row.status = "optimal";
        row.obj = best->objectives;
        row.nodes = best->feasible_count;
      } else {
        row.status = "infeasible";
      }
      row.proven = true;
    } else {
      row.status = "error";
    }
  } catch (const std::exception&) {
    row.status = "error";
  }
  row.wall_ms = elapsed();
  return row;
}

}  // namespace

std::string run_bench(const std::filesystem::path& dir, const BenchOptions& opts) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::exists(dir))
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".lp")
        files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<std::string> solvers = opts.solvers;
  std::sort(solvers.begin(), solvers.end());
  solvers.erase(std::unique(solvers.begin(), solvers.end()), solvers.end());

  struct Cell {
    std::filesystem::path file;
    std::string solver;
  };
  std::vector<Cell> cells;
  for (const auto& f : files)
    for (const auto& solver : solvers) cells.push_back({f, solver});

  std::vector<BenchRow> rows(cells.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= cells.size()) break;
      rows[i] = run_cell(cells[i].file, cells[i].solver, opts);
    }
  };
  if (opts.jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < opts.jobs; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.instance, a.solver) < std::tie(b.instance, b.solver);
  });
  std::ostringstream os;
  os << "instance,solver,status,ms,rl,cn,on,wall_ms,nodes_expanded,proven_optimal\n";
  for (const auto& r : rows) os << row_to_csv(r) << "\n";
  return os.str();
}

}  // namespace agv
