#pragma once

#include <functional>
#include <optional>

#include "agv/model.hpp"

namespace agv {

/// Rules that make the feasible-solution space finite and countable.
///
/// With routes_end_at_last_completion set (the default), a route terminates
/// exactly at the element completing the vehicle's last assigned subtask.
/// When cleared, enumeration switches to stable-model closure: vehicles may
/// keep moving after their last completion as long as each move finishes
/// within the horizon, and a vehicle that stops moving at a park node is
/// counted once, occupying that node up to the horizon. The closure count
/// matches what an ASP solver reports on the equivalent encoding.
struct Canonicalization {
  bool routes_end_at_last_completion = true;
  bool idle_vehicles_empty_route = true;
  static constexpr bool order_minimal = true;  // ≺ relates only same-vehicle tasks
};

struct EnumerationResult {
  long long feasible_count = 0;
  bool limit_reached = false;
};

// Streams every canonical feasible solution exactly once, in a fixed
// deterministic order (assignments task-id-major, per-vehicle permutations
// lexicographic, routes depth-first with moves before stops). The sink may
// be empty (count only) and may return false to stop early.
EnumerationResult enumerate_feasible(const Scenario& s, const Canonicalization& canon,
                                     std::optional<long long> limit = std::nullopt,
                                     const std::function<bool(const Solution&)>& sink = {});

struct BestByEnumeration {
  ObjectiveVector objectives;
  long long optima_count = 0;
  Solution witness;  // first optimum in enumeration order
  long long feasible_count = 0;
};

// Lexicographic minimum over all canonical feasible solutions; nullopt when
// no feasible solution exists.
std::optional<BestByEnumeration> best_by_enumeration(const Scenario& s,
                                                     const Canonicalization& canon = {});

}  // namespace agv
