#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "agv/model.hpp"
#include "json.hpp"

namespace agv {

struct ParseError : std::runtime_error {
  enum class Kind { Syntax, UnknownPredicate, ArityMismatch, InconsistentDerivedFact };
  Kind kind;
  int line = 0;
  int column = 0;
  ParseError(Kind k, int li, int co, const std::string& msg)
      : std::runtime_error("line " + std::to_string(li) + ":" + std::to_string(co) + ": " + msg),
        kind(k), line(li), column(co) {}
};

// Parses an instance given as ASP facts (node/1, edge/3, halt/2, park/2,
// task/1, task/2, subtask/3, vehicle/1, vehicle/2, plus the derived
// predicates stay/2, less/3, time/1, tasks/2, subtask/2, which are checked
// for consistency when present). Supports '..' ranges, ';' collections and
// '%' comments. Throws ParseError or ScenarioError.
Scenario parse_facts(std::string_view text);

// Canonical fact rendering of a scenario, including all derived predicates;
// parse_facts(emit_facts(s)) == s.
std::string emit_facts(const Scenario& s);

struct SolutionIoError : std::runtime_error {
  enum class Kind { SchemaError, UnknownId };
  Kind kind;
  SolutionIoError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

std::string emit_solution(const Solution& sol, const std::optional<ObjectiveVector>& obj,
                          std::string_view status);

struct ParsedSolution {
  Solution solution;
  std::optional<ObjectiveVector> objectives;
  std::string status;
};

ParsedSolution parse_solution(std::string_view json_text, const Scenario& s);

struct InfeasibleSolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// assign/2, order/2, at/3 and move/4 atoms of a feasible solution, clipped
// to the horizon; throws InfeasibleSolutionError otherwise.
std::string emit_atoms(const Scenario& s, const Solution& sol);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

// Term helpers shared with report rendering.
std::string term_node(NodeId v);
std::string term_vehicle(VehicleId c);
std::string term_task(TaskId t);
NodeId parse_node_term(std::string_view text);        // "v(7)" -> 7
VehicleId parse_vehicle_term(std::string_view text);  // "c(1)" -> 1
TaskId parse_task_term(std::string_view text);        // "t(2)" -> 2

}  // namespace agv
