#include "agv/fact_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "agv/validation.hpp"

namespace agv {

namespace {

// ---------------------------------------------------------------------------
// Fact file parsing.
//
// fact     := ident [ '(' alts { ',' alts } ')' ] '.'
// alts     := term { ';' term }          (collection shorthand)
// term     := int [ '..' int ] | ident [ '(' alts { ',' alts } ')' ]
//
// Shorthands expand to the cartesian product over argument alternatives,
// also inside functional terms, e.g. node(v(1..7)) or halt(v(2;4),3).
// ---------------------------------------------------------------------------

struct GroundTerm {
  bool is_int = true;
  long long value = 0;
  std::string functor;
  std::vector<GroundTerm> args;
};

struct Lexer {
  std::string_view text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  struct Token {
    enum class Type { Ident, Int, LParen, RParen, Comma, Semi, Dot, DotDot, End } type;
    std::string_view value;
    int line;
    int col;
  };

  void advance(size_t n) {
    for (size_t i = 0; i < n; ++i) {
      if (text[pos + i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    pos += n;
  }

  void skip_space() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '%') {
        while (pos < text.size() && text[pos] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_space();
    int li = line, co = col;
    if (pos >= text.size()) return {Token::Type::End, {}, li, co};
    char c = text[pos];
    if (c == '(') { advance(1); return {Token::Type::LParen, "(", li, co}; }
    if (c == ')') { advance(1); return {Token::Type::RParen, ")", li, co}; }
    if (c == ',') { advance(1); return {Token::Type::Comma, ",", li, co}; }
    if (c == ';') { advance(1); return {Token::Type::Semi, ";", li, co}; }
    if (c == '.') {
      if (pos + 1 < text.size() && text[pos + 1] == '.') {
        advance(2);
        return {Token::Type::DotDot, "..", li, co};
      }
      advance(1);
      return {Token::Type::Dot, ".", li, co};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[pos + 1])))) {
      size_t start = pos;
      advance(1);
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) advance(1);
      return {Token::Type::Int, text.substr(start, pos - start), li, co};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        advance(1);
      return {Token::Type::Ident, text.substr(start, pos - start), li, co};
    }
    throw ParseError(ParseError::Kind::Syntax, li, co, std::string("unexpected character '") + c + "'");
  }
};

class FactParser {
 public:
  explicit FactParser(std::string_view text) : lex_{text} { shift(); }

  struct Fact {
    std::string predicate;
    std::vector<GroundTerm> args;
    int line;
    int col;
  };

  std::optional<Fact> next_fact_group(std::vector<Fact>& out) {
    out.clear();
    if (tok_.type == Lexer::Token::Type::End) return std::nullopt;
    expect(Lexer::Token::Type::Ident, "predicate name");
    std::string pred(tok_.value);
    int li = tok_.line, co = tok_.col;
    shift();
    std::vector<std::vector<GroundTerm>> arg_alts;
    if (tok_.type == Lexer::Token::Type::LParen) {
      shift();
      arg_alts.push_back(parse_alts());
      while (tok_.type == Lexer::Token::Type::Comma) {
        shift();
        arg_alts.push_back(parse_alts());
      }
      expect(Lexer::Token::Type::RParen, "')'");
      shift();
    }
    expect(Lexer::Token::Type::Dot, "'.'");
    shift();
    std::vector<std::vector<GroundTerm>> rows{{}};
    for (const auto& alts : arg_alts) {
      std::vector<std::vector<GroundTerm>> grown;
      for (const auto& row : rows)
        for (const auto& t : alts) {
          grown.push_back(row);
          grown.back().push_back(t);
        }
      rows = std::move(grown);
    }
    for (auto& row : rows) out.push_back(Fact{pred, std::move(row), li, co});
    return Fact{pred, {}, li, co};
  }

 private:
  Lexer lex_;
  Lexer::Token tok_;

  void shift() { tok_ = lex_.next(); }

  void expect(Lexer::Token::Type t, const char* what) {
    if (tok_.type != t)
      throw ParseError(ParseError::Kind::Syntax, tok_.line, tok_.col,
                       std::string("expected ") + what);
  }

  // One argument position: terms separated by ';', each possibly a range.
  std::vector<GroundTerm> parse_alts() {
    std::vector<GroundTerm> alts = parse_term();
    while (tok_.type == Lexer::Token::Type::Semi) {
      shift();
      auto more = parse_term();
      alts.insert(alts.end(), more.begin(), more.end());
    }
    return alts;
  }

  std::vector<GroundTerm> parse_term() {
    if (tok_.type == Lexer::Token::Type::Int) {
      long long lo = to_int(tok_.value);
      shift();
      if (tok_.type == Lexer::Token::Type::DotDot) {
        shift();
        expect(Lexer::Token::Type::Int, "integer after '..'");
        long long hi = to_int(tok_.value);
        shift();
        std::vector<GroundTerm> out;
        for (long long v = lo; v <= hi; ++v) out.push_back(GroundTerm{true, v, {}, {}});
        return out;
      }
      return {GroundTerm{true, lo, {}, {}}};
    }
    expect(Lexer::Token::Type::Ident, "term");
    std::string functor(tok_.value);
    shift();
    std::vector<std::vector<GroundTerm>> arg_alts;
    if (tok_.type == Lexer::Token::Type::LParen) {
      shift();
      arg_alts.push_back(parse_alts());
      while (tok_.type == Lexer::Token::Type::Comma) {
        shift();
        arg_alts.push_back(parse_alts());
      }
      expect(Lexer::Token::Type::RParen, "')'");
      shift();
    }
    std::vector<std::vector<GroundTerm>> rows{{}};
    for (const auto& alts : arg_alts) {
      std::vector<std::vector<GroundTerm>> grown;
      for (const auto& row : rows)
        for (const auto& t : alts) {
          grown.push_back(row);
          grown.back().push_back(t);
        }
      rows = std::move(grown);
    }
    std::vector<GroundTerm> out;
    for (auto& row : rows) out.push_back(GroundTerm{false, 0, functor, std::move(row)});
    return out;
  }

  static long long to_int(std::string_view sv) {
    long long v = 0;
    std::from_chars(sv.data(), sv.data() + sv.size(), v);
    return v;
  }
};

[[noreturn]] void syntax_error(const FactParser::Fact& f, const std::string& msg) {
  throw ParseError(ParseError::Kind::Syntax, f.line, f.col, f.predicate + ": " + msg);
}

long long want_int(const FactParser::Fact& f, const GroundTerm& t) {
  if (!t.is_int) syntax_error(f, "expected an integer argument");
  return t.value;
}

long long want_wrapped(const FactParser::Fact& f, const GroundTerm& t, const char* functor) {
  if (t.is_int || t.functor != functor || t.args.size() != 1 || !t.args[0].is_int)
    syntax_error(f, std::string("expected a ") + functor + "(N) term");
  return t.args[0].value;
}

NodeId want_node(const FactParser::Fact& f, const GroundTerm& t) {
  return static_cast<NodeId>(want_wrapped(f, t, "v"));
}
TaskId want_task(const FactParser::Fact& f, const GroundTerm& t) {
  return static_cast<TaskId>(want_wrapped(f, t, "t"));
}
VehicleId want_vehicle(const FactParser::Fact& f, const GroundTerm& t) {
  return static_cast<VehicleId>(want_wrapped(f, t, "c"));
}
int want_sub_index(const FactParser::Fact& f, const GroundTerm& t) {
  return static_cast<int>(want_wrapped(f, t, "s"));
}

}  // namespace

Scenario parse_facts(std::string_view text) {
  FactParser parser(text);
  ScenarioParts parts;
  struct Derived {
    std::vector<std::tuple<NodeId, Duration, int, int>> stays;        // node, dur, line, col
    std::vector<std::tuple<NodeId, NodeId, NodeId, int, int>> lesses; // v', v'', v
    std::vector<std::tuple<long long, int, int>> times;
    std::vector<std::tuple<TaskId, TaskId, int, int>> task_pairs;
    std::vector<std::tuple<TaskId, int, int, int>> sub_projections;   // task, idx
  } derived;

  std::map<TaskId, size_t> task_slot;
  auto task_decl = [&](TaskId id) -> ScenarioParts::TaskDecl& {
    auto it = task_slot.find(id);
    if (it == task_slot.end()) {
      it = task_slot.emplace(id, parts.tasks.size()).first;
      parts.tasks.push_back({id, std::nullopt});
    }
    return parts.tasks[it->second];
  };
  std::map<VehicleId, size_t> vehicle_slot;
  auto vehicle_decl = [&](VehicleId id) -> ScenarioParts::VehicleDecl& {
    auto it = vehicle_slot.find(id);
    if (it == vehicle_slot.end()) {
      it = vehicle_slot.emplace(id, parts.vehicles.size()).first;
      parts.vehicles.push_back({id, std::nullopt});
    }
    return parts.vehicles[it->second];
  };

  std::vector<FactParser::Fact> group;
  while (parser.next_fact_group(group)) {
    for (const auto& f : group) {
      const auto& a = f.args;
      const size_t n = a.size();
      auto arity = [&](size_t want) {
        if (n != want)
          throw ParseError(ParseError::Kind::ArityMismatch, f.line, f.col,
                           f.predicate + "/" + std::to_string(n));
      };
      if (f.predicate == "node") {
        arity(1);
        parts.nodes.push_back(want_node(f, a[0]));
      } else if (f.predicate == "halt") {
        arity(2);
        parts.halts.push_back({want_node(f, a[0]), want_int(f, a[1])});
      } else if (f.predicate == "park") {
        arity(2);
        parts.parks.push_back({want_node(f, a[0]), want_int(f, a[1])});
      } else if (f.predicate == "edge") {
        arity(3);
        parts.edges.push_back({want_node(f, a[0]), want_node(f, a[1]), want_int(f, a[2])});
      } else if (f.predicate == "task") {
        if (n == 1) {
          task_decl(want_task(f, a[0]));
        } else if (n == 2) {
          auto& d = task_decl(want_task(f, a[0]));
          Duration dl = want_int(f, a[1]);
          if (d.deadline && *d.deadline != dl)
            throw ParseError(ParseError::Kind::InconsistentDerivedFact, f.line, f.col,
                             "task declared with two deadlines");
          d.deadline = dl;
        } else {
          throw ParseError(ParseError::Kind::ArityMismatch, f.line, f.col,
                           "task/" + std::to_string(n));
        }
      } else if (f.predicate == "subtask") {
        if (n == 3) {
          parts.subtasks.push_back({want_task(f, a[0]), want_sub_index(f, a[1]), want_node(f, a[2])});
        } else if (n == 2) {
          derived.sub_projections.emplace_back(want_task(f, a[0]), want_sub_index(f, a[1]), f.line, f.col);
        } else {
          throw ParseError(ParseError::Kind::ArityMismatch, f.line, f.col,
                           "subtask/" + std::to_string(n));
        }
      } else if (f.predicate == "vehicle") {
        if (n == 1) {
          vehicle_decl(want_vehicle(f, a[0]));
        } else if (n == 2) {
          auto& d = vehicle_decl(want_vehicle(f, a[0]));
          NodeId v = want_node(f, a[1]);
          if (d.start && *d.start != v)
            throw ParseError(ParseError::Kind::InconsistentDerivedFact, f.line, f.col,
                             "vehicle declared with two initial locations");
          d.start = v;
        } else {
          throw ParseError(ParseError::Kind::ArityMismatch, f.line, f.col,
                           "vehicle/" + std::to_string(n));
        }
      } else if (f.predicate == "stay") {
        arity(2);
        derived.stays.emplace_back(want_node(f, a[0]), want_int(f, a[1]), f.line, f.col);
      } else if (f.predicate == "less") {
        arity(3);
        derived.lesses.emplace_back(want_node(f, a[0]), want_node(f, a[1]), want_node(f, a[2]),
                                    f.line, f.col);
      } else if (f.predicate == "time") {
        arity(1);
        derived.times.emplace_back(want_int(f, a[0]), f.line, f.col);
      } else if (f.predicate == "tasks") {
        arity(2);
        derived.task_pairs.emplace_back(want_task(f, a[0]), want_task(f, a[1]), f.line, f.col);
      } else {
        throw ParseError(ParseError::Kind::UnknownPredicate, f.line, f.col, f.predicate);
      }
    }
  }

  Scenario s = build_scenario(parts);

  auto inconsistent = [](int line, int col, const std::string& msg) -> void {
    throw ParseError(ParseError::Kind::InconsistentDerivedFact, line, col, msg);
  };
  for (const auto& [v, d, li, co] : derived.stays) {
    if (!s.is_stop_node(v) || s.stop_duration(v) != d || d <= 1)
      inconsistent(li, co, "stay(" + term_node(v) + "," + std::to_string(d) +
                               ") does not match any halt or park of duration > 1");
  }
  if (!derived.lesses.empty()) {
    std::set<std::tuple<NodeId, NodeId, NodeId>> expected;
    for (const auto& t : less_pairs(s)) expected.insert(t);
    for (const auto& [x, y, v, li, co] : derived.lesses) {
      if (!expected.count({x, y, v}))
        inconsistent(li, co, "less(" + term_node(x) + "," + term_node(y) + "," + term_node(v) +
                                 ") is not a consecutive predecessor pair");
    }
  }
  const Time h = horizon(s);
  for (const auto& [nval, li, co] : derived.times) {
    if (nval < 0 || nval > h)
      inconsistent(li, co, "time(" + std::to_string(nval) + ") outside 0.." + std::to_string(h));
  }
  for (const auto& [t1, t2, li, co] : derived.task_pairs) {
    if (t1 == t2 || !s.tasks.count(t1) || !s.tasks.count(t2))
      inconsistent(li, co, "tasks(" + term_task(t1) + "," + term_task(t2) + ")");
  }
  for (const auto& [t, idx, li, co] : derived.sub_projections) {
    auto it = s.tasks.find(t);
    if (it == s.tasks.end() || idx < 1 || idx > static_cast<int>(it->second.subtasks.size()))
      inconsistent(li, co, "subtask(" + term_task(t) + ",s(" + std::to_string(idx) + "))");
  }
  return s;
}

std::string term_node(NodeId v) { return "v(" + std::to_string(v) + ")"; }
std::string term_vehicle(VehicleId c) { return "c(" + std::to_string(c) + ")"; }
std::string term_task(TaskId t) { return "t(" + std::to_string(t) + ")"; }

namespace {

long long parse_wrapped(std::string_view text, char functor) {
  if (text.size() >= 4 && text[0] == functor && text[1] == '(' && text.back() == ')') {
    long long v = 0;
    auto inner = text.substr(2, text.size() - 3);
    auto res = std::from_chars(inner.data(), inner.data() + inner.size(), v);
    if (res.ec == std::errc() && res.ptr == inner.data() + inner.size()) return v;
  }
  throw SolutionIoError(SolutionIoError::Kind::SchemaError,
                        "malformed term '" + std::string(text) + "', expected " + functor + "(N)");
}

}  // namespace

NodeId parse_node_term(std::string_view text) { return static_cast<NodeId>(parse_wrapped(text, 'v')); }
VehicleId parse_vehicle_term(std::string_view text) { return static_cast<VehicleId>(parse_wrapped(text, 'c')); }
TaskId parse_task_term(std::string_view text) { return static_cast<TaskId>(parse_wrapped(text, 't')); }

std::string emit_facts(const Scenario& s) {
  std::ostringstream os;
  for (NodeId v : s.nodes) os << "node(" << term_node(v) << ").\n";
  for (const auto& [v, d] : s.halts) os << "halt(" << term_node(v) << "," << d << ").\n";
  for (const auto& [v, d] : s.parks) os << "park(" << term_node(v) << "," << d << ").\n";
  std::map<NodeId, Duration> stays;
  for (const auto& [v, d] : s.halts)
    if (d > 1) stays.emplace(v, d);
  for (const auto& [v, d] : s.parks)
    if (d > 1) stays.emplace(v, d);
  for (const auto& [v, d] : stays) os << "stay(" << term_node(v) << "," << d << ").\n";
  for (const auto& [e, d] : s.edges)
    os << "edge(" << term_node(e.from) << "," << term_node(e.to) << "," << d << ").\n";
  for (const auto& [x, y, v] : less_pairs(s))
    os << "less(" << term_node(x) << "," << term_node(y) << "," << term_node(v) << ").\n";
  os << "time(0.." << horizon(s) << ").\n";
  for (const auto& [t, task] : s.tasks) os << "task(" << term_task(t) << ").\n";
  for (const auto& [t, task] : s.tasks)
    os << "task(" << term_task(t) << "," << task.deadline << ").\n";
  for (const auto& [t1, x] : s.tasks)
    for (const auto& [t2, y] : s.tasks)
      if (t1 != t2) os << "tasks(" << term_task(t1) << "," << term_task(t2) << ").\n";
  for (const auto& [t, task] : s.tasks)
    for (size_t i = 0; i < task.subtasks.size(); ++i)
      os << "subtask(" << term_task(t) << ",s(" << i + 1 << ")).\n";
  for (const auto& [t, task] : s.tasks)
    for (size_t i = 0; i < task.subtasks.size(); ++i)
      os << "subtask(" << term_task(t) << ",s(" << i + 1 << "),"
         << term_node(task.subtasks[i]) << ").\n";
  for (const auto& [c, v] : s.vehicles) os << "vehicle(" << term_vehicle(c) << ").\n";
  for (const auto& [c, v] : s.vehicles)
    os << "vehicle(" << term_vehicle(c) << "," << term_node(v) << ").\n";
  return os.str();
}

std::string emit_solution(const Solution& sol, const std::optional<ObjectiveVector>& obj,
                          std::string_view status) {
  nlohmann::json j;
  j["status"] = std::string(status);
  auto& assign = j["assignment"] = nlohmann::json::object();
  for (const auto& [t, c] : sol.assignment) assign[term_task(t)] = term_vehicle(c);
  auto& order = j["order"] = nlohmann::json::object();
  for (const auto& [c, ts] : sol.order) {
    auto arr = nlohmann::json::array();
    for (TaskId t : ts) arr.push_back(term_task(t));
    order[term_vehicle(c)] = std::move(arr);
  }
  auto& routes = j["routes"] = nlohmann::json::object();
  for (const auto& [c, route] : sol.routes) {
    auto arr = nlohmann::json::array();
    for (const auto& el : route) {
      if (el.is_move())
        arr.push_back({{"move", {term_node(el.from), term_node(el.to)}}});
      else
        arr.push_back({{"stop", term_node(el.from)}});
    }
    routes[term_vehicle(c)] = std::move(arr);
  }
  if (obj)
    j["objectives"] = {{"ms", obj->ms}, {"rl", obj->rl}, {"cn", obj->cn}, {"on", obj->on}};
  return j.dump(2) + "\n";
}

ParsedSolution parse_solution(std::string_view json_text, const Scenario& s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SolutionIoError(SolutionIoError::Kind::SchemaError, e.what());
  }
  auto schema_fail = [](const std::string& msg) -> void {
    throw SolutionIoError(SolutionIoError::Kind::SchemaError, msg);
  };
  auto unknown = [](const std::string& msg) -> void {
    throw SolutionIoError(SolutionIoError::Kind::UnknownId, msg);
  };
  if (!j.is_object()) schema_fail("top-level value must be an object");
  ParsedSolution out;
  out.status = j.value("status", "feasible");
  if (out.status != "optimal" && out.status != "feasible" && out.status != "infeasible")
    schema_fail("unknown status '" + out.status + "'");

  if (j.contains("assignment")) {
    if (!j["assignment"].is_object()) schema_fail("assignment must be an object");
    for (const auto& [key, val] : j["assignment"].items()) {
      TaskId t = parse_task_term(key);
      if (!val.is_string()) schema_fail("assignment values must be vehicle terms");
      VehicleId c = parse_vehicle_term(val.get<std::string>());
      if (!s.tasks.count(t)) unknown("unknown task " + key);
      if (!s.vehicles.count(c)) unknown("unknown vehicle " + val.get<std::string>());
      out.solution.assignment[t] = c;
    }
  }
  if (j.contains("order")) {
    if (!j["order"].is_object()) schema_fail("order must be an object");
    for (const auto& [key, val] : j["order"].items()) {
      VehicleId c = parse_vehicle_term(key);
      if (!s.vehicles.count(c)) unknown("unknown vehicle " + key);
      if (!val.is_array()) schema_fail("order values must be arrays");
      auto& seq = out.solution.order[c];
      for (const auto& item : val) {
        if (!item.is_string()) schema_fail("order entries must be task terms");
        TaskId t = parse_task_term(item.get<std::string>());
        if (!s.tasks.count(t)) unknown("unknown task " + item.get<std::string>());
        seq.push_back(t);
      }
    }
  }
  if (j.contains("routes")) {
    if (!j["routes"].is_object()) schema_fail("routes must be an object");
    for (const auto& [key, val] : j["routes"].items()) {
      VehicleId c = parse_vehicle_term(key);
      if (!s.vehicles.count(c)) unknown("unknown vehicle " + key);
      if (!val.is_array()) schema_fail("routes values must be arrays");
      Route route;
      for (const auto& item : val) {
        if (!item.is_object() || item.size() != 1)
          schema_fail("route elements must be single-key objects");
        if (item.contains("move")) {
          const auto& mv = item["move"];
          if (!mv.is_array() || mv.size() != 2) schema_fail("move must be a [from,to] pair");
          NodeId a = parse_node_term(mv[0].get<std::string>());
          NodeId b = parse_node_term(mv[1].get<std::string>());
          if (!s.has_edge(a, b))
            unknown("unknown edge (" + mv[0].get<std::string>() + "," + mv[1].get<std::string>() + ")");
          route.push_back(RouteElement::move(a, b));
        } else if (item.contains("stop")) {
          NodeId v = parse_node_term(item["stop"].get<std::string>());
          if (!s.is_stop_node(v))
            unknown("stop at " + item["stop"].get<std::string>() + " which is neither halt nor park");
          route.push_back(RouteElement::stop(v));
        } else {
          schema_fail("route element must be 'move' or 'stop'");
        }
      }
      out.solution.routes[c] = std::move(route);
    }
  }
  if (j.contains("objectives")) {
    const auto& o = j["objectives"];
    if (!o.is_object() || !o.contains("ms") || !o.contains("rl") || !o.contains("cn") ||
        !o.contains("on"))
      schema_fail("objectives must contain ms, rl, cn, on");
    out.objectives = ObjectiveVector{o["ms"].get<long long>(), o["rl"].get<long long>(),
                                     o["cn"].get<long long>(), o["on"].get<long long>()};
  } else if (out.status != "infeasible") {
    schema_fail("objectives required unless status is infeasible");
  }
  return out;
}

std::string emit_atoms(const Scenario& s, const Solution& sol) {
  ValidationReport report = validate(s, sol);
  if (!report.feasible)
    throw InfeasibleSolutionError("cannot emit atoms for an infeasible solution: " +
                                  (report.conflicts.empty() ? std::string("?")
                                                            : report.conflicts.front().describe()));
  const Time h = horizon(s);
  std::ostringstream os;
  for (const auto& [t, c] : sol.assignment)
    os << "assign(" << term_vehicle(c) << "," << term_task(t) << ").\n";
  for (const auto& [c, seq] : sol.order)
    for (size_t i = 0; i < seq.size(); ++i)
      for (size_t k = i + 1; k < seq.size(); ++k)
        os << "order(" << term_task(seq[i]) << "," << term_task(seq[k]) << ").\n";
  for (const auto& [c, start] : s.vehicles) {
    Route empty;
    auto rit = sol.routes.find(c);
    const Route& route = rit == sol.routes.end() ? empty : rit->second;
    OccupationMap occ = occupation_times(s, c, route);
    std::vector<std::pair<Time, NodeId>> ats;
    for (const auto& [key, times] : occ.node_times)
      for (Time n : times)
        if (n <= h) ats.emplace_back(n, key.second);
    std::sort(ats.begin(), ats.end());
    for (const auto& [n, v] : ats)
      os << "at(" << term_vehicle(c) << "," << term_node(v) << "," << n << ").\n";
    Time prefix = 0;
    for (const auto& el : route) {
      Duration d = el.is_move() ? s.edge_duration(el.from, el.to) : s.stop_duration(el.from);
      if (el.is_move() && prefix + d <= h)
        os << "move(" << term_vehicle(c) << "," << term_node(el.from) << ","
           << term_node(el.to) << "," << prefix << ").\n";
      prefix += d;
    }
  }
  return os.str();
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  auto nodes = nlohmann::json::array();
  for (NodeId v : s.nodes) nodes.push_back(term_node(v));
  j["nodes"] = std::move(nodes);
  auto edges = nlohmann::json::array();
  for (const auto& [e, d] : s.edges)
    edges.push_back({{"from", term_node(e.from)}, {"to", term_node(e.to)}, {"duration", d}});
  j["edges"] = std::move(edges);
  auto& halts = j["halts"] = nlohmann::json::object();
  for (const auto& [v, d] : s.halts) halts[term_node(v)] = d;
  auto& parks = j["parks"] = nlohmann::json::object();
  for (const auto& [v, d] : s.parks) parks[term_node(v)] = d;
  auto& tasks = j["tasks"] = nlohmann::json::object();
  for (const auto& [t, task] : s.tasks) {
    auto subs = nlohmann::json::array();
    for (NodeId v : task.subtasks) subs.push_back(term_node(v));
    tasks[term_task(t)] = {{"deadline", task.deadline}, {"subtasks", std::move(subs)}};
  }
  auto& vehicles = j["vehicles"] = nlohmann::json::object();
  for (const auto& [c, v] : s.vehicles) vehicles[term_vehicle(c)] = term_node(v);
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  ScenarioParts parts;
  for (const auto& v : j.at("nodes")) parts.nodes.push_back(parse_node_term(v.get<std::string>()));
  for (const auto& e : j.at("edges"))
    parts.edges.push_back({parse_node_term(e.at("from").get<std::string>()),
                           parse_node_term(e.at("to").get<std::string>()),
                           e.at("duration").get<Duration>()});
  for (const auto& [k, d] : j.at("halts").items())
    parts.halts.push_back({parse_node_term(k), d.get<Duration>()});
  for (const auto& [k, d] : j.at("parks").items())
    parts.parks.push_back({parse_node_term(k), d.get<Duration>()});
  for (const auto& [k, body] : j.at("tasks").items()) {
    TaskId t = parse_task_term(k);
    parts.tasks.push_back({t, body.at("deadline").get<Duration>()});
    int idx = 1;
    for (const auto& v : body.at("subtasks"))
      parts.subtasks.push_back({t, idx++, parse_node_term(v.get<std::string>())});
  }
  for (const auto& [k, v] : j.at("vehicles").items())
    parts.vehicles.push_back({parse_vehicle_term(k), parse_node_term(v.get<std::string>())});
  return build_scenario(parts);
}

}  // namespace agv
