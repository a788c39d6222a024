#pragma once

// Commands behind the command-line tool. Each returns its output text and
// exit code; none adds logic beyond the library calls it reports.

#include <algorithm>
#include <chrono>
#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "topos/axioms.hpp"
#include "topos/logic.hpp"
#include "topos/subobject.hpp"
#include "topos/workspace.hpp"

namespace topos {

enum class OutputFormat { Ascii, Json };

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

/// 0 = T, 1 = other truth value, 2 = usage or input error, 3 = internal violation.
namespace exit_code {
inline constexpr int kTrue = 0;
inline constexpr int kNotTrue = 1;
inline constexpr int kUsage = 2;
inline constexpr int kInternal = 3;
}  // namespace exit_code

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const SignatureError*>(&e) ||
      dynamic_cast<const ArityError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const CapabilityError*>(&e) || dynamic_cast<const ResourceError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e))
    return exit_code::kUsage;
  return exit_code::kInternal;
}

struct TraceStep {
  std::string expression;
  std::string source;
  std::string target;
  std::string morphism;
};

struct EvalReport {
  std::string formula;
  std::string value;
  bool is_true = false;
  std::vector<TraceStep> trace;
  double millis = 0;
};

namespace detail {

template <Topos T>
const LStructure<T>& structure_of(const Session<T>& s) {
  if (!s.structure) throw InvalidArgument("the workspace declares no sort");
  return *s.structure;
}

template <Topos T>
void trace_term(Interpreter<T>& in, const Term& t, std::vector<TraceStep>& out) {
  for (const auto& a : t.args) trace_term(in, a, out);
  const auto m = in.term(t);
  const auto& topos = in.topos();
  out.push_back({to_string(t), topos.describe(m.source()), topos.describe(m.target()), topos.describe(m)});
}

template <Topos T>
void trace_formula(Interpreter<T>& in, const Formula& f, std::vector<TraceStep>& out) {
  for (const auto& t : f.terms) trace_term(in, t, out);
  for (const auto& s : f.sub) trace_formula(in, s, out);
  const auto m = in.formula(f);
  const auto& topos = in.topos();
  out.push_back({to_string(f), topos.describe(m.source()), topos.describe(m.target()), topos.describe(m)});
}

}  // namespace detail

/// Evaluates a sentence; the trace lists every subterm and subformula with
/// its interpretation, innermost first.
template <Topos T>
EvalReport evaluate(const Session<T>& s, const Formula& f, bool trace) {
  const auto start = std::chrono::steady_clock::now();
  const auto free = free_variables(f);
  if (!free.empty()) throw InvalidArgument("'" + to_string(f) + "' has free variables; only sentences can be evaluated");
  Interpreter<T> in(detail::structure_of(s));
  EvalReport r;
  r.formula = to_string(f);
  if (trace) detail::trace_formula(in, f, r.trace);
  const auto v = in.value(f, {});
  const auto& t = *s.topos;
  r.value = truth_value_name(t, global_truth_values(t), v);
  r.is_true = v == t.truth();
  if (trace) r.trace.push_back({"value", t.describe(v.source()), t.describe(v.target()), t.describe(v)});
  r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// A formula name declared in the workspace, or a formula literal over its symbols.
inline Formula resolve_formula(const WorkspaceFile& ws, std::string_view text) {
  if (const auto* f = ws.find_formula(text)) return f->formula;
  return parse_formula(text, ws.signature());
}

inline CommandResult cmd_eval(const Workspace& w, std::string_view text, bool trace, OutputFormat format) {
  return std::visit(
      [&](const auto& s) {
        const auto report = evaluate(s, resolve_formula(s.file, text), trace);
        CommandResult r;
        r.exit_code = report.is_true ? exit_code::kTrue : exit_code::kNotTrue;
        if (format == OutputFormat::Json) {
          nlohmann::json j{{"schema", 1}, {"formula", report.formula}, {"value", report.value},
                           {"millis", report.millis}};
          j["trace"] = nlohmann::json::array();
          for (const auto& st : report.trace)
            j["trace"].push_back(
                {{"expression", st.expression}, {"source", st.source}, {"target", st.target}, {"morphism", st.morphism}});
          r.output = j.dump(2) + "\n";
        } else {
          for (const auto& st : report.trace)
            r.output += st.expression + " : " + st.source + " -> " + st.target + " = " + st.morphism + "\n";
          r.output += report.value + "\n";
        }
        return r;
      },
      w);
}

inline std::string connective_name(Connective c) {
  switch (c) {
    case Connective::Not:
      return "not";
    case Connective::And:
      return "and";
    case Connective::Or:
      return "or";
    case Connective::Implies:
      return "implies";
    case Connective::Iff:
      return "iff";
  }
  return "?";
}

/// Rows are the first argument. Negation is a single column.
inline std::string render_table(const TruthTable& t) {
  std::size_t w = 0;
  for (const auto& v : t.values) w = std::max(w, v.size());
  for (const auto& row : t.cells)
    for (const auto& c : row) w = std::max(w, c.size());
  const std::string symbol = connective_symbol(t.connective);
  const auto w0 = std::max(w, symbol.size());
  auto pad = [](const std::string& s, std::size_t n) { return s + std::string(n - s.size(), ' '); };
  std::string out;
  if (t.connective == Connective::Not) {
    out += pad(symbol, w0) + " |\n" + std::string(w0 + 1, '-') + "+" + std::string(w + 1, '-') + "\n";
    for (std::size_t i = 0; i < t.values.size(); ++i) out += pad(t.values[i], w0) + " | " + t.cells[0][i] + "\n";
    return out;
  }
  std::string header = pad(symbol, w0) + " |";
  for (const auto& v : t.values) header += " " + pad(v, w);
  while (!header.empty() && header.back() == ' ') header.pop_back();
  out += header + "\n" + std::string(w0 + 1, '-') + "+" + std::string(t.values.size() * (w + 1), '-') + "\n";
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    std::string line = pad(t.values[i], w0) + " |";
    for (const auto& c : t.cells[i]) line += " " + pad(c, w);
    while (line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

inline CommandResult cmd_tables(const Workspace& w, OutputFormat format) {
  return std::visit(
      [&](const auto& s) {
        const auto& t = *s.topos;
        const auto ops = connectives(t);
        const Connective order[] = {Connective::And, Connective::Or, Connective::Implies, Connective::Iff,
                                    Connective::Not};
        CommandResult r;
        nlohmann::json j{{"schema", 1}, {"topos", t.name()}};
        j["tables"] = nlohmann::json::array();
        for (std::size_t i = 0; i < std::size(order); ++i) {
          const auto table = truth_table(t, order[i], ops);
          if (format == OutputFormat::Json) {
            j["values"] = table.values;
            j["tables"].push_back({{"connective", connective_name(order[i])},
                                   {"symbol", connective_symbol(order[i])},
                                   {"cells", table.cells}});
          } else {
            if (i) r.output += "\n";
            r.output += render_table(table);
          }
        }
        if (format == OutputFormat::Json) r.output = j.dump(2) + "\n";
        return r;
      },
      w);
}

inline std::string verdict(const AxiomReport& r) {
  if (r.holds) return "yes";
  return "no (witness: " + r.witness + ")";
}

inline CommandResult cmd_axioms(const Workspace& w, std::size_t bound, OutputFormat format) {
  return std::visit(
      [&](const auto& s) {
        using T = typename std::decay_t<decltype(*s.topos)>;
        using Obj = ObjectOf<T>;
        const auto& t = *s.topos;
        const auto probes = probe_objects(t, bound);
        const auto larger = probe_objects(t, bound + 1);
        const bool boolean = is_boolean(t);
        const auto wp = is_well_pointed(t, std::span<const Obj>(probes));
        const auto ac = satisfies_ac(t, std::span<const Obj>(probes));
        const auto tests = nno_tests(t, std::span<const Obj>(larger));
        const auto candidates = nno_candidates(t, std::span<const Obj>(probes));
        std::vector<std::string> survivors;
        for (const auto& c : candidates)
          if (verify_nno(t, c, std::span<const NNOTest<T>>(tests)).holds)
            survivors.push_back(t.describe(c.n) + " with zero " + t.describe(c.zero) + " and successor " +
                                t.describe(c.succ));
        const bool vacuous = bound == 0;

        CommandResult r;
        if (format == OutputFormat::Json) {
          auto rep = [](const AxiomReport& a) {
            return nlohmann::json{{"holds", a.holds}, {"checked", a.checked}, {"witness", a.witness}};
          };
          nlohmann::json j{{"schema", 1},
                           {"topos", t.name()},
                           {"bound", bound},
                           {"vacuous", vacuous},
                           {"probes", probes.size()},
                           {"boolean", boolean},
                           {"well_pointed", rep(wp)},
                           {"choice", rep(ac)},
                           {"nno", {{"candidates", candidates.size()}, {"tests", tests.size()}, {"survivors", survivors}}}};
          r.output = j.dump(2) + "\n";
          return r;
        }
        const auto k = std::to_string(bound);
        r.output += "topos: " + t.name() + "\n";
        r.output += "bound: " + k + " (" + std::to_string(probes.size()) + " probe objects)\n";
        if (vacuous) r.output += "note: bound 0 is vacuous; only empty probes are checked\n";
        r.output += std::string("boolean: ") + (boolean ? "yes" : "no") + "\n";
        r.output += "well-pointed: " + verdict(wp) + "\n";
        r.output += "AC: " + verdict(ac) + "\n";
        if (survivors.empty()) {
          r.output += "NNO<=" + k + ": none (" + std::to_string(candidates.size()) + " candidates refuted by tests up to size " +
                      std::to_string(bound + 1) + ")\n";
        } else {
          r.output += "NNO<=" + k + ": " + std::to_string(survivors.size()) + " candidates pass every test\n";
          for (const auto& sv : survivors) r.output += "  " + sv + "\n";
        }
        return r;
      },
      w);
}

/// The sort name, 1 / terminal, 0 / initial or Omega.
template <Topos T>
ObjectOf<T> named_object(const Session<T>& s, std::string_view name) {
  const auto& t = *s.topos;
  if (name == "1" || name == "terminal") return t.terminal();
  if (name == "0" || name == "initial") return t.initial();
  if (name == "Omega" || name == "omega") return t.omega();
  if (s.structure && name == s.sort_name) return s.structure->support();
  throw InvalidArgument("unknown object '" + std::string(name) + "'; expected the sort name, 1, 0 or Omega");
}

inline CommandResult cmd_subobjects(const Workspace& w, std::string_view object, OutputFormat format) {
  return std::visit(
      [&](const auto& s) {
        const auto& t = *s.topos;
        const auto b = named_object(s, object);
        const auto subs = t.subobjects(b);
        CommandResult r;
        nlohmann::json j{{"schema", 1}, {"topos", t.name()}, {"object", t.describe(b)}};
        j["subobjects"] = nlohmann::json::array();
        if (format == OutputFormat::Ascii)
          r.output += "Sub(" + std::string(object) + ") = Sub(" + t.describe(b) + "): " + std::to_string(subs.size()) +
                      " subobjects\n";
        for (const auto& m : subs) {
          const auto chi = t.classify(m);
          if (format == OutputFormat::Json) {
            j["subobjects"].push_back(
                {{"domain", t.describe(m.source())}, {"monic", t.describe(m)}, {"character", t.describe(chi)}});
          } else {
            r.output += "  " + t.describe(m.source()) + " >-> " + t.describe(b) + "  via " + t.describe(m) +
                        "  character " + t.describe(chi) + "\n";
          }
        }
        if (format == OutputFormat::Json) r.output = j.dump(2) + "\n";
        return r;
      },
      w);
}

}  // namespace topos
