#pragma once

// Naive classical evaluation of formulas over finite structures given by
// plain tables. Shares nothing with the categorical interpreter except the
// syntax trees.

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "topos/finset.hpp"
#include "topos/language.hpp"

namespace oracle {

struct Structure {
  std::size_t size = 0;
  // Tables are indexed by argument tuples, first argument most significant.
  std::map<std::string, std::pair<std::size_t, std::vector<std::size_t>>> functions;
  std::map<std::string, std::pair<std::size_t, std::vector<bool>>> relations;
  std::map<std::string, std::size_t> constants;
};

using Env = std::map<std::size_t, std::size_t>;

inline std::size_t code(const std::vector<std::size_t>& args, std::size_t size) {
  std::size_t c = 0;
  for (auto a : args) c = c * size + a;
  return c;
}

inline void values(const Structure& s, const topos::Term& t, const Env& env, std::vector<std::size_t>& out);

inline std::size_t value(const Structure& s, const topos::Term& t, const Env& env) {
  using K = topos::Term::Kind;
  switch (t.kind) {
    case K::Var:
      return env.at(t.index);
    case K::Const:
      return s.constants.at(t.name);
    case K::Apply: {
      std::vector<std::size_t> args;
      for (const auto& a : t.args) values(s, a, env, args);
      return s.functions.at(t.name).second.at(code(args, s.size));
    }
    case K::Product:
      break;
  }
  throw std::logic_error("product term has no single value");
}

inline void values(const Structure& s, const topos::Term& t, const Env& env, std::vector<std::size_t>& out) {
  if (t.kind == topos::Term::Kind::Product) {
    for (const auto& a : t.args) values(s, a, env, out);
  } else {
    out.push_back(value(s, t, env));
  }
}

inline bool holds(const Structure& s, const topos::Formula& f, Env env) {
  using K = topos::Formula::Kind;
  switch (f.kind) {
    case K::Eq: {
      std::vector<std::size_t> a, b;
      values(s, f.terms[0], env, a);
      values(s, f.terms[1], env, b);
      return a == b;
    }
    case K::Rel: {
      std::vector<std::size_t> args;
      for (const auto& t : f.terms) values(s, t, env, args);
      return s.relations.at(f.name).second.at(code(args, s.size));
    }
    case K::Not:
      return !holds(s, f.sub[0], env);
    case K::And:
      return holds(s, f.sub[0], env) && holds(s, f.sub[1], env);
    case K::Or:
      return holds(s, f.sub[0], env) || holds(s, f.sub[1], env);
    case K::Implies:
      return !holds(s, f.sub[0], env) || holds(s, f.sub[1], env);
    case K::Iff:
      return holds(s, f.sub[0], env) == holds(s, f.sub[1], env);
    case K::Forall:
    case K::Exists: {
      const bool want_all = f.kind == K::Forall;
      for (std::size_t m = 0; m < s.size; ++m) {
        env[f.var] = m;
        if (holds(s, f.sub[0], env) != want_all) return !want_all;
      }
      return want_all;
    }
  }
  return false;
}

/// Signature with one binary function, one binary relation and one constant.
inline topos::LanguageSignature fixture_signature() {
  topos::LanguageSignature sig;
  sig.add_function("mul", 2).add_relation("R", 2).add_constant("e");
  return sig;
}

/// The FinSet L-structure with support {0, ..., size-1} matching the tables.
inline topos::LStructure<topos::FinSet> to_finset(const std::shared_ptr<const topos::FinSet>& set,
                                                  const topos::LanguageSignature& sig, const Structure& s) {
  using namespace topos;
  const auto m = FinSetObject::range(s.size);
  LStructure<FinSet> out(set, sig, m);
  auto table_over = [&](std::size_t arity, auto&& cell) {
    // element of M^arity for each argument tuple, via the label convention
    const auto p = power(*set, m, arity);
    std::vector<std::size_t> table(p.apex().size());
    std::vector<std::size_t> args(arity, 0);
    for (std::size_t c = 0; c < table.size(); ++c) {
      std::vector<FinSetMap> legs;
      for (auto a : args) legs.push_back(set->constant(set->terminal(), m, a));
      const auto point = p.tuple(set->terminal(), std::span<const FinSetMap>(legs));
      table[point(0)] = cell(args);
      for (std::size_t k = arity; k > 0; --k) {
        if (++args[k - 1] < s.size) break;
        args[k - 1] = 0;
      }
    }
    return std::make_pair(p.apex(), table);
  };
  for (const auto& [name, entry] : s.functions) {
    auto [apex, table] = table_over(entry.first, [&](const std::vector<std::size_t>& a) {
      return entry.second.at(code(a, s.size));
    });
    out.set_function(name, FinSetMap(apex, m, table));
  }
  for (const auto& [name, entry] : s.relations) {
    auto [apex, table] = table_over(entry.first, [&](const std::vector<std::size_t>& a) -> std::size_t {
      return entry.second.at(code(a, s.size)) ? 0 : 1;  // T is index 0 of Omega
    });
    out.set_relation(name, FinSetMap(apex, set->omega(), table));
  }
  for (const auto& [name, c] : s.constants) out.set_constant(name, set->constant(set->terminal(), m, c));
  return out;
}

/// Every structure of the fixture signature on a set of the given size.
/// Function and relation tables are enumerated in mixed radix.
inline std::vector<Structure> all_structures(std::size_t size) {
  std::vector<Structure> out;
  if (size == 0) return out;
  const std::size_t cells = size * size;
  std::size_t fn_count = 1;
  for (std::size_t i = 0; i < cells; ++i) fn_count *= size;
  for (std::size_t f = 0; f < fn_count; ++f)
    for (std::size_t r = 0; r < (std::size_t{1} << cells); ++r)
      for (std::size_t c = 0; c < size; ++c) {
        Structure s;
        s.size = size;
        std::vector<std::size_t> mul(cells);
        auto code_f = f;
        for (std::size_t i = cells; i-- > 0;) {
          mul[i] = code_f % size;
          code_f /= size;
        }
        std::vector<bool> rel(cells);
        for (std::size_t i = 0; i < cells; ++i) rel[i] = (r >> i) & 1;
        s.functions["mul"] = {2, mul};
        s.relations["R"] = {2, rel};
        s.constants["e"] = c;
        out.push_back(std::move(s));
      }
  return out;
}

/// A structure with tables drawn from the generator.
inline Structure random_structure(std::size_t size, std::mt19937& rng) {
  Structure s;
  s.size = size;
  std::uniform_int_distribution<std::size_t> elem(0, size - 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::size_t> mul(size * size);
  std::vector<bool> rel(size * size);
  for (auto& v : mul) v = elem(rng);
  for (std::size_t i = 0; i < rel.size(); ++i) rel[i] = coin(rng);
  s.functions["mul"] = {2, mul};
  s.relations["R"] = {2, rel};
  s.constants["e"] = elem(rng);
  return s;
}

/// Random formulas over the fixture signature with variables x1..x3.
class FormulaGenerator {
 public:
  explicit FormulaGenerator(unsigned seed) : rng_(seed) {}

  topos::Term term(std::size_t depth) {
    using topos::Term;
    std::uniform_int_distribution<int> pick(0, depth > 1 ? 2 : 1);
    switch (pick(rng_)) {
      case 0:
        return Term::var(var());
      case 1:
        return Term::constant("e");
      default:
        return Term::apply("mul", {term(depth - 1), term(depth - 1)});
    }
  }

  topos::Formula formula(std::size_t depth) {
    using topos::Formula;
    if (depth <= 1) return atom();
    std::uniform_int_distribution<int> pick(0, 7);
    switch (pick(rng_)) {
      case 0:
        return atom();
      case 1:
        return Formula::negation(formula(depth - 1));
      case 2:
        return Formula::conj(formula(depth - 1), formula(depth - 1));
      case 3:
        return Formula::disj(formula(depth - 1), formula(depth - 1));
      case 4:
        return Formula::implies(formula(depth - 1), formula(depth - 1));
      case 5:
        return Formula::iff(formula(depth - 1), formula(depth - 1));
      case 6:
        return Formula::forall(var(), formula(depth - 1));
      default:
        return Formula::exists(var(), formula(depth - 1));
    }
  }

 private:
  topos::Formula atom() {
    using topos::Formula;
    std::bernoulli_distribution coin(0.5);
    if (coin(rng_)) return Formula::eq(term(2), term(2));
    return Formula::rel("R", {term(2), term(2)});
  }

  std::size_t var() { return std::uniform_int_distribution<std::size_t>(1, 3)(rng_); }

  std::mt19937 rng_;
};

/// At least `count` distinct formulas of depth <= max_depth with at most two
/// free variables.
inline std::vector<topos::Formula> formula_corpus(std::size_t count, std::size_t max_depth, unsigned seed) {
  FormulaGenerator gen(seed);
  std::vector<topos::Formula> out;
  std::map<std::string, bool> seen;
  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    auto f = gen.formula(1 + attempt % max_depth);
    if (topos::depth(f) > max_depth || topos::free_variables(f).size() > 2) continue;
    if (seen.emplace(topos::to_string(f), true).second) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace oracle
