#pragma once

// Internal logic of a topos: connectives and quantifiers as characters, and
// the interpretation of terms and formulas of an L-structure as morphisms
// M^n -> M and M^n -> Omega, with n the number of free variables.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topos/category.hpp"
#include "topos/error.hpp"
#include "topos/language.hpp"
#include "topos/subobject.hpp"

namespace topos {

/// F : 1 -> Omega, the character of 0 -> 1.
template <Topos T>
MorphismOf<T> connective_false(const T& t) {
  return character(t, t.from_initial(t.terminal()));
}

/// not : Omega -> Omega, the character of F.
template <Topos T>
MorphismOf<T> connective_not(const T& t) {
  return character(t, connective_false(t));
}

/// and : Omega x Omega -> Omega, the character of <T, T>.
template <Topos T>
MorphismOf<T> connective_and(const T& t) {
  const auto sq = t.product(t.omega(), t.omega());
  return character(t, sq.pair(t.truth(), t.truth()));
}

/// or : Omega x Omega -> Omega, the character of the image of
/// [<T !, id>, <id, T !>] : Omega + Omega -> Omega x Omega.
template <Topos T>
MorphismOf<T> connective_or(const T& t) {
  const auto omega = t.omega();
  const auto sq = t.product(omega, omega);
  const auto id = t.identity(omega);
  const auto true_everywhere = t.compose(t.truth(), t.to_terminal(omega));
  const auto sum = t.coproduct(omega, omega);
  const auto k = sum.copair(sq.pair(true_everywhere, id), sq.pair(id, true_everywhere));
  return character(t, t.factorize(k).im);
}

/// implies : Omega x Omega -> Omega, the character of the equalizer of pi1 and and.
template <Topos T>
MorphismOf<T> connective_implies(const T& t) {
  const auto sq = t.product(t.omega(), t.omega());
  return character(t, t.equalizer(sq.pi1, connective_and(t)).inclusion);
}

/// iff : Omega x Omega -> Omega, the character of the diagonal of Omega.
template <Topos T>
MorphismOf<T> connective_iff(const T& t) {
  const auto sq = t.product(t.omega(), t.omega());
  const auto id = t.identity(t.omega());
  return character(t, sq.pair(id, id));
}

template <Topos T>
struct Connectives {
  MorphismOf<T> truth;
  MorphismOf<T> falsity;
  MorphismOf<T> negation;
  MorphismOf<T> conjunction;
  MorphismOf<T> disjunction;
  MorphismOf<T> implication;
  MorphismOf<T> equivalence;
  ProductCone<ObjectOf<T>, MorphismOf<T>> omega2;
};

template <Topos T>
Connectives<T> connectives(const T& t) {
  return {t.truth(),          connective_false(t),   connective_not(t), connective_and(t),
          connective_or(t),   connective_implies(t), connective_iff(t), t.product(t.omega(), t.omega())};
}

/// forall_M, exists_M : Omega^M -> Omega.
template <Topos T>
struct Quantifiers {
  PowerObject<T> power;
  MorphismOf<T> all_true;  // 1 -> Omega^M, the transpose of T !
  MorphismOf<T> forall;
  MorphismOf<T> exists;
};

/// forall_M is the character of the transpose of T ! : 1 x M -> Omega.
/// exists_M is the character of the image of pi1 . ni_M, since pi1 . ni_M
/// need not be monic.
template <Topos T>
Quantifiers<T> quantifiers(const T& t, const ObjectOf<T>& m) {
  auto po = power_object(t, m);
  const auto one_m = t.product(t.terminal(), m).apex;
  const auto constant_true = t.compose(t.truth(), t.to_terminal(one_m));
  auto all_true = po.exponential.curry(t.terminal(), constant_true);
  auto forall = character(t, all_true);
  const auto projected = t.compose(po.exponential.product.pi1, po.membership);
  auto exists = character(t, t.factorize(projected).im);
  return {std::move(po), std::move(all_true), std::move(forall), std::move(exists)};
}

/// A global truth value 1 -> Omega with its display name.
template <Topos T>
struct TruthValue {
  MorphismOf<T> value;
  std::string name;
};

/// Hom(1, Omega), named T and F where they match, otherwise by the topos.
template <Topos T>
std::vector<TruthValue<T>> global_truth_values(const T& t) {
  const auto falsity = connective_false(t);
  std::vector<TruthValue<T>> out;
  for (const auto& v : t.hom(t.terminal(), t.omega())) {
    std::string name = v == t.truth() ? "T" : v == falsity ? "F" : t.truth_value_name(v);
    out.push_back({v, std::move(name)});
  }
  return out;
}

template <Topos T>
std::string truth_value_name(const T& t, const std::vector<TruthValue<T>>& values, const MorphismOf<T>& v) {
  for (const auto& tv : values)
    if (tv.value == v) return tv.name;
  return t.describe(v);
}

/// Boolean iff [T, F] : 1 + 1 -> Omega is invertible.
template <Topos T>
bool is_boolean(const T& t) {
  const auto sum = t.coproduct(t.terminal(), t.terminal());
  const auto k = sum.copair(t.truth(), connective_false(t));
  return find_inverse(t, k).has_value();
}

enum class Connective { Not, And, Or, Implies, Iff };

inline const char* connective_symbol(Connective c) {
  switch (c) {
    case Connective::Not:
      return "~";
    case Connective::And:
      return "&";
    case Connective::Or:
      return "|";
    case Connective::Implies:
      return "->";
    case Connective::Iff:
      return "<->";
  }
  return "?";
}

/// Rows are the first argument, columns the second, both in the order of
/// global_truth_values. Negation has a single row.
struct TruthTable {
  Connective connective;
  std::vector<std::string> values;
  std::vector<std::vector<std::string>> cells;
};

template <Topos T>
TruthTable truth_table(const T& t, Connective c, const Connectives<T>& ops) {
  const auto values = global_truth_values(t);
  TruthTable table{c, {}, {}};
  for (const auto& v : values) table.values.push_back(v.name);
  if (c == Connective::Not) {
    std::vector<std::string> row;
    for (const auto& a : values) row.push_back(truth_value_name(t, values, t.compose(ops.negation, a.value)));
    table.cells.push_back(std::move(row));
    return table;
  }
  const auto& op = c == Connective::And       ? ops.conjunction
                   : c == Connective::Or      ? ops.disjunction
                   : c == Connective::Implies ? ops.implication
                                              : ops.equivalence;
  for (const auto& a : values) {
    std::vector<std::string> row;
    for (const auto& b : values)
      row.push_back(truth_value_name(t, values, t.compose(op, ops.omega2.pair(a.value, b.value))));
    table.cells.push_back(std::move(row));
  }
  return table;
}

template <Topos T>
TruthTable truth_table(const T& t, Connective c) {
  return truth_table(t, c, connectives(t));
}

/// Structure-independent data for interpreting formulas over a fixed support
/// M: powers of M, connectives, quantifiers and equality characters. Shared
/// between structures with the same support.
template <Topos T>
class LogicContext {
 public:
  using Obj = ObjectOf<T>;
  using Mor = MorphismOf<T>;

  LogicContext(std::shared_ptr<const T> topos, Obj support)
      : topos_(std::move(topos)), support_(std::move(support)) {}

  LogicContext(const LogicContext&) = delete;
  LogicContext& operator=(const LogicContext&) = delete;

  const T& topos() const { return *topos_; }
  const Obj& support() const { return support_; }

  /// M^n, left-nested; M^0 = 1.
  const NaryProduct<T>& power(std::size_t n) {
    auto it = powers_.find(n);
    if (it == powers_.end()) it = powers_.emplace(n, std::make_unique<NaryProduct<T>>(topos::power(*topos_, support_, n))).first;
    return *it->second;
  }

  const Connectives<T>& ops() {
    if (!ops_) ops_ = connectives(*topos_);
    return *ops_;
  }

  const Quantifiers<T>& quantifiers() {
    if (!quantifiers_) quantifiers_ = topos::quantifiers(*topos_, support_);
    return *quantifiers_;
  }

  /// The character of the diagonal M^w -> M^w x M^w (flattened to M^2w).
  const Mor& equality(std::size_t width) {
    auto it = equality_.find(width);
    if (it == equality_.end()) {
      std::vector<std::size_t> sigma;
      for (std::size_t k = 1; k <= width; ++k) sigma.push_back(k);
      for (std::size_t k = 1; k <= width; ++k) sigma.push_back(k);
      const auto delta = diagonal(power(width), power(2 * width), std::span<const std::size_t>(sigma));
      it = equality_.emplace(width, character(*topos_, delta)).first;
    }
    return it->second;
  }

 private:
  std::shared_ptr<const T> topos_;
  Obj support_;
  std::map<std::size_t, std::unique_ptr<NaryProduct<T>>> powers_;
  std::optional<Connectives<T>> ops_;
  std::optional<Quantifiers<T>> quantifiers_;
  std::map<std::size_t, Mor> equality_;
};

/// Interprets terms and formulas of one L-structure.
template <Topos T>
class Interpreter {
 public:
  using Obj = ObjectOf<T>;
  using Mor = MorphismOf<T>;

  explicit Interpreter(LStructure<T> structure, std::shared_ptr<LogicContext<T>> context = nullptr)
      : structure_(std::move(structure)), context_(std::move(context)) {
    if (!context_) context_ = std::make_shared<LogicContext<T>>(structure_.topos_ptr(), structure_.support());
    if (!(context_->support() == structure_.support()))
      throw InvalidArgument("logic context and structure have different supports");
  }

  const LStructure<T>& structure() const { return structure_; }
  LogicContext<T>& context() { return *context_; }
  const T& topos() const { return structure_.topos(); }

  /// t^M : M^|v(t)| -> M, or M^|v(t)| -> M^w for a product term of width w.
  Mor term(const Term& t) {
    check_term(structure_.signature(), t);
    return term_unchecked(t);
  }

  /// phi^M : M^|v(phi)| -> Omega.
  Mor formula(const Formula& f) {
    check_formula(structure_.signature(), f);
    return formula_unchecked(f);
  }

  /// phi^M . <a1, ..., an> : 1 -> Omega for global elements a_i of M.
  Mor value(const Formula& f, std::span<const Mor> elements) {
    const auto n = free_variables(f).size();
    if (elements.size() != n)
      throw ArityError("formula has " + std::to_string(n) + " free variables but " +
                       std::to_string(elements.size()) + " elements were given");
    const auto phi = formula(f);
    return topos().compose(phi, context_->power(n).tuple(topos().terminal(), elements));
  }

  /// M |= phi(a1, ..., an).
  bool satisfies(const Formula& f, std::span<const Mor> elements) { return value(f, elements) == topos().truth(); }
  bool satisfies(const Formula& f) { return satisfies(f, std::span<const Mor>{}); }

 private:
  struct Part {
    Mor map;
    std::vector<std::size_t> vars;
  };

  /// (m1 x ... x mk) . regroup . Delta_sigma : M^|vars| -> C1 x ... x Ck, where
  /// sigma lists the positions of each part's variables within vars.
  Mor combine(const std::vector<Part>& parts, const std::vector<std::size_t>& vars) {
    const auto& t = topos();
    const auto d = vars.size();
    std::vector<std::size_t> sigma;
    for (const auto& p : parts)
      for (auto v : p.vars)
        sigma.push_back(static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin()) + 1);
    const auto& from = context_->power(d);
    const auto& flat = context_->power(sigma.size());
    const Mor delta = sigma.empty() ? t.to_terminal(from.apex())
                                    : diagonal(from, flat, std::span<const std::size_t>(sigma));
    std::vector<Obj> groups, cods;
    for (const auto& p : parts) {
      groups.push_back(context_->power(p.vars.size()).apex());
      cods.push_back(p.map.target());
    }
    const NaryProduct<T> grouped(t, groups);
    const NaryProduct<T> out(t, cods);
    std::vector<Mor> legs;
    std::size_t offset = 0;
    for (const auto& p : parts) {
      const auto& g = context_->power(p.vars.size());
      std::vector<Mor> inner;
      for (std::size_t k = 0; k < p.vars.size(); ++k) inner.push_back(flat.projection(offset + k));
      legs.push_back(g.tuple(flat.apex(), inner));
      offset += p.vars.size();
    }
    const auto regroup = grouped.tuple(flat.apex(), legs);
    std::vector<Mor> maps;
    for (const auto& p : parts) maps.push_back(p.map);
    const auto product = product_of_morphisms(t, grouped, out, std::span<const Mor>(maps));
    return t.compose(product, t.compose(regroup, delta));
  }

  std::size_t width(const Term& t) const { return check_term(structure_.signature(), t); }

  /// (t1, ..., tk)^M flattened to M^|v| -> M^(w1 + ... + wk).
  Mor product_term(const std::vector<Term>& args) {
    const auto& t = topos();
    std::vector<Part> parts;
    std::vector<std::size_t> all;
    std::vector<std::size_t> widths;
    bool simple = true;
    for (const auto& a : args) {
      parts.push_back({term_unchecked(a), free_variables(a)});
      all.insert(all.end(), parts.back().vars.begin(), parts.back().vars.end());
      widths.push_back(width(a));
      simple = simple && widths.back() == 1;
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    const auto combined = combine(parts, all);
    if (simple) return combined;
    // Flatten (M^w1 x ... x M^wk) into M^(w1 + ... + wk).
    std::vector<Obj> cods;
    std::size_t total = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      cods.push_back(parts[i].map.target());
      total += widths[i];
    }
    const NaryProduct<T> nested(t, cods);
    std::vector<Mor> legs;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& pw = context_->power(widths[i]);
      for (std::size_t k = 0; k < widths[i]; ++k)
        legs.push_back(widths[i] == 1 ? nested.projection(i) : t.compose(pw.projection(k), nested.projection(i)));
    }
    return t.compose(context_->power(total).tuple(nested.apex(), legs), combined);
  }

  Mor term_unchecked(const Term& term) {
    const auto& t = topos();
    switch (term.kind) {
      case Term::Kind::Var:
        return t.identity(structure_.support());
      case Term::Kind::Const:
        return structure_.constant(term.name);
      case Term::Kind::Apply:
        return t.compose(structure_.function(term.name), product_term(term.args));
      case Term::Kind::Product:
        return product_term(term.args);
    }
    throw InconsistencyError("unknown term kind");
  }

  Mor formula_unchecked(const Formula& f) {
    using K = Formula::Kind;
    const auto& t = topos();
    switch (f.kind) {
      case K::Eq:
        return t.compose(context_->equality(width(f.terms[0])), product_term(f.terms));
      case K::Rel:
        return t.compose(structure_.relation(f.name), product_term(f.terms));
      case K::Not:
        return t.compose(context_->ops().negation, formula_unchecked(f.sub[0]));
      case K::And:
      case K::Or:
      case K::Implies:
      case K::Iff: {
        const auto& ops = context_->ops();
        const auto& op = f.kind == K::And ? ops.conjunction
                         : f.kind == K::Or ? ops.disjunction
                         : f.kind == K::Implies ? ops.implication
                                                : ops.equivalence;
        std::vector<Part> parts{{formula_unchecked(f.sub[0]), free_variables(f.sub[0])},
                                {formula_unchecked(f.sub[1]), free_variables(f.sub[1])}};
        return t.compose(op, combine(parts, free_variables(f)));
      }
      case K::Forall:
      case K::Exists:
        return quantify(f);
    }
    throw InconsistencyError("unknown formula kind");
  }

  /// Q x. phi: extend phi by a dummy factor when x is not free, move x to the
  /// last factor, curry it out, then apply Q_M.
  Mor quantify(const Formula& f) {
    const auto& t = topos();
    const auto x = f.var;
    auto inner_vars = free_variables(f.sub[0]);
    auto phi = formula_unchecked(f.sub[0]);
    if (!std::binary_search(inner_vars.begin(), inner_vars.end(), x)) {
      std::vector<std::size_t> extended = inner_vars;
      extended.insert(std::upper_bound(extended.begin(), extended.end(), x), x);
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < extended.size(); ++i)
        if (extended[i] != x) keep.push_back(i + 1);
      const auto& from = context_->power(extended.size());
      const auto& to = context_->power(inner_vars.size());
      const Mor drop = keep.empty() ? t.to_terminal(from.apex())
                                    : diagonal(from, to, std::span<const std::size_t>(keep));
      phi = t.compose(phi, drop);
      inner_vars = std::move(extended);
    }
    const auto rest = free_variables(f);
    const auto& rest_power = context_->power(rest.size());
    const auto& all_power = context_->power(inner_vars.size());
    const auto split = t.product(rest_power.apex(), structure_.support());
    std::vector<Mor> legs;
    for (auto v : inner_vars) {
      if (v == x) {
        legs.push_back(split.pi2);
      } else {
        const auto pos = static_cast<std::size_t>(std::lower_bound(rest.begin(), rest.end(), v) - rest.begin());
        legs.push_back(t.compose(rest_power.projection(pos), split.pi1));
      }
    }
    const auto moved = t.compose(phi, all_power.tuple(split.apex, legs));
    const auto& q = context_->quantifiers();
    const auto curried = q.power.exponential.curry(rest_power.apex(), moved);
    return t.compose(f.kind == Formula::Kind::Forall ? q.forall : q.exists, curried);
  }

  LStructure<T> structure_;
  std::shared_ptr<LogicContext<T>> context_;
};

}  // namespace topos
