#pragma once

// First-order languages, term and formula syntax trees, and L-structures in
// a topos. Variables are x1, x2, ...; free-variable lists are ascending.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "topos/category.hpp"
#include "topos/error.hpp"

namespace topos {

/// True for names of the form x<digits>, which are reserved for variables.
inline bool is_variable_name(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x') return false;
  return std::all_of(name.begin() + 1, name.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

inline bool is_identifier(const std::string& name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(),
                     [](unsigned char c) { return std::isalnum(c) != 0 || c == '_'; });
}

/// Function and relation symbols with arities >= 1, and constants. Names are
/// unique across kinds.
class LanguageSignature {
 public:
  enum class Kind { None, Function, Relation, Constant };

  LanguageSignature& add_function(const std::string& name, std::size_t arity) {
    check_new(name);
    if (arity == 0) throw SignatureError("function '" + name + "' must have arity >= 1; use a constant");
    functions_[name] = arity;
    return *this;
  }

  LanguageSignature& add_relation(const std::string& name, std::size_t arity) {
    check_new(name);
    if (arity == 0) throw SignatureError("relation '" + name + "' must have arity >= 1");
    relations_[name] = arity;
    return *this;
  }

  LanguageSignature& add_constant(const std::string& name) {
    check_new(name);
    constants_.insert(name);
    return *this;
  }

  Kind kind(const std::string& name) const {
    if (functions_.count(name)) return Kind::Function;
    if (relations_.count(name)) return Kind::Relation;
    if (constants_.count(name)) return Kind::Constant;
    return Kind::None;
  }

  std::size_t function_arity(const std::string& name) const {
    const auto it = functions_.find(name);
    if (it == functions_.end()) throw SignatureError("unknown function symbol '" + name + "'");
    return it->second;
  }

  std::size_t relation_arity(const std::string& name) const {
    const auto it = relations_.find(name);
    if (it == relations_.end()) throw SignatureError("unknown relation symbol '" + name + "'");
    return it->second;
  }

  const std::map<std::string, std::size_t>& functions() const { return functions_; }
  const std::map<std::string, std::size_t>& relations() const { return relations_; }
  const std::set<std::string>& constants() const { return constants_; }

  friend bool operator==(const LanguageSignature&, const LanguageSignature&) = default;

 private:
  void check_new(const std::string& name) const {
    if (!is_identifier(name)) throw SignatureError("'" + name + "' is not a valid symbol name");
    if (is_variable_name(name)) throw SignatureError("'" + name + "' is reserved for variables");
    if (kind(name) != Kind::None) throw SignatureError("symbol '" + name + "' is declared twice");
  }

  std::map<std::string, std::size_t> functions_;
  std::map<std::string, std::size_t> relations_;
  std::set<std::string> constants_;
};

struct Term {
  enum class Kind { Var, Const, Apply, Product };

  Kind kind = Kind::Var;
  std::size_t index = 0;  // Var
  std::string name;       // Const, Apply
  std::vector<Term> args; // Apply, Product

  static Term var(std::size_t index) {
    if (index == 0) throw InvalidArgument("variable indices start at 1");
    Term t;
    t.kind = Kind::Var;
    t.index = index;
    return t;
  }
  static Term constant(std::string name) {
    Term t;
    t.kind = Kind::Const;
    t.name = std::move(name);
    return t;
  }
  static Term apply(std::string name, std::vector<Term> args) {
    if (args.empty()) throw ArityError("function application needs arguments");
    Term t;
    t.kind = Kind::Apply;
    t.name = std::move(name);
    t.args = std::move(args);
    return t;
  }
  static Term product(std::vector<Term> args) {
    if (args.empty()) throw ArityError("product terms need at least one component");
    Term t;
    t.kind = Kind::Product;
    t.args = std::move(args);
    return t;
  }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Formula {
  enum class Kind { Eq, Rel, Not, And, Or, Implies, Iff, Forall, Exists };

  Kind kind = Kind::Eq;
  std::string name;          // Rel
  std::vector<Term> terms;   // Eq (two), Rel (arguments)
  std::vector<Formula> sub;  // connectives and quantifiers
  std::size_t var = 0;       // Forall, Exists

  static Formula eq(Term a, Term b) {
    Formula f;
    f.kind = Kind::Eq;
    f.terms = {std::move(a), std::move(b)};
    return f;
  }
  static Formula rel(std::string name, std::vector<Term> args) {
    if (args.empty()) throw ArityError("relation atoms need arguments");
    Formula f;
    f.kind = Kind::Rel;
    f.name = std::move(name);
    f.terms = std::move(args);
    return f;
  }
  static Formula negation(Formula a) { return unary(Kind::Not, std::move(a)); }
  static Formula conj(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
  static Formula implies(Formula a, Formula b) { return binary(Kind::Implies, std::move(a), std::move(b)); }
  static Formula iff(Formula a, Formula b) { return binary(Kind::Iff, std::move(a), std::move(b)); }
  static Formula forall(std::size_t var, Formula a) { return quantifier(Kind::Forall, var, std::move(a)); }
  static Formula exists(std::size_t var, Formula a) { return quantifier(Kind::Exists, var, std::move(a)); }

  bool is_binary() const {
    return kind == Kind::And || kind == Kind::Or || kind == Kind::Implies || kind == Kind::Iff;
  }
  bool is_quantifier() const { return kind == Kind::Forall || kind == Kind::Exists; }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  static Formula unary(Kind k, Formula a) {
    Formula f;
    f.kind = k;
    f.sub.push_back(std::move(a));
    return f;
  }
  static Formula binary(Kind k, Formula a, Formula b) {
    Formula f;
    f.kind = k;
    f.sub.push_back(std::move(a));
    f.sub.push_back(std::move(b));
    return f;
  }
  static Formula quantifier(Kind k, std::size_t var, Formula a) {
    if (var == 0) throw InvalidArgument("variable indices start at 1");
    Formula f;
    f.kind = k;
    f.var = var;
    f.sub.push_back(std::move(a));
    return f;
  }
};

namespace detail {

inline void collect(const Term& t, std::set<std::size_t>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.index);
  for (const auto& a : t.args) collect(a, out);
}

inline void collect(const Formula& f, std::set<std::size_t>& out) {
  for (const auto& t : f.terms) collect(t, out);
  if (f.is_quantifier()) {
    std::set<std::size_t> inner;
    collect(f.sub[0], inner);
    inner.erase(f.var);
    out.insert(inner.begin(), inner.end());
    return;
  }
  for (const auto& s : f.sub) collect(s, out);
}

}  // namespace detail

/// v(t), ascending.
inline std::vector<std::size_t> free_variables(const Term& t) {
  std::set<std::size_t> s;
  detail::collect(t, s);
  return {s.begin(), s.end()};
}

/// v(phi), ascending.
inline std::vector<std::size_t> free_variables(const Formula& f) {
  std::set<std::size_t> s;
  detail::collect(f, s);
  return {s.begin(), s.end()};
}

/// Syntax-tree depth; atoms have depth 1.
inline std::size_t depth(const Formula& f) {
  std::size_t d = 0;
  for (const auto& s : f.sub) d = std::max(d, depth(s));
  return d + 1;
}

inline std::string to_string(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
      return "x" + std::to_string(t.index);
    case Term::Kind::Const:
      return t.name;
    case Term::Kind::Apply:
    case Term::Kind::Product: {
      std::string out = t.kind == Term::Kind::Apply ? t.name + "(" : "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ",";
        out += to_string(t.args[i]);
      }
      return out + ")";
    }
  }
  return {};
}

/// Surface syntax; binary connectives are always parenthesized, so the output
/// parses back to the same tree.
inline std::string to_string(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Eq:
      return to_string(f.terms[0]) + " = " + to_string(f.terms[1]);
    case K::Rel: {
      std::string out = f.name + "(";
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (i) out += ",";
        out += to_string(f.terms[i]);
      }
      return out + ")";
    }
    case K::Not: {
      const auto& s = f.sub[0];
      const auto inner = to_string(s);
      if (s.kind == K::Eq || s.is_quantifier()) return "~(" + inner + ")";
      return "~" + inner;
    }
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff: {
      const char* op = f.kind == K::And ? " & " : f.kind == K::Or ? " | " : f.kind == K::Implies ? " -> " : " <-> ";
      // a quantifier scopes to the right, so only a left operand needs parentheses
      const auto left = f.sub[0].is_quantifier() ? "(" + to_string(f.sub[0]) + ")" : to_string(f.sub[0]);
      return "(" + left + op + to_string(f.sub[1]) + ")";
    }
    case K::Forall:
    case K::Exists:
      return std::string(f.kind == K::Forall ? "forall" : "exists") + " x" + std::to_string(f.var) + ". " +
             to_string(f.sub[0]);
  }
  return {};
}

/// Checks every symbol of the term against the signature. Returns the width:
/// 1 for ordinary terms, the sum of component widths for product terms.
inline std::size_t check_term(const LanguageSignature& sig, const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
      return 1;
    case Term::Kind::Const:
      if (sig.kind(t.name) != LanguageSignature::Kind::Constant)
        throw SignatureError("'" + t.name + "' is not a constant symbol");
      return 1;
    case Term::Kind::Apply: {
      if (sig.kind(t.name) != LanguageSignature::Kind::Function)
        throw SignatureError("'" + t.name + "' is not a function symbol");
      std::size_t width = 0;
      for (const auto& a : t.args) width += check_term(sig, a);
      if (width != sig.function_arity(t.name))
        throw ArityError("'" + t.name + "' expects " + std::to_string(sig.function_arity(t.name)) +
                         " arguments, got " + std::to_string(width));
      return 1;
    }
    case Term::Kind::Product: {
      std::size_t width = 0;
      for (const auto& a : t.args) width += check_term(sig, a);
      return width;
    }
  }
  return 0;
}

inline void check_formula(const LanguageSignature& sig, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Eq:
      if (check_term(sig, f.terms[0]) != check_term(sig, f.terms[1]))
        throw ArityError("equality between terms of different widths");
      return;
    case K::Rel: {
      if (sig.kind(f.name) != LanguageSignature::Kind::Relation)
        throw SignatureError("'" + f.name + "' is not a relation symbol");
      std::size_t width = 0;
      for (const auto& t : f.terms) width += check_term(sig, t);
      if (width != sig.relation_arity(f.name))
        throw ArityError("'" + f.name + "' expects " + std::to_string(sig.relation_arity(f.name)) +
                         " arguments, got " + std::to_string(width));
      return;
    }
    default:
      for (const auto& s : f.sub) check_formula(sig, s);
  }
}

/// An L-structure in a topos: support M with f^M : M^n -> M, R^M : M^n -> Omega
/// and c^M : 1 -> M, where M^n is the left-nested power.
template <Topos T>
class LStructure {
 public:
  using Obj = ObjectOf<T>;
  using Mor = MorphismOf<T>;

  LStructure(std::shared_ptr<const T> topos, LanguageSignature signature, Obj support)
      : topos_(std::move(topos)), signature_(std::move(signature)), support_(std::move(support)) {}

  const T& topos() const { return *topos_; }
  const std::shared_ptr<const T>& topos_ptr() const { return topos_; }
  const LanguageSignature& signature() const { return signature_; }
  const Obj& support() const { return support_; }

  LStructure& set_function(const std::string& name, Mor f) {
    const auto n = signature_.function_arity(name);
    expect(f, power(*topos_, support_, n).apex(), support_, name);
    functions_.insert_or_assign(name, std::move(f));
    return *this;
  }

  LStructure& set_relation(const std::string& name, Mor r) {
    const auto n = signature_.relation_arity(name);
    expect(r, power(*topos_, support_, n).apex(), topos_->omega(), name);
    relations_.insert_or_assign(name, std::move(r));
    return *this;
  }

  LStructure& set_constant(const std::string& name, Mor c) {
    if (signature_.kind(name) != LanguageSignature::Kind::Constant)
      throw SignatureError("'" + name + "' is not a constant symbol");
    expect(c, topos_->terminal(), support_, name);
    constants_.insert_or_assign(name, std::move(c));
    return *this;
  }

  const Mor& function(const std::string& name) const { return lookup(functions_, name, "function"); }
  const Mor& relation(const std::string& name) const { return lookup(relations_, name, "relation"); }
  const Mor& constant(const std::string& name) const { return lookup(constants_, name, "constant"); }

  /// Every declared symbol has an interpretation.
  bool complete() const {
    return functions_.size() == signature_.functions().size() &&
           relations_.size() == signature_.relations().size() &&
           constants_.size() == signature_.constants().size();
  }

 private:
  void expect(const Mor& m, const Obj& source, const Obj& target, const std::string& name) const {
    if (!(m.source() == source) || !(m.target() == target))
      throw ArityError("interpretation of '" + name + "' has the wrong source or target");
  }

  static const Mor& lookup(const std::map<std::string, Mor>& table, const std::string& name, const char* what) {
    const auto it = table.find(name);
    if (it == table.end()) throw SignatureError(std::string("no interpretation for ") + what + " '" + name + "'");
    return it->second;
  }

  std::shared_ptr<const T> topos_;
  LanguageSignature signature_;
  Obj support_;
  std::map<std::string, Mor> functions_;
  std::map<std::string, Mor> relations_;
  std::map<std::string, Mor> constants_;
};

}  // namespace topos
