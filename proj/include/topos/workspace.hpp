#pragma once

// Workspace files: one topos, at most one sort, symbol interpretations and
// named formulas. Statements are separated by ';' and '#' starts a comment.
//
//   topos finset | arrow | slice(finset, {x,y})
//       | presheaf(objects {p,q}, arrows {u: p -> q}, compose {v*u = w})
//   sort M = {0,1}                            finset
//   sort M = {a,b} -> {x} by {a:x,b:x}        arrow: P(dom) -> P(cod)
//   sort M = {a,b} by {a:x,b:y}               slice: A -> X
//   sort M = {p:{..},q:{..}} by {u:{..}}      presheaf: u : p -> q maps M(q) -> M(p)
//   const e = 0                               finset
//   const e = {x:a,y:b}                       slice: a section X -> A
//   const e = {dom:a,cod:x}                   presheaf: one element per object
//   fun mul/2 = {(0,0):0,...}                 flat table (finset, slice)
//   fun g/1 = {dom:{a:b},cod:{x:x}}           one table per object (arrow, presheaf)
//   rel R/1 = {a:T}                           values are truth-value labels; missing ones are false
//   formula name = forall x1. exists x2. mul(x1,x2) = e
//
// Formula precedence from loosest: quantifier, <->, -> (right), |, &, ~.

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "topos/error.hpp"
#include "topos/finset.hpp"
#include "topos/language.hpp"
#include "topos/presheaf.hpp"
#include "topos/slice.hpp"

namespace topos {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

struct ToposDecl {
  enum class Kind { FinSet, Arrow, Slice, Presheaf };
  Kind kind = Kind::FinSet;
  std::vector<std::string> over;  // slice
  std::vector<std::string> objects;
  std::vector<FiniteCategory::ArrowSpec> arrows;
  std::vector<FiniteCategory::CompositionSpec> compose;

  friend bool operator==(const ToposDecl& a, const ToposDecl& b) {
    auto arrows_eq = [](const auto& x, const auto& y) {
      return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), [](const auto& p, const auto& q) {
               return p.name == q.name && p.dom == q.dom && p.cod == q.cod;
             });
    };
    auto compose_eq = [](const auto& x, const auto& y) {
      return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), [](const auto& p, const auto& q) {
               return p.g == q.g && p.f == q.f && p.h == q.h;
             });
    };
    return a.kind == b.kind && a.over == b.over && a.objects == b.objects && arrows_eq(a.arrows, b.arrows) &&
           compose_eq(a.compose, b.compose);
  }
};

/// Labels of one component; the name is empty for single-component sorts.
struct Component {
  std::string name;
  std::vector<std::string> labels;
  bool operator==(const Component&) const = default;
};

/// Entries of one map; the name is the arrow ("f" for the arrow topos) or empty for a slice.
struct Mapping {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
  bool operator==(const Mapping&) const = default;
};

struct SortDecl {
  std::string name;
  std::vector<Component> sets;
  std::vector<Mapping> maps;
  SourcePos pos;

  friend bool operator==(const SortDecl& a, const SortDecl& b) {
    return a.name == b.name && a.sets == b.sets && a.maps == b.maps;
  }
};

/// A key tuple (empty for a constant) and a value label.
struct Entry {
  std::vector<std::string> key;
  std::string value;
  bool operator==(const Entry&) const = default;
};

struct Table {
  std::string component;
  std::vector<Entry> entries;
  bool operator==(const Table&) const = default;
};

struct SymbolDecl {
  LanguageSignature::Kind kind = LanguageSignature::Kind::Constant;
  std::string name;
  std::size_t arity = 0;
  std::vector<Table> tables;
  SourcePos pos;

  friend bool operator==(const SymbolDecl& a, const SymbolDecl& b) {
    return a.kind == b.kind && a.name == b.name && a.arity == b.arity && a.tables == b.tables;
  }
};

struct FormulaDecl {
  std::string name;
  Formula formula;
  SourcePos pos;

  friend bool operator==(const FormulaDecl& a, const FormulaDecl& b) {
    return a.name == b.name && a.formula == b.formula;
  }
};

struct WorkspaceFile {
  ToposDecl topos;
  std::optional<SortDecl> sort;
  std::vector<SymbolDecl> symbols;
  std::vector<FormulaDecl> formulas;

  LanguageSignature signature() const {
    LanguageSignature sig;
    for (const auto& s : symbols) {
      if (s.kind == LanguageSignature::Kind::Function) sig.add_function(s.name, s.arity);
      else if (s.kind == LanguageSignature::Kind::Relation) sig.add_relation(s.name, s.arity);
      else sig.add_constant(s.name);
    }
    return sig;
  }

  const FormulaDecl* find_formula(std::string_view name) const {
    for (const auto& f : formulas)
      if (f.name == name) return &f;
    return nullptr;
  }

  friend bool operator==(const WorkspaceFile&, const WorkspaceFile&) = default;
};

namespace detail {

struct Token {
  enum class Kind { Word, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  SourcePos pos;
};

inline std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  auto word_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (word_char(c)) {
      const auto start = pos;
      std::size_t j = i;
      while (j < text.size() && word_char(text[j])) ++j;
      out.push_back({Token::Kind::Word, std::string(text.substr(i, j - i)), start});
      advance(j - i);
    } else if (text.substr(i, 3) == "<->") {
      out.push_back({Token::Kind::Punct, "<->", pos});
      advance(3);
    } else if (text.substr(i, 2) == "->") {
      out.push_back({Token::Kind::Punct, "->", pos});
      advance(2);
    } else if (std::string_view("{}(),:;=/.&|~*").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), pos});
      advance(1);
    } else {
      throw ParseError(pos.line, pos.column, "unexpected character '" + std::string(1, c) + "'");
    }
  }
  out.push_back({Token::Kind::End, "", pos});
  return out;
}

inline const std::set<std::string, std::less<>>& reserved_words() {
  static const std::set<std::string, std::less<>> words{"topos", "sort",   "fun",    "rel",
                                                        "const", "formula", "forall", "exists"};
  return words;
}

/// Left-nested label of a key tuple, matching the labels of M^n.
inline std::string key_label(const std::vector<std::string>& key) {
  if (key.empty()) return "*";
  std::string out = key[0];
  for (std::size_t i = 1; i < key.size(); ++i) out = pair_label(out, key[i]);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  WorkspaceFile file() {
    WorkspaceFile ws;
    expect_keyword("topos");
    ws.topos = topos_decl();
    while (true) {
      if (peek().kind == Token::Kind::End) break;
      expect(";");
      if (peek().kind == Token::Kind::End) break;
      const auto& t = peek();
      if (is_word("sort")) {
        if (ws.sort) fail(t, "only one sort may be declared");
        ws.sort = sort_decl(ws.topos);
      } else if (is_word("fun") || is_word("rel") || is_word("const")) {
        if (!ws.sort) fail(t, "declare the sort before any symbol");
        ws.symbols.push_back(symbol_decl(ws.topos, *ws.sort));
      } else if (is_word("formula")) {
        next();
        const auto name_tok = peek();
        const auto name = identifier("formula name");
        if (ws.find_formula(name)) fail(name_tok, "formula '" + name + "' is declared twice");
        expect("=");
        ws.formulas.push_back({name, formula(), name_tok.pos});
      } else {
        fail(t, "expected sort, fun, rel, const or formula");
      }
    }
    return ws;
  }

  /// A standalone formula over an existing signature.
  Formula formula_only(const LanguageSignature& sig) {
    signature_ = sig;
    auto f = formula();
    if (peek().kind != Token::Kind::End) fail(peek(), "unexpected '" + peek().text + "' after formula");
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
  Token next() {
    auto t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Punct && peek(k).text == p;
  }
  bool is_word(std::string_view w) const { return peek().kind == Token::Kind::Word && peek().text == w; }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }

  [[noreturn]] static void fail(const Token& t, const std::string& message) {
    throw ParseError(t.pos.line, t.pos.column, message);
  }
  [[noreturn]] static void fail(const SourcePos& p, const std::string& message) {
    throw ParseError(p.line, p.column, message);
  }

  static std::string shown(const Token& t) { return t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'"; }

  void expect(std::string_view p) {
    if (!accept(p)) fail(peek(), "expected '" + std::string(p) + "', found " + shown(peek()));
  }
  void expect_keyword(std::string_view w) {
    if (!is_word(w)) fail(peek(), "expected '" + std::string(w) + "', found " + shown(peek()));
    next();
  }
  std::string word(const char* what) {
    if (peek().kind != Token::Kind::Word) fail(peek(), std::string("expected ") + what + ", found " + shown(peek()));
    return next().text;
  }
  std::string identifier(const char* what) {
    const auto t = peek();
    auto w = word(what);
    if (!is_identifier(w)) fail(t, std::string("'") + w + "' is not a valid " + what);
    if (reserved_words().count(w)) fail(t, "'" + w + "' is a reserved word");
    return w;
  }

  template <class F>
  void list(std::string_view open, std::string_view close, F&& item) {
    expect(open);
    if (accept(close)) return;
    do item();
    while (accept(","));
    expect(close);
  }

  std::vector<std::string> label_set() {
    std::vector<std::string> labels;
    list("{", "}", [&] {
      const auto t = peek();
      auto w = word("label");
      if (std::find(labels.begin(), labels.end(), w) != labels.end()) fail(t, "duplicate label '" + w + "'");
      labels.push_back(std::move(w));
    });
    return labels;
  }

  // ---- topos ----

  ToposDecl topos_decl() {
    ToposDecl d;
    const auto start = peek();
    const auto kind = word("topos kind");
    if (kind == "finset") {
      d.kind = ToposDecl::Kind::FinSet;
    } else if (kind == "arrow") {
      d.kind = ToposDecl::Kind::Arrow;
    } else if (kind == "slice") {
      d.kind = ToposDecl::Kind::Slice;
      expect("(");
      const auto base = peek();
      if (word("base topos") != "finset") fail(base, "slices are supported over finset only");
      expect(",");
      d.over = label_set();
      expect(")");
    } else if (kind == "presheaf") {
      d.kind = ToposDecl::Kind::Presheaf;
      expect("(");
      expect_keyword("objects");
      d.objects = label_set();
      if (accept(",")) {
        expect_keyword("arrows");
        list("{", "}", [&] {
          FiniteCategory::ArrowSpec a;
          a.name = word("arrow name");
          expect(":");
          a.dom = word("object");
          expect("->");
          a.cod = word("object");
          d.arrows.push_back(std::move(a));
        });
        if (accept(",")) {
          expect_keyword("compose");
          list("{", "}", [&] {
            FiniteCategory::CompositionSpec c;
            c.g = word("arrow name");
            expect("*");
            c.f = word("arrow name");
            expect("=");
            c.h = word("arrow name");
            d.compose.push_back(std::move(c));
          });
        }
      }
      expect(")");
    } else {
      fail(start, "unknown topos '" + kind + "'; expected finset, arrow, slice or presheaf");
    }
    try {
      category_ = index_category(d);
    } catch (const Error& e) {
      fail(start, e.what());
    }
    return d;
  }

 public:
  static std::shared_ptr<const FiniteCategory> index_category(const ToposDecl& d) {
    if (d.kind == ToposDecl::Kind::Arrow) return std::make_shared<const FiniteCategory>(FiniteCategory::interval());
    if (d.kind == ToposDecl::Kind::Presheaf)
      return std::make_shared<const FiniteCategory>(FiniteCategory(d.objects, d.arrows, d.compose));
    return nullptr;
  }

 private:
  // ---- sort ----

  SortDecl sort_decl(const ToposDecl& topos) {
    SortDecl s;
    s.pos = next().pos;
    s.name = identifier("sort name");
    expect("=");
    switch (topos.kind) {
      case ToposDecl::Kind::FinSet:
        s.sets.push_back({"", label_set()});
        break;
      case ToposDecl::Kind::Slice: {
        s.sets.push_back({"", label_set()});
        expect_keyword("by");
        s.maps.push_back({"", mapping(s.sets[0].labels, topos.over)});
        break;
      }
      case ToposDecl::Kind::Arrow: {
        s.sets.push_back({"dom", label_set()});
        expect("->");
        s.sets.push_back({"cod", label_set()});
        std::vector<std::pair<std::string, std::string>> entries;
        if (accept_word("by")) entries = mapping(s.sets[0].labels, s.sets[1].labels);
        s.maps.push_back({"f", std::move(entries)});
        break;
      }
      case ToposDecl::Kind::Presheaf: {
        const auto& cat = *category_;
        list("{", "}", [&] {
          const auto t = peek();
          auto obj = word("object");
          if (cat.object_index(obj) == FiniteCategory::npos) fail(t, "unknown object '" + obj + "'");
          for (const auto& c : s.sets)
            if (c.name == obj) fail(t, "object '" + obj + "' is listed twice");
          expect(":");
          s.sets.push_back({std::move(obj), label_set()});
        });
        if (s.sets.size() != cat.object_count()) fail(peek(), "every object needs a set");
        auto set_of = [&](const std::string& obj) -> const std::vector<std::string>& {
          for (const auto& c : s.sets)
            if (c.name == obj) return c.labels;
          throw std::logic_error("unreachable");
        };
        if (accept_word("by")) {
          list("{", "}", [&] {
            const auto t = peek();
            auto name = word("arrow name");
            const auto a = cat.find_arrow(name);
            if (a == FiniteCategory::npos || a < cat.object_count()) fail(t, "'" + name + "' is not a non-identity arrow");
            for (const auto& m : s.maps)
              if (m.name == name) fail(t, "arrow '" + name + "' is mapped twice");
            expect(":");
            const auto& spec = cat.arrow(a);
            s.maps.push_back({name, mapping(set_of(cat.object(spec.cod)), set_of(cat.object(spec.dom)))});
          });
        }
        break;
      }
    }
    return s;
  }

  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    next();
    return true;
  }

  std::vector<std::pair<std::string, std::string>> mapping(const std::vector<std::string>& from,
                                                           const std::vector<std::string>& to) {
    std::vector<std::pair<std::string, std::string>> out;
    list("{", "}", [&] {
      const auto kt = peek();
      auto k = member(from, "source");
      for (const auto& e : out)
        if (e.first == k) fail(kt, "'" + k + "' is mapped twice");
      expect(":");
      out.emplace_back(std::move(k), member(to, "target"));
    });
    return out;
  }

  std::string member(const std::vector<std::string>& set, const char* role) {
    const auto t = peek();
    auto w = word("label");
    if (std::find(set.begin(), set.end(), w) == set.end())
      fail(t, "'" + w + "' is not an element of the " + role + " set");
    return w;
  }

  // ---- symbols ----

  SymbolDecl symbol_decl(const ToposDecl& topos, const SortDecl& sort) {
    SymbolDecl d;
    const auto kw = next();
    d.pos = kw.pos;
    d.kind = kw.text == "fun"   ? LanguageSignature::Kind::Function
             : kw.text == "rel" ? LanguageSignature::Kind::Relation
                                : LanguageSignature::Kind::Constant;
    const auto name_tok = peek();
    d.name = identifier("symbol name");
    if (d.kind != LanguageSignature::Kind::Constant) {
      expect("/");
      const auto at = peek();
      const auto n = word("arity");
      if (!std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isdigit(c) != 0; }) || n.size() > 3)
        fail(at, "arity must be a number");
      d.arity = std::stoul(n);
    }
    try {
      if (d.kind == LanguageSignature::Kind::Function) signature_.add_function(d.name, d.arity);
      else if (d.kind == LanguageSignature::Kind::Relation) signature_.add_relation(d.name, d.arity);
      else signature_.add_constant(d.name);
    } catch (const Error& e) {
      fail(name_tok, e.what());
    }
    expect("=");

    const bool per_object = topos.kind == ToposDecl::Kind::Arrow || topos.kind == ToposDecl::Kind::Presheaf;
    auto component_set = [&](const Token& t, const std::string& name) -> const std::vector<std::string>& {
      for (const auto& c : sort.sets)
        if (c.name == name) return c.labels;
      fail(t, "unknown object '" + name + "'");
    };
    auto check_duplicate = [&](const std::vector<Table>& tables, const Token& t, const std::string& name) {
      for (const auto& tb : tables)
        if (tb.component == name) fail(t, "object '" + name + "' is listed twice");
    };

    if (d.kind == LanguageSignature::Kind::Constant) {
      if (topos.kind == ToposDecl::Kind::FinSet) {
        d.tables.push_back({"", {{{}, member(sort.sets[0].labels, "sort")}}});
      } else if (topos.kind == ToposDecl::Kind::Slice) {
        Table tb;
        list("{", "}", [&] {
          const auto t = peek();
          auto x = member(topos.over, "base");
          for (const auto& e : tb.entries)
            if (e.key[0] == x) fail(t, "'" + x + "' is mapped twice");
          expect(":");
          tb.entries.push_back({{x}, member(sort.sets[0].labels, "sort")});
        });
        d.tables.push_back(std::move(tb));
      } else {
        list("{", "}", [&] {
          const auto t = peek();
          auto obj = word("object");
          const auto& set = component_set(t, obj);
          check_duplicate(d.tables, t, obj);
          expect(":");
          d.tables.push_back({obj, {{{}, member(set, "sort")}}});
        });
      }
      return d;
    }

    const bool is_rel = d.kind == LanguageSignature::Kind::Relation;
    if (!per_object) {
      d.tables.push_back({"", entries(sort.sets[0].labels, d.arity, is_rel)});
    } else {
      list("{", "}", [&] {
        const auto t = peek();
        auto obj = word("object");
        const auto& set = component_set(t, obj);
        check_duplicate(d.tables, t, obj);
        expect(":");
        d.tables.push_back({obj, entries(set, d.arity, is_rel)});
      });
    }
    return d;
  }

  std::vector<Entry> entries(const std::vector<std::string>& set, std::size_t arity, bool is_rel) {
    std::vector<Entry> out;
    list("{", "}", [&] {
      const auto kt = peek();
      Entry e;
      if (accept("(")) {
        do e.key.push_back(member(set, "sort"));
        while (accept(","));
        expect(")");
      } else {
        e.key.push_back(member(set, "sort"));
      }
      if (e.key.size() != arity)
        fail(kt, "key has " + std::to_string(e.key.size()) + " components but the arity is " + std::to_string(arity));
      for (const auto& o : out)
        if (o.key == e.key) fail(kt, "key " + key_label(e.key) + " is given twice");
      expect(":");
      if (!is_rel) {
        e.value = member(set, "sort");
      } else if (is_punct("{")) {
        std::string v = "{";
        bool first = true;
        list("{", "}", [&] {
          if (!first) v += ",";
          v += word("arrow name");
          first = false;
        });
        e.value = v + "}";
      } else {
        e.value = word("truth value");
      }
      out.push_back(std::move(e));
    });
    return out;
  }

  // ---- formulas ----

  Formula formula() {
    if (is_word("forall") || is_word("exists")) return quantified();
    return iff();
  }

  Formula quantified() {
    const bool all = next().text == "forall";
    const auto v = variable();
    expect(".");
    auto body = formula();
    return all ? Formula::forall(v, std::move(body)) : Formula::exists(v, std::move(body));
  }

  std::size_t variable() {
    const auto t = peek();
    const auto w = word("variable");
    if (!is_variable_name(w) || w == "x0" || w.size() > 10) fail(t, "'" + w + "' is not a variable x1, x2, ...");
    return std::stoul(w.substr(1));
  }

  Formula iff() {
    auto f = implies();
    while (accept("<->")) f = Formula::iff(std::move(f), implies());
    return f;
  }

  Formula implies() {
    auto f = disj();
    if (accept("->")) return Formula::implies(std::move(f), implies());
    return f;
  }

  Formula disj() {
    auto f = conj();
    while (accept("|")) f = Formula::disj(std::move(f), conj());
    return f;
  }

  Formula conj() {
    auto f = unary();
    while (accept("&")) f = Formula::conj(std::move(f), unary());
    return f;
  }

  Formula unary() {
    if (accept("~")) return Formula::negation(unary());
    if (is_word("forall") || is_word("exists")) return quantified();
    return atom();
  }

  Formula atom() {
    if (is_punct("(")) {
      const auto save = pos_;
      std::optional<ParseError> first;
      try {
        next();
        auto f = formula();
        expect(")");
        return f;
      } catch (const ParseError& e) {
        first = e;
      }
      const auto furthest = pos_;
      pos_ = save;
      try {
        return equation();
      } catch (const ParseError& e) {
        if (pos_ < furthest) throw *first;
        throw;
      }
    }
    const auto t = peek();
    if (t.kind == Token::Kind::Word && signature_.kind(t.text) == LanguageSignature::Kind::Relation) {
      next();
      std::vector<Term> args;
      std::size_t width = 0;
      list("(", ")", [&] {
        args.push_back(term());
        width += check_term(signature_, args.back());
      });
      if (width != signature_.relation_arity(t.text))
        fail(t, "'" + t.text + "' expects " + std::to_string(signature_.relation_arity(t.text)) + " arguments, got " +
                    std::to_string(width));
      return Formula::rel(t.text, std::move(args));
    }
    return equation();
  }

  Formula equation() {
    auto lhs = term();
    const auto eq = peek();
    expect("=");
    auto rhs = term();
    if (check_term(signature_, lhs) != check_term(signature_, rhs))
      fail(eq, "equality between terms of different widths");
    return Formula::eq(std::move(lhs), std::move(rhs));
  }

  Term term() {
    const auto t = peek();
    if (accept("(")) {
      std::vector<Term> parts;
      do parts.push_back(term());
      while (accept(","));
      expect(")");
      if (parts.size() == 1) return std::move(parts[0]);
      return Term::product(std::move(parts));
    }
    const auto w = word("term");
    if (is_variable_name(w)) {
      if (w == "x0" || w.size() > 10) fail(t, "'" + w + "' is not a variable x1, x2, ...");
      return Term::var(std::stoul(w.substr(1)));
    }
    switch (signature_.kind(w)) {
      case LanguageSignature::Kind::Constant:
        return Term::constant(w);
      case LanguageSignature::Kind::Function: {
        std::vector<Term> args;
        std::size_t width = 0;
        list("(", ")", [&] {
          args.push_back(term());
          width += check_term(signature_, args.back());
        });
        if (width != signature_.function_arity(w))
          fail(t, "'" + w + "' expects " + std::to_string(signature_.function_arity(w)) + " arguments, got " +
                      std::to_string(width));
        return Term::apply(w, std::move(args));
      }
      case LanguageSignature::Kind::Relation:
        fail(t, "relation '" + w + "' used as a term");
      default:
        fail(t, "unknown symbol '" + w + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  LanguageSignature signature_;
  std::shared_ptr<const FiniteCategory> category_;
};

}  // namespace detail

/// Parses a workspace; every diagnostic is a ParseError with line and column.
inline WorkspaceFile parse_workspace(std::string_view text) { return detail::Parser(text).file(); }

/// Parses a formula over the symbols of a workspace.
inline Formula parse_formula(std::string_view text, const LanguageSignature& sig) {
  return detail::Parser(text).formula_only(sig);
}

namespace detail {

inline std::string join_labels(const std::vector<std::string>& labels) {
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i];
  return out + "}";
}

inline std::string join_entries(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out = "{";
  for (std::size_t i = 0; i < entries.size(); ++i) out += (i ? "," : "") + entries[i].first + ":" + entries[i].second;
  return out + "}";
}

inline std::string key_text(const std::vector<std::string>& key) {
  if (key.size() == 1) return key[0];
  std::string out = "(";
  for (std::size_t i = 0; i < key.size(); ++i) out += (i ? "," : "") + key[i];
  return out + ")";
}

inline std::string table_text(const std::vector<Entry>& entries) {
  std::string out = "{";
  for (std::size_t i = 0; i < entries.size(); ++i) out += (i ? "," : "") + key_text(entries[i].key) + ":" + entries[i].value;
  return out + "}";
}

}  // namespace detail

/// Canonical text; parse_workspace(serialize_workspace(w)) == w.
inline std::string serialize_workspace(const WorkspaceFile& ws) {
  using detail::join_labels;
  std::string out = "topos ";
  const auto& t = ws.topos;
  switch (t.kind) {
    case ToposDecl::Kind::FinSet:
      out += "finset";
      break;
    case ToposDecl::Kind::Arrow:
      out += "arrow";
      break;
    case ToposDecl::Kind::Slice:
      out += "slice(finset, " + join_labels(t.over) + ")";
      break;
    case ToposDecl::Kind::Presheaf: {
      out += "presheaf(objects " + join_labels(t.objects) + ", arrows {";
      for (std::size_t i = 0; i < t.arrows.size(); ++i)
        out += (i ? ", " : "") + t.arrows[i].name + ": " + t.arrows[i].dom + " -> " + t.arrows[i].cod;
      out += "}, compose {";
      for (std::size_t i = 0; i < t.compose.size(); ++i)
        out += (i ? ", " : "") + t.compose[i].g + "*" + t.compose[i].f + " = " + t.compose[i].h;
      out += "})";
      break;
    }
  }
  out += ";\n";

  if (ws.sort) {
    const auto& s = *ws.sort;
    out += "sort " + s.name + " = ";
    switch (t.kind) {
      case ToposDecl::Kind::FinSet:
        out += join_labels(s.sets[0].labels);
        break;
      case ToposDecl::Kind::Slice:
        out += join_labels(s.sets[0].labels) + " by " + detail::join_entries(s.maps[0].entries);
        break;
      case ToposDecl::Kind::Arrow:
        out += join_labels(s.sets[0].labels) + " -> " + join_labels(s.sets[1].labels) + " by " +
               detail::join_entries(s.maps[0].entries);
        break;
      case ToposDecl::Kind::Presheaf: {
        out += "{";
        for (std::size_t i = 0; i < s.sets.size(); ++i) out += (i ? "," : "") + s.sets[i].name + ":" + join_labels(s.sets[i].labels);
        out += "} by {";
        for (std::size_t i = 0; i < s.maps.size(); ++i)
          out += (i ? "," : "") + s.maps[i].name + ":" + detail::join_entries(s.maps[i].entries);
        out += "}";
        break;
      }
    }
    out += ";\n";
  }

  const bool per_object = t.kind == ToposDecl::Kind::Arrow || t.kind == ToposDecl::Kind::Presheaf;
  for (const auto& d : ws.symbols) {
    if (d.kind == LanguageSignature::Kind::Constant) {
      out += "const " + d.name + " = ";
      if (t.kind == ToposDecl::Kind::FinSet) {
        out += d.tables[0].entries[0].value;
      } else if (t.kind == ToposDecl::Kind::Slice) {
        out += "{";
        const auto& es = d.tables[0].entries;
        for (std::size_t i = 0; i < es.size(); ++i) out += (i ? "," : "") + es[i].key[0] + ":" + es[i].value;
        out += "}";
      } else {
        out += "{";
        for (std::size_t i = 0; i < d.tables.size(); ++i)
          out += (i ? "," : "") + d.tables[i].component + ":" + d.tables[i].entries[0].value;
        out += "}";
      }
    } else {
      out += (d.kind == LanguageSignature::Kind::Function ? "fun " : "rel ") + d.name + "/" + std::to_string(d.arity) +
             " = ";
      if (!per_object) {
        out += detail::table_text(d.tables[0].entries);
      } else {
        out += "{";
        for (std::size_t i = 0; i < d.tables.size(); ++i)
          out += (i ? "," : "") + d.tables[i].component + ":" + detail::table_text(d.tables[i].entries);
        out += "}";
      }
    }
    out += ";\n";
  }
  for (const auto& f : ws.formulas) out += "formula " + f.name + " = " + to_string(f.formula) + ";\n";
  return out;
}

/// A loaded workspace: the topos, the structure (when a sort is declared) and the formulas.
template <Topos T>
struct Session {
  std::shared_ptr<const T> topos;
  std::optional<LStructure<T>> structure;
  WorkspaceFile file;
  std::string sort_name;
};

using Workspace = std::variant<Session<FinSet>, Session<SliceTopos<FinSet>>, Session<PresheafTopos>>;

namespace detail {

[[noreturn]] inline void fail_at(const SourcePos& p, const std::string& message) {
  throw ParseError(p.line, p.column, message);
}

template <class F>
auto at(const SourcePos& p, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail_at(p, e.what());
  }
}

inline std::vector<std::pair<std::string, std::string>> table_pairs(const std::vector<Entry>& entries) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : entries) out.emplace_back(key_label(e.key), e.value);
  return out;
}

/// Relation values with unlisted keys set to `bottom(label)`.
template <class Bottom, class Value>
std::vector<std::pair<std::string, std::string>> relation_pairs(const FinSetObject& source, const std::vector<Entry>& entries,
                                                                 Bottom&& bottom, Value&& value) {
  std::map<std::string, std::string> given;
  for (const auto& e : entries) {
    const auto k = key_label(e.key);
    if (!source.contains(k)) throw InvalidArgument("key " + k + " is not an element of the domain");
    given[k] = e.value;
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& l : source.labels()) {
    auto it = given.find(l);
    out.emplace_back(l, it == given.end() ? bottom(l) : value(l, it->second));
  }
  return out;
}

inline const Table* find_table(const SymbolDecl& d, const std::string& component) {
  for (const auto& t : d.tables)
    if (t.component == component) return &t;
  return nullptr;
}

inline Session<FinSet> load_finset(const WorkspaceFile& ws) {
  Session<FinSet> s{std::make_shared<const FinSet>(), std::nullopt, ws, ""};
  if (!ws.sort) return s;
  const auto& t = *s.topos;
  s.sort_name = ws.sort->name;
  const FinSetObject m(ws.sort->sets[0].labels);
  LStructure<FinSet> st(s.topos, ws.signature(), m);
  for (const auto& d : ws.symbols) {
    at(d.pos, [&] {
      if (d.kind == LanguageSignature::Kind::Constant) {
        st.set_constant(d.name, t.element(m, d.tables[0].entries[0].value));
        return;
      }
      const auto src = power(t, m, d.arity).apex();
      if (d.kind == LanguageSignature::Kind::Function) {
        st.set_function(d.name, FinSetMap::from_labels(src, m, table_pairs(d.tables[0].entries)));
      } else {
        auto pairs = relation_pairs(
            src, d.tables[0].entries, [](const std::string&) { return std::string("F"); },
            [](const std::string&, const std::string& v) { return v; });
        st.set_relation(d.name, FinSetMap::from_labels(src, t.omega(), pairs));
      }
    });
  }
  s.structure = std::move(st);
  return s;
}

inline Session<SliceTopos<FinSet>> load_slice(const WorkspaceFile& ws) {
  const FinSetObject x(ws.topos.over);
  Session<SliceTopos<FinSet>> s{std::make_shared<const SliceTopos<FinSet>>(FinSet{}, x), std::nullopt, ws, ""};
  if (!ws.sort) return s;
  const auto& t = *s.topos;
  const FinSet base;
  s.sort_name = ws.sort->name;
  const FinSetObject a(ws.sort->sets[0].labels);
  const auto m = at(ws.sort->pos, [&] { return t.object(FinSetMap::from_labels(a, x, ws.sort->maps[0].entries)); });
  LStructure<SliceTopos<FinSet>> st(s.topos, ws.signature(), m);
  for (const auto& d : ws.symbols) {
    at(d.pos, [&] {
      if (d.kind == LanguageSignature::Kind::Constant) {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& e : d.tables[0].entries) pairs.emplace_back(e.key[0], e.value);
        const auto one = t.terminal();
        st.set_constant(d.name, t.morphism(one, m, FinSetMap::from_labels(one.domain(), a, pairs)));
        return;
      }
      const auto src = power(t, m, d.arity).apex();
      if (d.kind == LanguageSignature::Kind::Function) {
        const auto g = FinSetMap::from_labels(src.domain(), a, table_pairs(d.tables[0].entries));
        st.set_function(d.name, t.morphism(src, m, g));
      } else {
        const auto omega = t.omega();
        auto fiber = [&](const std::string& l) { return src.arrow.apply(l); };
        auto pairs = relation_pairs(
            src.domain(), d.tables[0].entries, [&](const std::string& l) { return pair_label("F", fiber(l)); },
            [&](const std::string& l, const std::string& v) { return pair_label(v, fiber(l)); });
        st.set_relation(d.name, t.morphism(src, omega, FinSetMap::from_labels(src.domain(), omega.domain(), pairs)));
      }
    });
  }
  s.structure = std::move(st);
  return s;
}

/// Resolves a relation value against the labels of one component of Omega;
/// "{a,b}" matches a sieve label with the same arrows in any order.
inline std::string sieve_value(const FinSetObject& omega_j, const std::string& v) {
  if (omega_j.contains(v)) return v;
  auto names = [](const std::string& s) {
    std::set<std::string> out;
    if (s.size() < 2 || s.front() != '{' || s.back() != '}') return out;
    std::string cur;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == ',') {
        out.insert(cur);
        cur.clear();
      } else {
        cur += s[i];
      }
    }
    if (!cur.empty()) out.insert(cur);
    return out;
  };
  if (v.front() == '{') {
    const auto want = names(v);
    for (const auto& l : omega_j.labels())
      if (l.front() == '{' && names(l) == want) return l;
  }
  throw InvalidArgument("'" + v + "' is not a truth value here; expected one of " + omega_j.to_string());
}

inline Session<PresheafTopos> load_presheaf(const WorkspaceFile& ws) {
  auto topos = ws.topos.kind == ToposDecl::Kind::Arrow ? arrow_topos()
                                                       : PresheafTopos(Parser::index_category(ws.topos));
  Session<PresheafTopos> s{std::make_shared<const PresheafTopos>(std::move(topos)), std::nullopt, ws, ""};
  if (!ws.sort) return s;
  const auto& t = *s.topos;
  const auto& cat = t.index();
  s.sort_name = ws.sort->name;
  const auto& sort = *ws.sort;

  std::vector<FinSetObject> sets(cat.object_count(), FinSetObject::range(0));
  for (const auto& c : sort.sets) sets[cat.object_index(c.name)] = FinSetObject(c.labels);
  const auto m = at(sort.pos, [&] {
    std::vector<FinSetMap> gens;
    for (std::size_t a = cat.object_count(); a < cat.arrow_count(); ++a) {
      const auto& spec = cat.arrow(a);
      const Mapping* found = nullptr;
      for (const auto& mp : sort.maps)
        if (mp.name == spec.name) found = &mp;
      if (!found) throw InvalidArgument("missing map for arrow '" + spec.name + "'");
      gens.push_back(FinSetMap::from_labels(sets[spec.cod], sets[spec.dom], found->entries));
    }
    return t.presheaf(sets, gens);
  });

  LStructure<PresheafTopos> st(s.topos, ws.signature(), m);
  for (const auto& d : ws.symbols) {
    at(d.pos, [&] {
      auto table_for = [&](std::size_t j) -> const Table& {
        static const Table empty;
        const auto* tb = find_table(d, cat.object(j));
        if (!tb && d.kind != LanguageSignature::Kind::Relation)
          throw InvalidArgument("'" + d.name + "' needs a table for object '" + cat.object(j) + "'");
        return tb ? *tb : empty;
      };
      std::vector<FinSetMap> comps;
      if (d.kind == LanguageSignature::Kind::Constant) {
        const auto one = t.terminal();
        for (std::size_t j = 0; j < cat.object_count(); ++j)
          comps.push_back(FinSetMap::from_labels(one.at(j), m.at(j), {{one.at(j).label(0), table_for(j).entries[0].value}}));
        st.set_constant(d.name, NatTrans(one, m, comps));
        return;
      }
      const auto src = power(t, m, d.arity).apex();
      if (d.kind == LanguageSignature::Kind::Function) {
        for (std::size_t j = 0; j < cat.object_count(); ++j)
          comps.push_back(FinSetMap::from_labels(src.at(j), m.at(j), table_pairs(table_for(j).entries)));
        st.set_function(d.name, NatTrans(src, m, comps));
      } else {
        const auto omega = t.omega();
        for (std::size_t j = 0; j < cat.object_count(); ++j) {
          const auto& oj = omega.at(j);
          auto pairs = relation_pairs(
              src.at(j), table_for(j).entries, [&](const std::string&) { return oj.label(oj.size() - 1); },
              [&](const std::string&, const std::string& v) { return sieve_value(oj, v); });
          comps.push_back(FinSetMap::from_labels(src.at(j), oj, pairs));
        }
        st.set_relation(d.name, NatTrans(src, omega, comps));
      }
    });
  }
  s.structure = std::move(st);
  return s;
}

}  // namespace detail

/// Builds the topos and structure; semantic errors carry the position of the
/// offending declaration.
inline Workspace load_workspace(const WorkspaceFile& ws) {
  switch (ws.topos.kind) {
    case ToposDecl::Kind::FinSet:
      return detail::load_finset(ws);
    case ToposDecl::Kind::Slice:
      return detail::load_slice(ws);
    case ToposDecl::Kind::Arrow:
    case ToposDecl::Kind::Presheaf:
      return detail::load_presheaf(ws);
  }
  throw InvalidArgument("unknown topos kind");
}

inline Workspace load_workspace(std::string_view text) { return load_workspace(parse_workspace(text)); }

}  // namespace topos
