#include <catch2/catch_amalgamated.hpp>

#include <memory>

#include "tarski.hpp"
#include "topos/finset.hpp"
#include "topos/language.hpp"
#include "topos/logic.hpp"
#include "topos/presheaf.hpp"
#include "topos/slice.hpp"

using namespace topos;

namespace {

const auto set = std::make_shared<const FinSet>();

using Table = std::vector<std::vector<std::string>>;

Term x(std::size_t i) { return Term::var(i); }

// Z/2 under addition, written multiplicatively, with identity e = 0.
LStructure<FinSet> z2_group() {
  LanguageSignature sig;
  sig.add_function("mul", 2).add_constant("e");
  oracle::Structure s;
  s.size = 2;
  s.functions["mul"] = {2, {0, 1, 1, 0}};
  s.constants["e"] = 0;
  return oracle::to_finset(set, sig, s);
}

// The arrow-topos object M = id : {a, b} -> {a, b} with a unary relation R
// whose value at a is C: R holds of a only at cod.
LStructure<PresheafTopos> arrow_structure(const std::shared_ptr<const PresheafTopos>& t) {
  LanguageSignature sig;
  sig.add_relation("R", 1);
  const FinSetObject ab{"a", "b"};
  const auto m = arrow_object(*t, set->identity(ab));
  const auto& omega = t->omega();
  // component at dom: a |-> C, b |-> F ; at cod: a |-> T, b |-> F
  const NatTrans r(m, omega, {FinSetMap(ab, omega.at(0), {1, 2}), FinSetMap(ab, omega.at(1), {0, 1})});
  LStructure<PresheafTopos> s(t, sig, m);
  s.set_relation("R", r);
  return s;
}

std::vector<FinSetMap> points(const FinSetObject& m) {
  std::vector<FinSetMap> out;
  for (std::size_t i = 0; i < m.size(); ++i) out.push_back(set->constant(set->terminal(), m, i));
  return out;
}

}  // namespace

TEST_CASE("syntax: free variables, depth and printing", "[logic][syntax]") {
  const auto f = Formula::forall(1, Formula::exists(2, Formula::eq(Term::apply("mul", {x(1), x(2)}), Term::constant("e"))));
  CHECK(free_variables(f).empty());
  CHECK(to_string(f) == "forall x1. exists x2. mul(x1,x2) = e");
  CHECK(depth(f) == 3);
  const auto g = Formula::conj(Formula::rel("R", {x(3), x(1)}), Formula::negation(Formula::eq(x(2), x(2))));
  CHECK(free_variables(g) == std::vector<std::size_t>{1, 2, 3});
  CHECK(to_string(g) == "(R(x3,x1) & ~(x2 = x2))");
  CHECK_THROWS_AS(Term::var(0), InvalidArgument);
}

TEST_CASE("signatures reject clashes and reserved names", "[logic][signature]") {
  LanguageSignature sig;
  sig.add_function("f", 1);
  CHECK_THROWS_AS(sig.add_relation("f", 1), SignatureError);
  CHECK_THROWS_AS(sig.add_constant("x1"), SignatureError);
  CHECK_THROWS_AS(sig.add_function("g", 0), SignatureError);
  CHECK_NOTHROW(sig.add_constant("x"));
}

TEST_CASE("connectives in FinSet are classical", "[logic][connectives]") {
  const auto& t = *set;
  CHECK(connective_false(t) == t.falsity());
  const auto neg = connective_not(t);
  CHECK(t.compose(neg, t.truth()) == t.falsity());
  CHECK(t.compose(neg, t.falsity()) == t.truth());
  CHECK(t.compose(neg, t.compose(neg, t.truth())) == t.truth());
  CHECK(truth_table(t, Connective::And).cells == Table{{"T", "F"}, {"F", "F"}});
  CHECK(truth_table(t, Connective::Or).cells == Table{{"T", "T"}, {"T", "F"}});
  CHECK(truth_table(t, Connective::Implies).cells == Table{{"T", "F"}, {"T", "T"}});
  CHECK(truth_table(t, Connective::Iff).cells == Table{{"T", "F"}, {"F", "T"}});
  CHECK(truth_table(t, Connective::Not).cells == Table{{"F", "T"}});
}

TEST_CASE("the arrow topos is three-valued", "[logic][arrow]") {
  const auto t = arrow_topos();
  const auto values = global_truth_values(t);
  REQUIRE(values.size() == 3);
  CHECK(values[0].name == "T");
  CHECK(values[1].name == "C");
  CHECK(values[2].name == "F");
  const auto ops = connectives(t);
  CHECK(truth_table(t, Connective::And, ops).cells == Table{{"T", "C", "F"}, {"C", "C", "F"}, {"F", "F", "F"}});
  CHECK(truth_table(t, Connective::Or, ops).cells == Table{{"T", "T", "T"}, {"T", "C", "C"}, {"T", "C", "F"}});
  CHECK(truth_table(t, Connective::Implies, ops).cells == Table{{"T", "C", "F"}, {"T", "T", "F"}, {"T", "T", "T"}});
  CHECK(truth_table(t, Connective::Not, ops).cells == Table{{"F", "F", "T"}});
  CHECK_FALSE(is_boolean(t));
}

TEST_CASE("truth-value counts and Boolean topoi", "[logic][boolean]") {
  CHECK(global_truth_values(*set).size() == 2);
  CHECK(is_boolean(*set));
  const auto over_one = slice_topos(*set, set->terminal());
  CHECK(global_truth_values(over_one).size() == 2);
  CHECK(is_boolean(over_one));
  // Over a 2-element X, Omega x X has 4 global sections but the topos is Boolean.
  const auto over_two = slice_topos(*set, FinSetObject{"p", "q"});
  CHECK(global_truth_values(over_two).size() == 4);
  CHECK(is_boolean(over_two));
  const PresheafTopos z2_sets(FiniteCategory({"o"}, {{"g", "o", "o"}}, {{"g", "g", "id_o"}}));
  CHECK(global_truth_values(z2_sets).size() == 2);
  CHECK(is_boolean(z2_sets));
}

TEST_CASE("quantifiers in FinSet", "[logic][quantifiers]") {
  for (std::size_t n = 0; n <= 3; ++n) {
    const auto m = FinSetObject::range(n);
    const auto q = quantifiers(*set, m);
    const auto& exp = q.power.exponential;
    for (const auto& u : set->hom(set->terminal(), exp.object)) {
      // B = { y : ev(u, y) = T }, computed from the evaluation map
      std::size_t members = 0;
      const auto one_m = set->product(set->terminal(), m);
      const auto uncurried = set->compose(exp.ev, exp.product.pair(set->compose(u, one_m.pi1), one_m.pi2));
      for (auto v : uncurried.table()) members += v == 0;
      const bool all = set->compose(q.forall, u) == set->truth();
      const bool some = set->compose(q.exists, u) == set->truth();
      REQUIRE(all == (members == n));
      REQUIRE(some == (members > 0));
    }
  }
  const auto empty = quantifiers(*set, set->initial());
  CHECK(empty.power.px.size() == 1);
  const auto only = set->hom(set->terminal(), empty.power.px);
  REQUIRE(only.size() == 1);
  CHECK(set->compose(empty.forall, only.front()) == set->truth());
  CHECK(set->compose(empty.exists, only.front()) == set->falsity());
}

TEST_CASE("term interpretation", "[logic][terms]") {
  Interpreter<FinSet> z(z2_group());
  CHECK(z.term(x(1)) == set->identity(FinSetObject::range(2)));
  CHECK(z.term(Term::constant("e")).source() == set->terminal());
  const auto square = z.term(Term::apply("mul", {x(1), x(1)}));
  CHECK(square.table() == std::vector<std::size_t>{0, 0});
  const auto m = z.term(Term::apply("mul", {x(2), x(1)}));
  CHECK(m.source().size() == 4);
  // (x1, x2) |-> x2 + x1
  for (std::size_t i = 0; i < 4; ++i) CHECK(m(i) == ((i / 2) + (i % 2)) % 2);
  const auto product = z.term(Term::product({x(2), Term::constant("e"), x(1)}));
  CHECK(product.target().size() == 8);
  CHECK(product.apply("(0,1)") == "((1,0),0)");
  CHECK_THROWS_AS(z.term(Term::apply("mul", {x(1)})), ArityError);
  CHECK_THROWS_AS(z.term(Term::apply("inv", {x(1)})), SignatureError);
}

TEST_CASE("formula interpretation and satisfaction in Z/2", "[logic][formulas]") {
  Interpreter<FinSet> z(z2_group());
  const auto m = FinSetObject::range(2);
  const auto reflexive = z.formula(Formula::eq(x(1), x(1)));
  CHECK(reflexive == set->compose(set->truth(), set->to_terminal(m)));
  for (const auto& a : points(m)) CHECK(z.satisfies(Formula::eq(x(1), x(1)), std::vector<FinSetMap>{a}));

  const auto inverses = Formula::forall(1, Formula::exists(2, Formula::eq(Term::apply("mul", {x(1), x(2)}), Term::constant("e"))));
  CHECK(z.formula(inverses) == set->truth());
  CHECK(z.satisfies(inverses));
  CHECK(z.satisfies(Formula::eq(Term::constant("e"), Term::apply("mul", {Term::constant("e"), Term::constant("e")}))));
  CHECK_FALSE(z.satisfies(Formula::forall(1, Formula::eq(x(1), Term::constant("e")))));
  CHECK_THROWS_AS(z.satisfies(Formula::eq(x(1), x(1))), ArityError);

  SECTION("quantifying a variable that is not free") {
    CHECK(z.formula(Formula::forall(2, Formula::eq(x(1), x(1)))) == reflexive);
    CHECK(z.formula(Formula::exists(5, Formula::eq(Term::constant("e"), Term::constant("e")))) == set->truth());
  }
  SECTION("the curried variable may sit in any position") {
    // exists x1. mul(x1, x2) = x3 holds for every (x2, x3) in a group
    const auto f = Formula::exists(1, Formula::eq(Term::apply("mul", {x(1), x(2)}), x(3)));
    const auto chi = z.formula(f);
    CHECK(chi == set->compose(set->truth(), set->to_terminal(chi.source())));
    // forall x2. mul(x1, x2) = x2 holds only for x1 = e
    const auto g = Formula::forall(2, Formula::eq(Term::apply("mul", {x(1), x(2)}), x(2)));
    CHECK(z.formula(g).table() == std::vector<std::size_t>{0, 1});
  }
  SECTION("closed terms substitute as their constants") {
    LanguageSignature sig;
    sig.add_relation("P", 1).add_constant("c");
    LStructure<FinSet> s(set, sig, m);
    s.set_relation("P", FinSetMap(m, set->omega(), {1, 0}));
    s.set_constant("c", set->constant(set->terminal(), m, 1));
    Interpreter<FinSet> in(s);
    CHECK(in.formula(Formula::rel("P", {Term::constant("c")})) == set->compose(s.relation("P"), s.constant("c")));
  }
}

TEST_CASE("categorical satisfaction agrees with the Tarski oracle", "[logic][oracle]") {
  const auto sig = oracle::fixture_signature();
  const auto corpus = oracle::formula_corpus(120, 4, 7);
  std::mt19937 rng(11);
  std::vector<oracle::Structure> structures = oracle::all_structures(1);
  for (int i = 0; i < 6; ++i) structures.push_back(oracle::random_structure(2, rng));
  for (int i = 0; i < 2; ++i) structures.push_back(oracle::random_structure(3, rng));
  for (const auto& s : structures) {
    auto context = std::make_shared<LogicContext<FinSet>>(set, FinSetObject::range(s.size));
    Interpreter<FinSet> in(oracle::to_finset(set, sig, s), context);
    const auto elems = points(FinSetObject::range(s.size));
    for (const auto& f : corpus) {
      const auto vars = free_variables(f);
      std::vector<std::size_t> pick(vars.size(), 0);
      while (true) {
        oracle::Env env;
        std::vector<FinSetMap> args;
        for (std::size_t k = 0; k < vars.size(); ++k) {
          env[vars[k]] = pick[k];
          args.push_back(elems[pick[k]]);
        }
        INFO(to_string(f));
        REQUIRE(in.satisfies(f, args) == oracle::holds(s, f, env));
        std::size_t k = pick.size();
        while (k > 0 && ++pick[k - 1] == s.size) pick[--k] = 0;
        if (k == 0) break;
      }
    }
  }
}

TEST_CASE("excluded middle", "[logic][lem]") {
  SECTION("holds in FinSet") {
    Interpreter<FinSet> z(z2_group());
    const auto phi = Formula::eq(Term::apply("mul", {x(1), x(2)}), Term::constant("e"));
    const auto lem = z.formula(Formula::disj(phi, Formula::negation(phi)));
    CHECK(lem == set->compose(set->truth(), set->to_terminal(lem.source())));
  }
  SECTION("fails in the arrow topos with value C") {
    const auto t = std::make_shared<const PresheafTopos>(arrow_topos());
    Interpreter<PresheafTopos> in(arrow_structure(t));
    const auto r = Formula::rel("R", {x(1)});
    const auto lem = in.formula(Formula::disj(r, Formula::negation(r)));
    const auto values = global_truth_values(*t);
    const auto elements = t->hom(t->terminal(), in.structure().support());
    REQUIRE(elements.size() == 2);
    std::vector<std::string> seen;
    for (const auto& a : elements) seen.push_back(truth_value_name(*t, values, t->compose(lem, a)));
    CHECK(seen == std::vector<std::string>{"C", "T"});
  }
}

TEST_CASE("connectives act pointwise on truth values", "[logic][pointwise]") {
  const auto t = std::make_shared<const PresheafTopos>(arrow_topos());
  Interpreter<PresheafTopos> in(arrow_structure(t));
  const auto ops = connectives(*t);
  const auto r1 = Formula::rel("R", {x(1)});
  const auto r2 = Formula::negation(Formula::rel("R", {x(2)}));
  const auto elements = t->hom(t->terminal(), in.structure().support());
  for (const auto& a : elements)
    for (const auto& b : elements) {
      const std::vector<NatTrans> args{a, b};
      const auto va = in.value(r1, std::vector<NatTrans>{a});
      const auto vb = in.value(Formula::negation(Formula::rel("R", {x(1)})), std::vector<NatTrans>{b});
      REQUIRE(in.value(Formula::conj(r1, r2), args) == t->compose(ops.conjunction, ops.omega2.pair(va, vb)));
      REQUIRE(in.value(Formula::disj(r1, r2), args) == t->compose(ops.disjunction, ops.omega2.pair(va, vb)));
      REQUIRE(in.value(Formula::implies(r1, r2), args) == t->compose(ops.implication, ops.omega2.pair(va, vb)));
      REQUIRE(in.value(Formula::iff(r1, r2), args) == t->compose(ops.equivalence, ops.omega2.pair(va, vb)));
    }
}
