#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tarski.hpp"
#include "topos/commands.hpp"
#include "topos/workspace.hpp"

using namespace topos;

namespace {

const char* kZ2 = "topos finset; sort M = {0,1}; const e = 0; fun mul/2 = {(0,0):0,(0,1):1,(1,0):1,(1,1):0}";

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::filesystem::path> samples() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(TOPOS_SAMPLES_DIR))
    if (e.path().extension() == ".topos") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Position of the ParseError thrown by parsing `text`.
std::pair<std::size_t, std::size_t> error_at(const std::string& text) {
  try {
    parse_workspace(text);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

std::pair<std::size_t, std::size_t> load_error_at(const std::string& text) {
  try {
    load_workspace(text);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

}  // namespace

TEST_CASE("the Z2 workspace round-trips through the serializer", "[workspace]") {
  const auto ws = parse_workspace(kZ2);
  CHECK(ws.topos.kind == ToposDecl::Kind::FinSet);
  REQUIRE(ws.sort);
  CHECK(ws.sort->sets[0].labels == std::vector<std::string>{"0", "1"});
  REQUIRE(ws.symbols.size() == 2);
  const auto text = serialize_workspace(ws);
  const auto again = parse_workspace(text);
  CHECK(again == ws);
  CHECK(serialize_workspace(again) == text);
}

TEST_CASE("every sample round-trips and loads", "[workspace]") {
  const auto files = samples();
  REQUIRE(files.size() >= 2);
  for (const auto& f : files) {
    INFO(f.string());
    const auto ws = parse_workspace(read(f));
    const auto text = serialize_workspace(ws);
    CHECK(parse_workspace(text) == ws);
    CHECK_NOTHROW(load_workspace(ws));
    CHECK_NOTHROW(load_workspace(text));
  }
}

TEST_CASE("printed formulas parse back to the same tree", "[workspace][syntax]") {
  const auto sig = oracle::fixture_signature();
  for (const auto& f : oracle::formula_corpus(400, 4, 7)) {
    INFO(to_string(f));
    CHECK(parse_formula(to_string(f), sig) == f);
  }
}

TEST_CASE("connective precedence and associativity", "[workspace][syntax]") {
  LanguageSignature sig;
  sig.add_relation("P", 1).add_relation("Q", 1).add_constant("c");
  const auto p = Formula::rel("P", {Term::constant("c")});
  const auto q = Formula::rel("Q", {Term::constant("c")});
  CHECK(parse_formula("P(c) & Q(c) | P(c)", sig) == Formula::disj(Formula::conj(p, q), p));
  CHECK(parse_formula("P(c) | Q(c) & P(c)", sig) == Formula::disj(p, Formula::conj(q, p)));
  CHECK(parse_formula("P(c) -> Q(c) -> P(c)", sig) == Formula::implies(p, Formula::implies(q, p)));
  CHECK(parse_formula("P(c) <-> Q(c) -> P(c)", sig) == Formula::iff(p, Formula::implies(q, p)));
  CHECK(parse_formula("~P(c) & Q(c)", sig) == Formula::conj(Formula::negation(p), q));
  CHECK(parse_formula("~~P(c)", sig) == Formula::negation(Formula::negation(p)));
  const auto px = Formula::rel("P", {Term::var(1)});
  CHECK(parse_formula("forall x1. P(x1) & Q(c)", sig) == Formula::forall(1, Formula::conj(px, q)));
  CHECK(parse_formula("Q(c) & forall x1. P(x1)", sig) == Formula::conj(q, Formula::forall(1, px)));
  CHECK(parse_formula("(x1, c) = (c, x1)", sig) ==
        Formula::eq(Term::product({Term::var(1), Term::constant("c")}), Term::product({Term::constant("c"), Term::var(1)})));
  CHECK(parse_formula("((c) = x2)", sig) == Formula::eq(Term::constant("c"), Term::var(2)));
  CHECK(parse_formula("# note\nP(c)", sig) == p);
}

TEST_CASE("diagnostics carry line and column", "[workspace][errors]") {
  CHECK(error_at("") == std::make_pair<std::size_t, std::size_t>(1, 1));
  // 2 is not in M
  CHECK(error_at("topos finset; sort M = {0,1}; fun mul/2 = {(0,0):2}") ==
        std::make_pair<std::size_t, std::size_t>(1, 50));
  CHECK(error_at("topos finset;\nsort M = {0,1} $") == std::make_pair<std::size_t, std::size_t>(2, 16));
  // unknown symbol
  CHECK(error_at(std::string(kZ2) + ";\nformula f = forall x1. inv(x1) = e") ==
        std::make_pair<std::size_t, std::size_t>(2, 24));
  // arity mismatch
  CHECK(error_at(std::string(kZ2) + ";\nformula f = mul(e) = e") == std::make_pair<std::size_t, std::size_t>(2, 13));
  CHECK(error_at(std::string(kZ2) + ";\nformula f = mul(e,e,e) = e") == std::make_pair<std::size_t, std::size_t>(2, 13));
  CHECK(error_at("topos finset; sort M = {0,1}; fun mul/2 = {0:0}") == std::make_pair<std::size_t, std::size_t>(1, 44));
  CHECK(error_at("topos group; sort M = {0}").first == 1);
  CHECK(error_at("topos finset; fun f/1 = {0:0}") == std::make_pair<std::size_t, std::size_t>(1, 15));
  CHECK(error_at("topos finset; sort M = {0}; const e = 0; const e = 0") ==
        std::make_pair<std::size_t, std::size_t>(1, 48));
  CHECK(error_at("topos finset; sort M = {0}; rel x1/1 = {0:T}") == std::make_pair<std::size_t, std::size_t>(1, 33));
  CHECK(error_at("topos finset; sort M = {0,0}").first == 1);
  CHECK(error_at("topos finset; sort M = {0}; formula f = forall x0. x0 = x0").first == 1);
  CHECK(error_at("topos presheaf(objects {p}, arrows {u: p -> r})").first == 1);
  CHECK(error_at("topos finset sort M = {0}") == std::make_pair<std::size_t, std::size_t>(1, 14));

  try {
    parse_workspace("");
    FAIL("empty input parsed");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).rfind("1:1: ", 0) == 0);
  }
}

TEST_CASE("semantic errors point at their declaration", "[workspace][errors]") {
  // missing table entry
  CHECK(load_error_at("topos finset; sort M = {0,1};\nfun f/1 = {0:1}") == std::make_pair<std::size_t, std::size_t>(2, 1));
  // mixed fibres in a slice
  CHECK(load_error_at("topos slice(finset,{x,y}); sort M = {a,b} by {a:x,b:y};\nfun g/2 = {(a,b):a}") ==
        std::make_pair<std::size_t, std::size_t>(2, 1));
  // relation that is not natural: C at dom forces T at cod
  CHECK(load_error_at("topos arrow; sort M = {a} -> {x} by {a:x};\nrel R/1 = {dom:{a:C},cod:{x:F}}") ==
        std::make_pair<std::size_t, std::size_t>(2, 1));
  // a sieve that is not closed
  CHECK(load_error_at("topos presheaf(objects {p,q}, arrows {u: p -> q}); sort M = {p:{a},q:{x}} by {u:{x:a}};\n"
                      "rel R/1 = {q:{x:{id_q}}}") == std::make_pair<std::size_t, std::size_t>(2, 1));
  // slice sort that does not land in X
  CHECK(load_error_at("topos slice(finset,{x}); sort M = {a} by {}").first == 1);
}

TEST_CASE("loaded structures match hand-built ones", "[workspace]") {
  const auto w = load_workspace(std::string(kZ2) + "; rel R/1 = {1:T}");
  const auto& s = std::get<Session<FinSet>>(w);
  const FinSet set;
  const auto m = FinSetObject::range(2);
  REQUIRE(s.structure);
  CHECK(s.structure->support() == m);
  CHECK(s.structure->constant("e") == set.element(m, "0"));
  const auto sq = set.product(m, m).apex;
  CHECK(s.structure->function("mul") == FinSetMap(sq, m, {0, 1, 1, 0}));
  // unlisted keys default to F
  CHECK(s.structure->relation("R") == FinSetMap(m, set.omega(), {1, 0}));
  CHECK(s.structure->complete());
}

TEST_CASE("arrow and presheaf relations take sieve values", "[workspace]") {
  const auto w = load_workspace("topos arrow; sort M = {a,b} -> {x} by {a:x,b:x}; rel R/1 = {dom:{a:C,b:T},cod:{x:T}}");
  const auto& s = std::get<Session<PresheafTopos>>(w);
  const auto& r = s.structure->relation("R");
  const auto& omega = s.topos->omega();
  CHECK(omega.at(0).label(r.component(0)(0)) == "C");
  CHECK(omega.at(0).label(r.component(0)(1)) == "T");

  const auto p = load_workspace(
      "topos presheaf(objects {p,q}, arrows {u: p -> q}); sort M = {p:{a},q:{x,y}} by {u:{x:a,y:a}};"
      "rel R/1 = {p:{a:{id_p}},q:{x:{u},y:{u,id_q}}}");
  const auto& ps = std::get<Session<PresheafTopos>>(p);
  const auto& rq = ps.structure->relation("R").component(1);
  CHECK(ps.topos->omega().at(1).label(rq(1)) == "{id_q,u}");
}

TEST_CASE("a workspace without a sort still selects a topos", "[workspace]") {
  const auto w = load_workspace("topos slice(finset, {x,y})");
  const auto& s = std::get<Session<SliceTopos<FinSet>>>(w);
  CHECK_FALSE(s.structure);
  CHECK(s.topos->over().size() == 2);
  CHECK_THROWS_AS(cmd_eval(w, "forall x1. x1 = x1", false, OutputFormat::Ascii), InvalidArgument);
}

TEST_CASE("exit codes by error kind", "[workspace][errors]") {
  CHECK(exit_code_for(ParseError(1, 1, "x")) == 2);
  CHECK(exit_code_for(ArityError("x")) == 2);
  CHECK(exit_code_for(InvalidArgument("x")) == 2);
  CHECK(exit_code_for(ClassifierViolation("x")) == 3);
  CHECK(exit_code_for(InconsistencyError("x")) == 3);
  CHECK(exit_code_for(std::runtime_error("x")) == 3);
}

TEST_CASE("library commands on the Z2 workspace", "[workspace][commands]") {
  const auto w = load_workspace(kZ2);
  const auto r = cmd_eval(w, "forall x1. exists x2. mul(x1,x2) = e", false, OutputFormat::Ascii);
  CHECK(r.output == "T\n");
  CHECK(r.exit_code == 0);
  const auto f = cmd_eval(w, "~(e = e)", false, OutputFormat::Ascii);
  CHECK(f.output == "F\n");
  CHECK(f.exit_code == 1);
  CHECK_THROWS_AS(cmd_eval(w, "undefined_name", false, OutputFormat::Ascii), ParseError);
  CHECK_THROWS_AS(cmd_eval(w, "mul(x1,e) = x1", false, OutputFormat::Ascii), InvalidArgument);

  const auto traced = cmd_eval(w, "forall x1. mul(x1,e) = x1", true, OutputFormat::Json);
  const auto j = nlohmann::json::parse(traced.output);
  CHECK(j["schema"] == 1);
  CHECK(j["value"] == "T");
  // x1, e, mul(x1,e), x1, the equation, the quantifier, the value
  CHECK(j["trace"].size() == 7);
  CHECK(j["trace"].back()["expression"] == "value");
}
