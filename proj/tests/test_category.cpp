#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "fixtures.hpp"
#include "topos/category.hpp"
#include "topos/finset.hpp"

using namespace topos;

namespace {

const FinSet set;

// Pointwise composition, independent of FinSet::compose.
std::vector<std::size_t> compose_tables(const FinSetMap& f, const FinSetMap& g) {
  std::vector<std::size_t> out;
  for (auto x : g.table()) out.push_back(f.table()[x]);
  return out;
}

bool injective(const FinSetMap& f) {
  for (std::size_t i = 0; i < f.table().size(); ++i)
    for (std::size_t j = i + 1; j < f.table().size(); ++j)
      if (f.table()[i] == f.table()[j]) return false;
  return true;
}

bool surjective(const FinSetMap& f) {
  for (std::size_t y = 0; y < f.target().size(); ++y) {
    bool hit = false;
    for (auto x : f.table()) hit = hit || x == y;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("composition in FinSet follows the pointwise oracle", "[compose]") {
  const auto one = FinSetObject::range(1);
  const auto two = FinSetObject::range(2);
  const FinSetMap f(one, two, {1});
  const FinSetMap g(two, one, {0, 0});
  const auto fg = set.compose(f, g);
  CHECK(fg == FinSetMap(two, two, {1, 1}));
  CHECK(fg.table() == compose_tables(f, g));
}

TEST_CASE("identity laws and associativity on fixtures", "[compose]") {
  const auto objects = fixtures::sets_up_to(3);
  for (const auto& a : objects)
    for (const auto& b : objects)
      for (const auto& f : set.hom(a, b)) {
        REQUIRE(set.compose(f, set.identity(a)) == f);
        REQUIRE(set.compose(set.identity(b), f) == f);
      }
  const auto two = FinSetObject::range(2);
  const auto three = FinSetObject::range(3);
  for (const auto& h : set.hom(two, three))
    for (const auto& g : set.hom(three, two))
      for (const auto& f : set.hom(two, two))
        REQUIRE(set.compose(set.compose(f, g), h) == set.compose(f, set.compose(g, h)));
}

TEST_CASE("non-composable pairs raise a composition error naming both ends", "[compose]") {
  const auto two = FinSetObject::range(2);
  const auto three = FinSetObject::range(3);
  const auto f = set.identity(two);
  const auto g = set.identity(three);
  CHECK_THROWS_AS(set.compose(f, g), CompositionError);
  try {
    set.compose(f, g);
  } catch (const CompositionError& e) {
    CHECK(std::string(e.what()).find("{0,1}") != std::string::npos);
    CHECK(std::string(e.what()).find("{0,1,2}") != std::string::npos);
  }
}

TEST_CASE("monic and epi by definition", "[monic]") {
  const auto probes = fixtures::sets_up_to(3);
  const auto two = FinSetObject::range(2);
  const auto three = FinSetObject::range(3);

  SECTION("identity is monic and epi") {
    CHECK(is_monic_by_definition(set, set.identity(two), std::span(probes)));
    CHECK(is_epi_by_definition(set, set.identity(two), std::span(probes)));
  }
  SECTION("a constant map on {0,1} is not monic; witnessed from the singleton") {
    const FinSetMap constant(two, two, {0, 0});
    CHECK_FALSE(is_monic_by_definition(set, constant, std::span(probes)));
    const std::vector<FinSetObject> singleton{FinSetObject::range(1)};
    CHECK_FALSE(is_monic_by_definition(set, constant, std::span(singleton)));
  }
  SECTION("injection {0,1} -> {0,1,2}") {
    CHECK(is_monic_by_definition(set, FinSetMap(two, three, {0, 2}), std::span(probes)));
  }
  SECTION("surjection onto a point is epi, the inclusion {0} -> {0,1} is not") {
    const auto one = FinSetObject::range(1);
    CHECK(is_epi_by_definition(set, FinSetMap(two, one, {0, 0}), std::span(probes)));
    const std::vector<FinSetObject> witness{two};
    CHECK_FALSE(is_epi_by_definition(set, FinSetMap(one, two, {0}), std::span(witness)));
  }
  SECTION("empty probe set is a precondition error") {
    const std::vector<FinSetObject> none;
    CHECK_THROWS_AS(is_monic_by_definition(set, set.identity(two), std::span(none)), PreconditionError);
  }
}

TEST_CASE("fast paths agree with the definition for sets up to size 4", "[monic][property]") {
  const auto objects = fixtures::sets_up_to(4);
  const auto probes = fixtures::sets_up_to(2);
  std::size_t checked = 0;
  for (const auto& a : objects)
    for (const auto& b : objects)
      for (const auto& f : set.hom(a, b)) {
        REQUIRE(set.is_monic(f) == injective(f));
        REQUIRE(set.is_epi(f) == surjective(f));
        REQUIRE(is_monic_by_definition(set, f, std::span(probes)) == injective(f));
        REQUIRE(is_epi_by_definition(set, f, std::span(probes)) == surjective(f));
        ++checked;
      }
  CHECK(checked == 499);  // sum of b^a over a, b <= 4
}

TEST_CASE("diagonal of signature", "[diagonal]") {
  const auto a = FinSetObject::range(2);

  SECTION("(1,1) is the usual diagonal x |-> (x,x)") {
    const auto d = diagonal_of_signature(set, a, DiagonalSignature({1, 1}));
    CHECK(d.source() == a);
    CHECK(d.apply("0") == "(0,0)");
    CHECK(d.apply("1") == "(1,1)");
  }
  SECTION("(1) is the identity") {
    CHECK(diagonal_of_signature(set, a, DiagonalSignature({1})) == set.identity(a));
  }
  SECTION("(2,1) swaps the two coordinates") {
    const auto d = diagonal_of_signature(set, a, DiagonalSignature({2, 1}));
    CHECK(d.apply("(0,1)") == "(1,0)");
    CHECK(d.apply("(1,0)") == "(0,1)");
    CHECK(d.apply("(1,1)") == "(1,1)");
  }
  SECTION("signatures must be nonempty and positive") {
    CHECK_THROWS_AS(DiagonalSignature({}), InvalidArgument);
    CHECK_THROWS_AS(DiagonalSignature({0, 1}), InvalidArgument);
  }
}

TEST_CASE("projections after the diagonal pick the signature entries", "[diagonal][property]") {
  std::vector<std::vector<std::size_t>> signatures;
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<std::size_t> sig(n, 1);
    while (true) {
      signatures.push_back(sig);
      std::size_t k = n;
      while (k > 0 && sig[k - 1] == 3) sig[--k] = 1;
      if (k == 0) break;
      ++sig[k - 1];
    }
  }
  for (const auto& a : fixtures::sets_up_to(3)) {
    for (const auto& entries : signatures) {
      const DiagonalSignature sigma(entries);
      const auto from = power(set, a, sigma.arity());
      const auto to = power(set, a, sigma.size());
      const auto d = diagonal_of_signature(set, a, sigma);
      for (std::size_t i = 0; i < sigma.size(); ++i)
        REQUIRE(set.compose(to.projection(i), d) == from.projection(entries[i] - 1));
      // uniqueness: the only map whose projections agree is d
      if (from.apex().size() <= 3 && to.apex().size() <= 9) {
        std::size_t matches = 0;
        for (const auto& u : set.hom(from.apex(), to.apex())) {
          bool ok = true;
          for (std::size_t i = 0; i < sigma.size() && ok; ++i)
            ok = set.compose(to.projection(i), u) == from.projection(entries[i] - 1);
          matches += ok;
        }
        REQUIRE(matches == 1);
      }
    }
  }
}

TEST_CASE("n-ary products", "[product]") {
  const auto a = FinSetObject::range(2);
  CHECK(power(set, a, 0).apex() == set.terminal());
  CHECK(power(set, a, 1).apex() == a);
  const auto cube = power(set, a, 3);
  CHECK(cube.apex().size() == 8);
  CHECK(cube.apex().label(5) == "((1,0),1)");
  const auto x = set.element(a, "1");
  const auto y = set.element(a, "0");
  const auto t = cube.tuple(set.terminal(), {x, y, x});
  CHECK(t.apply("*") == "((1,0),1)");
  for (std::size_t i = 0; i < 3; ++i) CHECK(set.compose(cube.projection(i), t) == (i == 1 ? y : x));
}
