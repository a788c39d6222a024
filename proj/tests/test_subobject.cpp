#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fixtures.hpp"
#include "topos/finset.hpp"
#include "topos/subobject.hpp"

using namespace topos;

namespace {

const FinSet set;
const auto one = FinSetObject::range(1);
const auto two = FinSetObject::range(2);
const auto three = FinSetObject::range(3);

// Indicator of the image, computed without the classifier.
std::vector<std::size_t> indicator(const FinSetMap& m) {
  std::vector<std::size_t> out(m.target().size(), 1);  // F
  for (auto y : m.table()) out[y] = 0;                 // T
  return out;
}

std::set<std::string> image_labels(const FinSetMap& m) {
  std::set<std::string> out;
  for (auto y : m.table()) out.insert(m.target().label(y));
  return out;
}

std::set<std::string> preimage_labels(const FinSetMap& f, const std::set<std::string>& s) {
  std::set<std::string> out;
  for (std::size_t x = 0; x < f.source().size(); ++x)
    if (s.count(f.target().label(f(x)))) out.insert(f.source().label(x));
  return out;
}

}  // namespace

TEST_CASE("characters of monics match the indicator oracle", "[subobject][classifier]") {
  for (const auto& a : fixtures::sets_up_to(3))
    for (const auto& b : fixtures::sets_up_to(3))
      for (const auto& m : set.hom(a, b)) {
        if (!set.is_monic(m)) {
          REQUIRE_THROWS_AS(character(set, m), PreconditionError);
          continue;
        }
        const auto chi = character(set, m);
        REQUIRE(chi.table() == indicator(m));
        REQUIRE(characters_by_search(set, set.omega(), set.truth(), m).size() == 1);
      }
  CHECK(character(set, set.identity(set.terminal())) == set.truth());
  CHECK(character(set, set.from_initial(set.terminal())) == set.falsity());
}

TEST_CASE("the classifier candidate must have exactly two values", "[subobject][classifier]") {
  const auto probes = fixtures::sets_up_to(3);
  CHECK(verify_classifier(set, set.omega(), set.truth(), std::span(probes)));

  const auto wide = FinSetObject{"T", "F", "U"};
  const auto report = classifier_report(set, wide, set.element(wide, "T"), std::span(probes));
  CHECK_FALSE(report.passed);
  CHECK(report.witness.find("characters") != std::string::npos);

  const auto narrow = FinSetObject{"T"};
  CHECK_FALSE(verify_classifier(set, narrow, set.element(narrow, "T"), std::span(probes)));

  // swapping the roles of T and F still gives a classifier
  CHECK(verify_classifier(set, set.omega(), set.falsity(), std::span(probes)));
}

TEST_CASE("Sub(B) has 2^|B| classes and canonical representatives", "[subobject]") {
  std::size_t expected = 1;
  for (const auto& b : fixtures::sets_up_to(4)) {
    const auto subs = sub(set, b);
    REQUIRE(subs.size() == expected);
    expected *= 2;
    for (const auto& s : subs) REQUIRE(canonical_subobject(set, s.monic) == s.monic);
  }
  // two injections with the same image are equivalent and share a representative
  const FinSetMap m1(two, three, {0, 2});
  const FinSetMap m2(two, three, {2, 0});
  CHECK(equivalent_monics(set, m1, m2));
  CHECK(canonical_subobject(set, m1) == canonical_subobject(set, m2));
  CHECK_FALSE(equivalent_monics(set, m1, FinSetMap(two, three, {0, 1})));
}

TEST_CASE("pulling back a subobject is taking the preimage", "[subobject][pullback]") {
  for (const auto& f : set.hom(three, two))
    for (const auto& s : sub(set, two)) {
      const auto pulled = sub_pullback(set, f, s);
      REQUIRE(image_labels(pulled.monic) == preimage_labels(f, image_labels(s.monic)));
      REQUIRE(classifies(set, set.compose(character(set, s.monic), f), set.truth(), pulled.monic));
    }
  SECTION("functoriality: (g f)^* = f^* g^*, id^* = id") {
    for (const auto& f : set.hom(two, three))
      for (const auto& g : set.hom(three, two))
        for (const auto& s : sub(set, two)) {
          REQUIRE(sub_pullback(set, set.compose(g, f), s) == sub_pullback(set, f, sub_pullback(set, g, s)));
          REQUIRE(sub_pullback(set, set.identity(two), s) == s);
        }
  }
}

TEST_CASE("pullback squares are recognized", "[subobject][pullback]") {
  const FinSetMap m(one, two, {0});
  const auto chi = character(set, m);
  CHECK(is_pullback_square(set, set.to_terminal(one), m, set.truth(), chi));
  const FinSetMap other(one, two, {1});
  CHECK_FALSE(is_pullback_square(set, set.to_terminal(one), other, set.truth(), chi));
}

TEST_CASE("Sub(B) is represented by Hom(B, Omega)", "[subobject][representation]") {
  for (const auto& b : fixtures::sets_up_to(3)) {
    std::vector<FinSetMap> probes;
    for (const auto& a : fixtures::sets_up_to(2))
      for (const auto& f : set.hom(a, b)) probes.push_back(f);
    const auto rep = representation_check(set, b, std::span<const FinSetMap>(probes));
    INFO(rep.report.witness);
    REQUIRE(rep.report.passed);
    REQUIRE(rep.bijection.size() == set.hom(b, set.omega()).size());
  }
}

TEST_CASE("unit coherence isomorphisms", "[subobject]") {
  const auto u = unit_coherence(set, three);
  CHECK(set.compose(u.left, u.left_inverse) == set.identity(three));
  CHECK(set.compose(u.right, u.right_inverse) == set.identity(three));
  CHECK(is_iso(set, u.left));
  CHECK(is_iso(set, u.right_inverse));
}

TEST_CASE("power objects", "[subobject][power]") {
  const auto po = power_object(set, two);
  CHECK(po.px.size() == 4);
  CHECK(po.k.size() == 4);  // pairs (S, x) with x in S over all S of {0,1}
  CHECK(set.is_monic(po.membership));

  const auto probes = fixtures::sets_up_to(2);
  const auto report = power_object_report(set, po, std::span(probes));
  INFO(report.witness);
  CHECK(report.passed);
  CHECK(report.checked == 1 + 4 + 16);  // |Sub(B x X)| for |B| = 0, 1, 2

  SECTION("P(0) is terminal") {
    const auto p0 = power_object(set, set.initial());
    CHECK(p0.px.size() == 1);
    CHECK(p0.k.empty());
  }
  SECTION("Omega recovered from P1") {
    const auto p1 = power_object(set, set.terminal());
    const auto recovered = omega_from_power(set, p1);
    CHECK(recovered.omega.size() == 2);
    const auto all = fixtures::sets_up_to(3);
    CHECK(verify_classifier(set, recovered.omega, recovered.truth, std::span(all)));
    CHECK_THROWS_AS(omega_from_power(set, po), PreconditionError);
  }
}
