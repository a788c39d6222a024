#include <catch2/catch_amalgamated.hpp>

#include "topos/axioms.hpp"
#include "topos/logic.hpp"

using namespace topos;

namespace {

const FinSet set;

using Set = FinSetObject;

}  // namespace

TEST_CASE("FinSet is well-pointed, has choice and is Boolean on small probes", "[axioms]") {
  const auto probes = probe_objects(set, 3);
  REQUIRE(probes.size() == 4);
  const auto wp = is_well_pointed(set, std::span<const Set>(probes));
  CHECK(wp.holds);
  CHECK(wp.witness.empty());
  // sum over |A|,|B| <= 3 of C(|B|^|A|, 2)
  std::size_t pairs = 0;
  for (std::size_t a = 0; a <= 3; ++a)
    for (std::size_t b = 0; b <= 3; ++b) {
      std::size_t n = 1;
      for (std::size_t i = 0; i < a; ++i) n *= b;
      pairs += n * (n - 1) / 2;
    }
  CHECK(wp.checked == pairs);

  const auto ac = satisfies_ac(set, std::span<const Set>(probes));
  CHECK(ac.holds);
  CHECK(ac.checked > 0);
  CHECK(is_boolean(set));
}

TEST_CASE("the arrow topos is not well-pointed", "[axioms]") {
  const auto arrow = arrow_topos();
  const auto one = arrow.terminal();
  const auto a = arrow_object(arrow, FinSetMap(Set::range(0), Set::range(1), {}));
  const auto b = arrow_object(arrow, FinSetMap(Set::range(0), Set::range(2), {}));
  CHECK(arrow.hom(one, a).empty());
  const auto maps = arrow.hom(a, b);
  REQUIRE(maps.size() == 2);
  CHECK_FALSE(maps[0] == maps[1]);

  const std::vector<Presheaf> probes{a, b};
  const auto wp = is_well_pointed(arrow, std::span<const Presheaf>(probes));
  CHECK_FALSE(wp.holds);
  CHECK(wp.witness.find("agree on all 0 global elements") != std::string::npos);

  const auto all = probe_objects(arrow, 2);
  CHECK_FALSE(is_well_pointed(arrow, std::span<const Presheaf>(all)).holds);
}

TEST_CASE("the arrow topos has an epi without a section", "[axioms]") {
  const auto arrow = arrow_topos();
  // two copies of (1 -> 1) onto (2 -> 1): a section must send * to both x and y
  const auto cover = arrow_object(arrow, FinSetMap(Set::range(2), Set::range(2), {0, 1}));
  const auto base = arrow_object(arrow, FinSetMap(Set::range(2), Set::range(1), {0, 0}));
  const auto e = arrow_morphism(cover, base, set.identity(Set::range(2)), FinSetMap(Set::range(2), Set::range(1), {0, 0}));
  CHECK(arrow.is_epi(e));
  for (const auto& g : arrow.hom(base, cover)) CHECK_FALSE(arrow.compose(e, g) == arrow.identity(base));

  const std::vector<Presheaf> probes{cover, base};
  const auto ac = satisfies_ac(arrow, std::span<const Presheaf>(probes));
  CHECK_FALSE(ac.holds);
  CHECK(ac.witness.rfind("epi ", 0) == 0);
}

TEST_CASE("slices over a point agree with FinSet, larger slices lack points", "[axioms]") {
  const auto over_one = slice_topos(set, Set::range(1));
  const auto p1 = probe_objects(over_one, 2);
  CHECK(p1.size() == 3);
  CHECK(is_well_pointed(over_one, std::span<const SliceObject<FinSet>>(p1)).holds);
  CHECK(satisfies_ac(over_one, std::span<const SliceObject<FinSet>>(p1)).holds);

  const auto over_two = slice_topos(set, Set::range(2));
  const auto p2 = probe_objects(over_two, 2);
  CHECK(p2.size() == 1 + 2 + 4);
  CHECK_FALSE(is_well_pointed(over_two, std::span<const SliceObject<FinSet>>(p2)).holds);
  // choice is inherited from the base fiberwise
  CHECK(satisfies_ac(over_two, std::span<const SliceObject<FinSet>>(p2)).holds);
}

TEST_CASE("recursor counts on a three-cycle", "[axioms][nno]") {
  const auto n = Set::range(3);
  const NNOCandidate<FinSet> cycle{n, set.constant(set.terminal(), n, 0), FinSetMap(n, n, {1, 2, 0})};
  const auto two = Set::range(2);
  const NNOTest<FinSet> fixed{two, set.constant(set.terminal(), two, 0), set.identity(two)};
  const NNOTest<FinSet> swap{two, set.constant(set.terminal(), two, 0), FinSetMap(two, two, {1, 0})};
  CHECK(count_recursors(set, cycle, fixed) == 1);
  CHECK(count_recursors(set, cycle, swap) == 0);

  const std::vector<NNOTest<FinSet>> tests{fixed, swap};
  const auto r = verify_nno(set, cycle, std::span<const NNOTest<FinSet>>(tests));
  CHECK_FALSE(r.holds);
  CHECK(r.checked == 2);
  CHECK(r.witness.find(": 0 maps h") != std::string::npos);

  const NNOCandidate<FinSet> bad{n, FinSetMap(n, n, {0, 1, 2}), FinSetMap(n, n, {1, 2, 0})};
  CHECK_THROWS_AS(verify_nno(set, bad, std::span<const NNOTest<FinSet>>(tests)), InvalidArgument);
}

TEST_CASE("no finite set of size at most three is a natural numbers object", "[axioms][nno]") {
  const auto small = probe_objects(set, 3);
  const auto targets = probe_objects(set, 4);
  const auto candidates = nno_candidates(set, std::span<const Set>(small));
  // sum over n <= 3 of n * n^n
  CHECK(candidates.size() == 0 + 1 + 2 * 4 + 3 * 27);
  const auto tests = nno_tests(set, std::span<const Set>(targets));
  for (const auto& cand : candidates) {
    const auto r = verify_nno(set, cand, std::span<const NNOTest<FinSet>>(tests));
    CHECK_FALSE(r.holds);
    CHECK_FALSE(r.witness.empty());
  }
}

TEST_CASE("an empty probe set proves nothing", "[axioms]") {
  const std::vector<Set> none;
  const auto wp = is_well_pointed(set, std::span<const Set>(none));
  CHECK(wp.holds);
  CHECK(wp.checked == 0);
  CHECK(satisfies_ac(set, std::span<const Set>(none)).checked == 0);
}
