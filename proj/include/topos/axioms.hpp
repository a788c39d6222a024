#pragma once

// Set-theoretic axioms checked by exhaustive search over probe objects:
// well-pointedness, choice, and natural numbers objects.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "topos/category.hpp"
#include "topos/finset.hpp"
#include "topos/presheaf.hpp"
#include "topos/slice.hpp"

namespace topos {

struct AxiomReport {
  bool holds = true;
  std::size_t checked = 0;
  std::string witness;

  explicit operator bool() const { return holds; }
};

/// Searches for f != g : A -> B agreeing on every global element of A.
template <Topos T>
AxiomReport is_well_pointed(const T& t, std::span<const ObjectOf<T>> probes) {
  AxiomReport r;
  const auto one = t.terminal();
  for (const auto& a : probes) {
    const auto points = t.hom(one, a);
    for (const auto& b : probes) {
      const auto maps = t.hom(a, b);
      for (std::size_t i = 0; i < maps.size(); ++i)
        for (std::size_t j = i + 1; j < maps.size(); ++j) {
          ++r.checked;
          bool agree = true;
          for (const auto& x : points) agree = agree && t.compose(maps[i], x) == t.compose(maps[j], x);
          if (agree) {
            r.holds = false;
            r.witness = t.describe(maps[i]) + " and " + t.describe(maps[j]) + " : " + t.describe(a) + " -> " +
                        t.describe(b) + " agree on all " + std::to_string(points.size()) + " global elements";
            return r;
          }
        }
    }
  }
  return r;
}

/// Every epi f : A -> I between probes has a section g with f g = id_I.
template <Topos T>
AxiomReport satisfies_ac(const T& t, std::span<const ObjectOf<T>> probes) {
  AxiomReport r;
  for (const auto& a : probes)
    for (const auto& i : probes)
      for (const auto& f : t.hom(a, i)) {
        if (!t.is_epi(f)) continue;
        ++r.checked;
        const auto id = t.identity(i);
        bool found = false;
        for (const auto& g : t.hom(i, a))
          if (t.compose(f, g) == id) {
            found = true;
            break;
          }
        if (!found) {
          r.holds = false;
          r.witness = "epi " + t.describe(f) + " : " + t.describe(a) + " -> " + t.describe(i) + " has no section";
          return r;
        }
      }
  return r;
}

/// 1 -z-> N -s-> N.
template <Topos T>
struct NNOCandidate {
  ObjectOf<T> n;
  MorphismOf<T> zero;
  MorphismOf<T> succ;
};

/// 1 -c-> A -v-> A.
template <Topos T>
struct NNOTest {
  ObjectOf<T> a;
  MorphismOf<T> c;
  MorphismOf<T> v;
};

/// Number of h : N -> A with h z = c and h s = v h.
template <Topos T>
std::size_t count_recursors(const T& t, const NNOCandidate<T>& cand, const NNOTest<T>& test) {
  std::size_t n = 0;
  for (const auto& h : t.hom(cand.n, test.a))
    if (t.compose(h, cand.zero) == test.c && t.compose(h, cand.succ) == t.compose(test.v, h)) ++n;
  return n;
}

/// Fails on the first test with zero or several recursors.
template <Topos T>
AxiomReport verify_nno(const T& t, const NNOCandidate<T>& cand, std::span<const NNOTest<T>> tests) {
  if (!(cand.zero.source() == t.terminal()) || !(cand.zero.target() == cand.n) || !(cand.succ.source() == cand.n) ||
      !(cand.succ.target() == cand.n))
    throw InvalidArgument("NNO candidate needs z : 1 -> N and s : N -> N");
  AxiomReport r;
  for (const auto& test : tests) {
    ++r.checked;
    const auto count = count_recursors(t, cand, test);
    if (count != 1) {
      r.holds = false;
      r.witness = "A = " + t.describe(test.a) + ", c = " + t.describe(test.c) + ", v = " + t.describe(test.v) +
                  ": " + std::to_string(count) + " maps h";
      return r;
    }
  }
  return r;
}

/// Every (A, c, v) with A among the probes.
template <Topos T>
std::vector<NNOTest<T>> nno_tests(const T& t, std::span<const ObjectOf<T>> probes) {
  std::vector<NNOTest<T>> out;
  for (const auto& a : probes)
    for (const auto& c : t.hom(t.terminal(), a))
      for (const auto& v : t.hom(a, a)) out.push_back({a, c, v});
  return out;
}

/// Every candidate (N, z, s) with N among the probes.
template <Topos T>
std::vector<NNOCandidate<T>> nno_candidates(const T& t, std::span<const ObjectOf<T>> probes) {
  std::vector<NNOCandidate<T>> out;
  for (const auto& n : probes)
    for (const auto& z : t.hom(t.terminal(), n))
      for (const auto& s : t.hom(n, n)) out.push_back({n, z, s});
  return out;
}

/// Probe objects of size at most k: {0..n-1} for n <= k.
inline std::vector<FinSetObject> probe_objects(const FinSet&, std::size_t k) {
  std::vector<FinSetObject> out;
  for (std::size_t n = 0; n <= k; ++n) out.push_back(FinSetObject::range(n));
  return out;
}

/// Every presheaf with components of size at most k.
inline std::vector<Presheaf> probe_objects(const PresheafTopos& t, std::size_t k) {
  return enumerate_presheaves(t.index_ptr(), k);
}

/// Every map A -> X with |A| <= k.
inline std::vector<SliceObject<FinSet>> probe_objects(const SliceTopos<FinSet>& t, std::size_t k) {
  std::vector<SliceObject<FinSet>> out;
  for (const auto& a : probe_objects(t.base(), k))
    for (const auto& f : t.base().hom(a, t.over())) out.push_back(t.object(f));
  return out;
}

}  // namespace topos
