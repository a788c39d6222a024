#pragma once

// Exhaustive universal-property checks for the limit, colimit and exponential
// constructions of a Topos, against a finite set of probe objects.
//
// Uniqueness of mediators is checked as injectivity of the "legs" map
// Hom(C, apex) -> cones, which is equivalent and avoids a quadratic search.

#include <set>
#include <span>
#include <string>
#include <vector>

#include "topos/category.hpp"
#include "topos/subobject.hpp"

namespace topos {

namespace detail {

template <Topos T>
std::string key(const T& topos, std::initializer_list<MorphismOf<T>> legs) {
  std::string k;
  for (const auto& m : legs) {
    k += topos.describe(m);
    k += '|';
  }
  return k;
}

}  // namespace detail

template <Topos T>
VerificationReport verify_terminal(const T& topos, std::span<const ObjectOf<T>> probes) {
  VerificationReport r;
  for (const auto& c : probes) {
    ++r.checked;
    const auto maps = topos.hom(c, topos.terminal());
    if (maps.size() != 1 || !(maps.front() == topos.to_terminal(c)))
      r.fail("Hom(" + topos.describe(c) + ", 1) does not hold exactly the map !");
  }
  return r;
}

template <Topos T>
VerificationReport verify_initial(const T& topos, std::span<const ObjectOf<T>> probes) {
  VerificationReport r;
  for (const auto& c : probes) {
    ++r.checked;
    const auto maps = topos.hom(topos.initial(), c);
    if (maps.size() != 1 || !(maps.front() == topos.from_initial(c)))
      r.fail("Hom(0, " + topos.describe(c) + ") does not hold exactly the map !");
  }
  return r;
}

template <Topos T>
VerificationReport verify_product(const T& topos, const ObjectOf<T>& a, const ObjectOf<T>& b,
                                  std::span<const ObjectOf<T>> probes) {
  VerificationReport r;
  const auto cone = topos.product(a, b);
  for (const auto& c : probes) {
    const auto to_a = topos.hom(c, a);
    const auto to_b = topos.hom(c, b);
    for (const auto& f : to_a)
      for (const auto& g : to_b) {
        ++r.checked;
        const auto m = cone.pair(f, g);
        if (!(topos.compose(cone.pi1, m) == f) || !(topos.compose(cone.pi2, m) == g))
          r.fail("product mediator does not commute for " + topos.describe(f) + ", " + topos.describe(g));
      }
    std::set<std::string> seen;
    for (const auto& u : topos.hom(c, cone.apex))
      if (!seen.insert(detail::key(topos, {topos.compose(cone.pi1, u), topos.compose(cone.pi2, u)})).second)
        r.fail("two maps into the product share both projections");
  }
  return r;
}

template <Topos T>
VerificationReport verify_coproduct(const T& topos, const ObjectOf<T>& a, const ObjectOf<T>& b,
                                    std::span<const ObjectOf<T>> probes) {
  VerificationReport r;
  const auto cocone = topos.coproduct(a, b);
  for (const auto& d : probes) {
    for (const auto& f : topos.hom(a, d))
      for (const auto& g : topos.hom(b, d)) {
        ++r.checked;
        const auto m = cocone.copair(f, g);
        if (!(topos.compose(m, cocone.in1) == f) || !(topos.compose(m, cocone.in2) == g))
          r.fail("coproduct mediator does not commute");
      }
    std::set<std::string> seen;
    for (const auto& u : topos.hom(cocone.apex, d))
      if (!seen.insert(detail::key(topos, {topos.compose(u, cocone.in1), topos.compose(u, cocone.in2)})).second)
        r.fail("two maps out of the coproduct share both injections");
  }
  return r;
}

template <Topos T>
VerificationReport verify_pullback(const T& topos, const MorphismOf<T>& f, const MorphismOf<T>& g,
                                   std::span<const ObjectOf<T>> probes) {
  VerificationReport r;
  const auto cone = topos.pullback(f, g);
  if (!(topos.compose(f, cone.p1) == topos.compose(g, cone.p2))) r.fail("pullback square does not commute");
  for (const auto& c : probes) {
    for (const auto& h : topos.hom(c, f.source()))
      for (const auto& k : topos.hom(c, g.source())) {
        if (!(topos.compose(f, h) == topos.compose(g, k))) continue;
        ++r.checked;
        const auto t = cone.mediate(h, k);
        if (!(topos.compose(cone.p1, t) == h) || !(topos.compose(cone.p2, t) == k))
          r.fail("pullback mediator does not commute");
      }
    std::set<std::string> seen;
    for (const auto& u : topos.hom(c, cone.apex))
      if (!seen.insert(detail::key(topos, {topos.compose(cone.p1, u), topos.compose(cone.p2, u)})).second)
        r.fail("two maps into the pullback share both legs");
  }
  return r;
}

template <Topos T>
VerificationReport verify_equalizer(const T& topos, const MorphismOf<T>& f, const MorphismOf<T>& g,
                                    std::span<const ObjectOf<T>> probes) {
  VerificationReport r;
  const auto cone = topos.equalizer(f, g);
  if (!(topos.compose(f, cone.inclusion) == topos.compose(g, cone.inclusion)))
    r.fail("equalizer does not equalize");
  for (const auto& c : probes) {
    for (const auto& h : topos.hom(c, f.source())) {
      if (!(topos.compose(f, h) == topos.compose(g, h))) continue;
      ++r.checked;
      if (!(topos.compose(cone.inclusion, cone.mediate(h)) == h)) r.fail("equalizer mediator does not commute");
    }
    std::set<std::string> seen;
    for (const auto& u : topos.hom(c, cone.apex))
      if (!seen.insert(detail::key(topos, {topos.compose(cone.inclusion, u)})).second)
        r.fail("equalizer inclusion is not monic on probes");
  }
  return r;
}

template <Topos T>
VerificationReport verify_coequalizer(const T& topos, const MorphismOf<T>& f, const MorphismOf<T>& g,
                                      std::span<const ObjectOf<T>> probes) {
  VerificationReport r;
  const auto cocone = topos.coequalizer(f, g);
  if (!(topos.compose(cocone.projection, f) == topos.compose(cocone.projection, g)))
    r.fail("coequalizer does not coequalize");
  for (const auto& d : probes) {
    for (const auto& h : topos.hom(f.target(), d)) {
      if (!(topos.compose(h, f) == topos.compose(h, g))) continue;
      ++r.checked;
      if (!(topos.compose(cocone.mediate(h), cocone.projection) == h))
        r.fail("coequalizer mediator does not commute");
    }
    std::set<std::string> seen;
    for (const auto& u : topos.hom(cocone.apex, d))
      if (!seen.insert(detail::key(topos, {topos.compose(u, cocone.projection)})).second)
        r.fail("coequalizer projection is not epi on probes");
  }
  return r;
}

/// For every g : C x A -> B, curry(g) satisfies ev (curry(g) x id) = g, and
/// u |-> ev (u x id) is injective on Hom(C, B^A).
template <Topos T>
VerificationReport verify_exponential(const T& topos, const ObjectOf<T>& a, const ObjectOf<T>& b,
                                      std::span<const ObjectOf<T>> probes) {
  VerificationReport r;
  const auto exp = topos.exponential(a, b);
  for (const auto& c : probes) {
    const auto ca = topos.product(c, a);
    auto uncurry = [&](const MorphismOf<T>& u) {
      return topos.compose(exp.ev, exp.product.pair(topos.compose(u, ca.pi1), ca.pi2));
    };
    for (const auto& g : topos.hom(ca.apex, b)) {
      ++r.checked;
      if (!(uncurry(exp.curry(c, g)) == g)) r.fail("ev (curry(g) x id) != g for " + topos.describe(g));
    }
    std::set<std::string> seen;
    for (const auto& u : topos.hom(c, exp.object))
      if (!seen.insert(detail::key(topos, {uncurry(u)})).second)
        r.fail("two maps into the exponential uncurry to the same map");
  }
  return r;
}

}  // namespace topos
