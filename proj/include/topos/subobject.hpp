#pragma once

// Subobject classifiers, characters, the Sub functor and power objects,
// generic over any Topos.
//
// A square  A --!--> 1 ; m ; chi ; T  is a pullback exactly when pulling T back
// along chi yields the same subobject as m. Every pullback test below reduces
// to that comparison of canonical representatives.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topos/category.hpp"
#include "topos/error.hpp"

namespace topos {

/// Outcome of an exhaustive check. `witness` describes the first failure.
struct VerificationReport {
  bool passed = true;
  std::size_t checked = 0;
  std::string witness;

  explicit operator bool() const { return passed; }

  void fail(std::string why) {
    if (passed) witness = std::move(why);
    passed = false;
  }
};

/// Canonical representative of the subobject determined by a monic.
template <Topos T>
MorphismOf<T> canonical_subobject(const T& topos, const MorphismOf<T>& monic) {
  if (!topos.is_monic(monic)) throw PreconditionError("not a monic: " + topos.describe(monic));
  return topos.factorize(monic).im;
}

/// A subobject of a fixed ambient object, held by its canonical monic.
template <Topos T>
struct Subobject {
  MorphismOf<T> monic;

  const ObjectOf<T>& ambient() const { return monic.target(); }
  friend bool operator==(const Subobject& a, const Subobject& b) { return a.monic == b.monic; }
};

/// Equivalence of monics by definition: an invertible g with m2 g = m1.
template <Topos T>
bool equivalent_monics(const T& topos, const MorphismOf<T>& m1, const MorphismOf<T>& m2) {
  if (!(m1.target() == m2.target())) return false;
  for (const auto& g : topos.hom(m1.source(), m2.source()))
    if (topos.compose(m2, g) == m1 && find_inverse(topos, g)) return true;
  return false;
}

/// Sub(f) : the pullback of the monic `m` (into B) along f : B' -> B, as a
/// canonical subobject of B'.
template <Topos T>
MorphismOf<T> pullback_subobject(const T& topos, const MorphismOf<T>& m, const MorphismOf<T>& along) {
  const auto cone = topos.pullback(along, m);
  return canonical_subobject(topos, cone.p1);
}

template <Topos T>
Subobject<T> sub_pullback(const T& topos, const MorphismOf<T>& along, const Subobject<T>& s) {
  return {pullback_subobject(topos, s.monic, along)};
}

/// True iff chi : B -> omega makes the square with m and truth a pullback.
template <Topos T>
bool classifies(const T& topos, const MorphismOf<T>& chi, const MorphismOf<T>& truth,
                const MorphismOf<T>& m) {
  if (!(chi.source() == m.target()) || !(chi.target() == truth.target())) return false;
  return pullback_subobject(topos, truth, chi) == canonical_subobject(topos, m);
}

/// General pullback-square test: the mediator into the real pullback is iso.
template <Topos T>
bool is_pullback_square(const T& topos, const MorphismOf<T>& h, const MorphismOf<T>& k,
                        const MorphismOf<T>& f, const MorphismOf<T>& g) {
  if (!(topos.compose(f, h) == topos.compose(g, k))) return false;
  const auto cone = topos.pullback(f, g);
  return is_iso(topos, cone.mediate(h, k));
}

/// The character of a monic. The topos computes it analytically; the result
/// is checked against the pullback property before being returned.
template <Topos T>
MorphismOf<T> character(const T& topos, const MorphismOf<T>& monic) {
  if (!topos.is_monic(monic)) throw PreconditionError("character of a non-monic: " + topos.describe(monic));
  auto chi = topos.classify(monic);
  if (!classifies(topos, chi, topos.truth(), monic))
    throw ClassifierViolation(topos.name() + ": classify() produced a map that is not a character of " +
                              topos.describe(monic));
  return chi;
}

/// Every map B -> omega making the classifier square a pullback.
template <Topos T>
std::vector<MorphismOf<T>> characters_by_search(const T& topos, const ObjectOf<T>& omega,
                                                const MorphismOf<T>& truth, const MorphismOf<T>& monic) {
  std::vector<MorphismOf<T>> found;
  for (const auto& chi : topos.hom(monic.target(), omega))
    if (classifies(topos, chi, truth, monic)) found.push_back(chi);
  return found;
}

/// Checks that every monic between probe objects has exactly one character
/// into the candidate (omega, truth).
template <Topos T>
VerificationReport classifier_report(const T& topos, const ObjectOf<T>& omega, const MorphismOf<T>& truth,
                                     std::span<const ObjectOf<T>> probes) {
  VerificationReport report;
  if (!(truth.source() == topos.terminal()) || !(truth.target() == omega)) {
    report.fail("truth arrow is not 1 -> omega");
    return report;
  }
  for (const auto& a : probes)
    for (const auto& b : probes)
      for (const auto& m : topos.hom(a, b)) {
        if (!topos.is_monic(m)) continue;
        ++report.checked;
        const auto n = characters_by_search(topos, omega, truth, m).size();
        if (n != 1) {
          report.fail(topos.describe(m) + " has " + std::to_string(n) + " characters");
          return report;
        }
      }
  return report;
}

template <Topos T>
bool verify_classifier(const T& topos, const ObjectOf<T>& omega, const MorphismOf<T>& truth,
                       std::span<const ObjectOf<T>> probes) {
  return classifier_report(topos, omega, truth, probes).passed;
}

/// Sub(B), one canonical representative per class.
template <Topos T>
std::vector<Subobject<T>> sub(const T& topos, const ObjectOf<T>& b) {
  std::vector<Subobject<T>> out;
  for (const auto& m : topos.subobjects(b)) {
    Subobject<T> s{canonical_subobject(topos, m)};
    bool seen = false;
    for (const auto& t : out) seen = seen || t == s;
    if (!seen) out.push_back(std::move(s));
  }
  return out;
}

/// The bijection phi_B : Sub(B) -> Hom(B, Omega), s |-> character(s).
template <Topos T>
struct Representation {
  std::vector<std::pair<Subobject<T>, MorphismOf<T>>> bijection;
  VerificationReport report;
};

/// Exhibits phi_B and checks that it is a bijection, that it is natural with
/// respect to every probe morphism f : B' -> B, and that T = phi_1(id_1).
template <Topos T>
Representation<T> representation_check(const T& topos, const ObjectOf<T>& b,
                                       std::span<const MorphismOf<T>> naturality_probes = {}) {
  Representation<T> rep;
  const auto subs = sub(topos, b);
  const auto homs = topos.hom(b, topos.omega());
  for (const auto& s : subs) rep.bijection.emplace_back(s, character(topos, s.monic));
  ++rep.report.checked;
  if (subs.size() != homs.size())
    rep.report.fail("|Sub(B)| = " + std::to_string(subs.size()) + " but |Hom(B, Omega)| = " +
                    std::to_string(homs.size()));
  for (std::size_t i = 0; i < rep.bijection.size(); ++i)
    for (std::size_t j = i + 1; j < rep.bijection.size(); ++j)
      if (rep.bijection[i].second == rep.bijection[j].second)
        rep.report.fail("two subobjects share the character " + topos.describe(rep.bijection[i].second));
  for (const auto& chi : homs) {
    bool hit = false;
    for (const auto& [s, c] : rep.bijection) hit = hit || c == chi;
    if (!hit) rep.report.fail("no subobject has character " + topos.describe(chi));
  }
  for (const auto& f : naturality_probes) {
    if (!(f.target() == b)) throw PreconditionError("naturality probe must land in B");
    for (const auto& [s, chi] : rep.bijection) {
      ++rep.report.checked;
      const auto pulled = character(topos, sub_pullback(topos, f, s).monic);
      if (!(pulled == topos.compose(chi, f)))
        rep.report.fail("naturality fails along " + topos.describe(f));
    }
  }
  const auto one = topos.terminal();
  ++rep.report.checked;
  if (!(character(topos, topos.identity(one)) == topos.truth())) rep.report.fail("T != phi_1(id_1)");
  return rep;
}

/// Named coherence isomorphisms 1 x B ~ B and B x 1 ~ B.
template <Topos T>
struct UnitCoherence {
  MorphismOf<T> left;          // 1 x B -> B
  MorphismOf<T> left_inverse;  // B -> 1 x B
  MorphismOf<T> right;         // B x 1 -> B
  MorphismOf<T> right_inverse; // B -> B x 1
};

template <Topos T>
UnitCoherence<T> unit_coherence(const T& topos, const ObjectOf<T>& b) {
  const auto one = topos.terminal();
  const auto l = topos.product(one, b);
  const auto r = topos.product(b, one);
  const auto id = topos.identity(b);
  const auto bang = topos.to_terminal(b);
  return {l.pi2, l.pair(bang, id), r.pi1, r.pair(id, bang)};
}

/// PX = Omega^X with membership K >-> PX x X.
template <Topos T>
struct PowerObject {
  ObjectOf<T> base;  // X
  ObjectOf<T> px;
  ObjectOf<T> k;
  MorphismOf<T> membership;
  Exponential<ObjectOf<T>, MorphismOf<T>> exponential;
};

/// PX := Omega^X, and membership is T pulled back along ev.
template <Topos T>
PowerObject<T> power_object(const T& topos, const ObjectOf<T>& x) {
  auto exp = topos.exponential(x, topos.omega());
  const auto cone = topos.pullback(exp.ev, topos.truth());
  if (!topos.is_monic(cone.p1)) throw InconsistencyError("membership relation is not monic");
  return {x, exp.object, cone.apex, cone.p1, std::move(exp)};
}

/// chi-bar_r : B -> PX for a monic r : A >-> B x X (B x X = product(B, X).apex).
template <Topos T>
MorphismOf<T> power_transpose(const T& topos, const PowerObject<T>& po, const ObjectOf<T>& b,
                              const MorphismOf<T>& r) {
  const auto chi = character(topos, r);
  return po.exponential.curry(b, chi);
}

/// u x id_X : B x X -> PX x X.
template <Topos T>
MorphismOf<T> times_identity(const T& topos, const PowerObject<T>& po, const ObjectOf<T>& b,
                             const MorphismOf<T>& u) {
  const auto dom = topos.product(b, po.base);
  return po.exponential.product.pair(topos.compose(u, dom.pi1), dom.pi2);
}

/// Exhaustive check of the power-object universal property: for every
/// subobject r of B x X (B ranging over probes) exactly one u : B -> PX makes
/// the membership square a pullback, and it is the transpose of chi_r.
template <Topos T>
VerificationReport power_object_report(const T& topos, const PowerObject<T>& po,
                                       std::span<const ObjectOf<T>> probes) {
  VerificationReport report;
  if (!topos.is_monic(po.membership)) report.fail("membership is not monic");
  for (const auto& b : probes) {
    const auto bx = topos.product(b, po.base).apex;
    const auto candidates = topos.hom(b, po.px);
    for (const auto& r_raw : topos.subobjects(bx)) {
      const auto r = canonical_subobject(topos, r_raw);
      ++report.checked;
      std::size_t hits = 0;
      std::optional<MorphismOf<T>> hit;
      for (const auto& u : candidates) {
        if (pullback_subobject(topos, po.membership, times_identity(topos, po, b, u)) == r) {
          ++hits;
          hit = u;
        }
      }
      if (hits != 1) {
        report.fail(topos.describe(r) + " has " + std::to_string(hits) + " classifying maps");
        return report;
      }
      if (!(*hit == power_transpose(topos, po, b, r))) {
        report.fail("transpose of chi_r disagrees with the unique classifying map for " + topos.describe(r));
        return report;
      }
    }
  }
  return report;
}

template <Topos T>
struct ClassifierFromPower {
  ObjectOf<T> omega;
  MorphismOf<T> truth;
};

/// Omega := P1, with truth 1 ~ K >-> P1 x 1 -> P1. Requires K ~ 1.
template <Topos T>
ClassifierFromPower<T> omega_from_power(const T& topos, const PowerObject<T>& p1) {
  const auto one = topos.terminal();
  if (!(p1.base == one)) throw PreconditionError("omega_from_power needs the power object of 1");
  if (!is_iso(topos, topos.to_terminal(p1.k)))
    throw InconsistencyError("K is not isomorphic to 1: " + topos.describe(p1.k));
  const auto points = topos.hom(one, p1.k);
  if (points.size() != 1) throw InconsistencyError("K has " + std::to_string(points.size()) + " global elements");
  const auto into_product = topos.compose(p1.membership, points.front());
  const auto truth = topos.compose(p1.exponential.product.pi1, into_product);
  return {p1.px, truth};
}

}  // namespace topos
