#pragma once

// Generic category machinery shared by every concrete topos: the Topos
// concept, limit/colimit result types with mediator builders, n-ary products,
// diagonals of signature and the definitional monic/epi tests.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topos/error.hpp"

namespace topos {

template <class Obj, class Mor>
struct ProductCone {
  Obj apex;
  Mor pi1;
  Mor pi2;
  /// <f, g> : C -> apex for f : C -> A, g : C -> B.
  std::function<Mor(const Mor&, const Mor&)> pair;
};

template <class Obj, class Mor>
struct CoproductCocone {
  Obj apex;
  Mor in1;
  Mor in2;
  /// [f, g] : apex -> D for f : A -> D, g : B -> D.
  std::function<Mor(const Mor&, const Mor&)> copair;
};

/// Pullback of f : B -> D <- C : g. p1 : apex -> B, p2 : apex -> C.
template <class Obj, class Mor>
struct PullbackCone {
  Obj apex;
  Mor p1;
  Mor p2;
  /// Unique t with p1 t = h and p2 t = k, for a commuting pair (h, k).
  std::function<Mor(const Mor&, const Mor&)> mediate;
};

template <class Obj, class Mor>
struct EqualizerCone {
  Obj apex;
  Mor inclusion;
  std::function<Mor(const Mor&)> mediate;
};

template <class Obj, class Mor>
struct CoequalizerCocone {
  Obj apex;
  Mor projection;
  std::function<Mor(const Mor&)> mediate;
};

/// B^A with ev : B^A x A -> B. `product` is the cone used as the domain of ev.
template <class Obj, class Mor>
struct Exponential {
  Obj object;
  Mor ev;
  ProductCone<Obj, Mor> product;
  /// curry(C, g) for g : C x A -> B, where C x A is product(C, A).apex.
  std::function<Mor(const Obj&, const Mor&)> curry;
};

template <class Mor>
struct Factorization {
  Mor coim;  // epi
  Mor im;    // monic
};

/// A finite ccc+ with a subobject classifier, plus the enumeration hooks that
/// the exhaustive verifiers need.
template <class T>
concept Topos = requires(const T& t, const typename T::Object& a,
                         const typename T::Morphism& f) {
  typename T::Object;
  typename T::Morphism;
  { f.source() } -> std::convertible_to<typename T::Object>;
  { f.target() } -> std::convertible_to<typename T::Object>;
  { f == f } -> std::convertible_to<bool>;
  { a == a } -> std::convertible_to<bool>;
  { t.name() } -> std::convertible_to<std::string>;
  { t.identity(a) } -> std::same_as<typename T::Morphism>;
  { t.compose(f, f) } -> std::same_as<typename T::Morphism>;
  { t.terminal() } -> std::same_as<typename T::Object>;
  { t.initial() } -> std::same_as<typename T::Object>;
  { t.to_terminal(a) } -> std::same_as<typename T::Morphism>;
  { t.from_initial(a) } -> std::same_as<typename T::Morphism>;
  { t.product(a, a) } -> std::same_as<ProductCone<typename T::Object, typename T::Morphism>>;
  { t.coproduct(a, a) } -> std::same_as<CoproductCocone<typename T::Object, typename T::Morphism>>;
  { t.pullback(f, f) } -> std::same_as<PullbackCone<typename T::Object, typename T::Morphism>>;
  { t.equalizer(f, f) } -> std::same_as<EqualizerCone<typename T::Object, typename T::Morphism>>;
  { t.coequalizer(f, f) } -> std::same_as<CoequalizerCocone<typename T::Object, typename T::Morphism>>;
  { t.exponential(a, a) } -> std::same_as<Exponential<typename T::Object, typename T::Morphism>>;
  { t.omega() } -> std::same_as<typename T::Object>;
  { t.truth() } -> std::same_as<typename T::Morphism>;
  { t.classify(f) } -> std::same_as<typename T::Morphism>;
  { t.is_monic(f) } -> std::same_as<bool>;
  { t.is_epi(f) } -> std::same_as<bool>;
  { t.factorize(f) } -> std::same_as<Factorization<typename T::Morphism>>;
  { t.hom(a, a) } -> std::same_as<std::vector<typename T::Morphism>>;
  { t.subobjects(a) } -> std::same_as<std::vector<typename T::Morphism>>;
  { t.describe(a) } -> std::convertible_to<std::string>;
  { t.describe(f) } -> std::convertible_to<std::string>;
  { t.truth_value_name(f) } -> std::convertible_to<std::string>;
};

template <Topos T>
using ObjectOf = typename T::Object;
template <Topos T>
using MorphismOf = typename T::Morphism;

/// f after g. Throws CompositionError when target(g) != source(f).
template <Topos T>
MorphismOf<T> compose(const T& topos, const MorphismOf<T>& f, const MorphismOf<T>& g) {
  return topos.compose(f, g);
}

/// f after g after h after ...
template <Topos T>
MorphismOf<T> compose_all(const T& topos, std::initializer_list<MorphismOf<T>> chain) {
  if (chain.size() == 0) throw PreconditionError("compose_all: empty chain");
  auto it = std::rbegin(chain);
  MorphismOf<T> acc = *it;
  for (++it; it != std::rend(chain); ++it) acc = topos.compose(*it, acc);
  return acc;
}

/// Monic by definition, with A restricted to the given probe objects.
template <Topos T>
bool is_monic_by_definition(const T& topos, const MorphismOf<T>& f,
                            std::span<const ObjectOf<T>> probes) {
  if (probes.empty()) throw PreconditionError("is_monic: probe set must be nonempty");
  for (const auto& probe : probes) {
    const auto maps = topos.hom(probe, f.source());
    std::vector<MorphismOf<T>> images;
    images.reserve(maps.size());
    for (const auto& g : maps) images.push_back(topos.compose(f, g));
    for (std::size_t i = 0; i < maps.size(); ++i)
      for (std::size_t j = i + 1; j < maps.size(); ++j)
        if (images[i] == images[j]) return false;  // hom-set entries are distinct
  }
  return true;
}

/// Epi by definition, with D restricted to the given probe objects.
template <Topos T>
bool is_epi_by_definition(const T& topos, const MorphismOf<T>& f,
                          std::span<const ObjectOf<T>> probes) {
  if (probes.empty()) throw PreconditionError("is_epi: probe set must be nonempty");
  for (const auto& probe : probes) {
    const auto maps = topos.hom(f.target(), probe);
    std::vector<MorphismOf<T>> images;
    images.reserve(maps.size());
    for (const auto& g : maps) images.push_back(topos.compose(g, f));
    for (std::size_t i = 0; i < maps.size(); ++i)
      for (std::size_t j = i + 1; j < maps.size(); ++j)
        if (images[i] == images[j]) return false;
  }
  return true;
}

/// Topoi are balanced, so monic + epi is iso.
template <Topos T>
bool is_iso(const T& topos, const MorphismOf<T>& f) {
  return topos.is_monic(f) && topos.is_epi(f);
}

/// Searches Hom(target, source) for a two-sided inverse.
template <Topos T>
std::optional<MorphismOf<T>> find_inverse(const T& topos, const MorphismOf<T>& f) {
  const auto id_src = topos.identity(f.source());
  const auto id_tgt = topos.identity(f.target());
  for (const auto& g : topos.hom(f.target(), f.source()))
    if (topos.compose(g, f) == id_src && topos.compose(f, g) == id_tgt) return g;
  return std::nullopt;
}

/// Left-nested n-fold product ((A1 x A2) x A3) x ... with its projections.
/// The zero-fold product is the terminal object and the one-fold product is
/// the factor itself. Keeps a pointer to the topos, which must outlive it.
template <Topos T>
class NaryProduct {
 public:
  using Obj = ObjectOf<T>;
  using Mor = MorphismOf<T>;

  NaryProduct(const T& topos, std::vector<Obj> factors)
      : topos_(&topos), factors_(std::move(factors)), apex_(topos.terminal()) {
    const std::size_t n = factors_.size();
    if (n == 0) return;
    if (n == 1) {
      apex_ = factors_[0];
      projections_.push_back(topos.identity(apex_));
      return;
    }
    cones_.push_back(topos.product(factors_[0], factors_[1]));
    for (std::size_t i = 2; i < n; ++i) cones_.push_back(topos.product(cones_.back().apex, factors_[i]));
    apex_ = cones_.back().apex;
    projections_.resize(n, topos.identity(apex_));
    // Walk down the left spine: cones_[i] has factor i+1 as its right leg.
    Mor spine = topos.identity(apex_);
    for (std::size_t i = n - 1; i >= 1; --i) {
      const auto& cone = cones_[i - 1];
      projections_[i] = topos.compose(cone.pi2, spine);
      spine = topos.compose(cone.pi1, spine);
      if (i == 1) projections_[0] = spine;
    }
  }

  const Obj& apex() const { return apex_; }
  std::size_t arity() const { return factors_.size(); }
  const std::vector<Obj>& factors() const { return factors_; }
  const Mor& projection(std::size_t i) const { return projections_.at(i); }

  /// <f1, ..., fn> : source -> apex. Every leg must have the given source.
  Mor tuple(const Obj& source, std::span<const Mor> legs) const {
    if (legs.size() != factors_.size())
      throw ArityError("tuple: expected " + std::to_string(factors_.size()) + " legs, got " +
                       std::to_string(legs.size()));
    for (std::size_t i = 0; i < legs.size(); ++i) {
      if (!(legs[i].source() == source) || !(legs[i].target() == factors_[i]))
        throw CompositionError("tuple: leg " + std::to_string(i + 1) + " has the wrong endpoints");
    }
    if (legs.empty()) return topos_->to_terminal(source);
    if (legs.size() == 1) return legs[0];
    Mor acc = cones_[0].pair(legs[0], legs[1]);
    for (std::size_t i = 2; i < legs.size(); ++i) acc = cones_[i - 1].pair(acc, legs[i]);
    return acc;
  }

  Mor tuple(const Obj& source, std::initializer_list<Mor> legs) const {
    return tuple(source, std::span<const Mor>(legs.begin(), legs.size()));
  }

 private:
  const T* topos_;
  std::vector<Obj> factors_;
  Obj apex_;
  std::vector<Mor> projections_;
  std::vector<ProductCone<Obj, Mor>> cones_;
};

/// A^n as a NaryProduct.
template <Topos T>
NaryProduct<T> power(const T& topos, const ObjectOf<T>& a, std::size_t n) {
  return NaryProduct<T>(topos, std::vector<ObjectOf<T>>(n, a));
}

/// f1 x ... x fn : dom.apex -> cod.apex, where fi : dom factor i -> cod factor i.
template <Topos T>
MorphismOf<T> product_of_morphisms(const T& topos, const NaryProduct<T>& dom,
                                   const NaryProduct<T>& cod,
                                   std::span<const MorphismOf<T>> maps) {
  if (maps.size() != dom.arity() || maps.size() != cod.arity())
    throw ArityError("product_of_morphisms: arity mismatch");
  std::vector<MorphismOf<T>> legs;
  legs.reserve(maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) legs.push_back(topos.compose(maps[i], dom.projection(i)));
  return cod.tuple(dom.apex(), legs);
}

/// Diagonal signature (m1, ..., mn): positive entries, arity d = max mi.
class DiagonalSignature {
 public:
  explicit DiagonalSignature(std::vector<std::size_t> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InvalidArgument("diagonal signature must be nonempty");
    for (auto m : entries_)
      if (m == 0) throw InvalidArgument("diagonal signature entries are positive");
  }
  const std::vector<std::size_t>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t arity() const { return *std::max_element(entries_.begin(), entries_.end()); }

 private:
  std::vector<std::size_t> entries_;
};

/// Unique map A^d -> A^n with pi_i after it equal to pi_{m_i}. `from` and `to`
/// must be powers of the same object with arities d and n.
template <Topos T>
MorphismOf<T> diagonal(const NaryProduct<T>& from, const NaryProduct<T>& to,
                       std::span<const std::size_t> positions) {
  std::vector<MorphismOf<T>> legs;
  legs.reserve(positions.size());
  for (auto m : positions) {
    if (m == 0 || m > from.arity()) throw ArityError("diagonal: position out of range");
    legs.push_back(from.projection(m - 1));
  }
  return to.tuple(from.apex(), legs);
}

template <Topos T>
MorphismOf<T> diagonal_of_signature(const T& topos, const ObjectOf<T>& a,
                                    const DiagonalSignature& sigma) {
  const auto from = power(topos, a, sigma.arity());
  const auto to = power(topos, a, sigma.size());
  return diagonal(from, to, std::span<const std::size_t>(sigma.entries()));
}

}  // namespace topos
