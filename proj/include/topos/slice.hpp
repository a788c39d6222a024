#pragma once

// The slice topos C/X. Objects are base maps a : A -> X, morphisms are base
// maps g : A -> A' with a' g = a. Limits come from base pullbacks, the
// classifier is pi2 : Omega x X -> X with truth <T !, id_X>, and exponentials
// are built fiberwise over a FinSet base only.

#include <algorithm>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "topos/category.hpp"
#include "topos/error.hpp"
#include "topos/finset.hpp"
#include "topos/subobject.hpp"

namespace topos {

template <Topos Base>
struct SliceObject {
  MorphismOf<Base> arrow;  // A -> X

  const ObjectOf<Base>& domain() const { return arrow.source(); }
  friend bool operator==(const SliceObject& a, const SliceObject& b) { return a.arrow == b.arrow; }
};

template <Topos Base>
class SliceMorphism {
 public:
  SliceMorphism(SliceObject<Base> source, SliceObject<Base> target, MorphismOf<Base> map)
      : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {}

  const SliceObject<Base>& source() const { return source_; }
  const SliceObject<Base>& target() const { return target_; }
  const MorphismOf<Base>& map() const { return map_; }

  friend bool operator==(const SliceMorphism& a, const SliceMorphism& b) {
    return a.map_ == b.map_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  SliceObject<Base> source_;
  SliceObject<Base> target_;
  MorphismOf<Base> map_;
};

template <Topos Base>
class SliceTopos {
 public:
  using Object = SliceObject<Base>;
  using Morphism = SliceMorphism<Base>;
  using BaseObject = ObjectOf<Base>;
  using BaseMorphism = MorphismOf<Base>;

  SliceTopos(Base base, BaseObject x)
      : base_(std::move(base)), x_(std::move(x)), omega_cone_(base_.product(base_.omega(), x_)) {}

  const Base& base() const { return base_; }
  const BaseObject& over() const { return x_; }

  std::string name() const { return base_.name() + "/" + base_.describe(x_); }

  /// The slice object a : A -> X; a must land in X.
  Object object(const BaseMorphism& a) const {
    if (!(a.target() == x_)) throw InvalidArgument("slice object must map into " + base_.describe(x_));
    return {a};
  }

  /// g : A -> A' as a map (A, a) -> (A', a'); the triangle must commute.
  Morphism morphism(const Object& from, const Object& to, const BaseMorphism& g) const {
    if (!(g.source() == from.domain()) || !(g.target() == to.domain()) ||
        !(base_.compose(to.arrow, g) == from.arrow))
      throw InvalidArgument("slice morphism triangle does not commute: " + base_.describe(g));
    return Morphism(from, to, g);
  }

  Object terminal() const { return {base_.identity(x_)}; }
  Object initial() const { return {base_.from_initial(x_)}; }

  Morphism identity(const Object& a) const { return Morphism(a, a, base_.identity(a.domain())); }

  Morphism compose(const Morphism& f, const Morphism& g) const {
    if (!(g.target() == f.source()))
      throw CompositionError("slice maps do not compose: " + describe(g.target()) + " vs " + describe(f.source()));
    return Morphism(g.source(), f.target(), base_.compose(f.map(), g.map()));
  }

  Morphism to_terminal(const Object& a) const { return Morphism(a, terminal(), a.arrow); }
  Morphism from_initial(const Object& a) const { return Morphism(initial(), a, base_.from_initial(a.domain())); }

  /// (A, a) x (B, b) is the base pullback of a and b.
  ProductCone<Object, Morphism> product(const Object& a, const Object& b) const {
    const auto pb = base_.pullback(a.arrow, b.arrow);
    const Object apex{base_.compose(a.arrow, pb.p1)};
    return {apex, Morphism(apex, a, pb.p1), Morphism(apex, b, pb.p2), [pb, apex](const Morphism& f, const Morphism& g) {
              return Morphism(f.source(), apex, pb.mediate(f.map(), g.map()));
            }};
  }

  CoproductCocone<Object, Morphism> coproduct(const Object& a, const Object& b) const {
    const auto cp = base_.coproduct(a.domain(), b.domain());
    const Object apex{cp.copair(a.arrow, b.arrow)};
    return {apex, Morphism(a, apex, cp.in1), Morphism(b, apex, cp.in2), [cp, apex](const Morphism& f, const Morphism& g) {
              return Morphism(apex, f.target(), cp.copair(f.map(), g.map()));
            }};
  }

  PullbackCone<Object, Morphism> pullback(const Morphism& f, const Morphism& g) const {
    if (!(f.target() == g.target())) throw CompositionError("slice pullback: maps have different targets");
    const auto pb = base_.pullback(f.map(), g.map());
    const Object apex{base_.compose(f.source().arrow, pb.p1)};
    return {apex, Morphism(apex, f.source(), pb.p1), Morphism(apex, g.source(), pb.p2),
            [pb, apex](const Morphism& h, const Morphism& k) {
              return Morphism(h.source(), apex, pb.mediate(h.map(), k.map()));
            }};
  }

  EqualizerCone<Object, Morphism> equalizer(const Morphism& f, const Morphism& g) const {
    const auto eq = base_.equalizer(f.map(), g.map());
    const Object apex{base_.compose(f.source().arrow, eq.inclusion)};
    return {apex, Morphism(apex, f.source(), eq.inclusion),
            [eq, apex](const Morphism& h) { return Morphism(h.source(), apex, eq.mediate(h.map())); }};
  }

  /// The structure map of the quotient is induced by b, which coequalizes f, g.
  CoequalizerCocone<Object, Morphism> coequalizer(const Morphism& f, const Morphism& g) const {
    const auto co = base_.coequalizer(f.map(), g.map());
    const Object apex{co.mediate(f.target().arrow)};
    return {apex, Morphism(f.target(), apex, co.projection),
            [co, apex](const Morphism& h) { return Morphism(apex, h.target(), co.mediate(h.map())); }};
  }

  /// Fiberwise exponential; FinSet base only.
  Exponential<Object, Morphism> exponential(const Object& a, const Object& b) const {
    if constexpr (std::is_same_v<Base, FinSet>) {
      return finset_exponential(a, b);
    } else {
      throw CapabilityError("slice exponentials are only available over FinSet");
    }
  }

  Object omega() const { return {omega_cone_.pi2}; }

  /// <T !, id_X> : X -> Omega x X.
  Morphism truth() const {
    const auto t = base_.compose(base_.truth(), base_.to_terminal(x_));
    return Morphism(terminal(), omega(), omega_cone_.pair(t, base_.identity(x_)));
  }

  /// <chi_m, b> : B -> Omega x X, which equals (chi_m x b) Delta_B.
  Morphism classify(const Morphism& m) const {
    const auto chi = base_.classify(m.map());
    return Morphism(m.target(), omega(), omega_cone_.pair(chi, m.target().arrow));
  }

  /// (chi_m x b) Delta_B built literally from the diagonal and a product of maps.
  Morphism character_by_diagonal(const Morphism& m) const {
    const auto& bb = m.target().domain();
    const auto square = base_.product(bb, bb);
    const auto id = base_.identity(bb);
    const auto delta = square.pair(id, id);
    const auto chi = character(base_, m.map());
    const auto cross = omega_cone_.pair(base_.compose(chi, square.pi1), base_.compose(m.target().arrow, square.pi2));
    return Morphism(m.target(), omega(), base_.compose(cross, delta));
  }

  bool is_monic(const Morphism& f) const { return base_.is_monic(f.map()); }
  bool is_epi(const Morphism& f) const { return base_.is_epi(f.map()); }

  Factorization<Morphism> factorize(const Morphism& f) const {
    const auto fac = base_.factorize(f.map());
    const Object image{base_.compose(f.target().arrow, fac.im)};
    return {Morphism(f.source(), image, fac.coim), Morphism(image, f.target(), fac.im)};
  }

  std::vector<Morphism> hom(const Object& a, const Object& b) const {
    std::vector<Morphism> out;
    for (const auto& g : base_.hom(a.domain(), b.domain()))
      if (base_.compose(b.arrow, g) == a.arrow) out.emplace_back(a, b, g);
    return out;
  }

  std::vector<Morphism> subobjects(const Object& b) const {
    std::vector<Morphism> out;
    for (const auto& m : base_.subobjects(b.domain())) out.emplace_back(Object{base_.compose(b.arrow, m)}, b, m);
    return out;
  }

  std::string describe(const Object& a) const { return base_.describe(a.arrow); }
  std::string describe(const Morphism& f) const { return base_.describe(f.map()); }
  std::string truth_value_name(const Morphism& v) const { return base_.describe(v.map()); }

 private:
  Exponential<Object, Morphism> finset_exponential(const Object& a, const Object& b) const
    requires std::is_same_v<Base, FinSet>
  {
    const auto& xs = x_;
    const auto& am = a.arrow;
    const auto& bm = b.arrow;
    std::vector<std::vector<std::size_t>> a_fiber(xs.size()), b_fiber(xs.size());
    for (std::size_t i = 0; i < am.source().size(); ++i) a_fiber[am(i)].push_back(i);
    for (std::size_t i = 0; i < bm.source().size(); ++i) b_fiber[bm(i)].push_back(i);

    // Fiber over x: all maps A_x -> B_x, lexicographic, first element most significant.
    auto fiber_label = [&](std::size_t x, const std::vector<std::size_t>& choice) {
      std::string g = "{";
      for (std::size_t k = 0; k < choice.size(); ++k) {
        if (k) g += ",";
        g += am.source().label(a_fiber[x][k]) + ":" + bm.source().label(b_fiber[x][choice[k]]);
      }
      return pair_label(xs.label(x), g + "}");
    };
    std::vector<std::string> labels;
    std::vector<std::size_t> over;
    for (std::size_t x = 0; x < xs.size(); ++x) {
      const auto count = checked_power(b_fiber[x].size(), a_fiber[x].size());
      std::vector<std::size_t> choice(a_fiber[x].size(), 0);
      for (std::size_t n = 0; n < count; ++n) {
        labels.push_back(fiber_label(x, choice));
        over.push_back(x);
        for (std::size_t k = choice.size(); k > 0; --k) {
          if (++choice[k - 1] < b_fiber[x].size()) break;
          choice[k - 1] = 0;
        }
      }
      if (labels.size() > kMaxEnumeration) throw ResourceError("slice exponential exceeds the enumeration cap");
    }
    const FinSetObject e_set(labels);
    const Object e{FinSetMap(e_set, xs, over)};
    auto cone = product(e, a);

    // Position of each element of A within its fiber.
    std::vector<std::size_t> a_slot(am.source().size());
    for (const auto& fiber : a_fiber)
      for (std::size_t k = 0; k < fiber.size(); ++k) a_slot[fiber[k]] = k;
    // Decode a fiber map from its index within the fiber.
    std::vector<std::size_t> fiber_start(xs.size() + 1, 0);
    for (std::size_t i = 0; i < over.size(); ++i) ++fiber_start[over[i] + 1];
    for (std::size_t x = 0; x < xs.size(); ++x) fiber_start[x + 1] += fiber_start[x];
    auto apply = [a_fiber, b_fiber, fiber_start, over](std::size_t phi, std::size_t slot) {
      const auto x = over[phi];
      auto code = phi - fiber_start[x];
      const auto radix = b_fiber[x].size();
      for (std::size_t k = a_fiber[x].size(); k-- > slot + 1;) code /= radix;
      return b_fiber[x][code % radix];
    };

    const auto& p1 = cone.pi1.map();
    const auto& p2 = cone.pi2.map();
    std::vector<std::size_t> ev_table;
    for (std::size_t k = 0; k < cone.apex.domain().size(); ++k) ev_table.push_back(apply(p1(k), a_slot[p2(k)]));
    const Morphism ev(cone.apex, b, FinSetMap(cone.apex.domain(), bm.source(), ev_table));

    auto self = *this;
    return {e, ev, cone, [self, e, a, b, a_fiber, b_fiber, fiber_start, a_slot](const Object& c, const Morphism& g) {
              const auto ca = self.product(c, a);
              if (!(g.source() == ca.apex) || !(g.target() == b)) throw CompositionError("curry: map must go from C x A to B");
              const auto& q1 = ca.pi1.map();
              const auto& q2 = ca.pi2.map();
              const auto& cm = c.arrow;
              // element (z, a') of C x A, by z then fiber slot of a'
              std::vector<std::vector<std::size_t>> at(cm.source().size());
              for (std::size_t z = 0; z < at.size(); ++z) at[z].assign(a_fiber[cm(z)].size(), 0);
              for (std::size_t k = 0; k < ca.apex.domain().size(); ++k) at[q1(k)][a_slot[q2(k)]] = k;
              std::vector<std::size_t> table;
              for (std::size_t z = 0; z < cm.source().size(); ++z) {
                const auto x = cm(z);
                std::size_t code = 0;
                const auto radix = b_fiber[x].size();
                for (std::size_t k = 0; k < a_fiber[x].size(); ++k) {
                  const auto value = g.map()(at[z][k]);
                  const auto pos = static_cast<std::size_t>(
                      std::find(b_fiber[x].begin(), b_fiber[x].end(), value) - b_fiber[x].begin());
                  code = code * radix + pos;
                }
                table.push_back(fiber_start[x] + code);
              }
              return Morphism(c, e, FinSetMap(cm.source(), e.domain(), table));
            }};
  }

  Base base_;
  BaseObject x_;
  ProductCone<BaseObject, BaseMorphism> omega_cone_;
};

/// The character of a monic in the slice, as the composite (chi_f x b) Delta_B,
/// checked against the pullback property.
template <Topos Base>
SliceMorphism<Base> slice_character(const SliceTopos<Base>& slice, const SliceMorphism<Base>& f) {
  if (!slice.is_monic(f)) throw PreconditionError("slice character of a non-monic: " + slice.describe(f));
  const auto chi = slice.character_by_diagonal(f);
  if (!classifies(slice, chi, slice.truth(), f))
    throw ClassifierViolation("slice character fails the pullback property for " + slice.describe(f));
  return chi;
}

template <Topos Base>
SliceTopos<Base> slice_topos(Base base, ObjectOf<Base> x) {
  return SliceTopos<Base>(std::move(base), std::move(x));
}

static_assert(Topos<SliceTopos<FinSet>>);

}  // namespace topos
