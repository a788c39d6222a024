#pragma once

// Presheaf topoi Set^(J^op) over a finite index category J.
//
// Limits and colimits are pointwise. Omega(j) is the set of sieves on j, with
// truth picking the maximal sieve. Exponentials use
//   (B^A)(j) = Nat(y(j) x A, B),
// enumerated exhaustively, so index categories and component sizes are capped.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topos/category.hpp"
#include "topos/error.hpp"
#include "topos/finset.hpp"

namespace topos {

/// A finite category given by objects, arrows and a full composition table.
/// Arrow indices 0..n-1 are the identities of objects 0..n-1.
class FiniteCategory {
 public:
  struct Arrow {
    std::string name;
    std::size_t dom;
    std::size_t cod;
  };

  /// A non-identity generator "name : dom -> cod".
  struct ArrowSpec {
    std::string name;
    std::string dom;
    std::string cod;
  };

  /// "g . f = h" for composable non-identity arrows f : a -> b, g : b -> c.
  struct CompositionSpec {
    std::string g;
    std::string f;
    std::string h;
  };

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  FiniteCategory(std::vector<std::string> objects, std::vector<ArrowSpec> arrows = {},
                 std::vector<CompositionSpec> compositions = {})
      : objects_(std::move(objects)) {
    if (objects_.empty()) throw InvalidArgument("an index category needs at least one object");
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j)
        if (objects_[i] == objects_[j]) throw InvalidArgument("duplicate object '" + objects_[i] + "'");
      arrows_.push_back({"id_" + objects_[i], i, i});
    }
    for (const auto& spec : arrows) {
      if (find_arrow(spec.name) != npos) throw InvalidArgument("duplicate arrow '" + spec.name + "'");
      arrows_.push_back({spec.name, object_index(spec.dom), object_index(spec.cod)});
    }
    if (arrows_.size() > 64) throw ResourceError("index categories are limited to 64 arrows");
    const std::size_t n = arrows_.size();
    table_.assign(n * n, npos);
    for (std::size_t a = 0; a < n; ++a) {
      table_[a * n + arrows_[a].dom] = a;  // a . id = a
      table_[arrows_[a].cod * n + a] = a;  // id . a = a
    }
    for (const auto& c : compositions) {
      const auto g = arrow_index(c.g), f = arrow_index(c.f), h = arrow_index(c.h);
      if (arrows_[f].cod != arrows_[g].dom)
        throw InvalidArgument("composition " + c.g + " . " + c.f + " is not composable");
      if (arrows_[h].dom != arrows_[f].dom || arrows_[h].cod != arrows_[g].cod)
        throw InvalidArgument("composite " + c.h + " has the wrong endpoints for " + c.g + " . " + c.f);
      auto& slot = table_[g * n + f];
      if (slot != npos && slot != h) throw InvalidArgument("conflicting composites for " + c.g + " . " + c.f);
      slot = h;
    }
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t f = 0; f < n; ++f)
        if (arrows_[f].cod == arrows_[g].dom && table_[g * n + f] == npos)
          throw InvalidArgument("missing composite " + arrows_[g].name + " . " + arrows_[f].name);
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t g = 0; g < n; ++g)
        for (std::size_t f = 0; f < n; ++f)
          if (arrows_[f].cod == arrows_[g].dom && arrows_[g].cod == arrows_[h].dom &&
              compose(h, compose(g, f)) != compose(compose(h, g), f))
            throw InvalidArgument("composition is not associative at " + arrows_[h].name + ", " +
                                  arrows_[g].name + ", " + arrows_[f].name);
  }

  /// One object, identity only.
  static FiniteCategory point() { return FiniteCategory({"pt"}); }

  /// Discrete category on the given objects.
  static FiniteCategory discrete(std::vector<std::string> objects) { return FiniteCategory(std::move(objects)); }

  /// Two objects and one arrow. Object "dom" is listed first and the arrow
  /// goes cod -> dom, so a presheaf P is the function P(dom) -> P(cod).
  static FiniteCategory interval() { return FiniteCategory({"dom", "cod"}, {{"f", "cod", "dom"}}); }

  std::size_t object_count() const { return objects_.size(); }
  const std::string& object(std::size_t i) const { return objects_.at(i); }
  const std::vector<std::string>& objects() const { return objects_; }

  std::size_t object_index(const std::string& name) const {
    for (std::size_t i = 0; i < objects_.size(); ++i)
      if (objects_[i] == name) return i;
    throw InvalidArgument("unknown object '" + name + "'");
  }

  std::size_t arrow_count() const { return arrows_.size(); }
  const Arrow& arrow(std::size_t a) const { return arrows_.at(a); }
  std::size_t identity(std::size_t object) const { return object; }

  std::size_t find_arrow(const std::string& name) const {
    for (std::size_t a = 0; a < arrows_.size(); ++a)
      if (arrows_[a].name == name) return a;
    return npos;
  }

  std::size_t arrow_index(const std::string& name) const {
    const auto a = find_arrow(name);
    if (a == npos) throw InvalidArgument("unknown arrow '" + name + "'");
    return a;
  }

  /// g . f ; throws when cod f != dom g.
  std::size_t compose(std::size_t g, std::size_t f) const {
    const auto h = table_[g * arrows_.size() + f];
    if (h == npos) throw CompositionError("arrows " + arrows_[g].name + " and " + arrows_[f].name + " do not compose");
    return h;
  }

  /// Arrows with codomain j, in index order.
  std::vector<std::size_t> arrows_into(std::size_t j) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < arrows_.size(); ++a)
      if (arrows_[a].cod == j) out.push_back(a);
    return out;
  }

  /// Arrows i -> j, in index order.
  std::vector<std::size_t> arrows_between(std::size_t i, std::size_t j) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < arrows_.size(); ++a)
      if (arrows_[a].dom == i && arrows_[a].cod == j) out.push_back(a);
    return out;
  }

  /// Non-identity composition entries, for serialization.
  std::vector<CompositionSpec> composition_entries() const {
    std::vector<CompositionSpec> out;
    const std::size_t n = arrows_.size();
    for (std::size_t g = objects_.size(); g < n; ++g)
      for (std::size_t f = objects_.size(); f < n; ++f)
        if (table_[g * n + f] != npos) out.push_back({arrows_[g].name, arrows_[f].name, arrows_[table_[g * n + f]].name});
    return out;
  }

  friend bool operator==(const FiniteCategory& a, const FiniteCategory& b) {
    if (a.objects_ != b.objects_ || a.table_ != b.table_ || a.arrows_.size() != b.arrows_.size()) return false;
    for (std::size_t i = 0; i < a.arrows_.size(); ++i)
      if (a.arrows_[i].name != b.arrows_[i].name || a.arrows_[i].dom != b.arrows_[i].dom ||
          a.arrows_[i].cod != b.arrows_[i].cod)
        return false;
    return true;
  }

 private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<std::size_t> table_;
};

/// A contravariant functor J -> FinSet: one set per object and, for each
/// arrow a : i -> j, a restriction map P(j) -> P(i).
class Presheaf {
 public:
  Presheaf(std::shared_ptr<const FiniteCategory> category, std::vector<FinSetObject> sets,
           std::vector<FinSetMap> restrictions)
      : category_(std::move(category)), sets_(std::move(sets)), maps_(std::move(restrictions)) {
    validate();
  }

  /// Builds a presheaf from the sets and the maps of the non-identity arrows.
  static Presheaf from_generators(std::shared_ptr<const FiniteCategory> category, std::vector<FinSetObject> sets,
                                  const std::vector<FinSetMap>& generator_maps) {
    const auto& cat = *category;
    if (sets.size() != cat.object_count()) throw InvalidArgument("presheaf needs one set per object");
    std::vector<FinSetMap> maps;
    for (std::size_t i = 0; i < cat.object_count(); ++i) maps.push_back(FinSet{}.identity(sets[i]));
    if (generator_maps.size() != cat.arrow_count() - cat.object_count())
      throw InvalidArgument("presheaf needs one map per non-identity arrow");
    maps.insert(maps.end(), generator_maps.begin(), generator_maps.end());
    return Presheaf(std::move(category), std::move(sets), std::move(maps));
  }

  struct Unchecked {};
  Presheaf(Unchecked, std::shared_ptr<const FiniteCategory> category, std::vector<FinSetObject> sets,
           std::vector<FinSetMap> restrictions)
      : category_(std::move(category)), sets_(std::move(sets)), maps_(std::move(restrictions)) {}

  const FiniteCategory& category() const { return *category_; }
  const std::shared_ptr<const FiniteCategory>& category_ptr() const { return category_; }
  const FinSetObject& at(std::size_t object) const { return sets_.at(object); }
  const std::vector<FinSetObject>& sets() const { return sets_; }
  const FinSetMap& restriction(std::size_t arrow) const { return maps_.at(arrow); }
  const std::vector<FinSetMap>& restrictions() const { return maps_; }

  std::size_t max_component() const {
    std::size_t m = 0;
    for (const auto& s : sets_) m = std::max(m, s.size());
    return m;
  }

  friend bool operator==(const Presheaf& a, const Presheaf& b) {
    if (a.category_ != b.category_ && !(*a.category_ == *b.category_)) return false;
    return a.sets_ == b.sets_ && a.maps_ == b.maps_;
  }

 private:
  void validate() const {
    const auto& cat = *category_;
    if (sets_.size() != cat.object_count() || maps_.size() != cat.arrow_count())
      throw InvalidArgument("presheaf data does not match its index category");
    const FinSet set;
    for (std::size_t a = 0; a < cat.arrow_count(); ++a) {
      const auto& arr = cat.arrow(a);
      if (!(maps_[a].source() == sets_[arr.cod]) || !(maps_[a].target() == sets_[arr.dom]))
        throw InvalidArgument("restriction along " + arr.name + " has the wrong endpoints");
    }
    for (std::size_t i = 0; i < cat.object_count(); ++i)
      if (!(maps_[i] == set.identity(sets_[i])))
        throw InvalidArgument("identity " + cat.arrow(i).name + " is not sent to an identity");
    for (std::size_t g = 0; g < cat.arrow_count(); ++g)
      for (std::size_t f = 0; f < cat.arrow_count(); ++f)
        if (cat.arrow(f).cod == cat.arrow(g).dom &&
            !(maps_[cat.compose(g, f)] == set.compose(maps_[f], maps_[g])))
          throw InvalidArgument("functor law fails for " + cat.arrow(g).name + " . " + cat.arrow(f).name);
  }

  std::shared_ptr<const FiniteCategory> category_;
  std::vector<FinSetObject> sets_;
  std::vector<FinSetMap> maps_;
};

/// A natural transformation between presheaves on the same index category.
class NatTrans {
 public:
  NatTrans(Presheaf source, Presheaf target, std::vector<FinSetMap> components)
      : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
    const auto& cat = source_.category();
    if (components_.size() != cat.object_count()) throw InvalidArgument("one component per object is required");
    const FinSet set;
    for (std::size_t j = 0; j < cat.object_count(); ++j)
      if (!(components_[j].source() == source_.at(j)) || !(components_[j].target() == target_.at(j)))
        throw InvalidArgument("component at " + cat.object(j) + " has the wrong endpoints");
    for (std::size_t a = 0; a < cat.arrow_count(); ++a) {
      const auto& arr = cat.arrow(a);
      if (!(set.compose(target_.restriction(a), components_[arr.cod]) ==
            set.compose(components_[arr.dom], source_.restriction(a))))
        throw InvalidArgument("naturality fails along " + arr.name);
    }
  }

  struct Unchecked {};
  NatTrans(Unchecked, Presheaf source, Presheaf target, std::vector<FinSetMap> components)
      : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {}

  const Presheaf& source() const { return source_; }
  const Presheaf& target() const { return target_; }
  const FinSetMap& component(std::size_t j) const { return components_.at(j); }
  const std::vector<FinSetMap>& components() const { return components_; }

  friend bool operator==(const NatTrans& a, const NatTrans& b) {
    return a.components_ == b.components_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  Presheaf source_;
  Presheaf target_;
  std::vector<FinSetMap> components_;
};

namespace detail {

/// Backtracking enumeration of families of per-object tables subject to
/// pairwise constraints between cells. Each cell (object, element) takes a
/// value in [0, domain(object)); a constraint (u, w, check) is evaluated once
/// both cells are assigned.
class CellSearch {
 public:
  using Check = std::function<bool(std::size_t value_u, std::size_t value_w)>;

  explicit CellSearch(std::vector<std::size_t> cells_per_object, std::vector<std::size_t> domain_per_object)
      : domain_(std::move(domain_per_object)) {
    for (std::size_t j = 0; j < cells_per_object.size(); ++j) {
      offset_.push_back(owner_.size());
      for (std::size_t x = 0; x < cells_per_object[j]; ++x) owner_.push_back(j);
    }
    offset_.push_back(owner_.size());
    at_.resize(owner_.size());
  }

  std::size_t cell(std::size_t object, std::size_t element) const { return offset_[object] + element; }

  void constrain(std::size_t u, std::size_t w, Check check) {
    at_[std::max(u, w)].push_back({u, w, std::move(check)});
  }

  /// Calls visit(values) for every consistent assignment, in lexicographic
  /// order. Stops early when visit returns false.
  template <class Visit>
  void run(Visit&& visit) const {
    std::vector<std::size_t> values(owner_.size(), 0);
    if (owner_.empty()) {
      visit(values);
      return;
    }
    for (auto d : domain_)
      (void)d;
    std::size_t pos = 0;
    std::vector<std::size_t> next(owner_.size(), 0);
    while (true) {
      bool placed = false;
      while (next[pos] < domain_[owner_[pos]]) {
        values[pos] = next[pos]++;
        if (consistent(pos, values)) {
          placed = true;
          break;
        }
      }
      if (placed) {
        if (pos + 1 == owner_.size()) {
          if (!visit(values)) return;
        } else {
          ++pos;
          next[pos] = 0;
        }
      } else {
        if (pos == 0) return;
        --pos;
      }
    }
  }

 private:
  struct Constraint {
    std::size_t u;
    std::size_t w;
    Check check;
  };

  bool consistent(std::size_t pos, const std::vector<std::size_t>& values) const {
    for (const auto& c : at_[pos])
      if (!c.check(values[c.u], values[c.w])) return false;
    return true;
  }

  std::vector<std::size_t> domain_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> offset_;
  std::vector<std::vector<Constraint>> at_;
};

}  // namespace detail

/// Every natural transformation P -> Q, in lexicographic order of components.
inline std::vector<NatTrans> natural_transformations(const Presheaf& p, const Presheaf& q) {
  const auto& cat = p.category();
  std::vector<std::size_t> cells, domains;
  for (std::size_t j = 0; j < cat.object_count(); ++j) {
    cells.push_back(p.at(j).size());
    domains.push_back(q.at(j).size());
  }
  detail::CellSearch search(cells, domains);
  for (std::size_t a = cat.object_count(); a < cat.arrow_count(); ++a) {
    const auto& arr = cat.arrow(a);
    const auto& pa = p.restriction(a);
    const auto& qa = q.restriction(a);
    for (std::size_t x = 0; x < p.at(arr.cod).size(); ++x) {
      // theta_dom(P(a) x) = Q(a)(theta_cod(x))
      const auto u = search.cell(arr.cod, x);
      const auto w = search.cell(arr.dom, pa(x));
      search.constrain(u, w, [&qa](std::size_t tu, std::size_t tw) { return qa(tu) == tw; });
    }
  }
  std::vector<NatTrans> out;
  search.run([&](const std::vector<std::size_t>& values) {
    std::vector<FinSetMap> comps;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      const auto begin = values.begin() + static_cast<std::ptrdiff_t>(search.cell(j, 0));
      comps.emplace_back(p.at(j), q.at(j), std::vector<std::size_t>(begin, begin + static_cast<std::ptrdiff_t>(p.at(j).size())));
    }
    out.emplace_back(NatTrans::Unchecked{}, p, q, std::move(comps));
    if (out.size() > kMaxEnumeration) throw ResourceError("hom-set enumeration exceeds the cap");
    return true;
  });
  return out;
}

/// Every presheaf on `category` with all components of size <= max_component,
/// components labeled 0..n-1.
inline std::vector<Presheaf> enumerate_presheaves(const std::shared_ptr<const FiniteCategory>& category,
                                                  std::size_t max_component) {
  const auto& cat = *category;
  std::vector<Presheaf> out;
  std::vector<std::size_t> sizes(cat.object_count(), 0);
  const FinSet set;
  while (true) {
    std::vector<FinSetObject> sets;
    for (auto s : sizes) sets.push_back(FinSetObject::range(s));
    // all choices of generator maps
    std::vector<std::vector<FinSetMap>> choices;
    for (std::size_t a = cat.object_count(); a < cat.arrow_count(); ++a)
      choices.push_back(set.hom(sets[cat.arrow(a).cod], sets[cat.arrow(a).dom]));
    std::vector<std::size_t> pick(choices.size(), 0);
    bool any = std::all_of(choices.begin(), choices.end(), [](const auto& c) { return !c.empty(); });
    while (any) {
      std::vector<FinSetMap> gens;
      for (std::size_t k = 0; k < pick.size(); ++k) gens.push_back(choices[k][pick[k]]);
      try {
        out.push_back(Presheaf::from_generators(category, sets, gens));
      } catch (const InvalidArgument&) {
      }
      std::size_t k = pick.size();
      while (k > 0 && ++pick[k - 1] == choices[k - 1].size()) pick[--k] = 0;
      if (k == 0) break;
    }
    std::size_t j = sizes.size();
    while (j > 0 && sizes[j - 1] == max_component) sizes[--j] = 0;
    if (j == 0) break;
    ++sizes[j - 1];
  }
  return out;
}

/// Optional display hooks for a presheaf topos.
struct PresheafOptions {
  /// Label for the sieve on `object` with arrow bitmask `mask`; empty means default.
  std::function<std::string(std::size_t object, std::uint64_t mask)> sieve_label;
  /// Display name of a global truth value 1 -> Omega; empty means default.
  std::function<std::string(const NatTrans&)> truth_value_name;
  /// Size caps for exponentials.
  std::size_t max_index_objects = 4;
  std::size_t max_component = 4;
};

class PresheafTopos {
 public:
  using Object = Presheaf;
  using Morphism = NatTrans;

  explicit PresheafTopos(FiniteCategory index, PresheafOptions options = {})
      : PresheafTopos(std::make_shared<const FiniteCategory>(std::move(index)), std::move(options)) {}

  explicit PresheafTopos(std::shared_ptr<const FiniteCategory> index, PresheafOptions options = {})
      : cat_(std::move(index)), options_(std::move(options)) {
    build_terminal_and_omega();
  }

  std::string name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const FiniteCategory& index() const { return *cat_; }
  const std::shared_ptr<const FiniteCategory>& index_ptr() const { return cat_; }

  /// Presheaf from per-object sets and maps for the non-identity arrows.
  Presheaf presheaf(std::vector<FinSetObject> sets, const std::vector<FinSetMap>& generator_maps) const {
    return Presheaf::from_generators(cat_, std::move(sets), generator_maps);
  }

  Object terminal() const { return terminal_; }
  Object initial() const {
    std::vector<FinSetObject> sets(cat_->object_count());
    return constant_presheaf(sets);
  }

  Morphism identity(const Object& a) const {
    std::vector<FinSetMap> comps;
    for (const auto& s : a.sets()) comps.push_back(set_.identity(s));
    return NatTrans(NatTrans::Unchecked{}, a, a, std::move(comps));
  }

  Morphism compose(const Morphism& f, const Morphism& g) const {
    if (!(g.target() == f.source()))
      throw CompositionError("cannot compose " + describe(f.source()) + " -> " + describe(f.target()) + " after " +
                             describe(g.source()) + " -> " + describe(g.target()));
    std::vector<FinSetMap> comps;
    for (std::size_t j = 0; j < cat_->object_count(); ++j) comps.push_back(set_.compose(f.component(j), g.component(j)));
    return NatTrans(NatTrans::Unchecked{}, g.source(), f.target(), std::move(comps));
  }

  Morphism to_terminal(const Object& a) const {
    std::vector<FinSetMap> comps;
    for (const auto& s : a.sets()) comps.push_back(set_.to_terminal(s));
    return NatTrans(NatTrans::Unchecked{}, a, terminal_, std::move(comps));
  }

  Morphism from_initial(const Object& a) const {
    const auto zero = initial();
    std::vector<FinSetMap> comps;
    for (const auto& s : a.sets()) comps.push_back(set_.from_initial(s));
    return NatTrans(NatTrans::Unchecked{}, zero, a, std::move(comps));
  }

  ProductCone<Object, Morphism> product(const Object& a, const Object& b) const {
    const auto& cat = *cat_;
    std::vector<ProductCone<FinSetObject, FinSetMap>> cones;
    std::vector<FinSetObject> sets;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      cones.push_back(set_.product(a.at(j), b.at(j)));
      sets.push_back(cones.back().apex);
    }
    std::vector<FinSetMap> maps;
    for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      const auto& from = cones[arr.cod];
      maps.push_back(cones[arr.dom].pair(set_.compose(a.restriction(k), from.pi1),
                                         set_.compose(b.restriction(k), from.pi2)));
    }
    Presheaf apex(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
    std::vector<FinSetMap> p1, p2;
    for (const auto& c : cones) {
      p1.push_back(c.pi1);
      p2.push_back(c.pi2);
    }
    return {apex, NatTrans(NatTrans::Unchecked{}, apex, a, std::move(p1)),
            NatTrans(NatTrans::Unchecked{}, apex, b, std::move(p2)),
            [apex, a, b, cones](const Morphism& f, const Morphism& g) {
              if (!(f.source() == g.source()) || !(f.target() == a) || !(g.target() == b))
                throw CompositionError("product pairing: legs do not form a cone");
              std::vector<FinSetMap> comps;
              for (std::size_t j = 0; j < cones.size(); ++j) comps.push_back(cones[j].pair(f.component(j), g.component(j)));
              return NatTrans(NatTrans::Unchecked{}, f.source(), apex, std::move(comps));
            }};
  }

  CoproductCocone<Object, Morphism> coproduct(const Object& a, const Object& b) const {
    const auto& cat = *cat_;
    std::vector<CoproductCocone<FinSetObject, FinSetMap>> cocones;
    std::vector<FinSetObject> sets;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      cocones.push_back(set_.coproduct(a.at(j), b.at(j)));
      sets.push_back(cocones.back().apex);
    }
    std::vector<FinSetMap> maps;
    for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      const auto& to = cocones[arr.dom];
      maps.push_back(cocones[arr.cod].copair(set_.compose(to.in1, a.restriction(k)),
                                             set_.compose(to.in2, b.restriction(k))));
    }
    Presheaf apex(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
    std::vector<FinSetMap> i1, i2;
    for (const auto& c : cocones) {
      i1.push_back(c.in1);
      i2.push_back(c.in2);
    }
    return {apex, NatTrans(NatTrans::Unchecked{}, a, apex, std::move(i1)),
            NatTrans(NatTrans::Unchecked{}, b, apex, std::move(i2)),
            [apex, a, b, cocones](const Morphism& f, const Morphism& g) {
              if (!(f.target() == g.target()) || !(f.source() == a) || !(g.source() == b))
                throw CompositionError("coproduct copairing: legs do not form a cocone");
              std::vector<FinSetMap> comps;
              for (std::size_t j = 0; j < cocones.size(); ++j)
                comps.push_back(cocones[j].copair(f.component(j), g.component(j)));
              return NatTrans(NatTrans::Unchecked{}, apex, f.target(), std::move(comps));
            }};
  }

  PullbackCone<Object, Morphism> pullback(const Morphism& f, const Morphism& g) const {
    if (!(f.target() == g.target())) throw CompositionError("pullback: maps have different targets");
    const auto& cat = *cat_;
    const auto& b = f.source();
    const auto& c = g.source();
    std::vector<PullbackCone<FinSetObject, FinSetMap>> cones;
    std::vector<FinSetObject> sets;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      cones.push_back(set_.pullback(f.component(j), g.component(j)));
      sets.push_back(cones.back().apex);
    }
    std::vector<FinSetMap> maps;
    for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      const auto& from = cones[arr.cod];
      maps.push_back(cones[arr.dom].mediate(set_.compose(b.restriction(k), from.p1),
                                            set_.compose(c.restriction(k), from.p2)));
    }
    Presheaf apex(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
    std::vector<FinSetMap> p1, p2;
    for (const auto& cone : cones) {
      p1.push_back(cone.p1);
      p2.push_back(cone.p2);
    }
    return {apex, NatTrans(NatTrans::Unchecked{}, apex, b, std::move(p1)),
            NatTrans(NatTrans::Unchecked{}, apex, c, std::move(p2)),
            [apex, cones](const Morphism& h, const Morphism& k) {
              if (!(h.source() == k.source())) throw PreconditionError("pullback mediator: legs differ in source");
              std::vector<FinSetMap> comps;
              for (std::size_t j = 0; j < cones.size(); ++j) comps.push_back(cones[j].mediate(h.component(j), k.component(j)));
              return NatTrans(NatTrans::Unchecked{}, h.source(), apex, std::move(comps));
            }};
  }

  EqualizerCone<Object, Morphism> equalizer(const Morphism& f, const Morphism& g) const {
    if (!(f.source() == g.source()) || !(f.target() == g.target()))
      throw CompositionError("equalizer: maps are not parallel");
    const auto& cat = *cat_;
    const auto& a = f.source();
    std::vector<EqualizerCone<FinSetObject, FinSetMap>> cones;
    std::vector<FinSetObject> sets;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      cones.push_back(set_.equalizer(f.component(j), g.component(j)));
      sets.push_back(cones.back().apex);
    }
    std::vector<FinSetMap> maps;
    for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      maps.push_back(cones[arr.dom].mediate(set_.compose(a.restriction(k), cones[arr.cod].inclusion)));
    }
    Presheaf apex(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
    std::vector<FinSetMap> incl;
    for (const auto& cone : cones) incl.push_back(cone.inclusion);
    return {apex, NatTrans(NatTrans::Unchecked{}, apex, a, std::move(incl)), [apex, cones](const Morphism& h) {
              std::vector<FinSetMap> comps;
              for (std::size_t j = 0; j < cones.size(); ++j) comps.push_back(cones[j].mediate(h.component(j)));
              return NatTrans(NatTrans::Unchecked{}, h.source(), apex, std::move(comps));
            }};
  }

  CoequalizerCocone<Object, Morphism> coequalizer(const Morphism& f, const Morphism& g) const {
    if (!(f.source() == g.source()) || !(f.target() == g.target()))
      throw CompositionError("coequalizer: maps are not parallel");
    const auto& cat = *cat_;
    const auto& b = f.target();
    std::vector<CoequalizerCocone<FinSetObject, FinSetMap>> cocones;
    std::vector<FinSetObject> sets;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      cocones.push_back(set_.coequalizer(f.component(j), g.component(j)));
      sets.push_back(cocones.back().apex);
    }
    std::vector<FinSetMap> maps;
    for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      maps.push_back(cocones[arr.cod].mediate(set_.compose(cocones[arr.dom].projection, b.restriction(k))));
    }
    Presheaf apex(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
    std::vector<FinSetMap> proj;
    for (const auto& c : cocones) proj.push_back(c.projection);
    return {apex, NatTrans(NatTrans::Unchecked{}, b, apex, std::move(proj)), [apex, cocones](const Morphism& h) {
              std::vector<FinSetMap> comps;
              for (std::size_t j = 0; j < cocones.size(); ++j) comps.push_back(cocones[j].mediate(h.component(j)));
              return NatTrans(NatTrans::Unchecked{}, apex, h.target(), std::move(comps));
            }};
  }

  /// The representable y(j) = Hom(-, j), elements labeled by arrow names.
  Presheaf representable(std::size_t j) const {
    const auto& cat = *cat_;
    std::vector<FinSetObject> sets;
    std::vector<std::vector<std::size_t>> into(cat.object_count());
    for (std::size_t i = 0; i < cat.object_count(); ++i) {
      into[i] = cat.arrows_between(i, j);
      std::vector<std::string> labels;
      for (auto a : into[i]) labels.push_back(cat.arrow(a).name);
      sets.emplace_back(std::move(labels));
    }
    std::vector<FinSetMap> maps;
    for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      std::vector<std::size_t> table;
      for (auto a : into[arr.cod]) {
        const auto composite = cat.compose(a, k);
        table.push_back(static_cast<std::size_t>(
            std::find(into[arr.dom].begin(), into[arr.dom].end(), composite) - into[arr.dom].begin()));
      }
      maps.emplace_back(sets[arr.cod], sets[arr.dom], std::move(table));
    }
    return Presheaf(Presheaf::Unchecked{}, cat_, std::move(sets), std::move(maps));
  }

  /// (B^A)(j) = Nat(y(j) x A, B). Elements are labeled by the serialized
  /// transformation.
  Exponential<Object, Morphism> exponential(const Object& a, const Object& b) const {
    const auto& cat = *cat_;
    if (cat.object_count() > options_.max_index_objects)
      throw ResourceError("presheaf exponentials support index categories with at most " +
                          std::to_string(options_.max_index_objects) + " objects");
    if (a.max_component() > options_.max_component || b.max_component() > options_.max_component)
      throw ResourceError("presheaf exponentials support components of size at most " +
                          std::to_string(options_.max_component));

    struct Stage {
      Presheaf domain;  // y(j) x A
      std::vector<NatTrans> elements;
    };
    auto stages = std::make_shared<std::vector<Stage>>();
    std::vector<FinSetObject> sets;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      auto domain = product(representable(j), a).apex;
      auto elements = natural_transformations(domain, b);
      std::vector<std::string> labels;
      for (const auto& theta : elements) labels.push_back(describe(theta));
      sets.emplace_back(std::move(labels));
      stages->push_back({std::move(domain), std::move(elements)});
    }
    // Restriction along c : j' -> j sends theta to theta'_i(a', x) = theta_i(c a', x).
    std::vector<FinSetMap> maps;
    for (std::size_t c = 0; c < cat.arrow_count(); ++c) {
      const auto& arr = cat.arrow(c);
      const auto& from = (*stages)[arr.cod];
      const auto& to = (*stages)[arr.dom];
      std::vector<std::size_t> table;
      for (const auto& theta : from.elements) {
        std::vector<FinSetMap> comps;
        for (std::size_t i = 0; i < cat.object_count(); ++i) {
          const auto to_arrows = cat.arrows_between(i, arr.dom);
          const auto from_arrows = cat.arrows_between(i, arr.cod);
          const std::size_t width = a.at(i).size();
          std::vector<std::size_t> comp(to_arrows.size() * width);
          for (std::size_t p = 0; p < to_arrows.size(); ++p) {
            const auto composite = cat.compose(c, to_arrows[p]);
            const auto q = static_cast<std::size_t>(std::find(from_arrows.begin(), from_arrows.end(), composite) -
                                                    from_arrows.begin());
            for (std::size_t x = 0; x < width; ++x) comp[p * width + x] = theta.component(i)(q * width + x);
          }
          comps.emplace_back(to.domain.at(i), b.at(i), std::move(comp));
        }
        const NatTrans restricted(NatTrans::Unchecked{}, to.domain, b, std::move(comps));
        table.push_back(sets[arr.dom].at(describe(restricted)));
      }
      maps.emplace_back(sets[arr.cod], sets[arr.dom], std::move(table));
    }
    Presheaf exp(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
    auto cone = product(exp, a);
    // ev_j(theta, x) = theta_j(id_j, x)
    std::vector<FinSetMap> ev;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      const auto arrows = cat.arrows_between(j, j);
      const auto id_pos = static_cast<std::size_t>(std::find(arrows.begin(), arrows.end(), cat.identity(j)) - arrows.begin());
      const std::size_t width = a.at(j).size();
      std::vector<std::size_t> table(cone.apex.at(j).size());
      for (std::size_t t = 0; t < exp.at(j).size(); ++t)
        for (std::size_t x = 0; x < width; ++x)
          table[t * width + x] = (*stages)[j].elements[t].component(j)(id_pos * width + x);
      ev.emplace_back(cone.apex.at(j), b.at(j), std::move(table));
    }
    NatTrans evaluation(NatTrans::Unchecked{}, cone.apex, b, std::move(ev));
    auto self = *this;
    return {exp, evaluation, cone, [self, exp, a, b, stages](const Object& c, const Morphism& g) {
              const auto& cat = self.index();
              const auto domain = self.product(c, a).apex;
              if (!(g.source() == domain) || !(g.target() == b))
                throw CompositionError("curry: map must go from C x A to B");
              // curry(g)_j(z) = theta with theta_i(a', x) = g_i(C(a')(z), x)
              std::vector<FinSetMap> comps;
              for (std::size_t j = 0; j < cat.object_count(); ++j) {
                std::vector<std::size_t> table;
                for (std::size_t z = 0; z < c.at(j).size(); ++z) {
                  std::vector<FinSetMap> theta;
                  for (std::size_t i = 0; i < cat.object_count(); ++i) {
                    const auto arrows = cat.arrows_between(i, j);
                    const std::size_t width = a.at(i).size();
                    std::vector<std::size_t> comp(arrows.size() * width);
                    for (std::size_t p = 0; p < arrows.size(); ++p) {
                      const auto restricted = c.restriction(arrows[p])(z);
                      for (std::size_t x = 0; x < width; ++x) comp[p * width + x] = g.component(i)(restricted * width + x);
                    }
                    theta.emplace_back((*stages)[j].domain.at(i), b.at(i), std::move(comp));
                  }
                  const NatTrans element(NatTrans::Unchecked{}, (*stages)[j].domain, b, std::move(theta));
                  table.push_back(exp.at(j).at(self.describe(element)));
                }
                comps.emplace_back(c.at(j), exp.at(j), std::move(table));
              }
              return NatTrans(NatTrans::Unchecked{}, c, exp, std::move(comps));
            }};
  }

  Object omega() const { return omega_; }
  Morphism truth() const { return truth_; }

  /// Sieves on `object` as arrow bitmasks, in the order of Omega(object).
  const std::vector<std::uint64_t>& sieves(std::size_t object) const { return sieves_->at(object); }

  /// chi_j(y) = { a : i -> j | B(a)(y) lies in the image of m_i }.
  Morphism classify(const Morphism& m) const {
    const auto& cat = *cat_;
    const auto& b = m.target();
    std::vector<std::vector<bool>> in_image(cat.object_count());
    for (std::size_t i = 0; i < cat.object_count(); ++i) {
      in_image[i].assign(b.at(i).size(), false);
      for (auto t : m.component(i).table()) in_image[i][t] = true;
    }
    std::vector<FinSetMap> comps;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      std::vector<std::size_t> table;
      for (std::size_t y = 0; y < b.at(j).size(); ++y) {
        std::uint64_t mask = 0;
        for (auto a : cat.arrows_into(j))
          if (in_image[cat.arrow(a).dom][b.restriction(a)(y)]) mask |= std::uint64_t{1} << a;
        table.push_back(sieve_index(j, mask));
      }
      comps.emplace_back(b.at(j), omega_.at(j), std::move(table));
    }
    return NatTrans(NatTrans::Unchecked{}, b, omega_, std::move(comps));
  }

  bool is_monic(const Morphism& f) const {
    for (const auto& c : f.components())
      if (!set_.is_monic(c)) return false;
    return true;
  }

  bool is_epi(const Morphism& f) const {
    for (const auto& c : f.components())
      if (!set_.is_epi(c)) return false;
    return true;
  }

  /// Pointwise image, which is closed under restriction by naturality.
  Factorization<Morphism> factorize(const Morphism& f) const {
    const auto& cat = *cat_;
    const auto& b = f.target();
    std::vector<Factorization<FinSetMap>> parts;
    std::vector<FinSetObject> sets;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      parts.push_back(set_.factorize(f.component(j)));
      sets.push_back(parts.back().im.source());
    }
    std::vector<FinSetMap> maps;
    for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      const auto& im_cod = parts[arr.cod].im;
      const auto& im_dom = parts[arr.dom].im;
      std::vector<std::size_t> slot(b.at(arr.dom).size(), 0);
      for (std::size_t p = 0; p < im_dom.source().size(); ++p) slot[im_dom(p)] = p;
      std::vector<std::size_t> table;
      for (std::size_t p = 0; p < im_cod.source().size(); ++p) table.push_back(slot[b.restriction(k)(im_cod(p))]);
      maps.emplace_back(sets[arr.cod], sets[arr.dom], std::move(table));
    }
    Presheaf image(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
    std::vector<FinSetMap> coim, im;
    for (const auto& p : parts) {
      coim.push_back(p.coim);
      im.push_back(p.im);
    }
    return {NatTrans(NatTrans::Unchecked{}, f.source(), image, std::move(coim)),
            NatTrans(NatTrans::Unchecked{}, image, b, std::move(im))};
  }

  std::vector<Morphism> hom(const Object& a, const Object& b) const { return natural_transformations(a, b); }

  /// Every subpresheaf as a pointwise subset inclusion.
  std::vector<Morphism> subobjects(const Object& b) const {
    const auto& cat = *cat_;
    std::vector<std::size_t> cells, domains;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      cells.push_back(b.at(j).size());
      domains.push_back(2);
    }
    detail::CellSearch search(cells, domains);
    for (std::size_t k = cat.object_count(); k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      for (std::size_t y = 0; y < b.at(arr.cod).size(); ++y) {
        // y in S(cod) implies B(k)(y) in S(dom); value 1 means "in".
        search.constrain(search.cell(arr.cod, y), search.cell(arr.dom, b.restriction(k)(y)),
                         [](std::size_t in_u, std::size_t in_w) { return !(in_u == 1 && in_w == 0); });
      }
    }
    std::vector<Morphism> out;
    search.run([&](const std::vector<std::size_t>& values) {
      std::vector<FinSetObject> sets;
      std::vector<FinSetMap> incl;
      for (std::size_t j = 0; j < cat.object_count(); ++j) {
        std::vector<std::string> labels;
        std::vector<std::size_t> table;
        for (std::size_t y = 0; y < b.at(j).size(); ++y)
          if (values[search.cell(j, y)] == 1) {
            labels.push_back(b.at(j).label(y));
            table.push_back(y);
          }
        sets.emplace_back(std::move(labels));
        incl.emplace_back(sets.back(), b.at(j), std::move(table));
      }
      std::vector<FinSetMap> maps;
      for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
        const auto& arr = cat.arrow(k);
        std::vector<std::size_t> table;
        for (auto y : incl[arr.cod].table()) table.push_back(sets[arr.dom].at(b.at(arr.dom).label(b.restriction(k)(y))));
        maps.emplace_back(sets[arr.cod], sets[arr.dom], std::move(table));
      }
      Presheaf sub(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
      out.emplace_back(NatTrans::Unchecked{}, sub, b, std::move(incl));
      return true;
    });
    return out;
  }

  std::string describe(const Object& a) const {
    const auto& cat = *cat_;
    std::string out = "{";
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      if (j) out += ", ";
      out += cat.object(j) + ":" + a.at(j).to_string();
    }
    for (std::size_t k = cat.object_count(); k < cat.arrow_count(); ++k) {
      const auto& r = a.restriction(k);
      out += "; " + cat.arrow(k).name + ":" + graph_label(r.source(), r.target(), r.table());
    }
    return out + "}";
  }

  std::string describe(const Morphism& f) const {
    const auto& cat = *cat_;
    std::string out = "{";
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      if (j) out += ", ";
      const auto& c = f.component(j);
      out += cat.object(j) + ":" + graph_label(c.source(), c.target(), c.table());
    }
    return out + "}";
  }

  std::string truth_value_name(const Morphism& v) const {
    if (options_.truth_value_name) return options_.truth_value_name(v);
    const auto& cat = *cat_;
    std::string out;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      if (j) out += ",";
      out += cat.object(j) + "=" + v.component(j).target().label(v.component(j)(0));
    }
    return out;
  }

 private:
  Presheaf constant_presheaf(const std::vector<FinSetObject>& sets) const {
    const auto& cat = *cat_;
    std::vector<FinSetMap> maps;
    for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      std::vector<std::size_t> table(sets[arr.cod].size());
      for (std::size_t x = 0; x < table.size(); ++x) table[x] = x;
      maps.emplace_back(sets[arr.cod], sets[arr.dom], std::move(table));
    }
    return Presheaf(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
  }

  std::string sieve_label(std::size_t object, std::uint64_t mask) const {
    if (options_.sieve_label) {
      auto custom = options_.sieve_label(object, mask);
      if (!custom.empty()) return custom;
    }
    std::string out = "{";
    bool first = true;
    for (std::size_t a = 0; a < cat_->arrow_count(); ++a)
      if (mask & (std::uint64_t{1} << a)) {
        if (!first) out += ",";
        out += cat_->arrow(a).name;
        first = false;
      }
    return out + "}";
  }

  std::size_t sieve_index(std::size_t object, std::uint64_t mask) const {
    const auto& list = (*sieves_)[object];
    const auto it = std::find(list.begin(), list.end(), mask);
    if (it == list.end()) throw ClassifierViolation("computed family of arrows is not a sieve");
    return static_cast<std::size_t>(it - list.begin());
  }

  void build_terminal_and_omega() {
    const auto& cat = *cat_;
    terminal_ = constant_presheaf(std::vector<FinSetObject>(cat.object_count(), set_.terminal()));
    auto sieves = std::make_shared<std::vector<std::vector<std::uint64_t>>>(cat.object_count());
    std::vector<FinSetObject> sets;
    for (std::size_t j = 0; j < cat.object_count(); ++j) {
      const auto into = cat.arrows_into(j);
      // Enumerate subsets of arrows into j, largest first, keeping the closed ones.
      const std::uint64_t count = std::uint64_t{1} << into.size();
      for (std::uint64_t bits = count; bits-- > 0;) {
        std::uint64_t mask = 0;
        for (std::size_t p = 0; p < into.size(); ++p)
          if (bits & (std::uint64_t{1} << p)) mask |= std::uint64_t{1} << into[p];
        bool closed = true;
        for (auto s : into) {
          if (!(mask & (std::uint64_t{1} << s))) continue;
          for (std::size_t b = 0; b < cat.arrow_count() && closed; ++b)
            if (cat.arrow(b).cod == cat.arrow(s).dom && !(mask & (std::uint64_t{1} << cat.compose(s, b))))
              closed = false;
        }
        if (closed) (*sieves)[j].push_back(mask);
      }
      std::vector<std::string> labels;
      for (auto mask : (*sieves)[j]) labels.push_back(sieve_label(j, mask));
      sets.emplace_back(std::move(labels));
    }
    sieves_ = sieves;
    // Omega(a : i -> j)(S) = { b into i : a b in S }
    std::vector<FinSetMap> maps;
    for (std::size_t k = 0; k < cat.arrow_count(); ++k) {
      const auto& arr = cat.arrow(k);
      std::vector<std::size_t> table;
      for (auto mask : (*sieves_)[arr.cod]) {
        std::uint64_t pulled = 0;
        for (auto b : cat.arrows_into(arr.dom))
          if (mask & (std::uint64_t{1} << cat.compose(k, b))) pulled |= std::uint64_t{1} << b;
        table.push_back(sieve_index(arr.dom, pulled));
      }
      maps.emplace_back(sets[arr.cod], sets[arr.dom], std::move(table));
    }
    omega_ = Presheaf(Presheaf::Unchecked{}, cat_, sets, std::move(maps));
    std::vector<FinSetMap> t;
    for (std::size_t j = 0; j < cat.object_count(); ++j) t.emplace_back(set_.terminal(), sets[j], std::vector<std::size_t>{0});
    truth_ = NatTrans(NatTrans::Unchecked{}, terminal_, omega_, std::move(t));
  }

  FinSet set_;
  std::shared_ptr<const FiniteCategory> cat_;
  PresheafOptions options_;
  std::string name_ = "presheaf";
  std::shared_ptr<const std::vector<std::vector<std::uint64_t>>> sieves_;
  Presheaf terminal_{Presheaf::Unchecked{}, nullptr, {}, {}};
  Presheaf omega_{Presheaf::Unchecked{}, nullptr, {}, {}};
  NatTrans truth_{NatTrans::Unchecked{}, terminal_, terminal_, {}};
};

static_assert(Topos<PresheafTopos>);

/// The arrow topos Set^(->): presheaves on the interval, i.e. functions
/// P(dom) -> P(cod). Omega is {T,C,F} -> {T,F}; C is the sieve {f} on dom,
/// the value "false now, true at cod".
inline PresheafTopos arrow_topos() {
  auto cat = std::make_shared<const FiniteCategory>(FiniteCategory::interval());
  PresheafOptions options;
  const auto f = cat->arrow_index("f");
  options.sieve_label = [f](std::size_t object, std::uint64_t mask) -> std::string {
    const std::uint64_t all = object == 0 ? ((std::uint64_t{1} << 0) | (std::uint64_t{1} << f)) : (std::uint64_t{1} << 1);
    if (mask == all) return "T";
    if (mask == 0) return "F";
    return "C";
  };
  options.truth_value_name = [](const NatTrans& v) { return v.component(0).target().label(v.component(0)(0)); };
  PresheafTopos topos(cat, std::move(options));
  topos.set_name("arrow");
  return topos;
}

/// The object of the arrow topos given by a function f : A -> B.
inline Presheaf arrow_object(const PresheafTopos& topos, const FinSetMap& f) {
  return topos.presheaf({f.source(), f.target()}, {f});
}

/// The function P(dom) -> P(cod) underlying an arrow-topos object.
inline FinSetMap arrow_function(const Presheaf& p) { return p.restriction(p.category().arrow_index("f")); }

/// A commuting square top : A -> C, bottom : B -> D as a map of arrow objects.
inline NatTrans arrow_morphism(const Presheaf& from, const Presheaf& to, const FinSetMap& top, const FinSetMap& bottom) {
  return NatTrans(from, to, {top, bottom});
}

}  // namespace topos
