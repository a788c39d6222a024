#pragma once

// The category of finite sets, with canonical labels for every constructed
// object so that equal constructions compare equal structurally.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topos/category.hpp"
#include "topos/error.hpp"

namespace topos {

/// An ordered list of distinct labels. Copies share the immutable payload.
class FinSetObject {
 public:
  FinSetObject() : data_(empty_data()) {}

  explicit FinSetObject(std::vector<std::string> labels) {
    auto data = std::make_shared<Data>();
    data->labels = std::move(labels);
    data->index.reserve(data->labels.size());
    for (std::size_t i = 0; i < data->labels.size(); ++i) {
      if (!data->index.emplace(data->labels[i], i).second)
        throw InvalidArgument("duplicate label '" + data->labels[i] + "'");
    }
    data_ = std::move(data);
  }

  FinSetObject(std::initializer_list<std::string> labels)
      : FinSetObject(std::vector<std::string>(labels)) {}

  /// {0, 1, ..., n-1}
  static FinSetObject range(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return FinSetObject(std::move(labels));
  }

  std::size_t size() const { return data_->labels.size(); }
  bool empty() const { return data_->labels.empty(); }
  const std::vector<std::string>& labels() const { return data_->labels; }
  const std::string& label(std::size_t i) const { return data_->labels.at(i); }

  std::optional<std::size_t> index_of(std::string_view label) const {
    auto it = data_->index.find(std::string(label));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  std::size_t at(std::string_view label) const {
    if (auto i = index_of(label)) return *i;
    throw InvalidArgument("'" + std::string(label) + "' is not an element of " + to_string());
  }

  bool contains(std::string_view label) const { return index_of(label).has_value(); }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) out += ",";
      out += label(i);
    }
    return out + "}";
  }

  friend bool operator==(const FinSetObject& a, const FinSetObject& b) {
    return a.data_ == b.data_ || a.data_->labels == b.data_->labels;
  }

 private:
  struct Data {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> index;
  };

  static std::shared_ptr<const Data> empty_data() {
    static const auto empty = std::make_shared<const Data>();
    return empty;
  }

  std::shared_ptr<const Data> data_;
};

/// A total function between finite sets, stored as an index table.
class FinSetMap {
 public:
  FinSetMap(FinSetObject source, FinSetObject target, std::vector<std::size_t> table)
      : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
    if (table_.size() != source_.size())
      throw InvalidArgument("map table is not total on " + source_.to_string());
    for (auto t : table_)
      if (t >= target_.size()) throw InvalidArgument("map table leaves " + target_.to_string());
  }

  /// Builds a map from (source label, target label) entries; must be total.
  static FinSetMap from_labels(const FinSetObject& source, const FinSetObject& target,
                               const std::vector<std::pair<std::string, std::string>>& entries) {
    std::vector<std::optional<std::size_t>> slots(source.size());
    for (const auto& [from, to] : entries) {
      const auto i = source.at(from);
      const auto j = target.at(to);
      if (slots[i] && *slots[i] != j) throw InvalidArgument("conflicting entries for '" + from + "'");
      slots[i] = j;
    }
    std::vector<std::size_t> table(source.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i]) throw InvalidArgument("map is undefined on '" + source.label(i) + "'");
      table[i] = *slots[i];
    }
    return FinSetMap(source, target, std::move(table));
  }

  const FinSetObject& source() const { return source_; }
  const FinSetObject& target() const { return target_; }
  const std::vector<std::size_t>& table() const { return table_; }

  std::size_t operator()(std::size_t i) const { return table_.at(i); }
  const std::string& apply(std::string_view label) const { return target_.label(table_[source_.at(label)]); }

  friend bool operator==(const FinSetMap& a, const FinSetMap& b) {
    return a.table_ == b.table_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  FinSetObject source_;
  FinSetObject target_;
  std::vector<std::size_t> table_;
};

/// Canonical product label "(a,b)".
inline std::string pair_label(std::string_view a, std::string_view b) {
  std::string out;
  out.reserve(a.size() + b.size() + 3);
  out += '(';
  out += a;
  out += ',';
  out += b;
  out += ')';
  return out;
}

/// Serialized graph "{a:f(a),...}" used to label exponential elements.
inline std::string graph_label(const FinSetObject& source, const FinSetObject& target,
                               std::span<const std::size_t> table) {
  std::string out = "{";
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i) out += ',';
    out += source.label(i);
    out += ':';
    out += target.label(table[i]);
  }
  return out + "}";
}

/// Upper bound on hom-set and exponential sizes before ResourceError.
inline constexpr std::uint64_t kMaxEnumeration = std::uint64_t{1} << 20;

inline std::uint64_t checked_power(std::size_t base, std::size_t exponent) {
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    result *= base;
    if (result > kMaxEnumeration)
      throw ResourceError("enumeration of " + std::to_string(base) + "^" + std::to_string(exponent) +
                          " maps exceeds the cap");
    if (result == 0) return 0;
  }
  return result;
}

/// The topos of finite sets. Stateless; every construction is deterministic.
class FinSet {
 public:
  using Object = FinSetObject;
  using Morphism = FinSetMap;

  std::string name() const { return "finset"; }

  Object terminal() const {
    static const Object one{"*"};
    return one;
  }
  Object initial() const { return Object{}; }

  Morphism identity(const Object& a) const {
    std::vector<std::size_t> table(a.size());
    std::iota(table.begin(), table.end(), std::size_t{0});
    return Morphism(a, a, std::move(table));
  }

  Morphism compose(const Morphism& f, const Morphism& g) const {
    if (!(g.target() == f.source()))
      throw CompositionError("cannot compose " + f.source().to_string() + " -> " + f.target().to_string() +
                             " after " + g.source().to_string() + " -> " + g.target().to_string());
    std::vector<std::size_t> table(g.source().size());
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = f(g(i));
    return Morphism(g.source(), f.target(), std::move(table));
  }

  Morphism to_terminal(const Object& a) const { return Morphism(a, terminal(), std::vector<std::size_t>(a.size(), 0)); }
  Morphism from_initial(const Object& a) const { return Morphism(initial(), a, {}); }

  /// Constant map onto the element with index `value`.
  Morphism constant(const Object& source, const Object& target, std::size_t value) const {
    return Morphism(source, target, std::vector<std::size_t>(source.size(), value));
  }

  /// Global element 1 -> a picking `label`.
  Morphism element(const Object& a, std::string_view label) const { return Morphism(terminal(), a, {a.at(label)}); }

  ProductCone<Object, Morphism> product(const Object& a, const Object& b) const {
    std::vector<std::string> labels;
    labels.reserve(a.size() * b.size());
    for (const auto& x : a.labels())
      for (const auto& y : b.labels()) labels.push_back(pair_label(x, y));
    Object apex(std::move(labels));
    std::vector<std::size_t> p1(apex.size()), p2(apex.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        p1[i * b.size() + j] = i;
        p2[i * b.size() + j] = j;
      }
    const std::size_t width = b.size();
    return {apex, Morphism(apex, a, std::move(p1)), Morphism(apex, b, std::move(p2)),
            [apex, a, b, width](const Morphism& f, const Morphism& g) {
              if (!(f.source() == g.source()) || !(f.target() == a) || !(g.target() == b))
                throw CompositionError("product pairing: legs do not form a cone over " + a.to_string() +
                                       " x " + b.to_string());
              std::vector<std::size_t> table(f.source().size());
              for (std::size_t i = 0; i < table.size(); ++i) table[i] = f(i) * width + g(i);
              return Morphism(f.source(), apex, std::move(table));
            }};
  }

  CoproductCocone<Object, Morphism> coproduct(const Object& a, const Object& b) const {
    std::vector<std::string> labels;
    labels.reserve(a.size() + b.size());
    for (const auto& x : a.labels()) labels.push_back("inl:" + x);
    for (const auto& y : b.labels()) labels.push_back("inr:" + y);
    Object apex(std::move(labels));
    std::vector<std::size_t> i1(a.size()), i2(b.size());
    std::iota(i1.begin(), i1.end(), std::size_t{0});
    std::iota(i2.begin(), i2.end(), a.size());
    return {apex, Morphism(a, apex, std::move(i1)), Morphism(b, apex, std::move(i2)),
            [apex, a, b](const Morphism& f, const Morphism& g) {
              if (!(f.target() == g.target()) || !(f.source() == a) || !(g.source() == b))
                throw CompositionError("coproduct copairing: legs do not form a cocone");
              std::vector<std::size_t> table;
              table.reserve(apex.size());
              table.insert(table.end(), f.table().begin(), f.table().end());
              table.insert(table.end(), g.table().begin(), g.table().end());
              return Morphism(apex, f.target(), std::move(table));
            }};
  }

  /// Apex {(b,c) : f(b) = g(c)} in lexicographic order.
  PullbackCone<Object, Morphism> pullback(const Morphism& f, const Morphism& g) const {
    if (!(f.target() == g.target()))
      throw CompositionError("pullback: maps into " + f.target().to_string() + " and " + g.target().to_string());
    const auto& b = f.source();
    const auto& c = g.source();
    std::vector<std::string> labels;
    std::vector<std::size_t> p1, p2;
    std::vector<std::int64_t> slot(b.size() * c.size(), -1);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j)
        if (f(i) == g(j)) {
          slot[i * c.size() + j] = static_cast<std::int64_t>(labels.size());
          labels.push_back(pair_label(b.label(i), c.label(j)));
          p1.push_back(i);
          p2.push_back(j);
        }
    Object apex(std::move(labels));
    Morphism leg1(apex, b, std::move(p1)), leg2(apex, c, std::move(p2));
    const std::size_t width = c.size();
    return {apex, leg1, leg2,
            [apex, f, g, width, slot = std::move(slot)](const Morphism& h, const Morphism& k) {
              if (!(h.source() == k.source()) || !(FinSet{}.compose(f, h) == FinSet{}.compose(g, k)))
                throw PreconditionError("pullback mediator: the pair does not commute over the cospan");
              std::vector<std::size_t> table(h.source().size());
              for (std::size_t i = 0; i < table.size(); ++i)
                table[i] = static_cast<std::size_t>(slot[h(i) * width + k(i)]);
              return Morphism(h.source(), apex, std::move(table));
            }};
  }

  /// Apex is the subset {a : f(a) = g(a)} keeping the source labels.
  EqualizerCone<Object, Morphism> equalizer(const Morphism& f, const Morphism& g) const {
    if (!(f.source() == g.source()) || !(f.target() == g.target()))
      throw CompositionError("equalizer: maps are not parallel");
    std::vector<std::string> labels;
    std::vector<std::size_t> incl;
    std::vector<std::int64_t> slot(f.source().size(), -1);
    for (std::size_t i = 0; i < f.source().size(); ++i)
      if (f(i) == g(i)) {
        slot[i] = static_cast<std::int64_t>(incl.size());
        labels.push_back(f.source().label(i));
        incl.push_back(i);
      }
    Object apex(std::move(labels));
    Morphism inclusion(apex, f.source(), std::move(incl));
    return {apex, inclusion, [apex, f, g, slot = std::move(slot)](const Morphism& h) {
              if (!(FinSet{}.compose(f, h) == FinSet{}.compose(g, h)))
                throw PreconditionError("equalizer mediator: map does not equalize the pair");
              std::vector<std::size_t> table(h.source().size());
              for (std::size_t i = 0; i < table.size(); ++i) table[i] = static_cast<std::size_t>(slot[h(i)]);
              return Morphism(h.source(), apex, std::move(table));
            }};
  }

  /// Quotient of the target by the equivalence generated by f(a) ~ g(a). Each
  /// class is represented by its least label; classes keep target order.
  CoequalizerCocone<Object, Morphism> coequalizer(const Morphism& f, const Morphism& g) const {
    if (!(f.source() == g.source()) || !(f.target() == g.target()))
      throw CompositionError("coequalizer: maps are not parallel");
    const auto& target = f.target();
    std::vector<std::size_t> parent(target.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&parent](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < f.source().size(); ++i) {
      auto x = find(f(i)), y = find(g(i));
      if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
    std::map<std::size_t, std::size_t> class_slot;  // root -> apex index
    std::vector<std::string> labels;
    std::vector<std::size_t> proj(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
      const auto root = find(i);
      auto [it, fresh] = class_slot.emplace(root, labels.size());
      if (fresh) labels.push_back(target.label(i));
      else if (target.label(i) < labels[it->second]) labels[it->second] = target.label(i);
      proj[i] = it->second;
    }
    Object apex(std::move(labels));
    Morphism projection(target, apex, proj);
    return {apex, projection, [apex, f, g, proj](const Morphism& h) {
              if (!(FinSet{}.compose(h, f) == FinSet{}.compose(h, g)))
                throw PreconditionError("coequalizer mediator: map does not coequalize the pair");
              std::vector<std::size_t> table(apex.size());
              for (std::size_t i = 0; i < proj.size(); ++i) table[proj[i]] = h(i);
              return Morphism(apex, h.target(), std::move(table));
            }};
  }

  /// B^A enumerates every map A -> B in lexicographic order of tables (first
  /// source element most significant); each element is labeled by its graph.
  Exponential<Object, Morphism> exponential(const Object& a, const Object& b) const {
    const auto count = checked_power(b.size(), a.size());
    std::vector<std::string> labels;
    labels.reserve(count);
    std::vector<std::size_t> table(a.size(), 0);
    for (std::uint64_t n = 0; n < count; ++n) {
      labels.push_back(graph_label(a, b, table));
      for (std::size_t k = a.size(); k-- > 0;) {
        if (++table[k] < b.size()) break;
        table[k] = 0;
      }
    }
    Object exp(std::move(labels));
    auto cone = product(exp, a);
    std::vector<std::size_t> ev(cone.apex.size());
    for (std::size_t e = 0; e < exp.size(); ++e) {
      // decode e into its table, most significant digit first
      std::size_t rest = e;
      for (std::size_t k = a.size(); k-- > 0;) {
        ev[e * a.size() + k] = rest % b.size();
        rest /= b.size();
      }
    }
    Morphism evaluation(cone.apex, b, std::move(ev));
    return {exp, evaluation, cone, [exp, a, b](const Object& c, const Morphism& g) {
              const auto domain = FinSet{}.product(c, a).apex;
              if (!(g.source() == domain) || !(g.target() == b))
                throw CompositionError("curry: map must go " + domain.to_string() + " -> " + b.to_string());
              std::vector<std::size_t> table(c.size());
              for (std::size_t i = 0; i < c.size(); ++i) {
                std::size_t code = 0;
                for (std::size_t k = 0; k < a.size(); ++k) code = code * b.size() + g(i * a.size() + k);
                table[i] = code;
              }
              return Morphism(c, exp, std::move(table));
            }};
  }

  /// Omega = {T, F} with truth picking T.
  Object omega() const {
    static const Object two{"T", "F"};
    return two;
  }
  Morphism truth() const { return Morphism(terminal(), omega(), {0}); }
  Morphism falsity() const { return Morphism(terminal(), omega(), {1}); }

  /// Characteristic map of the image of m. Callers check monicity.
  Morphism classify(const Morphism& m) const {
    std::vector<std::size_t> table(m.target().size(), 1);
    for (auto t : m.table()) table[t] = 0;
    return Morphism(m.target(), omega(), std::move(table));
  }

  bool is_monic(const Morphism& f) const {
    std::vector<bool> hit(f.target().size(), false);
    for (auto t : f.table()) {
      if (hit[t]) return false;
      hit[t] = true;
    }
    return true;
  }

  bool is_epi(const Morphism& f) const {
    std::vector<bool> hit(f.target().size(), false);
    for (auto t : f.table()) hit[t] = true;
    for (bool h : hit)
      if (!h) return false;
    return true;
  }

  /// Image as a subset of the target, in target order, with target labels.
  Factorization<Morphism> factorize(const Morphism& f) const {
    std::vector<bool> hit(f.target().size(), false);
    for (auto t : f.table()) hit[t] = true;
    std::vector<std::string> labels;
    std::vector<std::size_t> incl, slot(f.target().size(), 0);
    for (std::size_t i = 0; i < hit.size(); ++i)
      if (hit[i]) {
        slot[i] = incl.size();
        labels.push_back(f.target().label(i));
        incl.push_back(i);
      }
    Object image(std::move(labels));
    std::vector<std::size_t> coim(f.source().size());
    for (std::size_t i = 0; i < coim.size(); ++i) coim[i] = slot[f(i)];
    return {Morphism(f.source(), image, std::move(coim)), Morphism(image, f.target(), std::move(incl))};
  }

  std::vector<Morphism> hom(const Object& a, const Object& b) const {
    const auto count = checked_power(b.size(), a.size());
    std::vector<Morphism> out;
    out.reserve(count);
    std::vector<std::size_t> table(a.size(), 0);
    for (std::uint64_t n = 0; n < count; ++n) {
      out.emplace_back(a, b, table);
      for (std::size_t k = a.size(); k-- > 0;) {
        if (++table[k] < b.size()) break;
        table[k] = 0;
      }
    }
    return out;
  }

  /// Every subset inclusion, ordered by bitmask over the element order.
  std::vector<Morphism> subobjects(const Object& b) const {
    if (b.size() > 20) throw ResourceError("subobjects: object too large to enumerate");
    std::vector<Morphism> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << b.size()); ++mask) {
      std::vector<std::string> labels;
      std::vector<std::size_t> incl;
      for (std::size_t i = 0; i < b.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) {
          labels.push_back(b.label(i));
          incl.push_back(i);
        }
      out.emplace_back(Object(std::move(labels)), b, std::move(incl));
    }
    return out;
  }

  std::string describe(const Object& a) const { return a.to_string(); }
  std::string describe(const Morphism& f) const { return graph_label(f.source(), f.target(), f.table()); }
  std::string truth_value_name(const Morphism& v) const { return v.target().label(v(0)); }
};

static_assert(Topos<FinSet>);

}  // namespace topos
