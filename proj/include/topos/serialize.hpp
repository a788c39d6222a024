#pragma once

// JSON forms of FinSet objects and maps:
//   {"elements": [...]}
//   {"source": {...}, "target": {...}, "table": {"a": "b", ...}}
// and of presheaves:
//   {"index": {"objects": [...], "arrows": [{"name","dom","cod"}], "compose": [{"g","f","h"}]},
//    "sets": {"obj": [...]}, "maps": {"arrow": {"y": "x", ...}}}
// Identity arrows are implicit in both the index and the maps.

#include <string>
#include <vector>

#include <json.hpp>
#include "topos/error.hpp"
#include "topos/finset.hpp"
#include "topos/presheaf.hpp"

namespace topos {

inline nlohmann::json to_json(const FinSetObject& a) { return nlohmann::json{{"elements", a.labels()}}; }

inline nlohmann::json to_json(const FinSetMap& f) {
  nlohmann::json table = nlohmann::json::object();
  for (std::size_t i = 0; i < f.source().size(); ++i) table[f.source().label(i)] = f.target().label(f(i));
  return nlohmann::json{{"source", to_json(f.source())}, {"target", to_json(f.target())}, {"table", table}};
}

inline FinSetObject finset_object_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array())
    throw InvalidArgument("expected {\"elements\": [...]}");
  std::vector<std::string> labels;
  for (const auto& e : j["elements"]) {
    if (!e.is_string()) throw InvalidArgument("element labels must be strings");
    labels.push_back(e.get<std::string>());
  }
  return FinSetObject(std::move(labels));
}

inline FinSetMap finset_map_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("table") ||
      !j["table"].is_object())
    throw InvalidArgument("expected {\"source\", \"target\", \"table\"}");
  const auto source = finset_object_from_json(j["source"]);
  const auto target = finset_object_from_json(j["target"]);
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [k, v] : j["table"].items()) {
    if (!v.is_string()) throw InvalidArgument("table values must be strings");
    entries.emplace_back(k, v.get<std::string>());
  }
  return FinSetMap::from_labels(source, target, entries);
}

inline nlohmann::json to_json(const FiniteCategory& c) {
  nlohmann::json arrows = nlohmann::json::array();
  for (std::size_t a = c.object_count(); a < c.arrow_count(); ++a)
    arrows.push_back({{"name", c.arrow(a).name}, {"dom", c.object(c.arrow(a).dom)}, {"cod", c.object(c.arrow(a).cod)}});
  nlohmann::json compose = nlohmann::json::array();
  for (const auto& e : c.composition_entries()) compose.push_back({{"g", e.g}, {"f", e.f}, {"h", e.h}});
  return nlohmann::json{{"objects", c.objects()}, {"arrows", arrows}, {"compose", compose}};
}

inline nlohmann::json to_json(const Presheaf& p) {
  const auto& c = p.category();
  nlohmann::json sets = nlohmann::json::object();
  for (std::size_t j = 0; j < c.object_count(); ++j) sets[c.object(j)] = p.at(j).labels();
  nlohmann::json maps = nlohmann::json::object();
  for (std::size_t a = c.object_count(); a < c.arrow_count(); ++a) {
    const auto& r = p.restriction(a);
    nlohmann::json table = nlohmann::json::object();
    for (std::size_t i = 0; i < r.source().size(); ++i) table[r.source().label(i)] = r.target().label(r(i));
    maps[c.arrow(a).name] = table;
  }
  return nlohmann::json{{"index", to_json(c)}, {"sets", sets}, {"maps", maps}};
}

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field \"") + key + "\"");
  return j[key];
}

inline std::string string_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw InvalidArgument(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace detail

inline FiniteCategory finite_category_from_json(const nlohmann::json& j) {
  std::vector<std::string> objects;
  for (const auto& o : detail::field(j, "objects")) {
    if (!o.is_string()) throw InvalidArgument("object names must be strings");
    objects.push_back(o.get<std::string>());
  }
  std::vector<FiniteCategory::ArrowSpec> arrows;
  if (j.contains("arrows"))
    for (const auto& a : j["arrows"])
      arrows.push_back({detail::string_field(a, "name"), detail::string_field(a, "dom"), detail::string_field(a, "cod")});
  std::vector<FiniteCategory::CompositionSpec> compose;
  if (j.contains("compose"))
    for (const auto& e : j["compose"])
      compose.push_back({detail::string_field(e, "g"), detail::string_field(e, "f"), detail::string_field(e, "h")});
  return FiniteCategory(std::move(objects), std::move(arrows), std::move(compose));
}

inline Presheaf presheaf_from_json(const nlohmann::json& j) {
  auto cat = std::make_shared<const FiniteCategory>(finite_category_from_json(detail::field(j, "index")));
  const auto& sets_json = detail::field(j, "sets");
  std::vector<FinSetObject> sets;
  for (const auto& name : cat->objects())
    sets.push_back(finset_object_from_json(nlohmann::json{{"elements", detail::field(sets_json, name.c_str())}}));
  const auto& maps_json = detail::field(j, "maps");
  std::vector<FinSetMap> maps;
  for (std::size_t a = cat->object_count(); a < cat->arrow_count(); ++a) {
    const auto& arr = cat->arrow(a);
    const auto& table = detail::field(maps_json, arr.name.c_str());
    if (!table.is_object()) throw InvalidArgument("map for " + arr.name + " must be an object");
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [k, v] : table.items()) {
      if (!v.is_string()) throw InvalidArgument("table values must be strings");
      entries.emplace_back(k, v.get<std::string>());
    }
    maps.push_back(FinSetMap::from_labels(sets[arr.cod], sets[arr.dom], entries));
  }
  return Presheaf::from_generators(std::move(cat), std::move(sets), maps);
}

}  // namespace topos
