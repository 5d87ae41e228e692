#include "sixlayer/codec.hpp"

#include <algorithm>
#include <set>

#include "codec_json.hpp"
#include "sixlayer/error.hpp"

namespace sixlayer {

namespace detail {

namespace {

Json num(double v) { return Json(v); }

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Schema, where + ": " + what);
}

void sort_entity_parts(Entity& e) {
  std::sort(e.properties.begin(), e.properties.end(),
            [](const Property& a, const Property& b) { return a.name < b.name; });
  std::sort(e.annotations.begin(), e.annotations.end(),
            [](const Annotation& a, const Annotation& b) { return a.key < b.key; });
  std::sort(e.influences.begin(), e.influences.end());
}

}  // namespace

Json value_to_json(const PropertyValue& value) {
  Json j = Json::object();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Number>) {
          j["number"] = num(v.value);
          if (v.unit) j["unit"] = *v.unit;
        } else if constexpr (std::is_same_v<T, Text>) {
          j["text"] = v.value;
        } else if constexpr (std::is_same_v<T, Boolean>) {
          j["bool"] = v.value;
        } else if constexpr (std::is_same_v<T, Token>) {
          j["enum"] = v.value;
        } else if constexpr (std::is_same_v<T, Vector>) {
          Json arr = Json::array();
          for (double c : v.components) arr.push_back(num(c));
          j["vector"] = std::move(arr);
        } else {
          Json arr = Json::array();
          for (const auto& p : v.vertices) arr.push_back(Json::array({num(p.x), num(p.y)}));
          j["polygon"] = std::move(arr);
        }
      },
      value);
  return j;
}

PropertyValue value_from_json(const Json& j, const std::string& where) {
  require_object(j, where);
  if (j.contains("number")) {
    expect_keys(j, {"number", "unit"}, where);
    Number n{require_number(j["number"], where), std::nullopt};
    if (j.contains("unit")) n.unit = require_string(j["unit"], where + ".unit");
    return n;
  }
  if (j.size() != 1) schema(where, "value must have exactly one of number/text/bool/enum/vector/polygon");
  const auto& [key, v] = *j.items().begin();
  if (key == "text") return Text{require_string(v, where)};
  if (key == "bool") return Boolean{require_bool(v, where)};
  if (key == "enum") return Token{require_string(v, where)};
  if (key == "vector") {
    Vector out;
    for (const auto& c : require_array(v, where)) out.components.push_back(require_number(c, where));
    return out;
  }
  if (key == "polygon") {
    Polygon out;
    for (const auto& p : require_array(v, where)) {
      require_array(p, where);
      if (p.size() != 2) schema(where, "polygon vertex must be [x, y]");
      out.vertices.push_back({require_number(p[0], where), require_number(p[1], where)});
    }
    return out;
  }
  schema(where, "unknown value kind \"" + key + "\"");
}

Json series_to_json(const TimeSeries& series) {
  Json samples = Json::array();
  for (const auto& s : series.samples) samples.push_back(Json::array({num(s.t), value_to_json(s.value)}));
  Json j;
  j["interpolation"] = std::string(to_string(series.interpolation));
  j["samples"] = std::move(samples);
  return j;
}

TimeSeries series_from_json(const Json& j, const std::string& where) {
  require_object(j, where);
  expect_keys(j, {"interpolation", "samples"}, where);
  TimeSeries s;
  if (j.contains("interpolation")) {
    auto mode = require_string(j["interpolation"], where + ".interpolation");
    if (mode == "step")
      s.interpolation = Interpolation::Step;
    else if (mode == "linear")
      s.interpolation = Interpolation::Linear;
    else
      schema(where, "interpolation must be \"step\" or \"linear\"");
  }
  for (const auto& smp : require_array(require(j, "samples", where), where + ".samples")) {
    if (!smp.is_array() || smp.size() != 2) schema(where, "sample must be [t, value]");
    s.samples.push_back({require_number(smp[0], where + " sample time"),
                         value_from_json(smp[1], where + " sample value")});
  }
  return s;
}

Json entity_to_json(const Entity& entity) {
  Entity e = entity;
  sort_entity_parts(e);
  Json j;
  j["id"] = e.id;
  j["category"] = e.category;
  j["layer"] = e.layer.value();
  if (e.lifespan) j["lifespan_s"] = Json::array({num(e.lifespan->start), num(e.lifespan->end)});
  if (e.modifies) j["modifies"] = *e.modifies;
  Json infl = Json::array();
  for (const auto& i : e.influences) infl.push_back({{"target", i.target}, {"label", i.label}});
  j["influences"] = std::move(infl);
  Json props = Json::array();
  for (const auto& p : e.properties) {
    Json pj;
    pj["name"] = p.name;
    if (const auto* s = p.series())
      pj["series"] = series_to_json(*s);
    else
      pj["value"] = value_to_json(*p.constant());
    props.push_back(std::move(pj));
  }
  j["properties"] = std::move(props);
  Json ann = Json::array();
  for (const auto& a : e.annotations) ann.push_back({{"key", a.key}, {"value", a.value}});
  j["annotations"] = std::move(ann);
  return j;
}

Entity entity_from_json(const Json& j, std::size_t index) {
  std::string where = "entities[" + std::to_string(index) + "]";
  require_object(j, where);
  Entity e;
  e.id = require_string(require(j, "id", where), where + ".id");
  where = "entity \"" + e.id + "\"";
  expect_keys(j, {"id", "category", "layer", "lifespan_s", "modifies", "influences", "properties", "annotations"},
              where);
  e.category = require_string(require(j, "category", where), where + ".category");
  int layer = require_int(require(j, "layer", where), where + ".layer");
  auto l = Layer::try_from_int(layer);
  if (!l) schema(where, "layer out of range: " + std::to_string(layer));
  e.layer = *l;
  if (j.contains("lifespan_s")) {
    const auto& ls = require_array(j["lifespan_s"], where + ".lifespan_s");
    if (ls.size() != 2) schema(where, "lifespan_s must be [start, end]");
    e.lifespan = Lifespan{require_number(ls[0], where), require_number(ls[1], where)};
  }
  if (j.contains("modifies")) e.modifies = require_string(j["modifies"], where + ".modifies");
  if (j.contains("influences")) {
    for (const auto& i : require_array(j["influences"], where + ".influences")) {
      require_object(i, where + " influence");
      expect_keys(i, {"target", "label"}, where + " influence");
      e.influences.push_back({require_string(require(i, "target", where), where + " influence target"),
                              i.contains("label") ? require_string(i["label"], where) : std::string{}});
    }
  }
  if (j.contains("properties")) {
    for (const auto& p : require_array(j["properties"], where + ".properties")) {
      require_object(p, where + " property");
      Property prop;
      prop.name = require_string(require(p, "name", where + " property"), where + " property name");
      std::string pwhere = where + " property \"" + prop.name + "\"";
      expect_keys(p, {"name", "value", "series"}, pwhere);
      bool has_value = p.contains("value");
      bool has_series = p.contains("series");
      if (has_value == has_series) schema(pwhere, "needs exactly one of \"value\" or \"series\"");
      if (has_value)
        prop.value = value_from_json(p["value"], pwhere);
      else
        prop.value = series_from_json(p["series"], pwhere);
      e.properties.push_back(std::move(prop));
    }
  }
  if (j.contains("annotations")) {
    for (const auto& a : require_array(j["annotations"], where + ".annotations")) {
      require_object(a, where + " annotation");
      expect_keys(a, {"key", "value"}, where + " annotation");
      e.annotations.push_back({require_string(require(a, "key", where), where + " annotation key"),
                               require_string(require(a, "value", where), where + " annotation value")});
    }
  }
  return e;
}

Json entities_to_json(std::vector<Entity> entities) {
  std::sort(entities.begin(), entities.end(), [](const Entity& a, const Entity& b) {
    if (a.layer != b.layer) return a.layer < b.layer;
    return a.id < b.id;
  });
  Json arr = Json::array();
  for (const auto& e : entities) arr.push_back(entity_to_json(e));
  return arr;
}

}  // namespace detail

namespace {

using detail::Json;

Json header_json(const std::string& id, double duration, const std::map<std::string, std::string>& metadata) {
  Json h;
  h["id"] = id;
  h["duration_s"] = Json(duration);
  h["metadata"] = Json(metadata);
  return h;
}

struct Header {
  std::string id;
  double duration = 0.0;
  std::map<std::string, std::string> metadata;
};

Header header_from_json(const Json& j) {
  detail::require_object(j, "scenario");
  detail::expect_keys(j, {"id", "duration_s", "metadata"}, "scenario");
  Header h;
  h.id = detail::require_string(detail::require(j, "id", "scenario"), "scenario.id");
  h.duration = detail::require_number(detail::require(j, "duration_s", "scenario"), "scenario.duration_s");
  if (j.contains("metadata")) {
    for (const auto& [k, v] : detail::require_object(j["metadata"], "scenario.metadata").items())
      h.metadata[k] = detail::require_string(v, "scenario.metadata." + k);
  }
  return h;
}

void check_format_version(const Json& doc) {
  auto v = detail::require_string(detail::require(doc, "format_version", "document"), "format_version");
  if (v != kFormatVersion)
    throw Error(ErrorKind::Schema, "unsupported format_version \"" + v + "\" (expected \"1.0\")");
}

std::vector<Entity> entities_from_json(const Json& doc) {
  std::vector<Entity> out;
  std::set<std::string> seen;
  const auto& arr = detail::require_array(detail::require(doc, "entities", "document"), "entities");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Entity e = detail::entity_from_json(arr[i], i);
    if (!seen.insert(e.id).second)
      throw Error(ErrorKind::Schema, "duplicate entity id \"" + e.id + "\"");
    out.push_back(std::move(e));
  }
  return out;
}

void check_layers(const std::vector<Entity>& entities, int lo, int hi, const char* doc_kind) {
  for (const auto& e : entities) {
    if (e.layer.value() < lo || e.layer.value() > hi)
      throw Error(ErrorKind::Schema, std::string(doc_kind) + " document: entity \"" + e.id +
                                         "\" on layer " + std::to_string(e.layer.value()) +
                                         " (allowed " + std::to_string(lo) + ".." + std::to_string(hi) + ")");
  }
}

}  // namespace

std::string serialize_scenario(const Scenario& scenario) {
  Json doc;
  doc["format_version"] = std::string(kFormatVersion);
  doc["scenario"] = header_json(scenario.id(), scenario.duration(), scenario.metadata());
  doc["entities"] = detail::entities_to_json(scenario.entities());
  return detail::dump_canonical(doc);
}

Scenario parse_scenario(std::string_view text, const Taxonomy* taxonomy) {
  Json doc = detail::parse_json_text(text);
  detail::require_object(doc, "document");
  detail::expect_keys(doc, {"format_version", "scenario", "entities"}, "document");
  check_format_version(doc);
  Header h = header_from_json(detail::require(doc, "scenario", "document"));
  auto entities = entities_from_json(doc);
  ScenarioBuilder b(h.id, h.duration, taxonomy);
  for (auto& [k, v] : h.metadata) b.set_metadata(k, v);
  for (auto& e : entities) b.add_entity(std::move(e));
  return b.finish();
}

std::string canonical_value_text(const PropertyValue& value) {
  return detail::value_to_json(value).dump();
}

std::string canonical_series_text(const TimeSeries& series) {
  return detail::series_to_json(series).dump();
}

std::pair<StaticDocument, DynamicDocument> split(const Scenario& scenario) {
  StaticDocument st{scenario.id(), scenario.duration(), scenario.metadata(), {}};
  DynamicDocument dy{scenario.id(), {}};
  for (const auto& e : scenario.entities()) {
    if (e.layer.value() <= layers::kTemporary) {
      for (const auto& p : e.properties)
        if (p.is_series())
          throw Error(ErrorKind::Structure,
                      "cannot split: entity \"" + e.id + "\" on layer " +
                          std::to_string(e.layer.value()) + " has time series property \"" + p.name +
                          "\" (Guideline 1 violation)");
      st.entities.push_back(e);
    } else {
      dy.entities.push_back(e);
    }
  }
  return {std::move(st), std::move(dy)};
}

Scenario merge(const StaticDocument& static_doc, const DynamicDocument& dynamic_doc,
               const Taxonomy* taxonomy) {
  if (dynamic_doc.static_id != static_doc.id)
    throw Error(ErrorKind::Structure, "dynamic document references static \"" + dynamic_doc.static_id +
                                          "\" but static document is \"" + static_doc.id + "\"");
  std::set<std::string> ids;
  for (const auto& e : static_doc.entities) ids.insert(e.id);
  for (const auto& e : dynamic_doc.entities)
    if (ids.count(e.id))
      throw Error(ErrorKind::Structure, "entity id \"" + e.id + "\" present in both documents");
  ScenarioBuilder b(static_doc.id, static_doc.duration, taxonomy);
  for (const auto& [k, v] : static_doc.metadata) b.set_metadata(k, v);
  for (const auto& e : static_doc.entities) b.add_entity(e);
  for (const auto& e : dynamic_doc.entities) b.add_entity(e);
  return b.finish();
}

std::string serialize_static(const StaticDocument& doc) {
  Json j;
  j["format_version"] = std::string(kFormatVersion);
  j["document"] = "static";
  j["scenario"] = header_json(doc.id, doc.duration, doc.metadata);
  j["entities"] = detail::entities_to_json(doc.entities);
  return detail::dump_canonical(j);
}

std::string serialize_dynamic(const DynamicDocument& doc) {
  Json j;
  j["format_version"] = std::string(kFormatVersion);
  j["document"] = "dynamic";
  j["static_ref"] = doc.static_id;
  j["entities"] = detail::entities_to_json(doc.entities);
  return detail::dump_canonical(j);
}

StaticDocument parse_static(std::string_view text) {
  Json doc = detail::parse_json_text(text);
  detail::require_object(doc, "document");
  detail::expect_keys(doc, {"format_version", "document", "scenario", "entities"}, "static document");
  check_format_version(doc);
  if (detail::require_string(detail::require(doc, "document", "document"), "document") != "static")
    throw Error(ErrorKind::Schema, "expected a static document");
  Header h = header_from_json(detail::require(doc, "scenario", "document"));
  StaticDocument out{h.id, h.duration, h.metadata, entities_from_json(doc)};
  check_layers(out.entities, 1, 3, "static");
  for (const auto& e : out.entities)
    if (e.has_time_series())
      throw Error(ErrorKind::Schema, "static document: entity \"" + e.id + "\" has a time series");
  return out;
}

DynamicDocument parse_dynamic(std::string_view text) {
  Json doc = detail::parse_json_text(text);
  detail::require_object(doc, "document");
  detail::expect_keys(doc, {"format_version", "document", "static_ref", "entities"}, "dynamic document");
  check_format_version(doc);
  if (detail::require_string(detail::require(doc, "document", "document"), "document") != "dynamic")
    throw Error(ErrorKind::Schema, "expected a dynamic document");
  DynamicDocument out{detail::require_string(detail::require(doc, "static_ref", "document"), "static_ref"),
                      entities_from_json(doc)};
  check_layers(out.entities, 4, 6, "dynamic");
  return out;
}

}  // namespace sixlayer
