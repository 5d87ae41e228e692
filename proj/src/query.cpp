#include "sixlayer/query.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "codec_json.hpp"
#include "sixlayer/codec.hpp"
#include "sixlayer/error.hpp"

namespace sixlayer {

using detail::Json;

// ---------------------------------------------------------------------------
// Scenes

Scene scene_at(const Scenario& scenario, double t) {
  Scene scene;
  scene.timestamp = t;
  for (const auto& e : scenario.entities()) {
    if (!entity_exists_at(scenario, e, t)) continue;
    SceneEntity se{e.id, e.category, e.layer, {}, e.annotations};
    for (const auto& p : e.properties) {
      if (const auto* c = p.constant())
        se.properties.emplace(p.name, *c);
      else
        se.properties.emplace(p.name, evaluate_series(*p.series(), t));
    }
    scene.entities.push_back(std::move(se));
  }
  return scene;
}

namespace {

Json scene_json(const Scene& scene) {
  Json ents = Json::array();
  for (const auto& e : scene.entities) {
    Json props = Json::object();
    for (const auto& [name, v] : e.properties) props[name] = detail::value_to_json(v);
    Json ann = Json::array();
    for (const auto& a : e.annotations) ann.push_back({{"key", a.key}, {"value", a.value}});
    ents.push_back({{"id", e.id},
                    {"category", e.category},
                    {"layer", e.layer.value()},
                    {"properties", std::move(props)},
                    {"annotations", std::move(ann)}});
  }
  Json doc;
  doc["timestamp_s"] = Json(scene.timestamp);
  doc["entities"] = std::move(ents);
  return doc;
}

}  // namespace

std::string scene_to_json(const Scene& scene) { return detail::dump_canonical(scene_json(scene)); }

std::string scene_to_text(const Scene& scene) {
  std::ostringstream os;
  os << "scene at t=" << Json(scene.timestamp).dump() << " s (" << scene.entities.size() << " entities)\n";
  int current_layer = 0;
  for (const auto& e : scene.entities) {
    if (e.layer.value() != current_layer) {
      current_layer = e.layer.value();
      os << "layer " << current_layer << ": " << e.layer.name() << "\n";
    }
    os << "  " << e.id << " (" << e.category << ")\n";
    for (const auto& [name, v] : e.properties) os << "    " << name << " = " << canonical_value_text(v) << "\n";
    for (const auto& a : e.annotations) os << "    @" << a.key << " = " << a.value << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Projection

Scenario project(const Scenario& scenario, LayerSet layers) {
  std::set<std::string> kept;
  for (const auto& e : scenario.entities())
    if (layers.contains(e.layer)) kept.insert(e.id);

  ScenarioBuilder b(scenario.id(), scenario.duration());
  std::set<std::string> dangling;
  for (const auto& e : scenario.entities()) {
    if (!kept.count(e.id)) continue;
    if (e.modifies && !kept.count(*e.modifies)) dangling.insert(*e.modifies);
    for (const auto& inf : e.influences)
      if (!kept.count(inf.target)) dangling.insert(inf.target);
    b.add_entity(e);
  }
  for (const auto& [k, v] : scenario.metadata())
    if (k != kDanglingReferencesKey) b.set_metadata(k, v);
  if (!dangling.empty()) {
    std::string csv;
    for (const auto& d : dangling) csv += (csv.empty() ? "" : ",") + d;
    b.set_metadata(std::string(kDanglingReferencesKey), csv);
  }
  return b.finish();
}

// ---------------------------------------------------------------------------
// Diff

namespace {

std::optional<std::string> field_text(const Json& entity_json, const char* key) {
  auto it = entity_json.find(key);
  if (it == entity_json.end()) return std::nullopt;
  return it->dump();
}

struct PropText {
  std::string text;
  bool series = false;
};

std::map<std::string, PropText> property_texts(const Entity& e) {
  std::map<std::string, PropText> out;
  for (const auto& p : e.properties) {
    if (const auto* s = p.series())
      out[p.name] = {canonical_series_text(*s), true};
    else
      out[p.name] = {canonical_value_text(*p.constant()), false};
  }
  return out;
}

std::vector<PropertyDelta> entity_deltas(const Entity& a, const Entity& b) {
  std::vector<PropertyDelta> out;
  Json ja = detail::entity_to_json(a);
  Json jb = detail::entity_to_json(b);
  for (const char* key : {"annotations", "category", "influences", "lifespan_s", "modifies"}) {
    auto oa = field_text(ja, key);
    auto ob = field_text(jb, key);
    if (oa != ob) out.push_back({std::string("@") + key, oa, ob, false});
  }
  auto pa = property_texts(a);
  auto pb = property_texts(b);
  std::set<std::string> names;
  for (const auto& [n, _] : pa) names.insert(n);
  for (const auto& [n, _] : pb) names.insert(n);
  for (const auto& n : names) {
    auto ia = pa.find(n);
    auto ib = pb.find(n);
    std::optional<std::string> oa, ob;
    bool series = false;
    if (ia != pa.end()) {
      oa = ia->second.text;
      series |= ia->second.series;
    }
    if (ib != pb.end()) {
      ob = ib->second.text;
      series |= ib->second.series;
    }
    if (oa != ob) out.push_back({n, oa, ob, series});
  }
  std::sort(out.begin(), out.end(),
            [](const PropertyDelta& x, const PropertyDelta& y) { return x.name < y.name; });
  return out;
}

}  // namespace

DiffReport diff(const Scenario& a, const Scenario& b) {
  DiffReport report;
  std::set<std::string> ids;
  for (const auto& e : a.entities()) ids.insert(e.id);
  for (const auto& e : b.entities()) ids.insert(e.id);
  for (const auto& id : ids) {
    const Entity* ea = a.find(id);
    const Entity* eb = b.find(id);
    if (ea && !eb) {
      report.layers[ea->layer.value()].removed.push_back(id);
    } else if (!ea && eb) {
      report.layers[eb->layer.value()].added.push_back(id);
    } else if (ea->layer != eb->layer) {
      report.layers[ea->layer.value()].removed.push_back(id);
      report.layers[eb->layer.value()].added.push_back(id);
    } else if (!(*ea == *eb)) {
      auto deltas = entity_deltas(*ea, *eb);
      if (!deltas.empty()) report.layers[ea->layer.value()].changed.push_back({id, std::move(deltas)});
    }
  }
  return report;
}

std::string diff_to_json(const DiffReport& report) {
  Json doc = Json::object();
  auto text_or_null = [](const std::optional<std::string>& t) {
    return t ? Json::parse(*t) : Json(nullptr);
  };
  for (const auto& [layer, ld] : report.layers) {
    Json changed = Json::array();
    for (const auto& c : ld.changed) {
      Json props = Json::array();
      for (const auto& d : c.properties)
        props.push_back({{"name", d.name},
                         {"old", text_or_null(d.old_value)},
                         {"new", text_or_null(d.new_value)},
                         {"series_changed", d.series_changed}});
      changed.push_back({{"id", c.id}, {"properties", std::move(props)}});
    }
    doc[std::to_string(layer)] = {{"added", ld.added}, {"removed", ld.removed}, {"changed", std::move(changed)}};
  }
  return detail::dump_canonical(doc);
}

std::string diff_to_text(const DiffReport& report) {
  std::ostringstream os;
  for (const auto& [layer, ld] : report.layers) {
    os << "@@ layer " << layer << ": " << Layer::from_int(layer).name() << " @@\n";
    for (const auto& id : ld.removed) os << "- " << id << "\n";
    for (const auto& id : ld.added) os << "+ " << id << "\n";
    for (const auto& c : ld.changed) {
      os << "~ " << c.id << "\n";
      for (const auto& d : c.properties) {
        os << "    " << d.name << (d.series_changed ? " (series)" : "") << ": "
           << d.old_value.value_or("<absent>") << " -> " << d.new_value.value_or("<absent>") << "\n";
      }
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Occlusion

namespace {

const Polygon* footprint_of(const SceneEntity& e) {
  auto it = e.properties.find(std::string(kFootprintProperty));
  if (it == e.properties.end()) return nullptr;
  return std::get_if<Polygon>(&it->second);
}

std::vector<Point2> boundary_samples(const Polygon& poly) {
  std::vector<Point2> out;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    out.push_back(a);
    out.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }
  return out;
}

}  // namespace

OcclusionResult derive_occlusion(const Scene& scene, Point2 observer, const std::set<std::string>& targets) {
  std::vector<std::pair<const SceneEntity*, const Polygon*>> footprints;
  for (const auto& e : scene.entities)
    if (const Polygon* fp = footprint_of(e)) footprints.emplace_back(&e, fp);

  for (const auto& [e, fp] : footprints) {
    if (geometry::strictly_inside(observer, fp->vertices) || geometry::on_boundary(observer, fp->vertices))
      throw Error(ErrorKind::Range, "observer lies inside the footprint of \"" + e->id + "\"");
  }

  OcclusionResult result;
  result.observer = observer;
  for (const auto& target_id : targets) {
    auto it = std::find_if(footprints.begin(), footprints.end(),
                           [&](const auto& fp) { return fp.first->id == target_id; });
    if (it == footprints.end()) {
      bool exists = std::any_of(scene.entities.begin(), scene.entities.end(),
                                [&](const SceneEntity& e) { return e.id == target_id; });
      throw Error(ErrorKind::Lookup, exists ? "entity \"" + target_id + "\" has no polygon footprint"
                                            : "unknown target \"" + target_id + "\"");
    }
    std::size_t blocked = 0;
    auto samples = boundary_samples(*it->second);
    for (const Point2& p : samples) {
      for (const auto& [other, fp] : footprints) {
        if (other->id == target_id) continue;
        if (geometry::segment_crosses_interior(observer, p, fp->vertices)) {
          ++blocked;
          break;
        }
      }
    }
    if (blocked == samples.size())
      result.fully_occluded.insert(target_id);
    else if (blocked == 0)
      result.visible.insert(target_id);
    else
      result.partially_occluded.insert(target_id);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Friction

void FrictionTable::set(std::string surface, std::string weather, std::string tire, double coefficient) {
  entries_[{std::move(surface), std::move(weather), std::move(tire)}] = coefficient;
}

std::optional<double> FrictionTable::find(std::string_view surface, std::string_view weather,
                                          std::string_view tire) const {
  auto it = entries_.find(std::make_tuple(std::string(surface), std::string(weather), std::string(tire)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

FrictionTable FrictionTable::load(std::string_view document) {
  Json doc = detail::parse_json_text(document);
  FrictionTable table;
  const auto& arr = detail::require_array(doc, "friction table");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string where = "friction table[" + std::to_string(i) + "]";
    const auto& e = detail::require_object(arr[i], where);
    detail::expect_keys(e, {"surface", "weather", "tire", "mu"}, where);
    table.set(detail::require_string(detail::require(e, "surface", where), where),
              detail::require_string(detail::require(e, "weather", where), where),
              detail::require_string(detail::require(e, "tire", where), where),
              detail::require_number(detail::require(e, "mu", where), where));
  }
  return table;
}

double derive_friction(std::string_view surface_material, std::string_view road_weather,
                       std::string_view tire_class, const FrictionTable& table) {
  if (auto mu = table.find(surface_material, road_weather, tire_class)) return *mu;
  throw Error(ErrorKind::Lookup, "no friction entry for (" + std::string(surface_material) + ", " +
                                     std::string(road_weather) + ", " + std::string(tire_class) + ")");
}

}  // namespace sixlayer
