#include "sixlayer/taxonomy.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "json_util.hpp"
#include "sixlayer/error.hpp"

namespace sixlayer {

namespace {

struct FlagName {
  CategoryFlag flag;
  std::string_view name;
};

constexpr std::array<FlagName, 7> kFlagNames = {{
    {CategoryFlag::GuidanceObject, "guidance_object"},
    {CategoryFlag::RoadsideStructure, "roadside_structure"},
    {CategoryFlag::Movable, "movable"},
    {CategoryFlag::EnvironmentalCondition, "environmental_condition"},
    {CategoryFlag::DigitalInformation, "digital_information"},
    {CategoryFlag::TemporaryOnly, "temporary_only"},
    {CategoryFlag::SupportsPeriodicState, "supports_periodic_state"},
}};

bool valid_category_id(std::string_view id) {
  if (id.empty() || id.front() == '.' || id.back() == '.') return false;
  char prev = 0;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    if (!ok || (c == '.' && prev == '.')) return false;
    prev = c;
  }
  return true;
}

[[noreturn]] void semantic(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Semantic, "category \"" + where + "\": " + what);
}

void check_flags(const EntityCategory& c) {
  const auto& layers = c.admissible_layers;
  if (c.has(CategoryFlag::EnvironmentalCondition) && !layers.contains(layers::kEnvironment))
    semantic(c.id, "flag inconsistency: environmental_condition requires layer 5");
  if (c.has(CategoryFlag::DigitalInformation) && !layers.contains(layers::kDigital))
    semantic(c.id, "flag inconsistency: digital_information requires layer 6");
  if (c.has(CategoryFlag::Movable) && !layers.contains(layers::kDynamic))
    semantic(c.id, "flag inconsistency: movable requires layer 4");
}

}  // namespace

std::string_view to_string(CategoryFlag flag) {
  for (const auto& f : kFlagNames)
    if (f.flag == flag) return f.name;
  return "?";
}

std::optional<CategoryFlag> category_flag_from_string(std::string_view name) {
  for (const auto& f : kFlagNames)
    if (f.name == name) return f.flag;
  return std::nullopt;
}

std::vector<std::string> FlagSet::names() const {
  std::vector<std::string> out;
  for (const auto& f : kFlagNames)
    if (contains(f.flag)) out.emplace_back(f.name);
  std::sort(out.begin(), out.end());
  return out;
}

Taxonomy Taxonomy::from_categories(std::string version, std::vector<EntityCategory> categories) {
  Taxonomy t;
  t.version_ = std::move(version);

  for (auto& c : categories) {
    if (!valid_category_id(c.id)) semantic(c.id, "id is not a lowercase dotted path");
    if (c.admissible_layers.empty()) semantic(c.id, "empty admissible_layers");
    check_flags(c);
    std::string id = c.id;
    if (!t.categories_.emplace(id, std::move(c)).second) semantic(id, "duplicate id");
  }

  for (const auto& [id, c] : t.categories_) {
    if (c.parent && !t.categories_.count(*c.parent))
      semantic(id, "dangling parent \"" + *c.parent + "\"");
  }

  // Parent chains longer than the catalog size must revisit a node.
  for (const auto& [id, c] : t.categories_) {
    const EntityCategory* cur = &c;
    std::size_t steps = 0;
    while (cur->parent) {
      if (*cur->parent == id || ++steps > t.categories_.size()) semantic(id, "cycle in parent chain");
      cur = &t.categories_.find(*cur->parent)->second;
    }
  }

  std::vector<std::string> roots;
  for (const auto& [id, c] : t.categories_)
    if (!c.parent) roots.push_back(id);
  if (roots.size() != 1 || roots.front() != kRootCategory) {
    throw Error(ErrorKind::Semantic,
                "taxonomy must have exactly one root category \"entity\" (found " +
                    std::to_string(roots.size()) + " roots)");
  }

  for (const auto& [id, c] : t.categories_) {
    if (!c.parent) continue;
    LayerSet allowed = t.categories_.find(*c.parent)->second.admissible_layers |
                       LayerSet{layers::kTemporary};
    if (!c.admissible_layers.is_subset_of(allowed))
      semantic(id, "admissible_layers {" + c.admissible_layers.to_string() +
                       "} not within parent's layers plus {3}");
  }
  return t;
}

const EntityCategory* Taxonomy::find(std::string_view id) const noexcept {
  auto it = categories_.find(id);
  return it == categories_.end() ? nullptr : &it->second;
}

const EntityCategory& Taxonomy::at(std::string_view id) const {
  if (const auto* c = find(id)) return *c;
  throw Error(ErrorKind::Lookup, "unknown category \"" + std::string(id) + "\"");
}

std::vector<const EntityCategory*> Taxonomy::ancestors(std::string_view id) const {
  std::vector<const EntityCategory*> out;
  const EntityCategory* cur = &at(id);
  while (cur->parent) {
    cur = &at(*cur->parent);
    out.push_back(cur);
  }
  return out;
}

LayerSet admissible_layers(const Taxonomy& taxonomy, std::string_view category) {
  return taxonomy.at(category).admissible_layers;
}

bool is_subcategory(const Taxonomy& taxonomy, std::string_view a, std::string_view b) {
  taxonomy.at(b);
  if (a == b) {
    taxonomy.at(a);
    return true;
  }
  for (const auto* anc : taxonomy.ancestors(a))
    if (anc->id == b) return true;
  return false;
}

const Taxonomy& default_taxonomy() {
  static const Taxonomy instance = [] {
    using F = CategoryFlag;
    const FlagSet guide{F::GuidanceObject};
    const FlagSet road{F::RoadsideStructure};
    const FlagSet plant{F::RoadsideStructure, F::SupportsPeriodicState};
    const FlagSet mov{F::Movable};
    const FlagSet env{F::EnvironmentalCondition};
    const FlagSet dig{F::DigitalInformation};
    auto cat = [](std::string id, std::optional<std::string> parent, std::string name,
                  LayerSet layers, FlagSet flags) {
      return EntityCategory{std::move(id), std::move(parent), std::move(name), layers, flags};
    };
    std::vector<EntityCategory> c = {
        cat("entity", std::nullopt, "Entity", LayerSet::all(), {}),

        cat("road_network", "entity", "Road network", {1}, {}),
        cat("road_network.road", "road_network", "Road (incl. shoulders, sidewalks, parking spaces)", {1}, {}),
        cat("road_network.road_surface", "road_network", "Road surface", {1}, {}),

        cat("guidance", "entity", "Traffic guidance object", {1, 3}, guide),
        cat("guidance.road_marking", "guidance", "Road marking", {1, 3}, guide),
        cat("guidance.traffic_sign", "guidance", "Traffic sign", {1, 3}, guide),
        cat("guidance.traffic_sign.beacon", "guidance.traffic_sign", "Beacon / delineator", {1, 3},
            {F::GuidanceObject, F::SupportsPeriodicState}),
        cat("guidance.traffic_sign.cone", "guidance.traffic_sign", "Traffic cone", {3},
            {F::GuidanceObject, F::TemporaryOnly}),
        cat("guidance.traffic_light", "guidance", "Traffic light", {1, 3},
            {F::GuidanceObject, F::SupportsPeriodicState}),

        cat("roadside", "entity", "Roadside structure", {2, 3, 4}, road),
        cat("roadside.building", "roadside", "Building", {2, 3}, road),
        cat("roadside.vegetation", "roadside", "Vegetation", {2, 3, 4}, plant),
        cat("roadside.vegetation.tree", "roadside.vegetation", "Tree", {2, 3, 4}, plant),
        cat("roadside.vegetation.bush", "roadside.vegetation", "Bush", {2, 3, 4}, plant),
        cat("roadside.street_lamp", "roadside", "Street lamp", {2, 3}, road),
        cat("roadside.guardrail", "roadside", "Guardrail", {2, 3}, road),
        cat("roadside.wall", "roadside", "Wall", {2, 3}, road),
        cat("roadside.fence", "roadside", "Fence", {2, 3}, road),
        cat("roadside.advertising_board", "roadside", "Advertising board / pillar", {2}, plant),
        cat("roadside.bus_shelter", "roadside", "Bus shelter", {2}, road),
        cat("roadside.bollard", "roadside", "Bollard", {2}, road),
        cat("roadside.hydrant", "roadside", "Hydrant", {2}, road),
        cat("roadside.fountain", "roadside", "Fountain", {2}, road),
        cat("roadside.bicycle_stand", "roadside", "Bicycle stand", {2}, road),

        cat("dynamic", "entity", "Dynamic object", {4}, mov),
        cat("dynamic.vehicle", "dynamic", "Vehicle", {4}, mov),
        cat("dynamic.vehicle.trailer", "dynamic.vehicle", "Trailer", {4}, mov),
        cat("dynamic.motorcycle", "dynamic", "Motorcycle", {4}, mov),
        cat("dynamic.bicycle", "dynamic", "Bicycle", {4}, mov),
        cat("dynamic.pedestrian", "dynamic", "Pedestrian", {4}, mov),
        cat("dynamic.rail_vehicle", "dynamic", "Rail vehicle", {4}, mov),
        cat("dynamic.animal", "dynamic", "Animal", {4}, mov),
        cat("dynamic.misc_object", "dynamic", "Miscellaneous movable object", {3, 4}, mov),

        cat("env", "entity", "Environmental condition", {5}, env),
        cat("env.precipitation", "env", "Precipitation", {5}, env),
        cat("env.road_weather", "env", "Road weather", {5}, env),
        cat("env.wind", "env", "Wind", {5}, env),
        cat("env.lighting", "env", "Lighting", {5}, env),
        cat("env.fog", "env", "Fog / visibility", {5}, env),

        cat("digital", "entity", "Digital information", {6}, dig),
        cat("digital.v2x_message", "digital", "V2X message", {6}, dig),
        cat("digital.signal_coverage", "digital", "Signal coverage", {6}, dig),
        cat("digital.switchable_state", "digital", "Traffic light / switchable sign state", {6}, dig),
    };
    return Taxonomy::from_categories("1.0", std::move(c));
  }();
  return instance;
}

Taxonomy load_taxonomy(std::string_view document) {
  using detail::Json;
  Json doc = detail::parse_json_text(document);
  detail::require_object(doc, "taxonomy");
  detail::expect_keys(doc, {"version", "categories"}, "taxonomy");
  std::string version = detail::require_string(detail::require(doc, "version", "taxonomy"), "version");
  const auto& arr = detail::require_array(detail::require(doc, "categories", "taxonomy"), "categories");

  std::vector<EntityCategory> cats;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string where = "categories[" + std::to_string(i) + "]";
    const auto& j = detail::require_object(arr[i], where);
    detail::expect_keys(j, {"id", "parent", "display_name", "admissible_layers", "flags"}, where);
    EntityCategory c;
    c.id = detail::require_string(detail::require(j, "id", where), where + ".id");
    where = "category \"" + c.id + "\"";
    const auto& parent = detail::require(j, "parent", where);
    if (!parent.is_null()) c.parent = detail::require_string(parent, where + ".parent");
    c.display_name = detail::require_string(detail::require(j, "display_name", where), where + ".display_name");
    for (const auto& l : detail::require_array(detail::require(j, "admissible_layers", where), where)) {
      int v = detail::require_int(l, where + ".admissible_layers");
      if (!Layer::try_from_int(v))
        throw Error(ErrorKind::Schema, where + ": layer out of range: " + std::to_string(v));
      c.admissible_layers.insert(v);
    }
    for (const auto& f : detail::require_array(detail::require(j, "flags", where), where)) {
      auto name = detail::require_string(f, where + ".flags");
      auto flag = category_flag_from_string(name);
      if (!flag) throw Error(ErrorKind::Schema, where + ": unknown flag \"" + name + "\"");
      c.flags.insert(*flag);
    }
    cats.push_back(std::move(c));
  }
  return Taxonomy::from_categories(std::move(version), std::move(cats));
}

std::string serialize_taxonomy(const Taxonomy& taxonomy) {
  using detail::Json;
  Json cats = Json::array();
  for (const auto& [id, c] : taxonomy.categories()) {
    Json j;
    j["id"] = c.id;
    j["parent"] = c.parent ? Json(*c.parent) : Json(nullptr);
    j["display_name"] = c.display_name;
    j["admissible_layers"] = c.admissible_layers.members();
    j["flags"] = c.flags.names();
    cats.push_back(std::move(j));
  }
  Json doc;
  doc["version"] = taxonomy.version();
  doc["categories"] = std::move(cats);
  return detail::dump_canonical(doc);
}

}  // namespace sixlayer
