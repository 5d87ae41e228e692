#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sixlayer/model.hpp"

namespace sixlayer {

// ---------------------------------------------------------------------------
// Scenes

struct SceneEntity {
  std::string id;
  std::string category;
  Layer layer = Layer::from_int(1);
  std::map<std::string, PropertyValue> properties;
  std::vector<Annotation> annotations;
  friend bool operator==(const SceneEntity&, const SceneEntity&) = default;
};

/// Snapshot of a scenario at one timestamp; every property is a plain value.
struct Scene {
  double timestamp = 0.0;
  std::vector<SceneEntity> entities;  // scenario order: (layer, id)
  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Throws Error(Range) unless 0 <= t <= duration.
Scene scene_at(const Scenario& scenario, double t);

std::string scene_to_json(const Scene& scene);
std::string scene_to_text(const Scene& scene);

// ---------------------------------------------------------------------------
// Projection

/// Keeps exactly the entities on `layers`. Links to dropped entities stay in
/// place and their targets are listed under the dangling_references
/// metadata key.
Scenario project(const Scenario& scenario, LayerSet layers);

// ---------------------------------------------------------------------------
// Diff

struct PropertyDelta {
  std::string name;  // property name, or "@category", "@lifespan_s", ...
  std::optional<std::string> old_value;  // canonical JSON text; absent if added
  std::optional<std::string> new_value;  // absent if removed
  bool series_changed = false;           // either side is a time series
  friend bool operator==(const PropertyDelta&, const PropertyDelta&) = default;
};

struct EntityChange {
  std::string id;
  std::vector<PropertyDelta> properties;  // sorted by name
  friend bool operator==(const EntityChange&, const EntityChange&) = default;
};

struct LayerDiff {
  std::vector<std::string> added;
  std::vector<std::string> removed;
  std::vector<EntityChange> changed;
  bool empty() const noexcept { return added.empty() && removed.empty() && changed.empty(); }
  friend bool operator==(const LayerDiff&, const LayerDiff&) = default;
};

/// Per-layer differences; layers without differences are absent.
struct DiffReport {
  std::map<int, LayerDiff> layers;
  bool empty() const noexcept { return layers.empty(); }
  friend bool operator==(const DiffReport&, const DiffReport&) = default;
};

/// Entities are matched by id. An entity that moved layers is removed from
/// the old layer and added to the new one. Values compare by canonical text.
DiffReport diff(const Scenario& a, const Scenario& b);

std::string diff_to_json(const DiffReport& report);
std::string diff_to_text(const DiffReport& report);

// ---------------------------------------------------------------------------
// Derived, actor-dependent quantities. These are computed from a
// description and never stored in it.

inline constexpr std::string_view kFootprintProperty = "footprint";

struct OcclusionResult {
  Point2 observer;
  std::set<std::string> fully_occluded;
  std::set<std::string> partially_occluded;
  std::set<std::string> visible;
};

/// 2D visibility from `observer`: each target's footprint is sampled at its
/// vertices and edge midpoints; a sample is blocked when the sight line
/// crosses the interior of another entity's footprint. All blocked: fully
/// occluded; none: visible; otherwise partial.
/// Throws Error(Lookup) for a missing target or footprint, Error(Range)
/// when the observer lies inside an obstacle.
OcclusionResult derive_occlusion(const Scene& scene, Point2 observer, const std::set<std::string>& targets);

/// (surface material, road weather, tire class) -> friction coefficient.
class FrictionTable {
 public:
  void set(std::string surface, std::string weather, std::string tire, double coefficient);
  std::optional<double> find(std::string_view surface, std::string_view weather,
                             std::string_view tire) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// JSON array of {"surface","weather","tire","mu"} objects.
  static FrictionTable load(std::string_view document);

 private:
  std::map<std::tuple<std::string, std::string, std::string>, double, std::less<>> entries_;
};

/// Table lookup; throws Error(Lookup) when the triple is missing.
double derive_friction(std::string_view surface_material, std::string_view road_weather,
                       std::string_view tire_class, const FrictionTable& table);

}  // namespace sixlayer
