#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sixlayer/geometry.hpp"
#include "sixlayer/layer.hpp"

namespace sixlayer {

class Taxonomy;

// ---------------------------------------------------------------------------
// Property values

struct Number {
  double value = 0.0;
  std::optional<std::string> unit;
  friend bool operator==(const Number&, const Number&) = default;
};

struct Text {
  std::string value;
  friend bool operator==(const Text&, const Text&) = default;
};

struct Boolean {
  bool value = false;
  friend bool operator==(const Boolean&, const Boolean&) = default;
};

/// Enumeration token such as "dry" or "red".
struct Token {
  std::string value;
  friend bool operator==(const Token&, const Token&) = default;
};

/// 2D or 3D vector (meters for positions, m/s for velocities).
struct Vector {
  std::vector<double> components;
  friend bool operator==(const Vector&, const Vector&) = default;
};

/// Simple polygon, ordered vertices in meters.
struct Polygon {
  std::vector<Point2> vertices;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

using PropertyValue = std::variant<Number, Text, Boolean, Token, Vector, Polygon>;

enum class ValueKind { Number, Text, Boolean, Token, Vector, Polygon };

ValueKind kind_of(const PropertyValue& value) noexcept;
std::string_view to_string(ValueKind kind) noexcept;

enum class Interpolation { Step, Linear };

std::string_view to_string(Interpolation interpolation) noexcept;

struct Sample {
  double t = 0.0;
  PropertyValue value;
  friend bool operator==(const Sample&, const Sample&) = default;
};

struct TimeSeries {
  Interpolation interpolation = Interpolation::Step;
  std::vector<Sample> samples;
  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

struct Property {
  std::string name;
  std::variant<PropertyValue, TimeSeries> value;

  bool is_series() const noexcept { return std::holds_alternative<TimeSeries>(value); }
  const TimeSeries* series() const noexcept { return std::get_if<TimeSeries>(&value); }
  const PropertyValue* constant() const noexcept { return std::get_if<PropertyValue>(&value); }

  friend bool operator==(const Property&, const Property&) = default;
};

// ---------------------------------------------------------------------------
// Entities and scenarios

inline constexpr std::string_view kPeriodicStateKey = "periodic_state";

struct Annotation {
  std::string key;
  std::string value;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Directed influence link to another entity of the same scenario.
struct Influence {
  std::string target;
  std::string label;
  friend auto operator<=>(const Influence&, const Influence&) = default;
};

/// Closed interval [start, end] in scenario seconds.
struct Lifespan {
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const Lifespan&, const Lifespan&) = default;
};

struct Entity {
  std::string id;
  std::string category;
  Layer layer = Layer::from_int(1);
  std::optional<Lifespan> lifespan;  // absent: whole scenario
  std::vector<Property> properties;
  std::vector<Annotation> annotations;
  std::optional<std::string> modifies;  // layer-3 entities only
  std::vector<Influence> influences;

  const Property* find_property(std::string_view name) const noexcept;
  const Annotation* find_annotation(std::string_view key) const noexcept;
  bool has_time_series() const noexcept;

  friend bool operator==(const Entity&, const Entity&) = default;
};

/// Metadata key listing reference targets that are intentionally absent
/// (written by layer projection). Comma separated, sorted.
inline constexpr std::string_view kDanglingReferencesKey = "dangling_references";

/// A validated scenario. Only ScenarioBuilder creates these, so every
/// instance satisfies the structural invariants. Entities are stored sorted
/// by (layer, id); properties by name, annotations by key, influences by
/// (target, label).
class Scenario {
 public:
  const std::string& id() const noexcept { return id_; }
  double duration() const noexcept { return duration_; }
  const std::vector<Entity>& entities() const noexcept { return entities_; }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }

  const Entity* find(std::string_view entity_id) const noexcept;

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  friend class ScenarioBuilder;
  Scenario() = default;

  std::string id_;
  double duration_ = 0.0;
  std::vector<Entity> entities_;
  std::map<std::string, std::string> metadata_;
};

/// Single-owner mutable builder. add_entity checks everything that can be
/// checked per entity; finish checks cross-entity references.
class ScenarioBuilder {
 public:
  /// Throws Error(Range) unless duration > 0. When `taxonomy` is given,
  /// category ids are checked against it.
  ScenarioBuilder(std::string id, double duration, const Taxonomy* taxonomy = nullptr);

  ScenarioBuilder& add_entity(Entity entity);
  ScenarioBuilder& set_metadata(std::string key, std::string value);

  std::size_t entity_count() const noexcept { return entities_.size(); }

  /// Throws Error(Structure) for unresolved references not declared in the
  /// dangling_references metadata entry.
  Scenario finish() const;

 private:
  std::string id_;
  double duration_;
  const Taxonomy* taxonomy_;
  std::vector<Entity> entities_;
  std::map<std::string, std::string> metadata_;
};

ScenarioBuilder new_scenario(std::string id, double duration, const Taxonomy* taxonomy = nullptr);

/// Checks a single value: vector dimension, polygon simplicity, finite
/// numbers, canonical units. Throws Error(Structure).
void check_value(const PropertyValue& value, const std::string& where);

/// Value of a property at time t. Constants are returned as-is; step series
/// hold the latest sample at or before t; linear series interpolate between
/// bracketing samples and clamp outside the sample range.
/// Throws Error(Lookup) for an unknown property, Error(Range) when t lies
/// outside the entity's lifespan.
PropertyValue evaluate_property(const Entity& entity, std::string_view name, double t);

/// Series evaluation without lifespan checks.
PropertyValue evaluate_series(const TimeSeries& series, double t);

/// Throws Error(Range) when t is outside [0, scenario duration].
bool entity_exists_at(const Scenario& scenario, const Entity& entity, double t);

}  // namespace sixlayer
