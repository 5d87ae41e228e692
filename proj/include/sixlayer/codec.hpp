#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sixlayer/model.hpp"

namespace sixlayer {

inline constexpr std::string_view kFormatVersion = "1.0";

/// Canonical scenario document: sorted keys, entities by (layer, id),
/// properties by name, shortest round-trip numbers, trailing newline.
std::string serialize_scenario(const Scenario& scenario);

/// Strict parse of a scenario document. Unknown keys are rejected at every
/// level; property names are free-form. When `taxonomy` is given, category
/// ids must resolve in it.
/// Throws Error(Parse) with line:column for syntax errors, Error(Schema)
/// naming the entity for shape errors, Error(Structure) for invariant
/// violations.
Scenario parse_scenario(std::string_view text, const Taxonomy* taxonomy = nullptr);

/// Canonical JSON text of a single value, e.g. {"enum":"dry"}. Used for
/// value comparison in diffs.
std::string canonical_value_text(const PropertyValue& value);
std::string canonical_series_text(const TimeSeries& series);

/// Spatial part of a scenario: header plus every entity on layers 1-3.
struct StaticDocument {
  std::string id;
  double duration = 0.0;
  std::map<std::string, std::string> metadata;
  std::vector<Entity> entities;
  friend bool operator==(const StaticDocument&, const StaticDocument&) = default;
};

/// Temporal part: every entity on layers 4-6, tied to one static document.
struct DynamicDocument {
  std::string static_id;
  std::vector<Entity> entities;
  friend bool operator==(const DynamicDocument&, const DynamicDocument&) = default;
};

/// Partitions by layer. Throws Error(Structure) if any entity on layers 1-3
/// owns a time series; the split never moves data between layers.
std::pair<StaticDocument, DynamicDocument> split(const Scenario& scenario);

/// Inverse of split. Throws Error(Structure) on an id mismatch between the
/// documents or an entity id present in both.
Scenario merge(const StaticDocument& static_doc, const DynamicDocument& dynamic_doc,
               const Taxonomy* taxonomy = nullptr);

std::string serialize_static(const StaticDocument& doc);
std::string serialize_dynamic(const DynamicDocument& doc);
StaticDocument parse_static(std::string_view text);
DynamicDocument parse_dynamic(std::string_view text);

}  // namespace sixlayer
