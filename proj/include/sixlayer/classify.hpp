#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sixlayer/model.hpp"
#include "sixlayer/rules.hpp"
#include "sixlayer/taxonomy.hpp"

namespace sixlayer {

/// What is known about an entity before it is placed on a layer.
struct EntityDraft {
  std::string category;
  bool has_time_varying_property = false;
  bool is_temporary = false;
  std::optional<int> modifies_existing;  // layer of the modified entity, 1 or 2
  bool is_state_of_switchable = false;
  std::optional<double> standing_duration_days;
};

struct RationaleStep {
  std::string step;  // "S1".."S7", or "note"
  std::string text;
  std::string anchor;
  friend bool operator==(const RationaleStep&, const RationaleStep&) = default;
};

struct ClassificationResult {
  Layer layer = Layer::from_int(1);
  std::vector<RationaleStep> rationale;
  friend bool operator==(const ClassificationResult&, const ClassificationResult&) = default;
};

/// Suggests a layer by walking a fixed decision order; the first matching
/// step wins:
///   S1 digital information / switchable state  -> 6
///   S2 environmental condition                 -> 5
///   S3 time-varying property                   -> 4
///   S4 temporary or modifying existing content -> 3
///   S5 guidance object or road network         -> 1
///   S6 roadside structure                      -> 2
///   S7 lowest admissible layer of the category (warning step)
/// A step whose layer is not admissible for the category is skipped and
/// noted, so the result always passes the T1 rule.
/// Throws Error(Lookup) for an unknown category, Error(Range) for a
/// modifies_existing outside {1, 2}.
ClassificationResult suggest_layer(const EntityDraft& draft, const Taxonomy& taxonomy,
                                   const RuleConfig& config = {});

/// Draft derived from stored data: any time series, the modified entity's
/// layer, and the category's temporary_only flag.
EntityDraft draft_from_entity(const Scenario& scenario, const Entity& entity, const Taxonomy& taxonomy);

struct EntityClassification {
  std::string entity;
  Layer stored_layer = Layer::from_int(1);
  ClassificationResult suggestion;
  bool agrees = false;
};

/// Applies suggest_layer to every entity and compares with the stored
/// layer. Entities with unresolvable categories are omitted (validate
/// reports them as T1).
std::vector<EntityClassification> classify_scenario(const Scenario& scenario, const Taxonomy& taxonomy,
                                                    const RuleConfig& config = {});

/// Indented rationale chain, one step per line.
std::string format_rationale(const ClassificationResult& result);

}  // namespace sixlayer
