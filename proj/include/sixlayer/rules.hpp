#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sixlayer/model.hpp"
#include "sixlayer/taxonomy.hpp"

namespace sixlayer {

/// Rule families: one per guideline plus taxonomy conformance (T1).
/// Declaration order is the sort order of diagnostics.
enum class RuleId { G1, G2, G3, G4, G5, G6, G7, G8, T1 };

std::string_view to_string(RuleId rule) noexcept;
std::optional<RuleId> rule_from_string(std::string_view name) noexcept;

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity severity) noexcept;
std::optional<Severity> severity_from_string(std::string_view name) noexcept;

struct Subject {
  std::string entity;
  std::optional<std::string> property;
  friend auto operator<=>(const Subject&, const Subject&) = default;
};

struct Diagnostic {
  RuleId rule = RuleId::G1;
  Severity severity = Severity::Error;
  Subject subject;
  std::string message;
  std::string anchor;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct RuleConfig {
  std::set<std::string> global_property_blocklist = {"friction_coefficient", "occlusion",
                                                     "visibility_from_actor"};
  std::set<std::string> annotation_registry = {"periodic_state", "emergency_duty",
                                               "privileges_active"};
  double temporary_threshold_days = 90.0;
  std::map<RuleId, Severity> severity_overrides;
};

/// Reads a RuleConfig JSON document; absent keys keep their defaults.
RuleConfig load_rule_config(std::string_view document);

/// Scenario metadata key carrying the real-world standing duration (days) of
/// the layer-3 content, compared against temporary_threshold_days.
inline constexpr std::string_view kStandingDurationKey = "standing_duration_days";

/// Property-name prefix marking a changed state.
inline constexpr std::string_view kStatePrefix = "state.";

/// Influence label that ties a state-carrying entity to the object it
/// describes (e.g. a layer-6 signal state to its layer-1 traffic light).
inline constexpr std::string_view kStateOfLabel = "state_of";

/// Runs every rule and returns all findings sorted by (entity, rule,
/// property, message). Never throws on content problems; an unresolvable
/// category is reported as a T1 error.
std::vector<Diagnostic> validate(const Scenario& scenario, const Taxonomy& taxonomy,
                                 const RuleConfig& config = {});

/// Guideline statement and anchor for a rule. Throws Error(Lookup) for an
/// unknown id.
std::string explain(std::string_view rule);

/// "ERROR G7 road.friction_coefficient: ... [Guideline 7]"
std::string format_diagnostic(const Diagnostic& d);
std::string diagnostics_to_json(const std::vector<Diagnostic>& diagnostics);

}  // namespace sixlayer
