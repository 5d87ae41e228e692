#include "sixlayer/classify.hpp"

#include <sstream>

#include "sixlayer/error.hpp"

namespace sixlayer {

namespace {

struct Step {
  const char* id;
  int layer;
  const char* text;
  const char* anchor;
};

constexpr Step kDigital{"S1", 6, "digital information or state of a switchable object",
                        "Layer 6: states of traffic lights and switchable traffic signs"};
constexpr Step kEnvironment{"S2", 5, "environmental condition",
                            "Layer 5: weather, atmospheric and lighting conditions"};
constexpr Step kTimeVarying{"S3", 4, "has time-varying properties",
                            "Guideline 4: time-dependent entities on Layer 4 upwards"};
constexpr Step kTemporary{"S4", 3, "temporary or modifies existing layer 1/2 content",
                          "Layer 3: temporary modifications of elements of Layer 1 and Layer 2"};
constexpr Step kGuidance{"S5", 1, "traffic guidance object or road network",
                         "Layer 1: permanent objects required for traffic guidance"};
constexpr Step kRoadside{"S6", 2, "roadside structure",
                         "Layer 2: static objects placed alongside, not onto, the road"};

class Walker {
 public:
  explicit Walker(const EntityCategory& cat) : cat_(cat) {}

  // True if the step fired and produced the final layer.
  bool apply(const Step& step, bool matches) {
    if (!matches) return false;
    if (!cat_.admissible_layers.contains(step.layer)) {
      result_.rationale.push_back(
          {step.id,
           std::string("skipped: ") + step.text + ", but layer " + std::to_string(step.layer) +
               " is not admissible for \"" + cat_.id + "\" {" + cat_.admissible_layers.to_string() + "}",
           step.anchor});
      return false;
    }
    result_.layer = Layer::from_int(step.layer);
    result_.rationale.push_back({step.id, std::string(step.text) + " -> layer " + std::to_string(step.layer),
                                 step.anchor});
    return true;
  }

  void fallback() {
    int layer = *cat_.admissible_layers.lowest();
    result_.layer = Layer::from_int(layer);
    result_.rationale.push_back(
        {"S7",
         "warning: no decisive step matched; using lowest admissible layer " + std::to_string(layer) +
             " of \"" + cat_.id + "\"",
         "Guideline 5: layer of largest influence"});
  }

  ClassificationResult& result() { return result_; }

 private:
  const EntityCategory& cat_;
  ClassificationResult result_;
};

}  // namespace

ClassificationResult suggest_layer(const EntityDraft& draft, const Taxonomy& taxonomy,
                                   const RuleConfig& config) {
  const EntityCategory& cat = taxonomy.at(draft.category);
  if (draft.modifies_existing && *draft.modifies_existing != 1 && *draft.modifies_existing != 2)
    throw Error(ErrorKind::Range, "modifies_existing must be layer 1 or 2");

  const bool road_network_branch =
      taxonomy.find("road_network") && is_subcategory(taxonomy, cat.id, "road_network");

  Walker w(cat);
  bool done =
      w.apply(kDigital, cat.has(CategoryFlag::DigitalInformation) || draft.is_state_of_switchable) ||
      w.apply(kEnvironment, cat.has(CategoryFlag::EnvironmentalCondition)) ||
      w.apply(kTimeVarying, draft.has_time_varying_property) ||
      w.apply(kTemporary, draft.is_temporary || draft.modifies_existing.has_value()) ||
      w.apply(kGuidance, cat.has(CategoryFlag::GuidanceObject) || road_network_branch) ||
      w.apply(kRoadside, cat.has(CategoryFlag::RoadsideStructure));
  if (!done) w.fallback();

  if (draft.standing_duration_days && *draft.standing_duration_days > config.temporary_threshold_days) {
    std::ostringstream text;
    text << "standing duration " << *draft.standing_duration_days << " days exceeds the "
         << config.temporary_threshold_days << "-day orientation value; temporariness is a case-by-case call";
    w.result().rationale.push_back({"note", text.str(), "Layer 3: no fixed threshold for 'temporary'"});
  }
  return std::move(w.result());
}

EntityDraft draft_from_entity(const Scenario& scenario, const Entity& entity, const Taxonomy& taxonomy) {
  const EntityCategory& cat = taxonomy.at(entity.category);
  EntityDraft d;
  d.category = entity.category;
  d.has_time_varying_property = entity.has_time_series();
  d.is_temporary = cat.has(CategoryFlag::TemporaryOnly);
  if (entity.modifies) {
    if (const Entity* target = scenario.find(*entity.modifies)) {
      int l = target->layer.value();
      if (l == layers::kRoadNetwork || l == layers::kRoadside) d.modifies_existing = l;
    }
  }
  return d;
}

std::vector<EntityClassification> classify_scenario(const Scenario& scenario, const Taxonomy& taxonomy,
                                                    const RuleConfig& config) {
  std::vector<EntityClassification> out;
  for (const auto& e : scenario.entities()) {
    if (!taxonomy.find(e.category)) continue;
    auto suggestion = suggest_layer(draft_from_entity(scenario, e, taxonomy), taxonomy, config);
    bool agrees = suggestion.layer == e.layer;
    out.push_back({e.id, e.layer, std::move(suggestion), agrees});
  }
  return out;
}

std::string format_rationale(const ClassificationResult& result) {
  std::ostringstream os;
  for (const auto& s : result.rationale) os << "    " << s.step << ": " << s.text << " [" << s.anchor << "]\n";
  return os.str();
}

}  // namespace sixlayer
