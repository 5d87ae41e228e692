#include "sixlayer/rules.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>

#include "json_util.hpp"
#include "sixlayer/error.hpp"

namespace sixlayer {

namespace {

struct RuleInfo {
  RuleId id;
  std::string_view name;
  std::string_view anchor;
  std::string_view statement;
};

// Guideline statements. T1 is the taxonomy-conformance check.
constexpr std::array<RuleInfo, 9> kRules = {{
    {RuleId::G1, "G1", "Guideline 1 (spatial/temporal separation)",
     "Layers 1, 2 and 3 conduct a spatial-based description. They do not contain any "
     "time-variable aspects. Time-based descriptions are introduced from Layer 4 upwards."},
    {RuleId::G2, "G2", "Guideline 2 (Layer 3 content)",
     "Layer 3 contains temporary changes of Layer 1 and 2. These changes are fixed for the "
     "whole duration of the scenario. They are not permanent in the sense of Layer 1 and 2."},
    {RuleId::G3, "G3", "Guideline 3 (state changes)",
     "From Layer 3 upwards, state changes are introduced. Additionally, from Layer 4 upwards "
     "state changes can be time-dependent."},
    {RuleId::G4, "G4", "Guideline 4 (time-dependent entities)",
     "If an entity has time-dependent properties (potentially variable during a scenario), it "
     "should be placed on Layer 4 upwards. However, not all its properties need to be "
     "time-dependent."},
    {RuleId::G5, "G5", "Guideline 5 (one layer per property)",
     "Not all properties of an entity are necessarily in the same layer. The same property of a "
     "given entity should, however, not be located on different layers. If in doubt where to "
     "locate a property, it is placed in the layer where it matches the description of the "
     "layer best and has the largest influence."},
    {RuleId::G6, "G6", "Guideline 6 (annotations)",
     "Annotations can be used for reasons of simplicity or in order to add extra information."},
    {RuleId::G7, "G7", "Guideline 7 (actor-independence)",
     "Allegedly global properties need to be thoroughly checked whether they are truly "
     "objective. If they are not, they are not part of the 6LM."},
    {RuleId::G8, "G8", "Guideline 8 (influence in any direction)",
     "Properties of all layers can influence properties on other layers. There is no single "
     "direction of influence."},
    {RuleId::T1, "T1", "Layer 3 instantiation of L1/L2 classes",
     "Every entity must be placed on a layer admissible for its category. Categories are "
     "layer-independent classes; instances carry the layer. Temporary-only categories such as "
     "traffic cones are classes of traffic guidance objects that are instantiated in Layer 3 "
     "only, because they are non-permanent in the real world."},
}};

const RuleInfo& info(RuleId id) { return kRules[static_cast<std::size_t>(id)]; }

class Collector {
 public:
  void add(RuleId rule, Severity severity, const Entity& e, std::optional<std::string> property,
           std::string message) {
    out_.push_back({rule, severity, {e.id, std::move(property)}, std::move(message),
                    std::string(info(rule).anchor)});
  }
  std::vector<Diagnostic> take() { return std::move(out_); }

 private:
  std::vector<Diagnostic> out_;
};

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// A category counts as an L1/L2 class if it or any non-root ancestor is
// admissible on layer 1 or 2 (cones are traffic signs instantiated on L3).
bool is_l1_l2_class(const Taxonomy& taxonomy, const EntityCategory& cat) {
  auto l12 = [](const EntityCategory& c) {
    return c.admissible_layers.contains(layers::kRoadNetwork) ||
           c.admissible_layers.contains(layers::kRoadside);
  };
  if (l12(cat)) return true;
  for (const auto* anc : taxonomy.ancestors(cat.id))
    if (anc->parent && l12(*anc)) return true;
  return false;
}

std::string layer_str(const Entity& e) { return std::to_string(e.layer.value()); }

void check_g1_g3_g4(const Entity& e, const EntityCategory* cat, Collector& out) {
  if (e.layer.value() > layers::kTemporary) return;
  const bool movable = cat && cat->has(CategoryFlag::Movable);
  bool movable_reported = false;
  for (const auto& p : e.properties) {
    if (!p.is_series()) continue;
    if (e.layer.value() == layers::kTemporary && starts_with(p.name, kStatePrefix)) {
      out.add(RuleId::G3, Severity::Error, e, p.name,
              "changed state on layer 3 must be single-valued; an observed state change "
              "belongs on layer 4 or above");
    } else if (movable) {
      if (!movable_reported)
        out.add(RuleId::G4, Severity::Error, e, std::nullopt,
                "movable entity with time-dependent properties must be placed on layer 4 or "
                "above (found on layer " + layer_str(e) + ")");
      movable_reported = true;
    } else {
      out.add(RuleId::G1, Severity::Error, e, p.name,
              "time series on layer " + layer_str(e) + "; layers 1-3 are spatial-only");
    }
  }
  if (movable) {
    const auto* ps = e.find_annotation(kPeriodicStateKey);
    if (ps && ps->value == "oscillating")
      out.add(RuleId::G4, Severity::Warning, e, std::nullopt,
              "movable entity annotated as oscillating but placed on layer " + layer_str(e) +
                  "; motion is described from layer 4 upwards");
  }
}

void check_g2(const Scenario& s, const Entity& e, const EntityCategory* cat, const Taxonomy& taxonomy,
              const RuleConfig& config, Collector& out) {
  if (e.layer.value() != layers::kTemporary) return;
  if (e.modifies) {
    const Entity* target = s.find(*e.modifies);
    if (!target) {
      out.add(RuleId::G2, Severity::Error, e, std::nullopt,
              "modifies unresolved entity \"" + *e.modifies + "\"");
    } else if (target->layer.value() != layers::kRoadNetwork &&
               target->layer.value() != layers::kRoadside) {
      out.add(RuleId::G2, Severity::Error, e, std::nullopt,
              "modifies \"" + target->id + "\" on layer " + layer_str(*target) +
                  "; layer 3 may only modify layer 1 or 2 content");
    }
  } else if (cat && !is_l1_l2_class(taxonomy, *cat)) {
    out.add(RuleId::G2, Severity::Error, e, std::nullopt,
            "category \"" + cat->id + "\" is not a layer 1/2 class and the entity modifies nothing");
  }

  auto it = s.metadata().find(std::string(kStandingDurationKey));
  if (it != s.metadata().end()) {
    double days = 0.0;
    const auto& txt = it->second;
    auto [end, ec] = std::from_chars(txt.data(), txt.data() + txt.size(), days);
    if (ec == std::errc() && end == txt.data() + txt.size() && days > config.temporary_threshold_days) {
      std::ostringstream msg;
      msg << "declared standing duration " << days << " days exceeds the "
          << config.temporary_threshold_days
          << "-day orientation value; confirm the modification is still temporary";
      out.add(RuleId::G2, Severity::Info, e, std::nullopt, msg.str());
    }
  }
}

void check_g5(const Scenario& s, const Entity& e, Collector& out) {
  std::vector<const Entity*> linked;
  if (e.modifies)
    if (const Entity* t = s.find(*e.modifies)) linked.push_back(t);
  for (const auto& inf : e.influences)
    if (inf.label == kStateOfLabel)
      if (const Entity* t = s.find(inf.target)) linked.push_back(t);
  std::sort(linked.begin(), linked.end());
  linked.erase(std::unique(linked.begin(), linked.end()), linked.end());
  for (const Entity* t : linked) {
    if (t->layer == e.layer) continue;
    for (const auto& p : e.properties) {
      if (t->find_property(p.name))
        out.add(RuleId::G5, Severity::Error, e, p.name,
                "property also declared on linked entity \"" + t->id + "\" (layer " +
                    layer_str(*t) + "); one property belongs to one layer");
    }
  }
}

void check_g6(const Entity& e, const EntityCategory* cat, const RuleConfig& config, Collector& out) {
  for (const auto& a : e.annotations) {
    if (!config.annotation_registry.count(a.key))
      out.add(RuleId::G6, Severity::Warning, e, std::nullopt,
              "annotation key \"" + a.key + "\" is not in the annotation registry");
  }
  if (cat && e.find_annotation(kPeriodicStateKey) && !cat->has(CategoryFlag::SupportsPeriodicState))
    out.add(RuleId::G6, Severity::Info, e, std::nullopt,
            "periodic_state annotation on category \"" + cat->id +
                "\", which does not declare periodic states");
}

void check_g7(const Entity& e, const RuleConfig& config, Collector& out) {
  for (const auto& p : e.properties)
    if (config.global_property_blocklist.count(p.name))
      out.add(RuleId::G7, Severity::Error, e, p.name,
              "actor-dependent quantity stored as a property; derive it instead");
}

void check_g8(const Scenario& s, const Entity& e, Collector& out) {
  for (const auto& inf : e.influences)
    if (!s.find(inf.target))
      out.add(RuleId::G8, Severity::Error, e, std::nullopt,
              "influence \"" + inf.label + "\" targets unresolved entity \"" + inf.target + "\"");
}

void check_t1(const Entity& e, const EntityCategory* cat, Collector& out) {
  if (!cat) {
    out.add(RuleId::T1, Severity::Error, e, std::nullopt,
            "unknown category \"" + e.category + "\"");
    return;
  }
  if (cat->has(CategoryFlag::TemporaryOnly) && e.layer.value() != layers::kTemporary) {
    out.add(RuleId::T1, Severity::Error, e, std::nullopt,
            "temporary-only category \"" + cat->id + "\" must be instantiated on layer 3 (found " +
                layer_str(e) + ")");
  } else if (!cat->admissible_layers.contains(e.layer)) {
    out.add(RuleId::T1, Severity::Error, e, std::nullopt,
            "layer " + layer_str(e) + " not admissible for category \"" + cat->id + "\" {" +
                cat->admissible_layers.to_string() + "}");
  }
}

}  // namespace

std::string_view to_string(RuleId rule) noexcept { return info(rule).name; }

std::optional<RuleId> rule_from_string(std::string_view name) noexcept {
  for (const auto& r : kRules)
    if (r.name == name) return r.id;
  return std::nullopt;
}

std::string_view to_string(Severity severity) noexcept {
  switch (severity) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "?";
}

std::optional<Severity> severity_from_string(std::string_view name) noexcept {
  if (name == "error") return Severity::Error;
  if (name == "warning") return Severity::Warning;
  if (name == "info") return Severity::Info;
  return std::nullopt;
}

RuleConfig load_rule_config(std::string_view document) {
  using detail::Json;
  Json doc = detail::parse_json_text(document);
  detail::require_object(doc, "config");
  detail::expect_keys(doc,
                      {"global_property_blocklist", "annotation_registry", "temporary_threshold_days",
                       "severity_overrides"},
                      "config");
  RuleConfig cfg;
  auto string_set = [&](const char* key, std::set<std::string>& target) {
    if (!doc.contains(key)) return;
    target.clear();
    for (const auto& v : detail::require_array(doc[key], key)) target.insert(detail::require_string(v, key));
  };
  string_set("global_property_blocklist", cfg.global_property_blocklist);
  string_set("annotation_registry", cfg.annotation_registry);
  if (doc.contains("temporary_threshold_days")) {
    cfg.temporary_threshold_days = detail::require_number(doc["temporary_threshold_days"], "temporary_threshold_days");
    if (cfg.temporary_threshold_days <= 0.0)
      throw Error(ErrorKind::Range, "temporary_threshold_days must be > 0");
  }
  if (doc.contains("severity_overrides")) {
    for (const auto& [k, v] : detail::require_object(doc["severity_overrides"], "severity_overrides").items()) {
      auto rule = rule_from_string(k);
      if (!rule) throw Error(ErrorKind::Schema, "severity_overrides: unknown rule \"" + k + "\"");
      auto sev = severity_from_string(detail::require_string(v, "severity_overrides." + k));
      if (!sev) throw Error(ErrorKind::Schema, "severity_overrides: bad severity for " + k);
      cfg.severity_overrides[*rule] = *sev;
    }
  }
  return cfg;
}

std::vector<Diagnostic> validate(const Scenario& scenario, const Taxonomy& taxonomy,
                                 const RuleConfig& config) {
  Collector out;
  for (const auto& e : scenario.entities()) {
    const EntityCategory* cat = taxonomy.find(e.category);
    check_g1_g3_g4(e, cat, out);
    check_g2(scenario, e, cat, taxonomy, config, out);
    check_g5(scenario, e, out);
    check_g6(e, cat, config, out);
    check_g7(e, config, out);
    check_g8(scenario, e, out);
    check_t1(e, cat, out);
  }
  auto diags = out.take();
  for (auto& d : diags) {
    if (auto it = config.severity_overrides.find(d.rule); it != config.severity_overrides.end())
      d.severity = it->second;
  }
  std::sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.subject.entity != b.subject.entity) return a.subject.entity < b.subject.entity;
    if (a.rule != b.rule) return a.rule < b.rule;
    if (a.subject.property != b.subject.property) return a.subject.property < b.subject.property;
    return a.message < b.message;
  });
  return diags;
}

std::string explain(std::string_view rule) {
  auto id = rule_from_string(rule);
  if (!id) throw Error(ErrorKind::Lookup, "unknown rule \"" + std::string(rule) + "\"");
  const auto& r = info(*id);
  return std::string(r.name) + ": " + std::string(r.statement) + "\n[" + std::string(r.anchor) + "]\n";
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string sev(to_string(d.severity));
  std::transform(sev.begin(), sev.end(), sev.begin(), [](unsigned char c) { return std::toupper(c); });
  std::string subject = d.subject.entity;
  if (d.subject.property) subject += "." + *d.subject.property;
  return sev + " " + std::string(to_string(d.rule)) + " " + subject + ": " + d.message + " [" + d.anchor + "]";
}

std::string diagnostics_to_json(const std::vector<Diagnostic>& diagnostics) {
  using detail::Json;
  Json arr = Json::array();
  for (const auto& d : diagnostics) {
    Json subject;
    subject["entity"] = d.subject.entity;
    subject["property"] = d.subject.property ? Json(*d.subject.property) : Json(nullptr);
    arr.push_back({{"rule", std::string(to_string(d.rule))},
                   {"severity", std::string(to_string(d.severity))},
                   {"subject", subject},
                   {"message", d.message},
                   {"anchor", d.anchor}});
  }
  return detail::dump_canonical(arr);
}

}  // namespace sixlayer
