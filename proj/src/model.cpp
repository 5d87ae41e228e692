#include "sixlayer/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "sixlayer/error.hpp"
#include "sixlayer/taxonomy.hpp"

namespace sixlayer {

namespace {

// Units rejected in favour of the canonical SI form.
constexpr std::array<std::pair<std::string_view, std::string_view>, 11> kNonCanonicalUnits = {{
    {"km/h", "m/s"}, {"kmh", "m/s"}, {"mph", "m/s"}, {"km", "m"}, {"cm", "m"}, {"mm", "m"},
    {"ft", "m"}, {"deg", "rad"}, {"ms", "s"}, {"min", "s"}, {"h", "s"},
}};

[[noreturn]] void structural(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Structure, where + ": " + what);
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) structural(where, "number is not finite");
}

std::size_t vector_dim(const PropertyValue& v) {
  if (const auto* vec = std::get_if<Vector>(&v)) return vec->components.size();
  return 0;
}

void check_series(const TimeSeries& s, double duration, const std::string& where) {
  if (s.samples.size() < 2)
    structural(where, "time series needs at least 2 samples (use a constant property instead)");
  const ValueKind kind = kind_of(s.samples.front().value);
  const std::size_t dim = vector_dim(s.samples.front().value);
  if (s.interpolation == Interpolation::Linear && kind != ValueKind::Number &&
      kind != ValueKind::Vector)
    structural(where, "linear interpolation requires number or vector samples");
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const auto& smp = s.samples[i];
    check_finite(smp.t, where);
    if (smp.t < 0.0 || smp.t > duration)
      structural(where, "sample at t=" + fmt_num(smp.t) + " outside [0, " + fmt_num(duration) + "]");
    if (i > 0 && !(smp.t > s.samples[i - 1].t))
      structural(where, "sample timestamps must be strictly increasing");
    if (kind_of(smp.value) != kind || vector_dim(smp.value) != dim)
      structural(where, "all samples must share one value kind");
    check_value(smp.value, where);
  }
}

void check_entity(const Entity& e, double duration, const Taxonomy* taxonomy) {
  const std::string where = "entity \"" + e.id + "\"";
  if (e.id.empty()) structural("entity", "empty id");
  if (e.id.find(',') != std::string::npos) structural(where, "entity ids must not contain ','");
  if (e.category.empty()) structural(where, "empty category");
  if (taxonomy && !taxonomy->find(e.category))
    throw Error(ErrorKind::Lookup, where + ": unknown category \"" + e.category + "\"");
  if (e.lifespan) {
    check_finite(e.lifespan->start, where);
    check_finite(e.lifespan->end, where);
    if (!(0.0 <= e.lifespan->start && e.lifespan->start < e.lifespan->end &&
          e.lifespan->end <= duration))
      structural(where, "lifespan [" + fmt_num(e.lifespan->start) + ", " +
                            fmt_num(e.lifespan->end) + "] outside [0, " + fmt_num(duration) + "]");
  }
  if (e.modifies) {
    if (e.layer.value() != layers::kTemporary)
      structural(where, "modifies is only allowed on layer 3");
    if (e.modifies->empty()) structural(where, "empty modifies reference");
    if (*e.modifies == e.id) structural(where, "entity modifies itself");
  }
  std::set<std::string_view> names;
  for (const auto& p : e.properties) {
    const std::string pwhere = where + " property \"" + p.name + "\"";
    if (p.name.empty()) structural(where, "empty property name");
    if (!names.insert(p.name).second) structural(pwhere, "duplicate property name");
    if (const auto* s = p.series())
      check_series(*s, duration, pwhere);
    else
      check_value(*p.constant(), pwhere);
  }
  std::set<std::string_view> keys;
  for (const auto& a : e.annotations) {
    if (a.key.empty()) structural(where, "empty annotation key");
    if (!keys.insert(a.key).second) structural(where, "duplicate annotation key \"" + a.key + "\"");
    if (a.key == kPeriodicStateKey && a.value != "flashing" && a.value != "oscillating")
      structural(where, "periodic_state must be \"flashing\" or \"oscillating\"");
  }
  for (const auto& inf : e.influences)
    if (inf.target.empty()) structural(where, "influence with empty target");
}

std::set<std::string> split_csv(const std::string& s) {
  std::set<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    if (comma > pos) out.insert(s.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

PropertyValue lerp(const PropertyValue& a, const PropertyValue& b, double w) {
  if (const auto* na = std::get_if<Number>(&a)) {
    const auto& nb = std::get<Number>(b);
    return Number{na->value + w * (nb.value - na->value), na->unit};
  }
  const auto& va = std::get<Vector>(a).components;
  const auto& vb = std::get<Vector>(b).components;
  Vector out;
  out.components.resize(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) out.components[i] = va[i] + w * (vb[i] - va[i]);
  return out;
}

}  // namespace

ValueKind kind_of(const PropertyValue& value) noexcept {
  return static_cast<ValueKind>(value.index());
}

std::string_view to_string(ValueKind kind) noexcept {
  switch (kind) {
    case ValueKind::Number: return "number";
    case ValueKind::Text: return "text";
    case ValueKind::Boolean: return "bool";
    case ValueKind::Token: return "enum";
    case ValueKind::Vector: return "vector";
    case ValueKind::Polygon: return "polygon";
  }
  return "?";
}

std::string_view to_string(Interpolation interpolation) noexcept {
  return interpolation == Interpolation::Linear ? "linear" : "step";
}

void check_value(const PropertyValue& value, const std::string& where) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Number>) {
          check_finite(v.value, where);
          if (v.unit) {
            for (const auto& [bad, good] : kNonCanonicalUnits)
              if (*v.unit == bad)
                structural(where, "unit \"" + *v.unit + "\" is not canonical; use \"" +
                                      std::string(good) + "\"");
          }
        } else if constexpr (std::is_same_v<T, Vector>) {
          if (v.components.size() != 2 && v.components.size() != 3)
            structural(where, "vector dimension must be 2 or 3");
          for (double c : v.components) check_finite(c, where);
        } else if constexpr (std::is_same_v<T, Polygon>) {
          for (const auto& p : v.vertices) {
            check_finite(p.x, where);
            check_finite(p.y, where);
          }
          if (v.vertices.size() < 3) structural(where, "polygon needs at least 3 vertices");
          if (!geometry::is_simple_polygon(v.vertices)) structural(where, "polygon is not simple");
        }
      },
      value);
}

const Property* Entity::find_property(std::string_view name) const noexcept {
  for (const auto& p : properties)
    if (p.name == name) return &p;
  return nullptr;
}

const Annotation* Entity::find_annotation(std::string_view key) const noexcept {
  for (const auto& a : annotations)
    if (a.key == key) return &a;
  return nullptr;
}

bool Entity::has_time_series() const noexcept {
  return std::any_of(properties.begin(), properties.end(),
                     [](const Property& p) { return p.is_series(); });
}

const Entity* Scenario::find(std::string_view entity_id) const noexcept {
  for (const auto& e : entities_)
    if (e.id == entity_id) return &e;
  return nullptr;
}

ScenarioBuilder::ScenarioBuilder(std::string id, double duration, const Taxonomy* taxonomy)
    : id_(std::move(id)), duration_(duration), taxonomy_(taxonomy) {
  if (!std::isfinite(duration) || duration <= 0.0)
    throw Error(ErrorKind::Range, "scenario duration must be > 0 (got " + fmt_num(duration) + ")");
  if (id_.empty()) throw Error(ErrorKind::Structure, "scenario id must not be empty");
}

ScenarioBuilder new_scenario(std::string id, double duration, const Taxonomy* taxonomy) {
  return ScenarioBuilder(std::move(id), duration, taxonomy);
}

ScenarioBuilder& ScenarioBuilder::add_entity(Entity entity) {
  for (const auto& e : entities_)
    if (e.id == entity.id)
      throw Error(ErrorKind::Structure, "duplicate entity id \"" + entity.id + "\"");
  check_entity(entity, duration_, taxonomy_);
  entities_.push_back(std::move(entity));
  return *this;
}

ScenarioBuilder& ScenarioBuilder::set_metadata(std::string key, std::string value) {
  metadata_[std::move(key)] = std::move(value);
  return *this;
}

Scenario ScenarioBuilder::finish() const {
  std::set<std::string_view> ids;
  for (const auto& e : entities_) ids.insert(e.id);

  std::set<std::string> unresolved;
  for (const auto& e : entities_) {
    if (e.modifies && !ids.count(*e.modifies)) unresolved.insert(*e.modifies);
    for (const auto& inf : e.influences)
      if (!ids.count(inf.target)) unresolved.insert(inf.target);
  }
  std::set<std::string> declared;
  if (auto it = metadata_.find(std::string(kDanglingReferencesKey)); it != metadata_.end())
    declared = split_csv(it->second);
  if (unresolved != declared) {
    for (const auto& u : unresolved)
      if (!declared.count(u))
        throw Error(ErrorKind::Structure, "unresolved entity reference \"" + u + "\"");
    for (const auto& d : declared)
      if (!unresolved.count(d))
        throw Error(ErrorKind::Structure,
                    "dangling_references lists \"" + d + "\" but no link targets it");
  }

  Scenario s;
  s.id_ = id_;
  s.duration_ = duration_;
  s.metadata_ = metadata_;
  s.entities_ = entities_;
  for (auto& e : s.entities_) {
    std::sort(e.properties.begin(), e.properties.end(),
              [](const Property& a, const Property& b) { return a.name < b.name; });
    std::sort(e.annotations.begin(), e.annotations.end(),
              [](const Annotation& a, const Annotation& b) { return a.key < b.key; });
    std::sort(e.influences.begin(), e.influences.end());
  }
  std::sort(s.entities_.begin(), s.entities_.end(), [](const Entity& a, const Entity& b) {
    if (a.layer != b.layer) return a.layer < b.layer;
    return a.id < b.id;
  });
  return s;
}

PropertyValue evaluate_series(const TimeSeries& series, double t) {
  const auto& s = series.samples;
  if (t <= s.front().t) return s.front().value;
  if (t >= s.back().t) return s.back().value;
  // First sample strictly after t; its predecessor is the latest at or before t.
  auto after = std::upper_bound(s.begin(), s.end(), t,
                                [](double v, const Sample& smp) { return v < smp.t; });
  const Sample& lo = *(after - 1);
  if (series.interpolation == Interpolation::Step || lo.t == t) return lo.value;
  const Sample& hi = *after;
  return lerp(lo.value, hi.value, (t - lo.t) / (hi.t - lo.t));
}

PropertyValue evaluate_property(const Entity& entity, std::string_view name, double t) {
  const Property* p = entity.find_property(name);
  if (!p)
    throw Error(ErrorKind::Lookup, "entity \"" + entity.id + "\" has no property \"" +
                                       std::string(name) + "\"");
  if (entity.lifespan && (t < entity.lifespan->start || t > entity.lifespan->end))
    throw Error(ErrorKind::Range, "t=" + fmt_num(t) + " outside lifespan of \"" + entity.id + "\"");
  if (const auto* c = p->constant()) return *c;
  return evaluate_series(*p->series(), t);
}

bool entity_exists_at(const Scenario& scenario, const Entity& entity, double t) {
  if (!(t >= 0.0 && t <= scenario.duration()))
    throw Error(ErrorKind::Range, "t=" + fmt_num(t) + " outside scenario [0, " +
                                      fmt_num(scenario.duration()) + "]");
  if (!entity.lifespan) return true;
  return entity.lifespan->start <= t && t <= entity.lifespan->end;
}

}  // namespace sixlayer
