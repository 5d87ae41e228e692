#include "random_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "sixlayer/taxonomy.hpp"

namespace sixlayer::testing {

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double random_number(Rng& rng) {
  switch (uniform_int(rng, 0, 5)) {
    case 0: return static_cast<double>(uniform_int(rng, -1000, 1000));
    case 1: return 0.1 * uniform_int(rng, -100, 100);
    case 2: return uniform(rng, -1e6, 1e6);
    case 3: return std::ldexp(uniform(rng, 0.5, 1.0), uniform_int(rng, -1000, 1000));
    case 4: return 1.0 / 3.0;
    default: return uniform(rng, 0.0, 1.0);
  }
}

std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces = {"a", "Z", " ", "\"", "\\", "\n", "ü", "→", "7", "_", "{", "tab\t"};
  std::string s;
  int n = uniform_int(rng, 0, 6);
  for (int i = 0; i < n; ++i) s += pick(rng, pieces);
  return s;
}

Polygon random_polygon(Rng& rng) {
  Polygon p;
  int n = uniform_int(rng, 3, 7);
  double cx = uniform(rng, -100, 100), cy = uniform(rng, -100, 100);
  double r = uniform(rng, 0.5, 20);
  double phase = uniform(rng, 0, 2 * std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    double a = phase + 2 * std::numbers::pi * i / n;
    p.vertices.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  return p;
}

Vector random_vector(Rng& rng, std::size_t dim) {
  Vector v;
  for (std::size_t i = 0; i < dim; ++i) v.components.push_back(random_number(rng));
  return v;
}

PropertyValue random_value(Rng& rng, ValueKind kind, std::size_t dim = 2) {
  switch (kind) {
    case ValueKind::Number: {
      static const std::vector<std::string> units = {"m", "m/s", "s", "rad", "lux"};
      Number n{random_number(rng), std::nullopt};
      if (chance(rng, 0.5)) n.unit = pick(rng, units);
      return n;
    }
    case ValueKind::Text: return Text{random_text(rng)};
    case ValueKind::Boolean: return Boolean{chance(rng, 0.5)};
    case ValueKind::Token: {
      static const std::vector<std::string> tokens = {"dry", "wet", "icy", "red", "green", "asphalt"};
      return Token{pick(rng, tokens)};
    }
    case ValueKind::Vector: return random_vector(rng, dim);
    case ValueKind::Polygon: return random_polygon(rng);
  }
  return Boolean{};
}

TimeSeries random_series(Rng& rng, double duration) {
  TimeSeries s;
  int n = uniform_int(rng, 2, 5);
  std::set<double> times;
  while (static_cast<int>(times.size()) < n) times.insert(uniform(rng, 0.0, duration));
  ValueKind kind;
  switch (uniform_int(rng, 0, 3)) {
    case 0: kind = ValueKind::Number; break;
    case 1: kind = ValueKind::Vector; break;
    case 2: kind = ValueKind::Token; break;
    default: kind = ValueKind::Boolean; break;
  }
  bool interpolable = kind == ValueKind::Number || kind == ValueKind::Vector;
  s.interpolation = interpolable && chance(rng, 0.6) ? Interpolation::Linear : Interpolation::Step;
  std::size_t dim = chance(rng, 0.5) ? 2 : 3;
  std::optional<std::string> unit;
  if (kind == ValueKind::Number && chance(rng, 0.5)) unit = "m";
  for (double t : times) {
    auto v = random_value(rng, kind, dim);
    if (auto* num = std::get_if<Number>(&v)) num->unit = unit;
    s.samples.push_back({t, v});
  }
  return s;
}

const std::vector<std::string>& category_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, _] : default_taxonomy().categories()) out.push_back(id);
    return out;
  }();
  return ids;
}

Entity random_entity(Rng& rng, const std::string& id, double duration, const std::vector<std::string>& all_ids,
                     const GenOptions& options) {
  static const std::vector<std::string> names = {"position", "footprint", "color",  "material", "state.visibility",
                                                 "height",   "label",     "lit",    "velocity", "surface_material"};
  static const std::vector<std::string> keys = {"periodic_state", "emergency_duty", "privileges_active", "note"};
  static const std::vector<std::string> labels = {"state_of", "occludes", "lights", ""};

  Entity e;
  e.id = id;
  e.category = pick(rng, category_ids());
  auto layers = default_taxonomy().at(e.category).admissible_layers.members();
  e.layer = Layer::from_int(pick(rng, layers));
  if (chance(rng, 0.05)) e.category = "unknown.category";
  if (chance(rng, 0.25)) {
    double a = uniform(rng, 0.0, duration);
    double b = uniform(rng, 0.0, duration);
    if (a != b) e.lifespan = Lifespan{std::min(a, b), std::max(a, b)};
  }
  std::vector<std::string> chosen = names;
  std::shuffle(chosen.begin(), chosen.end(), rng);
  chosen.resize(uniform_int(rng, 0, 4));
  for (const auto& n : chosen) {
    Property p{n, PropertyValue{}};
    bool series_ok = e.layer.value() >= layers::kDynamic || options.series_below_layer4;
    if (series_ok && chance(rng, 0.35))
      p.value = random_series(rng, duration);
    else
      p.value = random_value(rng, static_cast<ValueKind>(uniform_int(rng, 0, 5)), chance(rng, 0.5) ? 2 : 3);
    e.properties.push_back(std::move(p));
  }
  std::vector<std::string> ks = keys;
  std::shuffle(ks.begin(), ks.end(), rng);
  ks.resize(uniform_int(rng, 0, 2));
  for (const auto& k : ks)
    e.annotations.push_back({k, k == "periodic_state" ? (chance(rng, 0.5) ? "flashing" : "oscillating") : random_text(rng)});
  if (all_ids.size() > 1) {
    if (e.layer.value() == layers::kTemporary && chance(rng, 0.5)) {
      const auto& target = pick(rng, all_ids);
      if (target != e.id) e.modifies = target;
    }
    int n_inf = uniform_int(rng, 0, 2);
    for (int i = 0; i < n_inf; ++i) e.influences.push_back({pick(rng, all_ids), pick(rng, labels)});
  }
  return e;
}

}  // namespace

Scenario random_scenario(Rng& rng, const GenOptions& options) {
  double duration = chance(rng, 0.3) ? static_cast<double>(uniform_int(rng, 1, 120)) : uniform(rng, 0.5, 120.0);
  ScenarioBuilder b("scn_" + std::to_string(uniform_int(rng, 0, 9999)), duration);
  int n = uniform_int(rng, 0, options.max_entities);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("e" + std::to_string(i) + (chance(rng, 0.3) ? "_x" : ""));
  for (const auto& id : ids) b.add_entity(random_entity(rng, id, duration, ids, options));
  if (chance(rng, 0.5)) b.set_metadata("source", random_text(rng));
  if (chance(rng, 0.3)) b.set_metadata("location", "intersection");
  return b.finish();
}

Scenario rebuild(const Scenario& like, std::vector<Entity> entities) {
  std::set<std::string> ids;
  for (const auto& e : entities) ids.insert(e.id);
  ScenarioBuilder b(like.id(), like.duration());
  for (const auto& [k, v] : like.metadata())
    if (k != kDanglingReferencesKey) b.set_metadata(k, v);
  for (auto& e : entities) {
    if (e.modifies && (!ids.count(*e.modifies) || e.layer.value() != layers::kTemporary)) e.modifies.reset();
    std::erase_if(e.influences, [&](const Influence& i) { return !ids.count(i.target); });
    b.add_entity(std::move(e));
  }
  return b.finish();
}

Scenario mutate(const Scenario& scenario, Rng& rng) {
  std::vector<Entity> out;
  for (Entity e : scenario.entities()) {
    if (chance(rng, 0.15)) continue;
    if (chance(rng, 0.1)) {
      auto layers = default_taxonomy().find(e.category)
                        ? default_taxonomy().at(e.category).admissible_layers.members()
                        : std::vector<int>{1, 2, 3, 4, 5, 6};
      e.layer = Layer::from_int(pick(rng, layers));
    }
    if (!e.properties.empty() && chance(rng, 0.25)) {
      auto& p = e.properties[std::uniform_int_distribution<std::size_t>(0, e.properties.size() - 1)(rng)];
      if (p.is_series() || chance(rng, 0.3))
        p.value = random_value(rng, ValueKind::Boolean);
      else
        p.value = random_value(rng, ValueKind::Token);
    }
    if (!e.properties.empty() && chance(rng, 0.1)) e.properties.pop_back();
    if (chance(rng, 0.1) && !e.find_property("extra")) e.properties.push_back({"extra", Number{random_number(rng), {}}});
    if (chance(rng, 0.05)) e.category = "dynamic.animal";
    if (chance(rng, 0.05)) e.annotations.clear();
    out.push_back(std::move(e));
  }
  int added = uniform_int(rng, 0, 3);
  for (int i = 0; i < added; ++i) {
    Entity e;
    e.id = "new" + std::to_string(i);
    if (scenario.find(e.id)) continue;
    e.category = "dynamic.vehicle";
    e.layer = Layer::from_int(layers::kDynamic);
    e.properties.push_back({"position", Vector{{random_number(rng), random_number(rng)}}});
    out.push_back(std::move(e));
  }
  return rebuild(scenario, std::move(out));
}

std::string fixture_path(std::string_view relative_path) {
  return std::string(SIXLAYER_FIXTURE_DIR) + "/" + std::string(relative_path);
}

std::string read_fixture(std::string_view relative_path) {
  std::ifstream in(fixture_path(relative_path), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + std::string(relative_path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sixlayer::testing
