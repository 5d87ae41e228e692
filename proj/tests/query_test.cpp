#include <gtest/gtest.h>

#include <json.hpp>

#include "sixlayer/codec.hpp"
#include "sixlayer/error.hpp"
#include "sixlayer/query.hpp"
#include "sixlayer/rules.hpp"
#include "sixlayer/taxonomy.hpp"
#include "support/occlusion_fixture.hpp"
#include "support/oracles.hpp"
#include "support/random_scenario.hpp"

namespace sixlayer {
namespace {

using nlohmann::json;
using testing::Box;
using testing::Visibility;

ErrorKind failure_kind(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

LayerSet random_layers(testing::Rng& rng) {
  LayerSet s;
  for (int l = 1; l <= 6; ++l)
    if (rng() & 1) s.insert(l);
  return s;
}

std::set<std::string> ids_of(const Scenario& s) {
  std::set<std::string> out;
  for (const auto& e : s.entities()) out.insert(e.id);
  return out;
}

Scenario ind() { return parse_scenario(testing::read_fixture("ind_eval.6lm.json")); }

// ---------------------------------------------------------------------------
// Projection

TEST(Project, IdentityEmptyAndIdempotent) {
  testing::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    Scenario s = testing::random_scenario(rng);
    ASSERT_EQ(project(s, LayerSet::all()), s);
    ASSERT_TRUE(project(s, {}).entities().empty());
    LayerSet a = random_layers(rng);
    Scenario pa = project(s, a);
    ASSERT_EQ(project(pa, a), pa);
    for (const auto& e : pa.entities()) ASSERT_TRUE(a.contains(e.layer));
  }
}

TEST(Project, UnionOfProjections) {
  testing::Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    Scenario s = testing::random_scenario(rng);
    LayerSet a = random_layers(rng), b = random_layers(rng);
    auto joined = project(s, a | b).entities();
    std::vector<Entity> expected;
    for (const auto* part : {&a, &b}) {
      Scenario projected = project(s, *part);
      for (const auto& e : projected.entities())
        if (std::find(expected.begin(), expected.end(), e) == expected.end()) expected.push_back(e);
    }
    auto key = [](const Entity& x, const Entity& y) { return std::tie(x.layer, x.id) < std::tie(y.layer, y.id); };
    std::sort(expected.begin(), expected.end(), key);
    ASSERT_EQ(joined, expected);
  }
}

TEST(Project, DanglingLinksDeclaredAndParseable) {
  testing::Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    Scenario s = testing::random_scenario(rng);
    Scenario p = project(s, random_layers(rng));
    ASSERT_EQ(parse_scenario(serialize_scenario(p)), p);
    auto ids = ids_of(p);
    for (const auto& e : p.entities())
      for (const auto& inf : e.influences)
        if (!ids.count(inf.target)) ASSERT_TRUE(p.metadata().count(std::string(kDanglingReferencesKey)));
  }
}

TEST(Project, MotionPlanningSliceOfInd) {
  Scenario p = project(ind(), LayerSet{1, 4});
  auto ids = ids_of(p);
  for (auto id : {"road_main", "marking_crosswalk", "sign_give_way_e", "vehicle_1", "pedestrian_1", "bike_1"})
    EXPECT_TRUE(ids.count(id)) << id;
  for (auto id : {"lamp_crosswalk_w", "fountain", "building_nw", "road_weather"}) EXPECT_FALSE(ids.count(id)) << id;
}

// ---------------------------------------------------------------------------
// Scenes

TEST(Scene, TrafficLightAndTrajectory) {
  Scenario s = parse_scenario(testing::read_fixture("traffic_light.6lm.json"));
  auto value_of = [&](double t, const std::string& id, const std::string& prop) {
    Scene sc = scene_at(s, t);
    for (const auto& e : sc.entities)
      if (e.id == id) return e.properties.at(prop);
    throw std::runtime_error("missing " + id);
  };
  EXPECT_EQ(value_of(12, "tl_state", "color"), PropertyValue(Token{"green"}));
  EXPECT_EQ(value_of(5, "tl_state", "color"), PropertyValue(Token{"red"}));
  EXPECT_EQ(value_of(5, "car", "position"), PropertyValue(Vector{{5, 0}}));
  EXPECT_EQ(failure_kind([&] { scene_at(s, 20.5); }), ErrorKind::Range);
  EXPECT_EQ(failure_kind([&] { scene_at(s, -1); }), ErrorKind::Range);
}

TEST(Scene, LifespanFiltersEntities) {
  auto b = new_scenario("s", 30.0);
  Entity tree;
  tree.id = "falling_tree";
  tree.category = "roadside.vegetation.tree";
  tree.layer = Layer::from_int(4);
  tree.lifespan = Lifespan{10, 12};
  b.add_entity(tree);
  Scenario s = b.finish();
  EXPECT_TRUE(scene_at(s, 9).entities.empty());
  EXPECT_EQ(scene_at(s, 11).entities.size(), 1u);
}

Scenario without_time(const Scenario& s) {
  std::vector<Entity> es;
  for (Entity e : s.entities()) {
    e.lifespan.reset();
    for (auto& p : e.properties)
      if (const auto* ts = p.series()) p.value = ts->samples.front().value;
    es.push_back(std::move(e));
  }
  return testing::rebuild(s, es);
}

TEST(Scene, TimeInvariantScenariosHaveOneScene) {
  testing::Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    Scenario s = without_time(testing::random_scenario(rng));
    Scene a = scene_at(s, 0), b = scene_at(s, s.duration()), c = scene_at(s, s.duration() / 3);
    a.timestamp = b.timestamp = c.timestamp = 0;
    ASSERT_EQ(a, b);
    ASSERT_EQ(a, c);
  }
}

TEST(Scene, CommutesWithProjection) {
  testing::Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    Scenario s = testing::random_scenario(rng);
    LayerSet l = random_layers(rng);
    double t = std::uniform_real_distribution<double>(0, s.duration())(rng);
    Scene full = scene_at(s, t);
    std::erase_if(full.entities, [&](const SceneEntity& e) { return !l.contains(e.layer); });
    ASSERT_EQ(scene_at(project(s, l), t), full);
  }
}

TEST(Scene, JsonShape) {
  Scenario s = parse_scenario(testing::read_fixture("traffic_light.6lm.json"));
  json j = json::parse(scene_to_json(scene_at(s, 12)));
  EXPECT_EQ(j["timestamp_s"], 12.0);
  bool found = false;
  for (const auto& e : j["entities"])
    if (e["id"] == "tl_state") {
      EXPECT_EQ(e["properties"]["color"]["enum"], "green");
      found = true;
    }
  EXPECT_TRUE(found);
  EXPECT_NE(scene_to_text(scene_at(s, 12)).find("green"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Diff

TEST(Diff, SelfIsEmpty) {
  testing::Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    Scenario s = testing::random_scenario(rng);
    ASSERT_TRUE(diff(s, s).empty());
  }
}

TEST(Diff, OneAddedVehicle) {
  Scenario a = ind();
  std::vector<Entity> es = a.entities();
  Entity v;
  v.id = "vehicle_new";
  v.category = "dynamic.vehicle";
  v.layer = Layer::from_int(4);
  es.push_back(v);
  Scenario b = testing::rebuild(a, es);
  DiffReport r = diff(a, b);
  ASSERT_EQ(r.layers.size(), 1u);
  ASSERT_TRUE(r.layers.count(4));
  EXPECT_EQ(r.layers.at(4).added, (std::vector<std::string>{"vehicle_new"}));
  EXPECT_TRUE(r.layers.at(4).removed.empty());
  EXPECT_TRUE(r.layers.at(4).changed.empty());
}

TEST(Diff, MatchesBruteForceOracle) {
  testing::Rng rng(32);
  for (int i = 0; i < 300; ++i) {
    Scenario a = testing::random_scenario(rng);
    Scenario b = testing::mutate(a, rng);
    ASSERT_EQ(testing::shape_of(diff(a, b)), testing::brute_force_diff(a, b)) << serialize_scenario(a)
                                                                               << serialize_scenario(b);
  }
}

TEST(Diff, Symmetry) {
  testing::Rng rng(33);
  for (int i = 0; i < 300; ++i) {
    Scenario a = testing::random_scenario(rng);
    Scenario b = testing::mutate(a, rng);
    auto ab = testing::shape_of(diff(a, b));
    auto ba = testing::shape_of(diff(b, a));
    ASSERT_EQ(ab.added, ba.removed);
    ASSERT_EQ(ab.removed, ba.added);
    ASSERT_EQ(ab.changed, ba.changed);
  }
}

TEST(Diff, LayerMoveAndValueDeltas) {
  auto build = [](int layer, double speed) {
    auto b = new_scenario("s", 10.0);
    Entity e;
    e.id = "obj";
    e.category = "dynamic.misc_object";
    e.layer = Layer::from_int(layer);
    b.add_entity(e);
    Entity v;
    v.id = "car";
    v.category = "dynamic.vehicle";
    v.layer = Layer::from_int(4);
    v.properties = {{"speed", Number{speed, "m/s"}}};
    b.add_entity(v);
    return b.finish();
  };
  DiffReport r = diff(build(3, 1), build(4, 2));
  EXPECT_EQ(r.layers.at(3).removed, (std::vector<std::string>{"obj"}));
  EXPECT_EQ(r.layers.at(4).added, (std::vector<std::string>{"obj"}));
  ASSERT_EQ(r.layers.at(4).changed.size(), 1u);
  const auto& d = r.layers.at(4).changed[0].properties.at(0);
  EXPECT_EQ(d.name, "speed");
  EXPECT_EQ(d.old_value, R"({"number":1.0,"unit":"m/s"})");
  EXPECT_EQ(d.new_value, R"({"number":2.0,"unit":"m/s"})");

  json j = json::parse(diff_to_json(r));
  EXPECT_EQ(j["4"]["added"][0], "obj");
  EXPECT_EQ(j["4"]["changed"][0]["properties"][0]["name"], "speed");
  std::string text = diff_to_text(r);
  EXPECT_NE(text.find("@@ layer 3"), std::string::npos);
  EXPECT_NE(text.find("+ obj"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Occlusion

std::vector<Box> obstacles_for(const std::string& target, const Box& wall,
                               const std::vector<testing::NamedBox>& targets) {
  std::vector<Box> out{wall};
  for (const auto& t : targets)
    if (t.id != target) out.push_back(t.box);
  return out;
}

TEST(Occlusion, FixtureMatchesDenseOracle) {
  auto targets = testing::occlusion_targets();
  Scene scene = testing::occlusion_scene(testing::kWall, targets);
  std::set<std::string> ids;
  for (const auto& t : targets) ids.insert(t.id);
  OcclusionResult r = derive_occlusion(scene, {0, 0}, ids);
  for (const auto& t : targets) {
    auto oracle = testing::dense_visibility({0, 0}, t.box, obstacles_for(t.id, testing::kWall, targets));
    EXPECT_EQ(testing::visibility_in(r, t.id), oracle) << t.id;
  }
  EXPECT_EQ(r.fully_occluded, (std::set<std::string>{"hidden"}));
  EXPECT_EQ(r.partially_occluded, (std::set<std::string>{"straddling"}));
  EXPECT_EQ(r.visible, (std::set<std::string>{"behind_observer", "clear"}));
}

TEST(Occlusion, NoObstaclesAllVisible) {
  auto targets = testing::occlusion_targets();
  targets.erase(targets.begin());  // keep targets that do not shadow each other
  Scene scene;
  for (const auto& t : targets) {
    SceneEntity e;
    e.id = t.id;
    e.properties.emplace("footprint", testing::box_polygon(t.box));
    scene.entities.push_back(e);
  }
  OcclusionResult r = derive_occlusion(scene, {0, 0}, {"straddling", "clear", "behind_observer"});
  EXPECT_EQ(r.visible.size(), 3u);
}

TEST(Occlusion, Errors) {
  Scene scene = testing::occlusion_scene(testing::kWall, testing::occlusion_targets());
  EXPECT_EQ(failure_kind([&] { derive_occlusion(scene, {4.2, 0}, {"hidden"}); }), ErrorKind::Range);
  EXPECT_EQ(failure_kind([&] { derive_occlusion(scene, {0, 0}, {"nobody"}); }), ErrorKind::Lookup);
  SceneEntity bare;
  bare.id = "bare";
  scene.entities.push_back(bare);
  EXPECT_EQ(failure_kind([&] { derive_occlusion(scene, {0, 0}, {"bare"}); }), ErrorKind::Lookup);
}

// The library samples (vertices, midpoints) are a subset of the oracle's, so
// an oracle "visible" forces library "visible" and oracle "full" forces
// library "full". Shrinking the wall never raises a target's occlusion.
TEST(Occlusion, RandomShrinkMonotone) {
  testing::Rng rng(41);
  std::uniform_real_distribution<double> u(0, 1);
  for (int round = 0; round < 20; ++round) {
    std::vector<testing::NamedBox> targets;
    for (int k = 0; k < 4; ++k) {
      double x = 6 + 3 * k + u(rng), y = -6 + 12 * u(rng);
      targets.push_back({"t" + std::to_string(k), {x, y, x + 0.5 + u(rng), y + 0.5 + 2 * u(rng)}});
    }
    Box wall{4 + u(rng), -5 + 2 * u(rng), 5 + u(rng), 3 + 2 * u(rng)};
    std::set<std::string> ids;
    for (const auto& t : targets) ids.insert(t.id);
    std::map<std::string, Visibility> previous;
    for (int step = 0; step < 50; ++step) {
      OcclusionResult r = derive_occlusion(testing::occlusion_scene(wall, targets), {0, 0}, ids);
      ASSERT_EQ(r.visible.size() + r.partially_occluded.size() + r.fully_occluded.size(), ids.size());
      for (const auto& t : targets) {
        Visibility now = testing::visibility_in(r, t.id);
        auto oracle = testing::dense_visibility({0, 0}, t.box, obstacles_for(t.id, wall, targets));
        if (oracle == Visibility::Visible) ASSERT_EQ(now, Visibility::Visible);
        if (oracle == Visibility::Full) ASSERT_EQ(now, Visibility::Full);
        if (previous.count(t.id)) ASSERT_LE(static_cast<int>(now), static_cast<int>(previous[t.id]));
        previous[t.id] = now;
      }
      double cut = 0.05 * u(rng);
      switch (rng() % 4) {
        case 0: wall.x0 += cut * (wall.x1 - wall.x0); break;
        case 1: wall.x1 -= cut * (wall.x1 - wall.x0); break;
        case 2: wall.y0 += cut * (wall.y1 - wall.y0); break;
        default: wall.y1 -= cut * (wall.y1 - wall.y0); break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Friction

TEST(Friction, TableLookup) {
  FrictionTable table = FrictionTable::load(testing::read_fixture("friction_table.json"));
  EXPECT_GE(table.size(), 5u);
  double mu = derive_friction("asphalt", "dry", "default", table);
  EXPECT_EQ(mu, *table.find("asphalt", "dry", "default"));
  EXPECT_EQ(mu, derive_friction("asphalt", "dry", "default", table));
  EXPECT_EQ(failure_kind([&] { derive_friction("cobblestone", "icy", "default", table); }), ErrorKind::Lookup);
  EXPECT_THROW(FrictionTable::load(R"([{"surface":"a","weather":"b","tire":"c"}])"), Error);
}

TEST(Friction, WritingItBackTripsG7) {
  FrictionTable table = FrictionTable::load(testing::read_fixture("friction_table.json"));
  Scenario s = ind();
  std::vector<Entity> es = s.entities();
  for (auto& e : es)
    if (e.id == "road_surface")
      e.properties.push_back({"friction_coefficient", Number{derive_friction("asphalt", "dry", "default", table), {}}});
  auto ds = validate(testing::rebuild(s, es), default_taxonomy());
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].rule, RuleId::G7);
  EXPECT_EQ(ds[0].subject.entity, "road_surface");
  EXPECT_EQ(ds[0].subject.property, "friction_coefficient");
}

}  // namespace
}  // namespace sixlayer
