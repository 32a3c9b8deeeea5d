#include "layoutforge/grouping.hpp"
#include "layoutforge/pipeline.hpp"
#include "layoutforge/synthetic.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <set>

namespace {

using namespace layoutforge;
constexpr double kPi = std::numbers::pi;

PairwiseRelation relation(const std::string& dom, const std::string& sec,
                          std::vector<Transform> priors) {
  PairwiseRelation r;
  r.dominant_id = dom;
  r.secondary_id = sec;
  r.priors = std::move(priors);
  return r;
}

std::vector<ObjectInstance> instances(std::initializer_list<const char*> ids) {
  std::vector<ObjectInstance> out;
  for (const char* id : ids) out.push_back(synthetic::instance(id));
  return out;
}

Catalog catalog_of(const std::vector<ObjectInstance>& objects) {
  Catalog c;
  for (const auto& o : objects) c.add(o);
  return c;
}

const std::vector<Transform> kFourSides = {
    {0, 0, 0.8, kPi}, {0, 0, -0.8, 0}, {1.07, 0, 0, kPi / 2}, {-1.07, 0, 0, -kPi / 2}};

// The living-room example: a coffee table relates to two sofas and a tv
// stand, the tv stand to a tv, and two cabinets relate to nothing.
struct LivingExample {
  PriorStore store;
  std::vector<ObjectInstance> objects =
      instances({"coffee_table", "sofa", "sofa", "tv_stand", "tv", "cabinet", "cabinet"});
  LivingExample() {
    store.save_pairwise(relation("coffee_table", "sofa", {{0, 0, -1, 0}, {0, 0, 1.2, kPi}}));
    store.save_pairwise(relation("coffee_table", "tv_stand", {{0, 0, 1.6, -kPi}}));
    store.save_pairwise(relation("tv_stand", "tv", {{0, 0.5, 0, 0}}));
  }
};

TEST(RelationGraph, LivingRoomExample) {
  LivingExample ex;
  const RelationGraph g = build_relation_graph(ex.objects, ex.store);
  using E = std::pair<std::size_t, std::size_t>;
  EXPECT_EQ(g.edges, (std::vector<E>{{0, 1}, {0, 2}, {0, 3}, {3, 4}}));
  EXPECT_EQ(coherent_components(g),
            (std::vector<std::vector<std::size_t>>{{0, 1, 2, 3, 4}, {5}, {6}}));
  PriorStore empty;
  EXPECT_TRUE(build_relation_graph({}, empty).vertices.empty());
  EXPECT_TRUE(build_relation_graph(instances({"cabinet", "cabinet"}), empty).edges.empty());
}

TEST(RelationGraph, CompleteGraphIsOneComponent) {
  RelationGraph g;
  g.vertices = instances({"desk", "desk", "desk", "desk", "desk"});
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = 0; b < 5; ++b) {
      if (a != b) g.edges.emplace_back(a, b);
    }
  }
  EXPECT_EQ(coherent_components(g).size(), 1u);
}

TEST(CoherentComponents, MatchesUnionFind) {
  Rng rng = seeded_rng(40);
  for (int trial = 0; trial < 200; ++trial) {
    RelationGraph g;
    const std::size_t n = uniform_index(rng, 41);
    g.vertices.assign(n, synthetic::instance("desk"));
    const double density = uniform_real(rng, 0, 3.0 / std::max<double>(n, 1));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b && uniform_real(rng, 0, 1) < density) g.edges.emplace_back(a, b);
      }
    }
    EXPECT_EQ(coherent_components(g), oracle::union_find_components(n, g.edges)) << trial;
  }
}

TEST(AssignDominants, CapacityLimitsIdenticalChildren) {
  PriorStore store;
  const auto objects = instances({"dining_table", "dining_chair", "dining_chair", "dining_chair",
                                  "dining_chair", "dining_chair", "dining_chair"});
  store.save_pairwise(relation("dining_table", "dining_chair", kFourSides));
  const Catalog catalog = catalog_of(objects);
  const RelationGraph g = build_relation_graph(objects, store);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = seeded_rng(seed);
    const DominantForest f = assign_dominants(g, chain_capacity(store, catalog), rng);
    EXPECT_EQ(f.children(0).size(), 4u);
    EXPECT_EQ(f.roots({0, 1, 2, 3, 4, 5, 6}).size(), 3u);
  }
}

TEST(AssignDominants, SharedSecondaryGoesToEitherDominant) {
  PriorStore store;
  ObjectInstance dresser = synthetic::instance("desk");
  dresser.instance_id = "dressing_table";
  std::vector<ObjectInstance> objects{synthetic::instance("desk"), dresser,
                                      synthetic::instance("desk_chair")};
  store.save_pairwise(relation("desk", "desk_chair", {{0, 0, 0.55, -kPi}}));
  store.save_pairwise(relation("dressing_table", "desk_chair", {{0, 0, 0.5, -kPi}}));
  const Catalog catalog = catalog_of(objects);
  const RelationGraph g = build_relation_graph(objects, store);
  std::set<std::size_t> chosen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng = seeded_rng(seed);
    const DominantForest f = assign_dominants(g, chain_capacity(store, catalog), rng);
    ASSERT_TRUE(f.parent[2]);
    chosen.insert(*f.parent[2]);
    EXPECT_FALSE(f.parent[0]);
    EXPECT_FALSE(f.parent[1]);
  }
  EXPECT_EQ(chosen, (std::set<std::size_t>{0, 1}));
}

TEST(AssignDominants, SingletonAndCycles) {
  PriorStore store;
  RelationGraph lone;
  lone.vertices = instances({"cabinet"});
  Rng rng = seeded_rng(1);
  EXPECT_EQ(assign_dominants(lone, chain_capacity(store, {}), rng).roots({0}),
            (std::vector<std::size_t>{0}));
  // Two desks that could each host the other: at most one edge is taken.
  RelationGraph pair;
  pair.vertices = instances({"desk", "desk"});
  pair.edges = {{0, 1}, {1, 0}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng r = seeded_rng(seed);
    const auto f = assign_dominants(pair, [](auto&, auto&) { return std::size_t{1}; }, r);
    EXPECT_EQ(f.roots({0, 1}).size(), 1u);
  }
}

struct Built {
  RelationGraph graph;
  DominantForest forest;
  InstantiateResult result;
};

Built build(PriorStore& store, const std::vector<ObjectInstance>& objects, std::uint64_t seed,
            HyperScheduler* scheduler = nullptr) {
  Built b;
  b.graph = build_relation_graph(objects, store);
  const Catalog catalog = catalog_of(objects);
  Rng rng = seeded_rng(seed);
  b.forest = assign_dominants(b.graph, chain_capacity(store, catalog), rng);
  b.result = instantiate_group(0, b.forest, b.graph, store, scheduler, catalog, 4.0, {}, rng);
  return b;
}

void expect_sound(const RelationGraph& g, const CoherentGroup& group) {
  for (std::size_t i = 0; i < group.members.size(); ++i) {
    const auto& a = group.members[i];
    for (const auto& c : world_footprint(g.vertices[a.vertex], a.local).corners()) {
      EXPECT_LE(std::abs(c.x()), group.width / 2 + 1e-9);
      EXPECT_LE(std::abs(c.y()), group.depth / 2 + 1e-9);
    }
    for (std::size_t j = i + 1; j < group.members.size(); ++j) {
      const auto& b = group.members[j];
      EXPECT_FALSE(tier_collides(solid_of(g.vertices[a.vertex], a.local),
                                 solid_of(g.vertices[b.vertex], b.local)))
          << g.vertices[a.vertex].instance_id << " / " << g.vertices[b.vertex].instance_id;
    }
  }
}

TEST(InstantiateGroup, DiningChairsComeFromOneChain) {
  PriorStore store;
  store.save_pairwise(relation("dining_table", "dining_chair", kFourSides));
  const auto objects =
      instances({"dining_table", "dining_chair", "dining_chair", "dining_chair", "dining_chair"});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Built b = build(store, objects, seed);
    ASSERT_EQ(b.result.group.members.size(), 5u);
    EXPECT_TRUE(b.result.detached.empty());
    const Transform root = b.result.group.members[0].local;
    std::set<std::size_t> used;
    for (std::size_t i = 1; i < 5; ++i) {
      const auto& m = b.result.group.members[i];
      EXPECT_EQ(m.source, PriorSource::kChain);
      const Transform rel = relative_pose(root, m.local);
      for (std::size_t k = 0; k < kFourSides.size(); ++k) {
        if (std::abs(rel.x - kFourSides[k].x) < 1e-9 && std::abs(rel.z - kFourSides[k].z) < 1e-9) {
          used.insert(k);
        }
      }
    }
    EXPECT_EQ(used.size(), 4u);
    expect_sound(b.graph, b.result.group);
  }
}

TEST(InstantiateGroup, TvOnStandUsesPairwisePrior) {
  PriorStore store;
  store.save_pairwise(relation("tv_stand", "tv", {{0, 0.5, 0.05, 0}, {0.1, 0.5, 0, 0}}));
  const Built b = build(store, instances({"tv_stand", "tv"}), 3);
  ASSERT_EQ(b.result.group.members.size(), 2u);
  const auto& tv = b.result.group.members[1];
  EXPECT_EQ(tv.source, PriorSource::kPairwise);
  const Transform rel = relative_pose(b.result.group.members[0].local, tv.local);
  EXPECT_NEAR(rel.y, 0.5, 1e-12);
  EXPECT_TRUE(std::abs(rel.z - 0.05) < 1e-9 || std::abs(rel.x - 0.1) < 1e-9);
  EXPECT_NEAR(b.result.group.height, 0.5 + 0.7, 1e-12);
}

TEST(InstantiateGroup, CompleteHyperRelationIsUsedVerbatim) {
  PriorStore store;
  store.save_pairwise(relation("coffee_table", "sofa", {{0, 0, -1, 0}, {0, 0, 1.2, kPi}}));
  store.save_pairwise(relation("coffee_table", "tv_stand", {{0, 0, 1.6, -kPi}, {0, 0, -1.6, 0}}));
  auto executor = std::make_shared<ManualExecutor>();
  HyperScheduler scheduler(store, executor);
  const auto objects = instances({"coffee_table", "sofa", "tv_stand"});
  const HyperKey key = HyperKey::make("coffee_table", {"sofa", "tv_stand"});
  ASSERT_EQ(scheduler.request_blocking(key, synthetic::demo_catalog()).status,
            HyperRequestStatus::kComplete);
  const auto stored = store.load_hyper(key);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Built b = build(store, objects, seed, &scheduler);
    ASSERT_EQ(b.result.group.members.size(), 3u);
    ASSERT_EQ(b.result.hyper.size(), 1u);
    EXPECT_EQ(b.result.hyper[0].status, HyperRequestStatus::kComplete);
    const Transform root = b.result.group.members[0].local;
    std::vector<Transform> got(2);
    for (std::size_t i = 1; i < 3; ++i) {
      const auto& m = b.result.group.members[i];
      EXPECT_EQ(m.source, PriorSource::kHyper);
      // Slot 0 is the sofa (vertex 1), slot 1 the tv stand (vertex 2).
      got.at(m.vertex - 1) = relative_pose(root, m.local);
    }
    bool match = false;
    for (const auto& prior : stored->priors) {
      bool same = true;
      for (const auto& sp : prior.poses) {
        const Transform& g = got.at(sp.slot);
        same = same && std::abs(g.x - sp.pose.x) < 1e-9 && std::abs(g.z - sp.pose.z) < 1e-9 &&
               std::abs(normalize_angle(g.theta - sp.pose.theta)) < 1e-9;
      }
      match = match || same;
    }
    EXPECT_TRUE(match);
  }
}

TEST(InstantiateGroup, PendingHyperFallsBackToPairwise) {
  PriorStore store;
  store.save_pairwise(relation("coffee_table", "sofa", {{0, 0, -1, 0}}));
  store.save_pairwise(relation("coffee_table", "tv_stand", {{0, 0, 1.6, -kPi}}));
  auto executor = std::make_shared<ManualExecutor>();
  HyperScheduler scheduler(store, executor);
  const Built b = build(store, instances({"coffee_table", "sofa", "tv_stand"}), 1, &scheduler);
  ASSERT_EQ(b.result.hyper.size(), 1u);
  EXPECT_EQ(b.result.hyper[0].status, HyperRequestStatus::kPending);
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_EQ(b.result.group.members[i].source, PriorSource::kPairwise);
  }
  EXPECT_EQ(executor->pending(), 1u);
}

TEST(InstantiateGroup, ChildWithoutRoomDetaches) {
  PriorStore store;
  store.save_pairwise(relation("desk", "desk_chair", {{0, 0, 0.55, -kPi}}));
  store.save_pairwise(relation("desk", "plant", {{0, 0, 0.55, 0}}));
  const Built b = build(store, instances({"desk", "desk_chair", "plant"}), 0);
  EXPECT_EQ(b.result.group.members.size(), 2u);
  EXPECT_EQ(b.result.detached.size(), 1u);
  EXPECT_EQ(b.result.warnings.size(), 1u);
}

TEST(InstantiateGroup, LiftingDistribution) {
  PriorStore store;
  const auto objects = instances({"bed_double", "cabinet"});
  RelationGraph g = build_relation_graph(objects, store);
  DominantForest forest;
  forest.parent.resize(2);
  Rng rng = seeded_rng(5);
  const Catalog catalog = catalog_of(objects);
  int bed_zero = 0, cabinet_zero = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const auto bed = instantiate_group(0, forest, g, store, nullptr, catalog, 4.0, {}, rng);
    const auto cab = instantiate_group(1, forest, g, store, nullptr, catalog, 4.0, {}, rng);
    bed_zero += bed.group.lifting == 0;
    cabinet_zero += cab.group.lifting == 0;
    EXPECT_GE(bed.group.lifting, 0);
    EXPECT_LE(bed.group.lifting, 2.0);
  }
  EXPECT_NEAR(bed_zero / double(n), 0.8, 0.03);
  EXPECT_NEAR(cabinet_zero / double(n), 0.3, 0.03);
}

TEST(GroupObjects, PartitionAndSoundnessOnDemoStore) {
  auto store = fixtures::demo_store();
  std::vector<ObjectInstance> objects;
  for (const auto& o : synthetic::living_dining_request().objects) objects.push_back(o.instance);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = seeded_rng(seed);
    const Grouping grouping = group_objects(objects, *store, nullptr, 6.0, {}, rng);
    std::vector<int> seen(objects.size(), 0);
    for (const auto& group : grouping.groups) {
      for (const auto& m : group.members) ++seen.at(m.vertex);
      expect_sound(grouping.graph, group);
    }
    EXPECT_EQ(seen, std::vector<int>(objects.size(), 1));
  }
}

TEST(GroupObjects, SeededDeterminism) {
  auto store = fixtures::demo_store();
  std::vector<ObjectInstance> objects;
  for (const auto& o : synthetic::bedroom_request().objects) objects.push_back(o.instance);
  Rng a = seeded_rng(8), b = seeded_rng(8);
  const Grouping ga = group_objects(objects, *store, nullptr, 4.0, {}, a);
  const Grouping gb = group_objects(objects, *store, nullptr, 4.0, {}, b);
  ASSERT_EQ(ga.groups.size(), gb.groups.size());
  for (std::size_t i = 0; i < ga.groups.size(); ++i) {
    ASSERT_EQ(ga.groups[i].members.size(), gb.groups[i].members.size());
    for (std::size_t j = 0; j < ga.groups[i].members.size(); ++j) {
      EXPECT_EQ(ga.groups[i].members[j].local, gb.groups[i].members[j].local);
    }
    EXPECT_EQ(ga.groups[i].lifting, gb.groups[i].lifting);
  }
}

TEST(GroupObjects, WarmCacheReadsNoFiles) {
  fixtures::TempDir dir("store");
  {
    PriorStore disk(dir.path());
    extract_to_store(synthetic::demo_corpus(30, 2), disk);
  }
  PriorStore store(dir.path());
  auto executor = std::make_shared<ManualExecutor>();
  HyperScheduler scheduler(store, executor);
  std::vector<ObjectInstance> objects;
  for (const auto& o : synthetic::living_dining_request().objects) objects.push_back(o.instance);
  Rng warm = seeded_rng(1);
  group_objects(objects, store, &scheduler, 6.0, {}, warm);
  executor->run_all();
  const Catalog catalog = catalog_of(objects);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = seeded_rng(seed);
    const RelationGraph graph = build_relation_graph(objects, store);
    const DominantForest forest = assign_dominants(graph, chain_capacity(store, catalog), rng);
    for (const auto& component : coherent_components(graph)) {
      for (std::size_t root : forest.roots(component)) {
        store.reset_counters();
        const auto one = instantiate_group(root, forest, graph, store, &scheduler, catalog, 6.0,
                                           {}, rng);
        const StoreCounters c = store.counters();
        EXPECT_EQ(c.file_reads, 0u);
        // One load per tree node, plus the hyper key a dominant asks for
        // before falling back to its pairwise priors.
        EXPECT_LE(c.lookups, one.group.members.size() + one.detached.size() + one.hyper.size());
      }
    }
  }
}

}  // namespace
