#include "layoutforge/grouping.hpp"

#include "layoutforge/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace layoutforge {

RelationGraph build_relation_graph(const std::vector<ObjectInstance>& objects, PriorStore& store) {
  RelationGraph graph;
  graph.vertices = objects;
  std::map<RelationKey, bool> known;
  for (std::size_t a = 0; a < objects.size(); ++a) {
    if (!objects[a].dominant_capable) continue;
    for (std::size_t b = 0; b < objects.size(); ++b) {
      if (a == b) continue;
      const RelationKey key{objects[a].instance_id, objects[b].instance_id};
      auto it = known.find(key);
      if (it == known.end()) it = known.emplace(key, store.load_pairwise(key) != nullptr).first;
      if (it->second) graph.edges.emplace_back(a, b);
    }
  }
  return graph;
}

std::vector<std::vector<std::size_t>> coherent_components(const RelationGraph& graph) {
  const std::size_t n = graph.vertices.size();
  std::vector<std::vector<std::size_t>> adjacent(n);
  for (const auto& [a, b] : graph.edges) {
    adjacent.at(a).push_back(b);
    adjacent.at(b).push_back(a);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> component;
    std::deque<std::size_t> frontier{start};
    seen[start] = true;
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop_front();
      component.push_back(v);
      for (std::size_t w : adjacent[v]) {
        if (!seen[w]) {
          seen[w] = true;
          frontier.push_back(w);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

std::shared_ptr<const PatternChainSet> chain_set_for(PriorStore& store,
                                                     const PairwiseRelation& relation,
                                                     const Catalog& catalog, bool aligned) {
  const std::string hash = relation_hash(relation);
  ChainLoad loaded = store.load_chains(relation.key(), hash);
  if (loaded.status == ChainLoadStatus::kFound) return loaded.set;
  Rng rng = seeded_rng(0, "chains:" + relation.key().str());
  auto set = std::make_shared<const PatternChainSet>(generate_chain_set(relation, catalog, rng, aligned));
  store.save_chains(*set);
  return set;
}

CapacityFn chain_capacity(PriorStore& store, const Catalog& catalog) {
  return [&store, &catalog](const std::string& dominant, const std::string& secondary) {
    const auto relation = store.load_pairwise({dominant, secondary});
    if (!relation || relation->priors.empty()) return std::size_t{1};
    const auto set = chain_set_for(store, *relation, catalog);
    return std::max<std::size_t>(1, set->max_length());
  };
}

std::vector<std::size_t> DominantForest::children(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < parent.size(); ++w) {
    if (parent[w] == v) out.push_back(w);
  }
  return out;
}

std::vector<std::size_t> DominantForest::roots(const std::vector<std::size_t>& component) const {
  std::vector<std::size_t> out;
  for (std::size_t v : component) {
    if (!parent.at(v)) out.push_back(v);
  }
  return out;
}

void assign_dominants(const std::vector<std::size_t>& component, const RelationGraph& graph,
                      const CapacityFn& capacity, Rng& rng, DominantForest& forest) {
  forest.parent.resize(graph.vertices.size());
  const std::set<std::size_t> members(component.begin(), component.end());
  std::map<std::size_t, std::vector<std::size_t>> incoming;
  for (const auto& [a, b] : graph.edges) {
    if (members.contains(a) && members.contains(b)) incoming[b].push_back(a);
  }
  std::vector<std::size_t> secondaries;
  for (const auto& [v, sources] : incoming) secondaries.push_back(v);
  std::shuffle(secondaries.begin(), secondaries.end(), rng);

  std::map<std::pair<std::size_t, std::string>, std::size_t> remaining;
  auto has_capacity = [&](std::size_t d, std::size_t s) {
    const std::string& id = graph.vertices[s].instance_id;
    auto it = remaining.find({d, id});
    if (it == remaining.end()) {
      it = remaining.emplace(std::pair{d, id}, capacity(graph.vertices[d].instance_id, id)).first;
    }
    return it->second > 0;
  };
  auto is_descendant = [&](std::size_t d, std::size_t s) {
    for (std::optional<std::size_t> v = d; v; v = forest.parent[*v]) {
      if (*v == s) return true;
    }
    return false;
  };

  for (std::size_t s : secondaries) {
    std::vector<std::size_t> candidates;
    for (std::size_t d : incoming[s]) {
      if (!is_descendant(d, s) && has_capacity(d, s)) candidates.push_back(d);
    }
    if (candidates.empty()) continue;
    const std::size_t d = candidates[uniform_index(rng, candidates.size())];
    forest.parent[s] = d;
    --remaining[{d, graph.vertices[s].instance_id}];
  }
}

DominantForest assign_dominants(const RelationGraph& graph, const CapacityFn& capacity, Rng& rng) {
  DominantForest forest;
  forest.parent.resize(graph.vertices.size());
  for (const auto& component : coherent_components(graph)) {
    assign_dominants(component, graph, capacity, rng, forest);
  }
  return forest;
}

std::string_view to_string(PriorSource source) {
  switch (source) {
    case PriorSource::kRoot: return "root";
    case PriorSource::kHyper: return "hyper";
    case PriorSource::kChain: return "chain";
    case PriorSource::kPairwise: return "pairwise";
  }
  return "root";
}

Rect CoherentGroup::footprint(const Transform& pose) const {
  return Rect::from_size(pose.plan(), width, depth, pose.theta);
}

namespace {

class GroupBuilder {
 public:
  GroupBuilder(const DominantForest& forest, const RelationGraph& graph, PriorStore& store,
               HyperScheduler* scheduler, const Catalog& catalog, const GroupingConfig& config,
               Rng& rng, InstantiateResult& out)
      : forest_(forest),
        graph_(graph),
        store_(store),
        scheduler_(scheduler),
        catalog_(catalog),
        config_(config),
        rng_(rng),
        out_(out) {}

  void place_root(std::size_t root) {
    add(root, std::nullopt, PriorSource::kRoot, Transform::identity());
    place_children(root, Transform::identity());
  }

 private:
  const ObjectInstance& instance(std::size_t v) const { return graph_.vertices.at(v); }

  bool fits(std::size_t v, const Transform& pose) const {
    const Solid solid = solid_of(instance(v), pose);
    return std::none_of(solids_.begin(), solids_.end(), [&](const Solid& other) {
      return tier_collides(solid, other, config_.rules);
    });
  }

  void add(std::size_t v, std::optional<std::size_t> parent, PriorSource source,
           const Transform& pose) {
    out_.group.members.push_back({v, parent, source, pose});
    solids_.push_back(solid_of(instance(v), pose));
  }

  void detach(std::size_t v) {
    out_.detached.push_back(v);
    out_.warnings.push_back("no usable prior places '" + instance(v).instance_id + "' next to '" +
                            instance(*forest_.parent.at(v)).instance_id + "'; detached");
  }

  // Tries one hyper-prior for all children at once. Returns false to fall back.
  bool place_hyper(std::size_t v, const Transform& frame, const std::vector<std::size_t>& kids) {
    std::vector<std::string> ids;
    for (std::size_t k : kids) ids.push_back(instance(k).instance_id);
    const HyperKey key = HyperKey::make(instance(v).instance_id, ids);
    const HyperResponse response = config_.blocking_hyper
                                       ? scheduler_->request_blocking(key, catalog_)
                                       : scheduler_->request(key, catalog_);
    out_.hyper.push_back({key.str(), response.status});
    if (response.status != HyperRequestStatus::kComplete || response.relation->priors.empty()) {
      return false;
    }
    // Each prior is sound among its own copies; keep those that also clear
    // the rest of the group (the dominant and anything placed earlier).
    const auto slots = key.slots();
    std::vector<std::vector<std::pair<std::size_t, Transform>>> fitting;
    for (const auto& prior : response.relation->priors) {
      auto chosen = assign_slots(prior, slots, frame, kids);
      const bool ok = !chosen.empty() && std::all_of(chosen.begin(), chosen.end(), [&](const auto& c) {
        return fits(c.first, c.second);
      });
      if (ok) fitting.push_back(std::move(chosen));
    }
    if (fitting.empty()) return false;
    for (const auto& [k, pose] : fitting[uniform_index(rng_, fitting.size())]) {
      add(k, v, PriorSource::kHyper, pose);
    }
    return true;
  }

  // Matches each slot of `prior` to a child of the same instance, in order.
  std::vector<std::pair<std::size_t, Transform>> assign_slots(
      const HyperPrior& prior, const std::vector<std::string>& slots, const Transform& frame,
      const std::vector<std::size_t>& kids) const {
    std::vector<bool> used(kids.size(), false);
    std::vector<std::pair<std::size_t, Transform>> chosen;
    for (const auto& sp : prior.poses) {
      std::size_t pick = kids.size();
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (!used[i] && instance(kids[i]).instance_id == slots.at(sp.slot)) {
          pick = i;
          break;
        }
      }
      if (pick == kids.size()) return {};
      used[pick] = true;
      chosen.emplace_back(kids[pick], compose(frame, sp.pose));
    }
    return chosen;
  }

  bool place_pairwise(std::size_t v, std::size_t kid, const Transform& frame,
                      const PairwiseRelation& relation) {
    std::vector<Transform> candidates;
    for (const auto& prior : relation.priors) {
      const Transform pose = compose(frame, prior);
      if (fits(kid, pose)) candidates.push_back(pose);
    }
    if (candidates.empty()) return false;
    add(kid, v, PriorSource::kPairwise, candidates[uniform_index(rng_, candidates.size())]);
    return true;
  }

  void place_identical(std::size_t v, const Transform& frame, const std::vector<std::size_t>& kids,
                       const PairwiseRelation& relation) {
    const auto set = chain_set_for(store_, relation, catalog_);
    std::vector<const Chain*> qualifying;
    for (const auto& c : set->chains) {
      if (c.size() >= kids.size()) qualifying.push_back(&c);
    }
    if (qualifying.empty()) {
      const std::size_t longest = set->max_length();
      for (const auto& c : set->chains) {
        if (c.size() == longest) qualifying.push_back(&c);
      }
    }
    std::vector<Transform> poses;
    if (!qualifying.empty()) {
      const Chain& chain = *qualifying[uniform_index(rng_, qualifying.size())];
      poses = chain_poses(relation, *set, chain, catalog_);
    }
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i < poses.size()) {
        const Transform pose = compose(frame, poses[i]);
        if (fits(kids[i], pose)) {
          add(kids[i], v, PriorSource::kChain, pose);
          continue;
        }
      }
      if (!place_pairwise(v, kids[i], frame, relation)) detach(kids[i]);
    }
  }

  void place_children(std::size_t v, const Transform& frame) {
    const std::vector<std::size_t> kids = forest_.children(v);
    if (kids.empty()) return;
    const std::size_t first_new = out_.group.members.size();

    std::map<std::string, std::vector<std::size_t>> by_instance;
    for (std::size_t k : kids) by_instance[instance(k).instance_id].push_back(k);

    const bool hyper_placed =
        by_instance.size() >= 2 && scheduler_ != nullptr && place_hyper(v, frame, kids);
    if (!hyper_placed) {
      for (const auto& [id, same] : by_instance) {
        const auto relation = store_.load_pairwise({instance(v).instance_id, id});
        if (!relation || relation->priors.empty()) {
          for (std::size_t k : same) detach(k);
          continue;
        }
        if (same.size() >= 2) {
          place_identical(v, frame, same, *relation);
        } else if (!place_pairwise(v, same.front(), frame, *relation)) {
          detach(same.front());
        }
      }
    }

    const std::size_t last_new = out_.group.members.size();
    for (std::size_t i = first_new; i < last_new; ++i) {
      const GroupMember member = out_.group.members[i];
      place_children(member.vertex, member.local);
    }
  }

  const DominantForest& forest_;
  const RelationGraph& graph_;
  PriorStore& store_;
  HyperScheduler* scheduler_;
  const Catalog& catalog_;
  const GroupingConfig& config_;
  Rng& rng_;
  InstantiateResult& out_;
  std::vector<Solid> solids_;
};

}  // namespace

InstantiateResult instantiate_group(std::size_t root, const DominantForest& forest,
                                    const RelationGraph& graph, PriorStore& store,
                                    HyperScheduler* scheduler, const Catalog& catalog,
                                    double room_length, const GroupingConfig& config, Rng& rng) {
  InstantiateResult out;
  CoherentGroup& group = out.group;
  group.root = root;
  GroupBuilder(forest, graph, store, scheduler, catalog, config, rng, out).place_root(root);

  std::vector<Vec2d> corners;
  double low = std::numeric_limits<double>::infinity();
  double high = -low;
  for (const auto& m : group.members) {
    const ObjectInstance& inst = graph.vertices[m.vertex];
    for (const auto& c : world_footprint(inst, m.local).corners()) corners.push_back(c);
    low = std::min(low, m.local.y);
    high = std::max(high, m.local.y + inst.height);
  }
  const Bounds2<double> box = bounds_of<double>(corners);
  const Vec2d centre = box.center();
  for (auto& m : group.members) {
    m.local.x -= centre.x();
    m.local.z -= centre.y();
  }
  group.width = box.size().x();
  group.depth = box.size().y();
  group.base = low;
  group.height = high - low;

  const ObjectInstance& head = graph.vertices[root];
  group.tier = head.tier;
  group.wall_mounted = head.wall_mounted;
  group.mount_elevation = head.mount_elevation;
  if (!group.wall_mounted) {
    const double p_wall = head.wall_affine ? config.p_wall_affine : config.p_wall_other;
    if (!std::bernoulli_distribution(p_wall)(rng)) {
      // Uniform on (0, room_length / 2].
      group.lifting = room_length / 2 - uniform_real(rng, 0.0, room_length / 2);
    }
  }
  return out;
}

Grouping group_objects(const std::vector<ObjectInstance>& objects, PriorStore& store,
                       HyperScheduler* scheduler, double room_length,
                       const GroupingConfig& config, Rng& rng) {
  Grouping result;
  Catalog catalog;
  for (const auto& o : objects) catalog.add(o);
  result.graph = build_relation_graph(objects, store);
  DominantForest forest = assign_dominants(result.graph, chain_capacity(store, catalog), rng);

  std::deque<std::size_t> pending;
  for (const auto& component : coherent_components(result.graph)) {
    for (std::size_t r : forest.roots(component)) pending.push_back(r);
  }
  while (!pending.empty()) {
    const std::size_t root = pending.front();
    pending.pop_front();
    forest.parent[root].reset();
    InstantiateResult one = instantiate_group(root, forest, result.graph, store, scheduler,
                                              catalog, room_length, config, rng);
    one.group.id = result.groups.size();
    result.groups.push_back(std::move(one.group));
    for (std::size_t d : one.detached) pending.push_back(d);
    result.hyper.insert(result.hyper.end(), one.hyper.begin(), one.hyper.end());
    result.warnings.insert(result.warnings.end(), one.warnings.begin(), one.warnings.end());
  }
  return result;
}

}  // namespace layoutforge
