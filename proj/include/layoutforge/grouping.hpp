#pragma once

// Splits a layout request into coherent groups (connected components of the
// relation graph), picks one dominant per secondary, and lays each group out
// in its own frame from hyper-relations, pattern chains or pairwise priors.

#include "layoutforge/hyper_scheduler.hpp"
#include "layoutforge/prior_store.hpp"
#include "layoutforge/tiers.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace layoutforge {

struct RelationGraph {
  /// One vertex per requested object; copies of an instance are distinct.
  std::vector<ObjectInstance> vertices;
  /// (dominant vertex, secondary vertex), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

RelationGraph build_relation_graph(const std::vector<ObjectInstance>& objects, PriorStore& store);

/// Maximal connected components, edges taken as undirected. Each component is
/// sorted; components are ordered by their smallest vertex.
std::vector<std::vector<std::size_t>> coherent_components(const RelationGraph& graph);

/// How many copies of `secondary` a `dominant` may take.
using CapacityFn = std::function<std::size_t(const std::string& dominant, const std::string& secondary)>;

/// Capacity from the longest stored pattern chain, 1 without chains.
CapacityFn chain_capacity(PriorStore& store, const Catalog& catalog);

/// parent[v] is the dominant chosen for v, nullopt for roots. Only vertices
/// of `component` are touched.
struct DominantForest {
  std::vector<std::optional<std::size_t>> parent;

  std::vector<std::size_t> children(std::size_t v) const;
  std::vector<std::size_t> roots(const std::vector<std::size_t>& component) const;
};

/// Visits the component's secondaries in random order and gives each one
/// dominant, uniformly among in-neighbours that still have capacity for it
/// and are not its descendants. Secondaries left without a dominant become
/// roots of their own trees.
void assign_dominants(const std::vector<std::size_t>& component, const RelationGraph& graph,
                      const CapacityFn& capacity, Rng& rng, DominantForest& forest);

DominantForest assign_dominants(const RelationGraph& graph, const CapacityFn& capacity, Rng& rng);

enum class PriorSource { kRoot, kHyper, kChain, kPairwise };

std::string_view to_string(PriorSource source);

struct GroupMember {
  std::size_t vertex = 0;
  std::optional<std::size_t> parent;
  PriorSource source = PriorSource::kRoot;
  /// Pose in the group frame: origin at the cuboid centre, +z the root's front.
  Transform local;
};

struct CoherentGroup {
  std::size_t id = 0;
  std::size_t root = 0;
  std::vector<GroupMember> members;
  double width = 0;
  double depth = 0;
  /// Lowest member base and the extent above it, in the group frame.
  double base = 0;
  double height = 0;
  Tier tier = Tier::kFloor;
  bool wall_mounted = false;
  double mount_elevation = 0;
  /// Inward offset from the supporting wall; 0 stands against it.
  double lifting = 0;

  double area() const { return width * depth; }
  Rect footprint(const Transform& pose) const;
};

struct GroupingConfig {
  double p_wall_affine = 0.8;
  double p_wall_other = 0.3;
  /// Generate missing hyper-relations inline instead of in the background.
  bool blocking_hyper = false;
  TierRules rules = TierRules::defaults();
};

struct HyperUse {
  std::string key;
  HyperRequestStatus status = HyperRequestStatus::kPending;
};

struct InstantiateResult {
  CoherentGroup group;
  /// Children that had no usable prior; each heads a new group.
  std::vector<std::size_t> detached;
  std::vector<HyperUse> hyper;
  std::vector<std::string> warnings;
};

/// Lays out the tree under `root`. `room_length` bounds the lifting. With a
/// null scheduler hyper-relations are not used.
InstantiateResult instantiate_group(std::size_t root, const DominantForest& forest,
                                    const RelationGraph& graph, PriorStore& store,
                                    HyperScheduler* scheduler, const Catalog& catalog,
                                    double room_length, const GroupingConfig& config, Rng& rng);

struct Grouping {
  RelationGraph graph;
  std::vector<CoherentGroup> groups;
  std::vector<HyperUse> hyper;
  std::vector<std::string> warnings;
};

/// Graph, components, dominants and instantiation for a whole request.
Grouping group_objects(const std::vector<ObjectInstance>& objects, PriorStore& store,
                       HyperScheduler* scheduler, double room_length,
                       const GroupingConfig& config, Rng& rng);

/// Loads the chain set of a relation, regenerating it (deterministically per
/// key) when missing or stale.
std::shared_ptr<const PatternChainSet> chain_set_for(PriorStore& store,
                                                     const PairwiseRelation& relation,
                                                     const Catalog& catalog,
                                                     bool aligned = true);

}  // namespace layoutforge
