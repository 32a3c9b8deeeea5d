#pragma once

// Joint priors for a dominant object plus a definite multiset of secondaries
// (a coffee table with one sofa and one TV stand). Each hyper-prior is built
// by sampling pairwise priors one secondary at a time, filtering out poses
// that collide with copies already placed.

#include "layoutforge/extraction.hpp"
#include "layoutforge/random.hpp"
#include "layoutforge/tiers.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace layoutforge {

/// Dominant instance plus a sorted multiset of secondary instances.
struct HyperKey {
  std::string dominant_id;
  /// (instance id, copy count), sorted by id, counts >= 1.
  std::vector<std::pair<std::string, int>> secondaries;

  /// Builds a canonical key from a list of secondary ids (duplicates allowed).
  static HyperKey make(std::string dominant_id, const std::vector<std::string>& secondary_ids);
  /// Inverse of str(). Throws ParseError.
  static HyperKey parse(std::string_view text);

  /// "dominant|a*1,b*2"
  std::string str() const;
  std::size_t copy_count() const;
  /// Instance id of every copy in slot order.
  std::vector<std::string> slots() const;

  auto operator<=>(const HyperKey&) const = default;
};

struct SlotPose {
  std::size_t slot = 0;
  Transform pose;

  bool operator==(const SlotPose&) const = default;
};

/// One joint assignment; poses are relative to the dominant at identity.
struct HyperPrior {
  std::vector<SlotPose> poses;

  bool operator==(const HyperPrior&) const = default;
};

enum class HyperStatus { kComplete, kGenerating, kFailed };

std::string_view to_string(HyperStatus status);
std::optional<HyperStatus> parse_hyper_status(std::string_view text);

struct HyperRelation {
  HyperKey key;
  std::vector<HyperPrior> priors;
  HyperStatus status = HyperStatus::kGenerating;
  std::string reason;
};

using RelationLookup =
    std::function<std::shared_ptr<const PairwiseRelation>(const RelationKey& key)>;

struct HyperOptions {
  std::size_t max_restarts = 100;
  std::size_t target_count = 64;
  std::size_t attempt_budget = 5000;
  TierRules rules = TierRules::defaults();
};

/// Orders the poses of identical copies so permutations compare equal.
HyperPrior canonical_prior(const HyperKey& key, HyperPrior prior);

/// True when every pair of secondary copies is collision-free.
bool hyper_prior_sound(const HyperKey& key, const HyperPrior& prior, const Catalog& catalog,
                       const TierRules& rules = TierRules::defaults());

/// Places every copy in uniformly random order, each from the priors of its
/// pairwise relation that do not collide with copies already placed. An
/// attempt that runs out of candidates restarts; after `max_restarts`
/// restarts the function gives up and returns nullopt. Throws
/// UnsatisfiableKeyError when a secondary has no pairwise relation.
std::optional<HyperPrior> generate_hyper_prior(const HyperKey& key, const RelationLookup& lookup,
                                               const Catalog& catalog, Rng& rng,
                                               std::size_t max_restarts = 100,
                                               const TierRules& rules = TierRules::defaults());

/// Collects distinct hyper-priors (poses equal within 1e-6 count as the same)
/// until `options.target_count` are found or `options.attempt_budget` calls
/// to generate_hyper_prior have been spent.
HyperRelation enrich_hyper_relation(const HyperKey& key, const RelationLookup& lookup,
                                    const Catalog& catalog, Rng& rng,
                                    const HyperOptions& options = {});

}  // namespace layoutforge
