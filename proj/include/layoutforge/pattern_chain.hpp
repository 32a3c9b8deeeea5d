#pragma once

// One-to-many placement of identical secondaries (a table with several
// identical chairs). A chain is a list of indices into a pairwise relation
// whose secondary copies are mutually collision-free.

#include "layoutforge/extraction.hpp"
#include "layoutforge/random.hpp"

#include <string>
#include <vector>

namespace layoutforge {

using Chain = std::vector<std::size_t>;

struct AlignOptions {
  double snap_m = 0.05;
  double snap_rad = 0.05;
};

struct PatternChainSet {
  std::string dominant_id;
  std::string secondary_id;
  std::vector<Chain> chains;
  /// Content hash of the relation's prior list the chains index into.
  std::string relation_hash;
  bool aligned = false;

  RelationKey key() const { return {dominant_id, secondary_id}; }
  std::size_t max_length() const;
  bool operator==(const PatternChainSet&) const = default;
};

/// Hex FNV-1a over the relation's canonical prior serialisation.
std::string relation_hash(const PairwiseRelation& relation);

/// Footprint of a secondary copy at `pose`, with the dominant at identity.
Rect copy_footprint(const ObjectInstance& secondary, const Transform& pose);

/// Overlap tolerance between copies, in square meters.
inline constexpr double kCopyOverlapEps = 1e-6;

/// Grows a chain from `start_index`: repeatedly draws uniformly among priors
/// whose copy overlaps none of the chosen copies, until none remain.
Chain generate_chain(const PairwiseRelation& relation, const Catalog& catalog,
                     std::size_t start_index, Rng& rng);

/// One chain per prior, the k-th starting at index k.
PatternChainSet generate_chain_set(const PairwiseRelation& relation, const Catalog& catalog,
                                   Rng& rng, bool aligned = true);

/// Snaps near-axis rotations to multiples of pi/2 and merges x (and z)
/// coordinates that lie within `snap_m` of each other to their mean. An
/// adjustment that would make two copies overlap is reverted. Idempotent.
std::vector<Transform> align_chain(const PairwiseRelation& relation, const Chain& chain,
                                   const Catalog& catalog, const AlignOptions& options = {});

/// Poses of the chain's copies, aligned when the set says so.
std::vector<Transform> chain_poses(const PairwiseRelation& relation, const PatternChainSet& set,
                                   const Chain& chain, const Catalog& catalog);

/// True when no two copies at `poses` overlap by kCopyOverlapEps or more.
bool copies_disjoint(const ObjectInstance& secondary, const std::vector<Transform>& poses);

}  // namespace layoutforge
