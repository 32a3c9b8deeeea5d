#pragma once

#include "layoutforge/scene.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace layoutforge {

struct RelationKey {
  std::string dominant;
  std::string secondary;

  /// "dominant|secondary"
  std::string str() const { return dominant + "|" + secondary; }
  auto operator<=>(const RelationKey&) const = default;
};

struct RelativeSample {
  Transform pose;
  std::string source_scene;
};

/// Parameters recorded alongside each relation so a store can be traced back
/// to the extraction run that produced it.
struct ExtractionParams {
  double angle_weight = 1.0;
  double rho_quantile = 0.10;
  double delta_quantile = 0.90;
  /// Max distance between footprint centres for two objects to co-occur.
  double proximity = 3.0;
  std::size_t min_samples = 4;
};

/// Denoised relative poses from a dominant instance to a secondary instance.
/// Prior order is significant: pattern chains index into it.
struct PairwiseRelation {
  std::string dominant_id;
  std::string secondary_id;
  std::vector<Transform> priors;
  ExtractionParams meta;

  RelationKey key() const { return {dominant_id, secondary_id}; }
  bool operator==(const PairwiseRelation& other) const {
    return dominant_id == other.dominant_id && secondary_id == other.secondary_id &&
           priors == other.priors;
  }
};

struct RelationReport {
  RelationKey key;
  std::size_t samples = 0;
  std::size_t kept = 0;
  bool emitted = false;
};

struct ExtractionReport {
  std::vector<RelationReport> relations;

  std::size_t emitted() const;
  std::size_t total_samples() const;
  std::size_t total_kept() const;
};

using RelationMap = std::map<RelationKey, PairwiseRelation>;

/// Raw samples per (dominant, secondary) instance pair, in corpus order.
std::map<RelationKey, std::vector<RelativeSample>> collect_relative_samples(
    const std::vector<Scene>& corpus, const Catalog& catalog, const ExtractionParams& params);

/// Runs density scoring and denoising repeatedly until a pass removes nothing.
/// Returns the surviving indices into `poses`.
std::vector<std::size_t> denoise_samples(const std::vector<Transform>& poses,
                                         const ExtractionParams& params);

/// Full extraction pass over a corpus. Prior values are rounded to 9
/// significant digits so the in-memory relation equals its stored form.
RelationMap extract_pairwise_relations(const std::vector<Scene>& corpus, const Catalog& catalog,
                                       const ExtractionParams& params = {},
                                       ExtractionReport* report = nullptr);

/// Builds a catalog from every object of every scene.
Catalog catalog_of(const std::vector<Scene>& corpus);

}  // namespace layoutforge
