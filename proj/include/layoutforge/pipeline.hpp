#pragma once

// End-to-end entry points shared by the CLI and the HTTP service.

#include "layoutforge/arranging.hpp"
#include "layoutforge/extraction.hpp"
#include "layoutforge/grouping.hpp"
#include "layoutforge/prior_store.hpp"

#include <string>
#include <vector>

namespace layoutforge {

struct ExtractOptions {
  ExtractionParams params;
  bool align_chains = true;
};

struct ExtractSummary {
  ExtractionReport report;
  std::size_t relations = 0;
  std::size_t chain_sets = 0;
  std::vector<std::string> warnings;
};

/// Extracts pairwise relations, stores them and precomputes their chains.
ExtractSummary extract_to_store(const std::vector<Scene>& corpus, PriorStore& store,
                                const ExtractOptions& options = {});

Json summary_to_json(const ExtractSummary& summary);

struct LayoutConfig {
  std::uint64_t seed = 0;
  GroupingConfig grouping;
  ArrangeConfig arrange;
};

/// Applies the optional overrides `nMax`, `doorClearanceScale`, `pWallAffine`
/// and `pWall` from a request document.
void apply_overrides(const Json& doc, LayoutConfig& config);

struct LayoutResult {
  /// The request with every placed object's transform filled in; discarded
  /// objects have none.
  Scene scene;
  Grouping grouping;
  PlacementResult placement;
  /// none | pending | complete | failed, aggregated over the hyper keys used.
  std::string hyper_status = "none";
};

LayoutResult layout_scene(const Scene& request, PriorStore& store, HyperScheduler* scheduler,
                          const LayoutConfig& config);

/// Response body: scene, groups, discards, stats and hyperStatus.
Json layout_to_json(const LayoutResult& result);

}  // namespace layoutforge
