#include "layoutforge/extraction.hpp"

#include "layoutforge/dpc.hpp"
#include "layoutforge/error.hpp"
#include "layoutforge/scene_io.hpp"

namespace layoutforge {

std::size_t ExtractionReport::emitted() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.emitted ? 1 : 0;
  return n;
}

std::size_t ExtractionReport::total_samples() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.samples;
  return n;
}

std::size_t ExtractionReport::total_kept() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.kept;
  return n;
}

Catalog catalog_of(const std::vector<Scene>& corpus) {
  Catalog catalog;
  for (const auto& scene : corpus) {
    for (const auto& o : scene.objects) catalog.add(o.instance);
  }
  return catalog;
}

std::map<RelationKey, std::vector<RelativeSample>> collect_relative_samples(
    const std::vector<Scene>& corpus, const Catalog& catalog, const ExtractionParams& params) {
  std::map<RelationKey, std::vector<RelativeSample>> samples;
  for (const auto& scene : corpus) {
    for (std::size_t a = 0; a < scene.objects.size(); ++a) {
      const auto& dom = scene.objects[a];
      if (!dom.transform || !catalog.at(dom.instance.instance_id).dominant_capable) continue;
      for (std::size_t b = 0; b < scene.objects.size(); ++b) {
        const auto& sec = scene.objects[b];
        if (b == a || !sec.transform) continue;
        if ((dom.transform->plan() - sec.transform->plan()).norm() > params.proximity) continue;
        Transform rel = relative_pose(*dom.transform, *sec.transform);
        const Tier tier = catalog.at(sec.instance.instance_id).tier;
        // Floor-standing things sit on the floor; elevation noise is meaningless.
        if (tier == Tier::kFloor || tier == Tier::kCarpet) rel.y = 0;
        samples[{dom.instance.instance_id, sec.instance.instance_id}].push_back({rel, scene.id});
      }
    }
  }
  return samples;
}

std::vector<std::size_t> denoise_samples(const std::vector<Transform>& poses,
                                         const ExtractionParams& params) {
  std::vector<std::size_t> alive(poses.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  while (alive.size() >= 2) {
    std::vector<Transform> current;
    current.reserve(alive.size());
    for (std::size_t i : alive) current.push_back(poses[i]);
    const DpcScores scores = dpc_scores(current, params.angle_weight);
    const std::vector<std::size_t> kept =
        dpc_denoise(scores, params.rho_quantile, params.delta_quantile);
    if (kept.size() == alive.size()) break;
    std::vector<std::size_t> next;
    next.reserve(kept.size());
    for (std::size_t k : kept) next.push_back(alive[k]);
    alive = std::move(next);
  }
  return alive;
}

RelationMap extract_pairwise_relations(const std::vector<Scene>& corpus, const Catalog& catalog,
                                       const ExtractionParams& params, ExtractionReport* report) {
  RelationMap relations;
  const auto samples = collect_relative_samples(corpus, catalog, params);
  for (const auto& [key, list] : samples) {
    RelationReport entry{key, list.size(), 0, false};
    std::vector<Transform> poses;
    poses.reserve(list.size());
    for (const auto& s : list) poses.push_back(s.pose);

    std::vector<std::size_t> kept;
    if (poses.size() >= 2) {
      try {
        kept = denoise_samples(poses, params);
      } catch (const EmptyRelationError&) {
        kept.clear();
      }
    } else {
      kept.assign(poses.size(), 0);
    }
    entry.kept = kept.size();
    if (kept.size() >= params.min_samples && !kept.empty()) {
      PairwiseRelation rel;
      rel.dominant_id = key.dominant;
      rel.secondary_id = key.secondary;
      rel.meta = params;
      rel.priors.reserve(kept.size());
      for (std::size_t i : kept) rel.priors.push_back(round_significant(poses[i]));
      relations.emplace(key, std::move(rel));
      entry.emitted = true;
    }
    if (report) report->relations.push_back(entry);
  }
  return relations;
}

}  // namespace layoutforge
