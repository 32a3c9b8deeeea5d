#include "layoutforge/pipeline.hpp"

#include <set>

namespace layoutforge {

ExtractSummary extract_to_store(const std::vector<Scene>& corpus, PriorStore& store,
                                const ExtractOptions& options) {
  ExtractSummary summary;
  const Catalog catalog = catalog_of(corpus);
  const RelationMap relations =
      extract_pairwise_relations(corpus, catalog, options.params, &summary.report);
  for (const auto& [key, relation] : relations) {
    store.save_pairwise(relation);
    ++summary.relations;
    if (relation.priors.empty()) continue;
    chain_set_for(store, relation, catalog, options.align_chains);
    ++summary.chain_sets;
  }
  return summary;
}

Json summary_to_json(const ExtractSummary& summary) {
  Json relations = Json::array();
  for (const auto& r : summary.report.relations) {
    relations.push_back({{"key", r.key.str()},
                         {"samples", r.samples},
                         {"kept", r.kept},
                         {"removed", r.samples - r.kept},
                         {"emitted", r.emitted}});
  }
  const std::size_t samples = summary.report.total_samples();
  const std::size_t kept = summary.report.total_kept();
  return Json{{"relations", summary.relations},
              {"chainSets", summary.chain_sets},
              {"samples", samples},
              {"kept", kept},
              {"removalRate", samples ? double(samples - kept) / double(samples) : 0.0},
              {"perRelation", relations},
              {"warnings", summary.warnings}};
}

void apply_overrides(const Json& doc, LayoutConfig& config) {
  if (doc.contains("nMax")) config.arrange.n_max = doc.at("nMax").get<std::size_t>();
  if (doc.contains("doorClearanceScale")) {
    config.arrange.door_clearance_scale = doc.at("doorClearanceScale").get<double>();
  }
  if (doc.contains("pWallAffine")) config.grouping.p_wall_affine = doc.at("pWallAffine").get<double>();
  if (doc.contains("pWall")) config.grouping.p_wall_other = doc.at("pWall").get<double>();
}

LayoutResult layout_scene(const Scene& request, PriorStore& store, HyperScheduler* scheduler,
                          const LayoutConfig& config) {
  LayoutResult result;
  Rng rng = seeded_rng(config.seed, "layout");
  std::vector<ObjectInstance> objects;
  for (const auto& o : request.objects) objects.push_back(o.instance);
  const double len = room_length(request.room);

  result.grouping = group_objects(objects, store, scheduler, len, config.grouping, rng);
  result.placement = arrange_groups(result.grouping.groups, request.room, rng, config.arrange);
  const auto poses = propagate(result.grouping.groups, result.placement, objects.size());

  result.scene = request;
  for (std::size_t i = 0; i < poses.size(); ++i) result.scene.objects[i].transform = poses[i];

  std::set<HyperRequestStatus> seen;
  for (const auto& h : result.grouping.hyper) seen.insert(h.status);
  if (seen.contains(HyperRequestStatus::kPending)) {
    result.hyper_status = "pending";
  } else if (seen.contains(HyperRequestStatus::kFailed)) {
    result.hyper_status = "failed";
  } else if (seen.contains(HyperRequestStatus::kComplete)) {
    result.hyper_status = "complete";
  }
  return result;
}

Json layout_to_json(const LayoutResult& result) {
  const auto& groups = result.grouping.groups;
  std::vector<std::optional<Transform>> group_pose(groups.size());
  for (const auto& p : result.placement.placed) group_pose[p.group] = p.pose;

  Json group_docs = Json::array();
  for (const auto& g : groups) {
    Json members = Json::array();
    for (const auto& m : g.members) {
      members.push_back({{"object", m.vertex},
                         {"instanceId", result.scene.objects.at(m.vertex).instance.instance_id},
                         {"source", std::string(to_string(m.source))},
                         {"parent", m.parent ? Json(*m.parent) : Json(nullptr)},
                         {"local", transform_to_json(m.local)}});
    }
    group_docs.push_back({{"id", g.id},
                          {"root", g.root},
                          {"width", g.width},
                          {"depth", g.depth},
                          {"height", g.height},
                          {"lifting", g.lifting},
                          {"transform", group_pose[g.id] ? transform_to_json(*group_pose[g.id])
                                                         : Json(nullptr)},
                          {"members", members}});
  }
  Json discards = Json::array();
  for (const auto& d : result.placement.discarded) {
    Json objects = Json::array();
    for (const auto& m : groups.at(d.group).members) objects.push_back(m.vertex);
    discards.push_back({{"group", d.group}, {"objects", objects}, {"reason", d.reason}});
  }
  Json stats = Json::array();
  for (const auto& s : result.placement.stats) {
    stats.push_back({{"group", s.group},
                     {"placed", s.placed},
                     {"heuristicTried", s.insert.heuristic_tried},
                     {"randomTried", s.insert.random_tried},
                     {"rounds", s.insert.rounds}});
  }
  Json hyper = Json::array();
  for (const auto& h : result.grouping.hyper) {
    hyper.push_back({{"key", h.key}, {"status", std::string(to_string(h.status))}});
  }
  return Json{{"scene", scene_to_json(result.scene)},
              {"groups", group_docs},
              {"discards", discards},
              {"stats", stats},
              {"hyper", hyper},
              {"warnings", result.grouping.warnings},
              {"hyperStatus", result.hyper_status}};
}

}  // namespace layoutforge
