#include "layoutforge/error.hpp"
#include "layoutforge/pipeline.hpp"
#include "layoutforge/scene_io.hpp"
#include "layoutforge/service.hpp"
#include "layoutforge/svg.hpp"
#include "layoutforge/synthetic.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace layoutforge;

namespace {

int run_extract(const fs::path& corpus_path, const fs::path& store_path, const ExtractOptions& options) {
  CorpusLoad corpus;
  try {
    corpus = load_scene_corpus(corpus_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << "\n";
  PriorStore store(store_path);
  fs::create_directories(store_path);
  ExtractSummary summary = extract_to_store(corpus.scenes, store, options);
  summary.warnings = corpus.warnings;
  Json report = summary_to_json(summary);
  report["scenes"] = corpus.scenes.size();
  std::cout << report.dump(2) << "\n";
  return 0;
}

Scene read_request(const fs::path& path) {
  const Json doc = read_json_file(path);
  Scene scene = scene_from_json(doc.contains("scene") ? doc.at("scene") : doc, path.string());
  scene.validate_as_request();
  return scene;
}

int run_layout(const fs::path& scene_path, const fs::path& store_path, LayoutConfig config,
               const fs::path& out_path, const fs::path& svg_path, const fs::path& report_path) {
  if (!fs::is_directory(store_path)) {
    std::cerr << "error: prior store " << store_path << " does not exist\n";
    return 2;
  }
  Scene request;
  try {
    request = read_request(scene_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  PriorStore store(store_path);
  HyperScheduler scheduler(store, std::make_shared<ManualExecutor>(), HyperOptions{}, 0);
  config.grouping.blocking_hyper = true;
  const LayoutResult result = layout_scene(request, store, &scheduler, config);

  write_file_atomic(out_path, canonical_text(scene_to_json(result.scene)));
  if (!svg_path.empty()) {
    SvgOptions svg;
    svg.door_clearance_scale = config.arrange.door_clearance_scale;
    write_file_atomic(svg_path, render_svg(result, svg));
  }
  const Json full = layout_to_json(result);
  if (!report_path.empty()) write_file_atomic(report_path, canonical_text(full));
  std::cerr << "placed " << result.placement.placed.size() << " of "
            << result.grouping.groups.size() << " groups";
  if (!result.placement.discarded.empty()) {
    std::cerr << "; discarded:";
    for (const auto& d : full.at("discards")) {
      for (const auto& o : d.at("objects")) {
        std::cerr << " " << result.scene.objects.at(o.get<std::size_t>()).instance.instance_id;
      }
    }
  }
  std::cerr << "\n";
  return 0;
}

int run_serve(const fs::path& store_path, const fs::path& corpus_path, const std::string& bind,
              std::size_t workers) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "error: --bind expects HOST:PORT\n";
    return 2;
  }
  std::vector<Scene> corpus;
  if (!corpus_path.empty()) {
    try {
      corpus = load_scene_corpus(corpus_path).scenes;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  fs::create_directories(store_path);
  PriorStore store(store_path);
  Service service(store, std::move(corpus), std::make_shared<ThreadPoolExecutor>(workers));
  return serve(service, bind.substr(0, colon), std::stoi(bind.substr(colon + 1)));
}

int run_synth(const fs::path& out, std::size_t per_kind, std::uint64_t seed,
              const fs::path& requests) {
  for (const auto& scene : synthetic::demo_corpus(per_kind, seed)) {
    write_file_atomic(out / (scene.id + ".json"), canonical_text(scene_to_json(scene)));
  }
  if (!requests.empty()) {
    for (const auto& scene : {synthetic::bedroom_request(), synthetic::living_dining_request(),
                              synthetic::crowded_request()}) {
      write_file_atomic(requests / (scene.id + ".json"), canonical_text(scene_to_json(scene)));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learns furniture layout priors from example scenes and arranges rooms."};
  app.require_subcommand(1);

  auto* extract = app.add_subcommand("extract", "Extract priors from a scene corpus into a store");
  fs::path corpus_path, store_path;
  ExtractOptions extract_options;
  bool no_align = false;
  extract->add_option("--corpus", corpus_path, "Scene file or directory")->required();
  extract->add_option("--store", store_path, "Prior store directory")->required();
  extract->add_option("--angle-weight", extract_options.params.angle_weight, "Weight of rotation in pose distance");
  extract->add_option("--rho-q", extract_options.params.rho_quantile, "Density quantile for outliers");
  extract->add_option("--delta-q", extract_options.params.delta_quantile, "Separation quantile for outliers");
  extract->add_option("--proximity", extract_options.params.proximity, "Max co-occurrence distance (m)");
  extract->add_option("--min-samples", extract_options.params.min_samples, "Min kept samples per relation");
  extract->add_flag("--no-align", no_align, "Store chains without snapping");

  auto* layout = app.add_subcommand("layout", "Arrange the objects of a scene");
  fs::path scene_path, out_path, svg_path, report_path;
  LayoutConfig config;
  layout->add_option("--scene", scene_path, "Scene request JSON")->required();
  layout->add_option("--store", store_path, "Prior store directory")->required();
  layout->add_option("--seed", config.seed, "Random seed");
  layout->add_option("--out", out_path, "Placed scene output")->required();
  layout->add_option("--svg", svg_path, "Floor plan output");
  layout->add_option("--report", report_path, "Groups, discards and stats output");
  layout->add_option("--n-max", config.arrange.n_max, "Densification rounds");
  layout->add_option("--door-clearance-scale", config.arrange.door_clearance_scale,
                     "Door clearance depth as a multiple of swing depth");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  std::string bind = "127.0.0.1:8080";
  std::size_t workers = 0;
  serve_cmd->add_option("--store", store_path, "Prior store directory")->required();
  serve_cmd->add_option("--corpus", corpus_path, "Scene corpus served under /scenes");
  serve_cmd->add_option("--bind", bind, "HOST:PORT");
  serve_cmd->add_option("--workers", workers, "Background generation threads (0: one per core)");

  auto* synth = app.add_subcommand("synth", "Write the synthetic demo corpus");
  fs::path synth_out, requests_out;
  std::size_t per_kind = 50;
  std::uint64_t synth_seed = 1;
  synth->add_option("--out", synth_out, "Corpus directory")->required();
  synth->add_option("--per-kind", per_kind, "Scenes per vignette kind");
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--requests", requests_out, "Also write the layout request fixtures here");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*extract) {
      extract_options.align_chains = !no_align;
      return run_extract(corpus_path, store_path, extract_options);
    }
    if (*layout) return run_layout(scene_path, store_path, config, out_path, svg_path, report_path);
    if (*serve_cmd) return run_serve(store_path, corpus_path, bind, workers);
    if (*synth) return run_synth(synth_out, per_kind, synth_seed, requests_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
