#pragma once

#include "layoutforge/pipeline.hpp"
#include "layoutforge/synthetic.hpp"

#include <filesystem>
#include <memory>
#include <random>
#include <string>

namespace fixtures {

/// Memory store holding everything extracted from the demo corpus.
inline std::unique_ptr<layoutforge::PriorStore> demo_store() {
  auto store = std::make_unique<layoutforge::PriorStore>();
  layoutforge::extract_to_store(layoutforge::synthetic::demo_corpus(50, 1), *store);
  return store;
}

inline std::vector<std::size_t> group_of(const layoutforge::LayoutResult& result) {
  std::vector<std::size_t> out(result.scene.objects.size(), 0);
  for (const auto& g : result.grouping.groups) {
    for (const auto& m : g.members) out.at(m.vertex) = g.id;
  }
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("layoutforge-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
