#pragma once

#include "layoutforge/scene.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace layoutforge {

using Json = nlohmann::json;

struct CorpusLoad {
  std::vector<Scene> scenes;
  /// One entry per scene skipped for violating an invariant.
  std::vector<std::string> warnings;
};

/// Loads every scene document under `path` (a directory of *.json files in
/// filename order, or a single file holding one scene or an array of scenes).
/// Malformed documents throw ParseError naming the file and field; scenes
/// that parse but break an invariant are skipped with a warning.
CorpusLoad load_scene_corpus(const std::filesystem::path& path);

/// `source` is only used in error messages.
Scene scene_from_json(const Json& doc, const std::string& source = "<json>");
Json scene_to_json(const Scene& scene);

Transform transform_from_json(const Json& doc, const std::string& source, double angle_scale = 1.0);
Json transform_to_json(const Transform& t);

Json room_to_json(const RoomEnvelope& room);
ObjectInstance instance_from_json(const Json& doc, const std::string& source);

/// Rounds to `digits` significant decimal digits. Values that went through
/// this function print and re-parse to themselves, which keeps stored priors
/// byte-stable and exactly round-trippable.
double round_significant(double value, int digits = 9);
/// Rounds every field; theta stays inside [-pi, pi).
Transform round_significant(const Transform& t, int digits = 9);

Json read_json_file(const std::filesystem::path& path);
/// Writes `text` to `path` through a temporary file and an atomic rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace layoutforge
