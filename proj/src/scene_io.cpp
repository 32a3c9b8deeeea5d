#include "layoutforge/scene_io.hpp"

#include "layoutforge/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

namespace layoutforge {
namespace {

const Json& require(const Json& doc, const char* field, const std::string& source) {
  if (!doc.is_object() || !doc.contains(field)) {
    throw ParseError(source + ": missing field '" + field + "'");
  }
  return doc.at(field);
}

double number(const Json& doc, const char* field, const std::string& source) {
  const Json& v = require(doc, field, source);
  if (!v.is_number()) throw ParseError(source + ": field '" + field + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& doc, const char* field, double fallback, const std::string& source) {
  if (!doc.contains(field) || doc.at(field).is_null()) return fallback;
  return number(doc, field, source);
}

bool flag_or(const Json& doc, const char* field, bool fallback, const std::string& source) {
  if (!doc.contains(field) || doc.at(field).is_null()) return fallback;
  const Json& v = doc.at(field);
  if (!v.is_boolean()) throw ParseError(source + ": field '" + field + "' must be a boolean");
  return v.get<bool>();
}

std::string text(const Json& doc, const char* field, const std::string& source) {
  const Json& v = require(doc, field, source);
  if (!v.is_string()) throw ParseError(source + ": field '" + field + "' must be a string");
  return v.get<std::string>();
}

Rect opening_rect(const Json& doc, const std::string& source, double angle_scale) {
  return Rect::from_size(Vec2d(number(doc, "cx", source), number(doc, "cz", source)),
                         number(doc, "w", source), number(doc, "d", source),
                         normalize_angle(number_or(doc, "theta", 0.0, source) * angle_scale));
}

RoomEnvelope room_from_json(const Json& doc, const std::string& source, double angle_scale) {
  RoomEnvelope room;
  const Json& floor = require(doc, "floor", source);
  if (!floor.is_array()) throw ParseError(source + ": field 'room.floor' must be an array");
  for (std::size_t i = 0; i < floor.size(); ++i) {
    const Json& p = floor[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError(source + ": field 'room.floor[" + std::to_string(i) +
                       "]' must be [x, z]");
    }
    room.floor.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  if (room.floor.size() >= 3 && signed_area(room.floor) < 0) {
    std::reverse(room.floor.begin(), room.floor.end());
  }
  if (doc.contains("doors")) {
    for (std::size_t i = 0; i < doc["doors"].size(); ++i) {
      const std::string where = source + ": room.doors[" + std::to_string(i) + "]";
      Door door;
      door.rect = opening_rect(doc["doors"][i], where, angle_scale);
      door.swing_depth =
          number_or(doc["doors"][i], "swingDepth", default_swing_depth(door.rect), where);
      room.doors.push_back(door);
    }
  }
  if (doc.contains("windows")) {
    for (std::size_t i = 0; i < doc["windows"].size(); ++i) {
      const std::string where = source + ": room.windows[" + std::to_string(i) + "]";
      Window window;
      window.rect = opening_rect(doc["windows"][i], where, angle_scale);
      window.sill_height = number_or(doc["windows"][i], "sill", 0.0, where);
      room.windows.push_back(window);
    }
  }
  return room;
}

Json opening_json(const Rect& rect) {
  return Json{{"cx", rect.center.x()}, {"cz", rect.center.y()}, {"w", rect.width()},
              {"d", rect.depth()},     {"theta", rect.angle}};
}

}  // namespace

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0) return value == 0 ? 0.0 : value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

Transform round_significant(const Transform& t, int digits) {
  double theta = round_significant(t.theta, digits);
  if (theta >= std::numbers::pi || theta < -std::numbers::pi) {
    theta = round_significant(normalize_angle(theta), digits);
  }
  return {round_significant(t.x, digits), round_significant(t.y, digits),
          round_significant(t.z, digits), theta};
}

Transform transform_from_json(const Json& doc, const std::string& source, double angle_scale) {
  Transform t;
  t.x = number(doc, "x", source);
  t.y = number_or(doc, "y", 0.0, source);
  t.z = number(doc, "z", source);
  t.theta = normalize_angle(number_or(doc, "theta", 0.0, source) * angle_scale);
  return t;
}

Json transform_to_json(const Transform& t) {
  return Json{{"x", t.x}, {"y", t.y}, {"z", t.z}, {"theta", t.theta}};
}

ObjectInstance instance_from_json(const Json& doc, const std::string& source) {
  ObjectInstance inst;
  inst.instance_id = text(doc, "instanceId", source);
  const Json& fp = require(doc, "footprint", source);
  inst.width = number(fp, "w", source + ".footprint");
  inst.depth = number(fp, "d", source + ".footprint");
  inst.height = number(fp, "h", source + ".footprint");
  const std::string tier = doc.contains("tier") ? text(doc, "tier", source) : "floor";
  const auto parsed = parse_tier(tier);
  if (!parsed) throw ParseError(source + ": field 'tier' has unknown value '" + tier + "'");
  inst.tier = *parsed;
  inst.dominant_capable = flag_or(doc, "dominantCapable", false, source);
  inst.wall_mounted = flag_or(doc, "wallMounted", inst.tier == Tier::kWall, source);
  inst.wall_affine = flag_or(doc, "wallAffine", false, source);
  inst.mount_elevation = number_or(doc, "mountElevation", 0.0, source);
  return inst;
}

Scene scene_from_json(const Json& doc, const std::string& source) {
  if (!doc.is_object()) throw ParseError(source + ": scene document must be an object");
  double angle_scale = 1.0;
  if (doc.contains("angleUnit")) {
    const std::string unit = text(doc, "angleUnit", source);
    if (unit == "deg") {
      angle_scale = std::numbers::pi / 180.0;
    } else if (unit != "rad") {
      throw ParseError(source + ": field 'angleUnit' must be \"deg\" or \"rad\"");
    }
  }
  Scene scene;
  scene.id = text(doc, "id", source);
  const std::string where = source + " (scene '" + scene.id + "')";
  scene.room = room_from_json(require(doc, "room", where), where, angle_scale);
  const Json& objects = require(doc, "objects", where);
  if (!objects.is_array()) throw ParseError(where + ": field 'objects' must be an array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string obj_where = where + ": objects[" + std::to_string(i) + "]";
    SceneObject obj;
    obj.instance = instance_from_json(objects[i], obj_where);
    if (objects[i].contains("transform") && !objects[i]["transform"].is_null()) {
      obj.transform = transform_from_json(objects[i]["transform"], obj_where + ".transform",
                                          angle_scale);
    }
    scene.objects.push_back(std::move(obj));
  }
  return scene;
}

Json room_to_json(const RoomEnvelope& room) {
  Json floor = Json::array();
  for (const auto& p : room.floor) floor.push_back(Json::array({p.x(), p.y()}));
  Json doors = Json::array();
  for (const auto& d : room.doors) {
    Json j = opening_json(d.rect);
    j["swingDepth"] = d.swing_depth;
    doors.push_back(std::move(j));
  }
  Json windows = Json::array();
  for (const auto& w : room.windows) {
    Json j = opening_json(w.rect);
    j["sill"] = w.sill_height;
    windows.push_back(std::move(j));
  }
  return Json{{"floor", floor}, {"doors", doors}, {"windows", windows}};
}

Json scene_to_json(const Scene& scene) {
  Json objects = Json::array();
  for (const auto& o : scene.objects) {
    const ObjectInstance& in = o.instance;
    Json j{{"instanceId", in.instance_id},
           {"footprint", {{"w", in.width}, {"d", in.depth}, {"h", in.height}}},
           {"tier", std::string(to_string(in.tier))},
           {"dominantCapable", in.dominant_capable},
           {"wallMounted", in.wall_mounted},
           {"wallAffine", in.wall_affine},
           {"mountElevation", in.mount_elevation}};
    j["transform"] = o.transform ? transform_to_json(*o.transform) : Json(nullptr);
    objects.push_back(std::move(j));
  }
  return Json{{"id", scene.id}, {"room", room_to_json(scene.room)}, {"objects", objects}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  static std::atomic<unsigned long> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id())
           << "." << counter++;
  const std::filesystem::path tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("short write on " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CorpusLoad load_scene_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(path)) {
    files.push_back(path);
  } else {
    throw ParseError(path.string() + ": no such corpus file or directory");
  }

  CorpusLoad out;
  auto accept = [&](const Json& doc, const std::string& source) {
    Scene scene = scene_from_json(doc, source);
    try {
      scene.validate_as_example();
    } catch (const ValidationError& e) {
      out.warnings.push_back(source + ": skipped scene '" + scene.id + "': " + e.what());
      return;
    }
    out.scenes.push_back(std::move(scene));
  };
  for (const auto& file : files) {
    const Json doc = read_json_file(file);
    const std::string source = file.string();
    if (doc.is_array()) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        accept(doc[i], source + "[" + std::to_string(i) + "]");
      }
    } else if (doc.is_object() && doc.contains("scenes")) {
      for (std::size_t i = 0; i < doc["scenes"].size(); ++i) {
        accept(doc["scenes"][i], source + "[" + std::to_string(i) + "]");
      }
    } else {
      accept(doc, source);
    }
  }
  return out;
}

}  // namespace layoutforge
