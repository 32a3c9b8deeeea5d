#pragma once

#include "layoutforge/geometry.hpp"
#include "layoutforge/transform.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace layoutforge {

/// Vertical stacking class. Collisions between some tiers are ignored (a rug
/// under a table), see tiers.hpp.
enum class Tier { kFloor, kCarpet, kSurface, kWall };

std::string_view to_string(Tier tier);
/// Accepts "floor", "carpet", "surface", "wall" and "wall-mounted".
std::optional<Tier> parse_tier(std::string_view text);

/// A concrete piece of furniture. Identity is per instance (one model), not per
/// category; several copies of one instance may appear in a scene.
struct ObjectInstance {
  std::string instance_id;
  double width = 0;   // local x extent
  double depth = 0;   // local z extent
  double height = 0;
  Tier tier = Tier::kFloor;
  bool dominant_capable = false;
  bool wall_mounted = false;
  /// Prefers to stand against a wall (beds, wardrobes, tv stands).
  bool wall_affine = false;
  double mount_elevation = 0;

  /// Throws ValidationError when a field breaks an invariant.
  void validate() const;
};

struct PlacedObject {
  std::string instance_id;
  Transform transform;
};

/// Instance table keyed by instance id.
class Catalog {
 public:
  Catalog() = default;

  /// Inserts or replaces the definition of `instance.instance_id`.
  void add(const ObjectInstance& instance);
  /// Throws LookupError for unknown ids.
  const ObjectInstance& at(const std::string& instance_id) const;
  const ObjectInstance* find(const std::string& instance_id) const;
  bool contains(const std::string& instance_id) const { return find(instance_id) != nullptr; }
  std::size_t size() const { return instances_.size(); }

  const std::map<std::string, ObjectInstance>& instances() const { return instances_; }

 private:
  std::map<std::string, ObjectInstance> instances_;
};

struct Door {
  Rect rect;
  double swing_depth = 0;
};

struct Window {
  Rect rect;
  double sill_height = 0;
};

struct RoomEnvelope {
  /// Simple counter-clockwise polygon of (x, z) vertices.
  Polygon2d floor;
  std::vector<Door> doors;
  std::vector<Window> windows;

  double area() const { return signed_area(floor); }
  Bounds2<double> bounds() const { return bounds_of<double>(floor); }

  /// Checks simplicity, positive area and that every opening touches the
  /// boundary. Clockwise input is not accepted here; the loader reorients.
  void validate() const;
};

struct SceneObject {
  ObjectInstance instance;
  /// Mandatory in a corpus example, optional in a layout request.
  std::optional<Transform> transform;
};

struct Scene {
  std::string id;
  RoomEnvelope room;
  std::vector<SceneObject> objects;

  /// Corpus-example invariants: valid room, every object placed and centred
  /// inside the room's bounding box.
  void validate_as_example() const;
  void validate_as_request() const;

  Catalog catalog() const;
};

/// Footprint of a placed object in world (x, z) coordinates. Throws
/// LookupError when the instance is unknown.
Rect world_footprint(const PlacedObject& object, const Catalog& catalog);
Rect world_footprint(const ObjectInstance& instance, const Transform& transform);

/// Default door swing: the longer side of the door rectangle.
double default_swing_depth(const Rect& door_rect);

}  // namespace layoutforge
