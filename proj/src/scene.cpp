#include "layoutforge/scene.hpp"

#include "layoutforge/error.hpp"

#include <cmath>

namespace layoutforge {

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::kFloor:
      return "floor";
    case Tier::kCarpet:
      return "carpet";
    case Tier::kSurface:
      return "surface";
    case Tier::kWall:
      return "wall";
  }
  return "floor";
}

std::optional<Tier> parse_tier(std::string_view text) {
  if (text == "floor") return Tier::kFloor;
  if (text == "carpet") return Tier::kCarpet;
  if (text == "surface") return Tier::kSurface;
  if (text == "wall" || text == "wall-mounted") return Tier::kWall;
  return std::nullopt;
}

void ObjectInstance::validate() const {
  if (instance_id.empty()) throw ValidationError("instance id is empty");
  const auto finite_positive = [](double v) { return std::isfinite(v) && v > 0; };
  if (!finite_positive(width) || !finite_positive(depth) || !finite_positive(height)) {
    throw ValidationError("instance '" + instance_id + "': footprint and height must be > 0");
  }
  if (dominant_capable && tier != Tier::kFloor && tier != Tier::kSurface) {
    throw ValidationError("instance '" + instance_id +
                          "': dominant-capable objects must be floor or surface tier");
  }
  if (!std::isfinite(mount_elevation) || mount_elevation < 0) {
    throw ValidationError("instance '" + instance_id + "': bad mount elevation");
  }
}

void Catalog::add(const ObjectInstance& instance) { instances_[instance.instance_id] = instance; }

const ObjectInstance& Catalog::at(const std::string& instance_id) const {
  if (const auto* found = find(instance_id)) return *found;
  throw LookupError("unknown instance '" + instance_id + "'");
}

const ObjectInstance* Catalog::find(const std::string& instance_id) const {
  const auto it = instances_.find(instance_id);
  return it == instances_.end() ? nullptr : &it->second;
}

void RoomEnvelope::validate() const {
  if (floor.size() < 3) throw ValidationError("room polygon needs at least 3 vertices");
  for (const auto& p : floor) {
    if (!p.allFinite()) throw ValidationError("room polygon has a non-finite vertex");
  }
  if (!is_simple(floor)) throw ValidationError("room polygon is not simple");
  if (area() <= 0) throw ValidationError("room polygon must be counter-clockwise with area > 0");
  for (std::size_t i = 0; i < doors.size(); ++i) {
    if (!touches_boundary(floor, doors[i].rect)) {
      throw ValidationError("door " + std::to_string(i) + " does not touch the room boundary");
    }
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!touches_boundary(floor, windows[i].rect)) {
      throw ValidationError("window " + std::to_string(i) + " does not touch the room boundary");
    }
  }
}

namespace {

void validate_transform(const Transform& t, const std::string& where) {
  if (!std::isfinite(t.x) || !std::isfinite(t.y) || !std::isfinite(t.z) ||
      !std::isfinite(t.theta)) {
    throw ValidationError(where + ": transform has non-finite fields");
  }
}

}  // namespace

void Scene::validate_as_request() const {
  room.validate();
  for (std::size_t i = 0; i < objects.size(); ++i) {
    objects[i].instance.validate();
    if (objects[i].transform) {
      validate_transform(*objects[i].transform, "object " + std::to_string(i));
    }
  }
}

void Scene::validate_as_example() const {
  validate_as_request();
  const Bounds2<double> box = room.bounds();
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& t = objects[i].transform;
    const std::string where = "scene '" + id + "' object " + std::to_string(i);
    if (!t) throw ValidationError(where + ": corpus objects must be placed");
    const Vec2d p = t->plan();
    if ((p.array() < box.min.array()).any() || (p.array() > box.max.array()).any()) {
      throw ValidationError(where + ": lies outside the room");
    }
  }
}

Catalog Scene::catalog() const {
  Catalog out;
  for (const auto& o : objects) out.add(o.instance);
  return out;
}

Rect world_footprint(const ObjectInstance& instance, const Transform& transform) {
  return Rect::from_size(transform.plan(), instance.width, instance.depth, transform.theta);
}

Rect world_footprint(const PlacedObject& object, const Catalog& catalog) {
  return world_footprint(catalog.at(object.instance_id), object.transform);
}

double default_swing_depth(const Rect& door_rect) {
  return std::max(door_rect.width(), door_rect.depth());
}

}  // namespace layoutforge
