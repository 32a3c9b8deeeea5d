#include "layoutforge/synthetic.hpp"

#include <cmath>
#include <numbers>

namespace layoutforge::synthetic {
namespace {

constexpr double kPi = std::numbers::pi;

ObjectInstance make(std::string id, double w, double d, double h, Tier tier = Tier::kFloor,
                    bool dominant = false, bool wall_affine = false) {
  ObjectInstance o;
  o.instance_id = std::move(id);
  o.width = w;
  o.depth = d;
  o.height = h;
  o.tier = tier;
  o.dominant_capable = dominant;
  o.wall_affine = wall_affine;
  return o;
}

Catalog build_catalog() {
  Catalog c;
  c.add(make("bed_double", 1.6, 2.1, 0.5, Tier::kFloor, true, true));
  c.add(make("nightstand", 0.45, 0.4, 0.55));
  c.add(make("wardrobe", 1.2, 0.6, 2.0, Tier::kFloor, false, true));
  c.add(make("desk", 1.2, 0.6, 0.75, Tier::kFloor, true));
  c.add(make("desk_chair", 0.5, 0.5, 0.9));
  c.add(make("desk_lamp", 0.2, 0.2, 0.45, Tier::kSurface));
  c.add(make("dining_table", 1.6, 0.9, 0.75, Tier::kFloor, true));
  c.add(make("dining_chair", 0.45, 0.5, 0.9));
  c.add(make("coffee_table", 1.1, 0.6, 0.45, Tier::kFloor, true));
  c.add(make("sofa", 2.1, 0.9, 0.85));
  c.add(make("armchair", 0.8, 0.8, 0.85));
  c.add(make("tv_stand", 1.6, 0.45, 0.5, Tier::kFloor, true, true));
  c.add(make("tv", 1.2, 0.1, 0.7, Tier::kSurface));
  c.add(make("rug", 2.0, 1.4, 0.01, Tier::kCarpet));
  c.add(make("cabinet", 0.8, 0.45, 0.4));
  c.add(make("bookshelf", 0.9, 0.35, 1.8, Tier::kFloor, false, true));
  c.add(make("plant", 0.4, 0.4, 1.1));
  ObjectInstance painting = make("painting", 0.8, 0.05, 0.6, Tier::kWall);
  painting.wall_mounted = true;
  painting.mount_elevation = 1.5;
  c.add(painting);
  return c;
}

SceneObject placed(const std::string& id, const Transform& t) { return {instance(id), t}; }
SceneObject unplaced(const std::string& id) { return {instance(id), std::nullopt}; }

Slot slot(std::string id, double x, double y, double z, double theta) {
  return {std::move(id), {x, y, z, theta}};
}

const std::vector<Slot> kDiningSlots = {
    slot("dining_chair", -0.4, 0, 0.72, -kPi), slot("dining_chair", 0.4, 0, 0.72, -kPi),
    slot("dining_chair", -0.4, 0, -0.72, 0),   slot("dining_chair", 0.4, 0, -0.72, 0),
    slot("dining_chair", 1.07, 0, 0, kPi / 2), slot("dining_chair", -1.07, 0, 0, -kPi / 2)};

// Random subset of `slots` of size in [lo, hi], in slot order.
std::vector<Slot> pick(const std::vector<Slot>& slots, std::size_t lo, std::size_t hi, Rng& rng) {
  const std::size_t n = lo + uniform_index(rng, hi - lo + 1);
  std::vector<std::size_t> idx(slots.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<Slot> out;
  for (std::size_t i : idx) out.push_back(slots[i]);
  return out;
}

}  // namespace

const Catalog& demo_catalog() {
  static const Catalog catalog = build_catalog();
  return catalog;
}

const ObjectInstance& instance(const std::string& id) { return demo_catalog().at(id); }

RoomEnvelope rectangle_room(double width, double depth) {
  RoomEnvelope room;
  room.floor = {{0, 0}, {width, 0}, {width, depth}, {0, depth}};
  return room;
}

Scene vignette_scene(const std::string& id, const std::string& dominant_id,
                     const std::vector<Slot>& slots, const VignetteOptions& options, Rng& rng,
                     std::vector<bool>* noisy) {
  Scene scene;
  scene.id = id;
  const double h = options.room_half_size;
  scene.room.floor = {{-h, -h}, {h, -h}, {h, h}, {-h, h}};
  std::normal_distribution<double> jitter(0.0, 1.0);

  const Transform dominant{uniform_real(rng, -2.0, 2.0), 0, uniform_real(rng, -2.0, 2.0),
                           uniform_real(rng, -kPi, kPi)};
  scene.objects.push_back(placed(dominant_id, dominant));
  for (const auto& s : slots) {
    const bool noise = std::bernoulli_distribution(options.noise_fraction)(rng);
    Transform local;
    if (noise) {
      const double r = options.noise_radius * std::sqrt(uniform_real(rng, 0.0, 1.0));
      const double a = uniform_real(rng, -kPi, kPi);
      local = {r * std::cos(a), s.pose.y, r * std::sin(a), uniform_real(rng, -kPi, kPi)};
    } else {
      local = s.pose;
      local.x += options.jitter_m * jitter(rng);
      local.z += options.jitter_m * jitter(rng);
      local.theta = normalize_angle(local.theta + options.jitter_rad * jitter(rng));
    }
    if (noisy) noisy->push_back(noise);
    scene.objects.push_back(placed(s.instance_id, compose(dominant, local)));
  }
  return scene;
}

std::vector<Scene> demo_corpus(std::size_t per_kind, std::uint64_t seed,
                               const VignetteOptions& options) {
  Rng rng = seeded_rng(seed, "demo-corpus");
  std::vector<Scene> corpus;
  auto name = [](const char* kind, std::size_t i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%03zu", kind, i);
    return std::string(buf);
  };
  const std::vector<Slot> bed = {slot("nightstand", -1.05, 0, -0.85, 0),
                                 slot("nightstand", 1.05, 0, -0.85, 0)};
  const std::vector<Slot> desk = {slot("desk_chair", 0, 0, 0.55, -kPi)};
  const std::vector<Slot> lamp = {slot("desk_lamp", -0.4, 0.75, -0.15, 0),
                                  slot("desk_lamp", 0.4, 0.75, -0.15, 0)};
  const std::vector<Slot> living = {slot("sofa", 0, 0, -1.0, 0),
                                    slot("tv_stand", 0, 0, 1.6, -kPi),
                                    slot("tv", 0, 0.5, 1.6, -kPi),
                                    slot("rug", 0, 0, 0, 0)};
  const std::vector<Slot> armchairs = {slot("armchair", 1.3, 0, 0, kPi / 2),
                                       slot("armchair", -1.3, 0, 0, -kPi / 2)};

  for (std::size_t i = 0; i < per_kind; ++i) {
    corpus.push_back(vignette_scene(name("bedroom", i), "bed_double", pick(bed, 1, 2, rng),
                                    options, rng));
    std::vector<Slot> d = desk;
    for (const auto& s : pick(lamp, 0, 1, rng)) d.push_back(s);
    corpus.push_back(vignette_scene(name("study", i), "desk", d, options, rng));
    corpus.push_back(vignette_scene(name("dining", i), "dining_table", pick(kDiningSlots, 4, 6, rng),
                                    options, rng));
    std::vector<Slot> l = living;
    for (const auto& s : pick(armchairs, 0, 2, rng)) l.push_back(s);
    corpus.push_back(vignette_scene(name("living", i), "coffee_table", l, options, rng));
  }
  return corpus;
}

Scene bedroom_request() {
  Scene s;
  s.id = "bedroom";
  s.room = rectangle_room(4, 5);
  s.room.doors.push_back({Rect::from_size({3.3, 0}, 0.9, 0.1, 0), 0.9});
  s.room.windows.push_back({Rect::from_size({2, 5}, 1.2, 0.3, 0), 0.9});
  for (const char* id : {"bed_double", "nightstand", "nightstand", "wardrobe", "desk", "desk_chair",
                         "desk_lamp", "painting", "plant"}) {
    s.objects.push_back(unplaced(id));
  }
  return s;
}

Scene living_dining_request() {
  Scene s;
  s.id = "living_dining";
  s.room = rectangle_room(8, 6);
  s.room.doors.push_back({Rect::from_size({0, 1.0}, 0.1, 0.9, 0), 0.9});
  s.room.windows.push_back({Rect::from_size({2.5, 6}, 1.5, 0.3, 0), 0.8});
  s.room.windows.push_back({Rect::from_size({8, 3}, 0.3, 1.5, 0), 0.8});
  for (const char* id : {"coffee_table", "sofa", "armchair", "armchair", "tv_stand", "tv", "rug",
                         "dining_table", "dining_chair", "dining_chair", "dining_chair",
                         "dining_chair", "bookshelf", "plant", "cabinet"}) {
    s.objects.push_back(unplaced(id));
  }
  return s;
}

Scene crowded_request() {
  Scene s;
  s.id = "crowded";
  s.room = rectangle_room(3, 3.2);
  s.room.doors.push_back({Rect::from_size({0.6, 0}, 0.8, 0.1, 0), 0.8});
  for (const char* id : {"bed_double", "nightstand", "nightstand", "wardrobe", "desk", "desk_chair",
                         "bookshelf", "cabinet", "plant"}) {
    s.objects.push_back(unplaced(id));
  }
  return s;
}

}  // namespace layoutforge::synthetic
