#pragma once

// Generated scenes with known ground truth: small furniture vignettes placed
// at random in a large room, with jitter and a fraction of misplaced
// secondaries, plus fixed layout requests used by the demos and tests.

#include "layoutforge/scene.hpp"
#include "layoutforge/random.hpp"

#include <string>
#include <vector>

namespace layoutforge::synthetic {

/// Every instance the demo corpus and requests use.
const Catalog& demo_catalog();
const ObjectInstance& instance(const std::string& id);

struct Slot {
  std::string instance_id;
  Transform pose;  // relative to the dominant
};

struct VignetteOptions {
  double jitter_m = 0.01;
  double jitter_rad = 0.01;
  /// Probability that a secondary is dropped at a uniform pose instead.
  double noise_fraction = 0.1;
  double noise_radius = 2.5;
  double room_half_size = 6.0;
};

/// `noisy` (when non-null) receives one flag per secondary, in slot order.
Scene vignette_scene(const std::string& id, const std::string& dominant_id,
                     const std::vector<Slot>& slots, const VignetteOptions& options, Rng& rng,
                     std::vector<bool>* noisy = nullptr);

/// Bedroom, desk, dining and living-room vignettes, `per_kind` scenes each.
std::vector<Scene> demo_corpus(std::size_t per_kind, std::uint64_t seed,
                               const VignetteOptions& options = {});

/// Layout requests (objects without transforms).
Scene bedroom_request();
Scene living_dining_request();
Scene crowded_request();

RoomEnvelope rectangle_room(double width, double depth);

}  // namespace layoutforge::synthetic
