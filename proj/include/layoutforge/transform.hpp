#pragma once

#include "layoutforge/geometry.hpp"

#include <cmath>
#include <numbers>

namespace layoutforge {

/// Maps any finite angle into [-pi, pi).
template <typename Scalar>
Scalar normalize_angle(Scalar theta) {
  constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
  constexpr Scalar kTwoPi = 2 * kPi;
  Scalar r = std::fmod(theta + kPi, kTwoPi);
  if (r < 0) r += kTwoPi;
  // fmod can round up to exactly 2*pi for inputs just below a multiple of it.
  if (r >= kTwoPi) r -= kTwoPi;
  Scalar out = r - kPi;
  if (out >= kPi) out = -kPi;
  return out;
}

/// Pose on the floor plan: translation (x, y, z) with y the elevation, plus a
/// rotation `theta` about the vertical axis. The rotation acts on (x, z) as a
/// counter-clockwise 2D rotation, so local +z (the "front") maps to
/// (-sin theta, cos theta).
template <typename Scalar>
struct BasicTransform {
  Scalar x = 0;
  Scalar y = 0;
  Scalar z = 0;
  Scalar theta = 0;

  static BasicTransform identity() { return {}; }

  Vec2<Scalar> plan() const { return Vec2<Scalar>(x, z); }

  Vec2<Scalar> front() const { return Vec2<Scalar>(-std::sin(theta), std::cos(theta)); }

  /// Applies this pose to a point given in the local frame.
  Vec2<Scalar> apply(const Vec2<Scalar>& local) const {
    return plan() + rotation(theta) * local;
  }

  bool operator==(const BasicTransform&) const = default;
};

/// Pose whose local +z axis points along `direction` (need not be unit).
template <typename Scalar>
Scalar facing_angle(const Vec2<Scalar>& direction) {
  return normalize_angle(std::atan2(-direction.x(), direction.y()));
}

/// parent * local: expresses a pose given in `parent`'s frame in the frame
/// `parent` itself lives in.
template <typename Scalar>
BasicTransform<Scalar> compose(const BasicTransform<Scalar>& parent,
                               const BasicTransform<Scalar>& local) {
  const Vec2<Scalar> p = parent.apply(local.plan());
  return {p.x(), parent.y + local.y, p.y(), normalize_angle(parent.theta + local.theta)};
}

template <typename Scalar>
BasicTransform<Scalar> inverse(const BasicTransform<Scalar>& t) {
  const Vec2<Scalar> p = rotation(-t.theta) * (-t.plan());
  return {p.x(), -t.y, p.y(), normalize_angle(-t.theta)};
}

/// Pose of `secondary` expressed in the local frame of `dominant`.
template <typename Scalar>
BasicTransform<Scalar> relative_pose(const BasicTransform<Scalar>& dominant,
                                     const BasicTransform<Scalar>& secondary) {
  const Vec2<Scalar> offset = rotation(-dominant.theta) * (secondary.plan() - dominant.plan());
  return {offset.x(), secondary.y - dominant.y, offset.y(),
          normalize_angle(secondary.theta - dominant.theta)};
}

using Transform = BasicTransform<double>;

}  // namespace layoutforge
