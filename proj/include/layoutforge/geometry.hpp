#pragma once

// Planar geometry on the floor plane. Points are (x, z) pairs stored as Eigen
// 2-vectors; everything is templated on the scalar type and the double
// instantiation is aliased at the bottom of the file.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace layoutforge {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

template <typename Scalar>
using Polygon = std::vector<Vec2<Scalar>>;

/// Counter-clockwise rotation of (x, z) by `angle` radians.
template <typename Scalar>
Mat2<Scalar> rotation(Scalar angle) {
  return Eigen::Rotation2D<Scalar>(angle).toRotationMatrix();
}

template <typename Scalar>
Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Rectangle with arbitrary orientation. `half_extents` are measured along the
/// rectangle's local x and z axes before rotation by `angle`.
template <typename Scalar>
struct OrientedRect {
  Vec2<Scalar> center = Vec2<Scalar>::Zero();
  Vec2<Scalar> half_extents = Vec2<Scalar>::Zero();
  Scalar angle = 0;

  static OrientedRect from_size(const Vec2<Scalar>& center, Scalar width,
                                Scalar depth, Scalar angle) {
    return {center, Vec2<Scalar>(width / 2, depth / 2), angle};
  }

  Scalar width() const { return 2 * half_extents.x(); }
  Scalar depth() const { return 2 * half_extents.y(); }
  Scalar area() const { return 4 * half_extents.x() * half_extents.y(); }

  /// Local x axis (column 0) and local z axis (column 1) in world coordinates.
  Mat2<Scalar> axes() const { return rotation(angle); }

  /// Corners in counter-clockwise order starting at local (-w/2, -d/2).
  std::array<Vec2<Scalar>, 4> corners() const {
    const Mat2<Scalar> r = axes();
    const Scalar hx = half_extents.x();
    const Scalar hz = half_extents.y();
    return {center + r * Vec2<Scalar>(-hx, -hz), center + r * Vec2<Scalar>(hx, -hz),
            center + r * Vec2<Scalar>(hx, hz), center + r * Vec2<Scalar>(-hx, hz)};
  }

  /// Same rectangle with every side pulled inward by `margin` (clamped at 0).
  OrientedRect shrunk(Scalar margin) const {
    OrientedRect out = *this;
    out.half_extents = (half_extents.array() - margin).max(Scalar(0)).matrix();
    return out;
  }

  /// World point expressed in the rectangle's local frame.
  Vec2<Scalar> to_local(const Vec2<Scalar>& p) const {
    return axes().transpose() * (p - center);
  }

  bool contains(const Vec2<Scalar>& p, Scalar tol = 0) const {
    const Vec2<Scalar> q = to_local(p);
    return std::abs(q.x()) <= half_extents.x() + tol &&
           std::abs(q.y()) <= half_extents.y() + tol;
  }
};

/// Shoelace area; positive for counter-clockwise vertex order.
template <typename Scalar>
Scalar signed_area(const Polygon<Scalar>& poly) {
  Scalar sum = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    sum += cross(poly[i], poly[(i + 1) % n]);
  }
  return sum / 2;
}

template <typename Scalar>
Polygon<Scalar> as_polygon(const OrientedRect<Scalar>& rect) {
  const auto c = rect.corners();
  return Polygon<Scalar>(c.begin(), c.end());
}

template <typename Scalar>
int orientation_sign(const Vec2<Scalar>& a, const Vec2<Scalar>& b,
                     const Vec2<Scalar>& c, Scalar eps) {
  const Scalar v = cross<Scalar>(b - a, c - a);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

template <typename Scalar>
bool on_segment(const Vec2<Scalar>& a, const Vec2<Scalar>& b,
                const Vec2<Scalar>& p, Scalar eps) {
  return std::min(a.x(), b.x()) - eps <= p.x() && p.x() <= std::max(a.x(), b.x()) + eps &&
         std::min(a.y(), b.y()) - eps <= p.y() && p.y() <= std::max(a.y(), b.y()) + eps;
}

/// Closed-segment intersection test (touching counts).
template <typename Scalar>
bool segments_intersect(const Vec2<Scalar>& p1, const Vec2<Scalar>& p2,
                        const Vec2<Scalar>& q1, const Vec2<Scalar>& q2,
                        Scalar eps = Scalar(1e-12)) {
  const int o1 = orientation_sign(p1, p2, q1, eps);
  const int o2 = orientation_sign(p1, p2, q2, eps);
  const int o3 = orientation_sign(q1, q2, p1, eps);
  const int o4 = orientation_sign(q1, q2, p2, eps);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1, eps)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2, eps)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1, eps)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2, eps)) return true;
  return false;
}

/// A polygon is simple when no two non-adjacent edges touch.
template <typename Scalar>
bool is_simple(const Polygon<Scalar>& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a1 = poly[i];
    const auto& a2 = poly[(i + 1) % n];
    if ((a2 - a1).norm() == 0) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(a1, a2, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

template <typename Scalar>
Scalar point_segment_distance(const Vec2<Scalar>& p, const Vec2<Scalar>& a,
                              const Vec2<Scalar>& b) {
  const Vec2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 == 0) return (p - a).norm();
  const Scalar t = std::clamp<Scalar>((p - a).dot(ab) / len2, 0, 1);
  return (p - (a + t * ab)).norm();
}

/// Even-odd point-in-polygon. Points within `boundary_tol` of an edge count as
/// inside.
template <typename Scalar>
bool point_in_polygon(const Polygon<Scalar>& poly, const Vec2<Scalar>& p,
                      Scalar boundary_tol = Scalar(1e-12)) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if (point_segment_distance(p, a, b) <= boundary_tol) return true;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const Scalar x_at = (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (p.x() < x_at) inside = !inside;
    }
  }
  return inside;
}

/// Sutherland-Hodgman clip of `subject` against the convex counter-clockwise
/// polygon `clip`.
template <typename Scalar>
Polygon<Scalar> clip_convex(const Polygon<Scalar>& subject, const Polygon<Scalar>& clip) {
  Polygon<Scalar> output = subject;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !output.empty(); ++e) {
    const Vec2<Scalar>& c1 = clip[e];
    const Vec2<Scalar>& c2 = clip[(e + 1) % m];
    const Vec2<Scalar> edge = c2 - c1;
    auto side = [&](const Vec2<Scalar>& p) { return cross<Scalar>(edge, p - c1); };
    Polygon<Scalar> input;
    input.swap(output);
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2<Scalar>& cur = input[i];
      const Vec2<Scalar>& prev = input[(i + n - 1) % n];
      const Scalar s_cur = side(cur);
      const Scalar s_prev = side(prev);
      if (s_cur >= 0) {
        if (s_prev < 0) output.push_back(prev + (cur - prev) * (s_prev / (s_prev - s_cur)));
        output.push_back(cur);
      } else if (s_prev >= 0) {
        output.push_back(prev + (cur - prev) * (s_prev / (s_prev - s_cur)));
      }
    }
  }
  return output;
}

/// Area of the intersection of two oriented rectangles.
template <typename Scalar>
Scalar intersection_area(const OrientedRect<Scalar>& a, const OrientedRect<Scalar>& b) {
  // Cheap reject on circumscribed circles.
  const Scalar reach = a.half_extents.norm() + b.half_extents.norm();
  if ((a.center - b.center).squaredNorm() > reach * reach) return 0;
  if (a.area() <= 0 || b.area() <= 0) return 0;
  const Polygon<Scalar> clipped = clip_convex(as_polygon(a), as_polygon(b));
  if (clipped.size() < 3) return 0;
  return std::max<Scalar>(0, signed_area(clipped));
}

/// Overlap test used by every collision check: two footprints collide when
/// their shared area reaches `eps` (absorbs rotation jitter).
template <typename Scalar>
bool overlaps(const OrientedRect<Scalar>& a, const OrientedRect<Scalar>& b,
              Scalar eps = Scalar(1e-6)) {
  return intersection_area(a, b) >= eps;
}

/// True when the segment [p, q] touches the closed rectangle.
template <typename Scalar>
bool segment_touches_rect(const Vec2<Scalar>& p, const Vec2<Scalar>& q,
                          const OrientedRect<Scalar>& rect) {
  // Liang-Barsky in the rectangle's frame.
  const Vec2<Scalar> a = rect.to_local(p);
  const Vec2<Scalar> d = rect.to_local(q) - a;
  Scalar t0 = 0;
  Scalar t1 = 1;
  for (int axis = 0; axis < 2; ++axis) {
    const Scalar h = rect.half_extents[axis];
    const Scalar start = a[axis];
    const Scalar dir = d[axis];
    if (dir == 0) {
      if (start < -h || start > h) return false;
      continue;
    }
    Scalar ta = (-h - start) / dir;
    Scalar tb = (h - start) / dir;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

/// Whether `rect` lies inside the simple polygon `poly`. The rectangle is
/// first shrunk by `tolerance` on every side so that pieces flush with a wall
/// are not rejected by rounding.
template <typename Scalar>
bool polygon_contains(const Polygon<Scalar>& poly, const OrientedRect<Scalar>& rect,
                      Scalar tolerance = 0) {
  const OrientedRect<Scalar> inner = rect.shrunk(tolerance);
  for (const auto& c : inner.corners()) {
    if (!point_in_polygon(poly, c, Scalar(0))) return false;
  }
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (segment_touches_rect(poly[i], poly[(i + 1) % n], inner)) return false;
  }
  return true;
}

/// Whether the rectangle touches the polygon's boundary.
template <typename Scalar>
bool touches_boundary(const Polygon<Scalar>& poly, const OrientedRect<Scalar>& rect) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (segment_touches_rect(poly[i], poly[(i + 1) % n], rect)) return true;
  }
  return false;
}

template <typename Scalar>
struct Bounds2 {
  Vec2<Scalar> min;
  Vec2<Scalar> max;

  Vec2<Scalar> center() const { return (min + max) / 2; }
  Vec2<Scalar> size() const { return max - min; }
};

template <typename Scalar, typename Range>
Bounds2<Scalar> bounds_of(const Range& points) {
  Bounds2<Scalar> b{Vec2<Scalar>::Constant(std::numeric_limits<Scalar>::infinity()),
                    Vec2<Scalar>::Constant(-std::numeric_limits<Scalar>::infinity())};
  for (const auto& p : points) {
    b.min = b.min.cwiseMin(p);
    b.max = b.max.cwiseMax(p);
  }
  return b;
}

/// Unit normal pointing to the left of the directed edge a -> b, i.e. into the
/// interior of a counter-clockwise polygon.
template <typename Scalar>
Vec2<Scalar> inward_normal(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  const Vec2<Scalar> d = (b - a).normalized();
  return Vec2<Scalar>(-d.y(), d.x());
}

using Vec2d = Vec2<double>;
using Mat2d = Mat2<double>;
using Polygon2d = Polygon<double>;
using Rect = OrientedRect<double>;

}  // namespace layoutforge
