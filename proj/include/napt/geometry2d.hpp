#pragma once

// Exact planar convex geometry: hulls, half-plane clipping, areas.

#include <algorithm>
#include <compare>
#include <vector>

#include "napt/rational.hpp"

namespace napt::geom {

struct Point2 {
  Rational x;
  Rational y;
  friend bool operator==(const Point2&, const Point2&) = default;
  friend std::strong_ordering operator<=>(const Point2&, const Point2&) = default;
};

inline Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(const Rational& c, const Point2& a) { return {c * a.x, c * a.y}; }
inline Rational dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline Rational cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline Rational cross(const Point2& o, const Point2& a, const Point2& b) { return cross(a - o, b - o); }

/// Convex polygon, counter-clockwise, no repeated or collinear vertices.
/// Degenerate sets (a point, a segment) have one or two vertices.
using Polygon = std::vector<Point2>;

/// Andrew's monotone chain; drops collinear points.
inline Polygon convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  Polygon hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p).sign() <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]).sign() <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline Rational area(const Polygon& poly) {
  if (poly.size() < 3) return Rational(0);
  Rational twice;
  for (std::size_t i = 0; i < poly.size(); ++i) twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  return twice / Rational(2);
}

/// Integral over the polygon of the affine function p -> dot(g, p) + c.
inline Rational integrate_affine(const Polygon& poly, const Point2& g, const Rational& c) {
  if (poly.size() < 3) return Rational(0);
  Rational total;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    Rational a = cross(poly[0], poly[i], poly[i + 1]) / Rational(2);
    Point2 centroid = Rational(1, 3) * (poly[0] + poly[i] + poly[i + 1]);
    total += a * (dot(g, centroid) + c);
  }
  return total;
}

/// Part of a convex polygon where dot(normal, p) <= bound.
inline Polygon clip(const Polygon& poly, const Point2& normal, const Rational& bound) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& cur = poly[i];
    const Point2& next = poly[(i + 1) % n];
    Rational sc = dot(normal, cur) - bound;
    Rational sn = dot(normal, next) - bound;
    if (sc.sign() <= 0) out.push_back(cur);
    if (n > 1 && sc.sign() * sn.sign() < 0) {
      Rational t = sc / (sc - sn);
      out.push_back(cur + t * (next - cur));
    }
  }
  // Remove consecutive duplicates that appear when a vertex lies on the line.
  Polygon dedup;
  for (const auto& p : out)
    if (dedup.empty() || !(dedup.back() == p)) dedup.push_back(p);
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  return dedup;
}

inline Polygon minkowski_sum(const Polygon& a, const Polygon& b) {
  std::vector<Point2> pts;
  for (const auto& p : a)
    for (const auto& q : b) pts.push_back(p + q);
  return convex_hull(std::move(pts));
}

inline Polygon square(const Rational& half) {
  return {{-half, -half}, {half, -half}, {half, half}, {-half, half}};
}

}  // namespace napt::geom
