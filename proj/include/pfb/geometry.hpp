#pragma once

#include <array>
#include <cmath>

namespace pfb {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

using Vec2 = Point;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Rotation by -90 degrees: (x, y) -> (y, -x).
constexpr Vec2 rotate_cw(Vec2 a) { return {a.y, -a.x}; }

struct Rectangle {
  Point lower;
  Point upper;
  double width() const { return upper.x - lower.x; }
  double height() const { return upper.y - lower.y; }
  double area() const { return width() * height(); }
};

/// Quadrature point in barycentric coordinates with a weight normalized to sum 1.
struct BaryPoint {
  std::array<double, 3> lambda;
  double weight;
};

/// Edge-midpoint rule; exact for polynomials of degree 2.
inline constexpr std::array<BaryPoint, 3> kMidpointRule{{
    {{0.0, 0.5, 0.5}, 1.0 / 3.0},
    {{0.5, 0.0, 0.5}, 1.0 / 3.0},
    {{0.5, 0.5, 0.0}, 1.0 / 3.0},
}};

/// Seven-point Dunavant rule, exact for degree 5. Used for error norms and smooth sources.
inline const std::array<BaryPoint, 7>& dunavant7() {
  static const std::array<BaryPoint, 7> rule = [] {
    const double s = std::sqrt(15.0);
    const double b1 = (6.0 + s) / 21.0, a1 = 1.0 - 2.0 * b1;
    const double b2 = (6.0 - s) / 21.0, a2 = 1.0 - 2.0 * b2;
    const double w0 = 0.225, w1 = (155.0 + s) / 1200.0, w2 = (155.0 - s) / 1200.0;
    return std::array<BaryPoint, 7>{{
        {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, w0},
        {{a1, b1, b1}, w1},
        {{b1, a1, b1}, w1},
        {{b1, b1, a1}, w1},
        {{a2, b2, b2}, w2},
        {{b2, a2, b2}, w2},
        {{b2, b2, a2}, w2},
    }};
  }();
  return rule;
}

/// Two-point Gauss rule on [0, 1]: abscissae and weights summing to 1.
inline constexpr std::array<double, 2> kGauss2Abscissa{0.21132486540518711775, 0.78867513459481288225};
inline constexpr std::array<double, 2> kGauss2Weight{0.5, 0.5};

inline Point interpolate(const std::array<Point, 3>& p, const std::array<double, 3>& lambda) {
  return {lambda[0] * p[0].x + lambda[1] * p[1].x + lambda[2] * p[2].x,
          lambda[0] * p[0].y + lambda[1] * p[1].y + lambda[2] * p[2].y};
}

}  // namespace pfb
