#pragma once

// Algebra and metric of the first Heisenberg group.
//
// Points are stored as plain coordinates (x11, x12, t) with the
// product x·y = x + y + ω̄(x1, y1) e3, where ω̄(x1, y1) = x11 y12 - y11 x12.
// The left-invariant horizontal fields in these coordinates are
//   X1 = ∂/∂x11 - x12 ∂/∂t,   X2 = ∂/∂x12 + x11 ∂/∂t.

#include <functional>

namespace heis {

/// Horizontal 2-vector (components along e1, e2).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the planar cross product.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

struct Point {
  double x11 = 0.0;
  double x12 = 0.0;
  double t = 0.0;

  Point() = default;
  /// Throws InvalidArgument on NaN or infinite coordinates.
  Point(double x11_, double x12_, double t_);

  Vec2 horizontal() const { return {x11, x12}; }
  static Point horizontal(Vec2 v) { return Point(v.x, v.y, 0.0); }
};

/// Bilinear form ω̄(a, b) = a.x b.y - b.x a.y.
inline double omega(Vec2 a, Vec2 b) { return a.x * b.y - b.x * a.y; }

Point mul(const Point& x, const Point& y);
Point inv(const Point& x);
/// Intrinsic dilation δ_r; r must be positive.
Point dilate(double r, const Point& x);
/// Homogeneous norm max(|x1|, sqrt|t|).
double hnorm(const Point& x);
/// Left-invariant distance ‖x⁻¹·y‖.
double dist(const Point& x, const Point& y);

inline Point operator*(const Point& x, const Point& y) { return mul(x, y); }

/// Coordinates of a point of the vertical subgroup N = span{b2, e3}.
struct VerticalCoords {
  double eta = 0.0;
  double tau = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double v, double slack = 0.0) const {
    return v >= lo - slack && v <= hi + slack;
  }
};

/// Axis-aligned rectangle in a plane parametrized by (eta, tau).
struct Rect {
  double eta_min = -0.5;
  double eta_max = 0.5;
  double tau_min = -0.5;
  double tau_max = 0.5;

  bool contains(double eta, double tau, double slack = 0.0) const {
    return eta >= eta_min - slack && eta <= eta_max + slack &&
           tau >= tau_min - slack && tau <= tau_max + slack;
  }
  bool contains(VerticalCoords v, double slack = 0.0) const {
    return contains(v.eta, v.tau, slack);
  }
  static Rect centered(VerticalCoords c, double half_eta, double half_tau) {
    return {c.eta - half_eta, c.eta + half_eta, c.tau - half_tau,
            c.tau + half_tau};
  }
};

/// Horizontal direction b1, complementary horizontal b2 and C = rows(b1, b2).
///
/// The vertical subgroup is N = span{b2, e3}, the horizontal subgroup is
/// H = span{b1}.
class Frame {
 public:
  /// b2 is b1 rotated by +π/2, so det C = 1.
  static Frame from_direction(Vec2 b1);
  /// General frame; both vectors must be unit and linearly independent.
  static Frame from_basis(Vec2 b1, Vec2 b2);

  Vec2 b1() const { return b1_; }
  Vec2 b2() const { return b2_; }
  double det() const { return det_; }
  /// Entry C[row][col], zero based.
  double c(int row, int col) const;

  /// Coefficients (a, c) with v = a b1 + c b2.
  Vec2 decompose(Vec2 v) const;

 private:
  Frame(Vec2 b1, Vec2 b2);
  Vec2 b1_;
  Vec2 b2_;
  double det_;
};

inline Frame make_frame(Vec2 b1) { return Frame::from_direction(b1); }

/// π_H(x) = x_H, the b1-component of the horizontal part.
Point project_H(const Point& x, const Frame& frame);
/// π_N(x) = x - x_H - ω(x1, x_H); mul(project_N(x), project_H(x)) == x.
Point project_N(const Point& x, const Frame& frame);

Point embed_N(VerticalCoords v, const Frame& frame);
/// Inverse of embed_N. Throws NotInSubgroup if the b1-coefficient of n
/// exceeds `tolerance`.
VerticalCoords coords_N(const Point& n, const Frame& frame,
                        double tolerance = 1e-10);

/// Point s·b1 of the horizontal subgroup.
inline Point along_b1(double s, const Frame& frame) {
  return Point::horizontal(s * frame.b1());
}

using PointFunction = std::function<double(const Point&)>;

/// Central difference of s ↦ f(x·(s dir)) at s = 0.
double horizontal_derivative(const PointFunction& f, const Point& x, Vec2 dir,
                             double h);

}  // namespace heis
