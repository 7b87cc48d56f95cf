#include "heis/group.hpp"

#include <cmath>
#include <string>

#include "heis/error.hpp"

namespace heis {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Point::Point(double x11_, double x12_, double t_) : x11(x11_), x12(x12_), t(t_) {
  if (!std::isfinite(x11_) || !std::isfinite(x12_) || !std::isfinite(t_)) {
    fail(ErrorKind::InvalidArgument, "Point coordinates must be finite");
  }
}

Point mul(const Point& x, const Point& y) {
  return Point(x.x11 + y.x11, x.x12 + y.x12,
               x.t + y.t + omega(x.horizontal(), y.horizontal()));
}

Point inv(const Point& x) { return Point(-x.x11, -x.x12, -x.t); }

Point dilate(double r, const Point& x) {
  if (!(r > 0.0)) {
    fail(ErrorKind::InvalidArgument,
         "dilation factor must be positive, got " + std::to_string(r));
  }
  return Point(r * x.x11, r * x.x12, r * r * x.t);
}

double hnorm(const Point& x) {
  return std::max(std::hypot(x.x11, x.x12), std::sqrt(std::abs(x.t)));
}

double dist(const Point& x, const Point& y) { return hnorm(mul(inv(x), y)); }

// ---------------------------------------------------------------------------

Frame::Frame(Vec2 b1, Vec2 b2)
    : b1_(b1), b2_(b2), det_(b1.x * b2.y - b1.y * b2.x) {}

Frame Frame::from_direction(Vec2 b1) {
  const double n = norm(b1);
  if (!(n > 0.0) || !std::isfinite(n)) {
    fail(ErrorKind::InvalidArgument, "frame direction must be a nonzero vector");
  }
  if (std::abs(n - 1.0) > 1e-12) {
    fail(ErrorKind::InvalidArgument, "frame direction b1 must be a unit vector");
  }
  return Frame(b1, Vec2{-b1.y, b1.x});
}

Frame Frame::from_basis(Vec2 b1, Vec2 b2) {
  if (std::abs(norm(b1) - 1.0) > 1e-12 || std::abs(norm(b2) - 1.0) > 1e-12) {
    fail(ErrorKind::InvalidArgument, "frame vectors must be unit vectors");
  }
  Frame f(b1, b2);
  if (std::abs(f.det_) < 1e-12) {
    fail(ErrorKind::InvalidArgument, "frame vectors must be linearly independent");
  }
  return f;
}

double Frame::c(int row, int col) const {
  const Vec2 r = row == 0 ? b1_ : b2_;
  return col == 0 ? r.x : r.y;
}

Vec2 Frame::decompose(Vec2 v) const {
  // Solve v = a b1 + c b2 by Cramer's rule.
  return {cross(v, b2_) / det_, cross(b1_, v) / det_};
}

Point project_H(const Point& x, const Frame& frame) {
  const double a = frame.decompose(x.horizontal()).x;
  return along_b1(a, frame);
}

Point project_N(const Point& x, const Frame& frame) {
  const Point xh = project_H(x, frame);
  const Vec2 rest = x.horizontal() - xh.horizontal();
  return Point(rest.x, rest.y,
               x.t - omega(x.horizontal(), xh.horizontal()));
}

Point embed_N(VerticalCoords v, const Frame& frame) {
  const Vec2 h = v.eta * frame.b2();
  return Point(h.x, h.y, v.tau);
}

VerticalCoords coords_N(const Point& n, const Frame& frame, double tolerance) {
  const Vec2 ac = frame.decompose(n.horizontal());
  if (std::abs(ac.x) > tolerance) {
    fail(ErrorKind::NotInSubgroup,
         "point has b1-coefficient " + std::to_string(ac.x) +
             " and does not lie in the vertical subgroup");
  }
  return {ac.y, n.t};
}

double horizontal_derivative(const PointFunction& f, const Point& x, Vec2 dir,
                             double h) {
  if (!(h > 0.0)) {
    fail(ErrorKind::InvalidArgument, "difference step must be positive");
  }
  const double fp = f(mul(x, Point::horizontal(h * dir)));
  const double fm = f(mul(x, Point::horizontal(-h * dir)));
  return (fp - fm) / (2.0 * h);
}

}  // namespace heis
