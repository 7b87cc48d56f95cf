#include "heis/surface.hpp"

#include <algorithm>
#include <cmath>

#include "heis/error.hpp"

namespace heis {

SurfaceHandle SurfaceHandle::from_polynomial(const PolySurface& surface) {
  auto p = std::make_shared<const Polynomial>(surface.poly);
  auto [x1, x2] = horiz_grad_poly(surface.poly);
  auto g1 = std::make_shared<const Polynomial>(std::move(x1));
  auto g2 = std::make_shared<const Polynomial>(std::move(x2));
  const double level = surface.level;
  return SurfaceHandle(
      [p, level](const Point& x) { return (*p)(x) - level; },
      [g1, g2](const Point& x) { return Vec2{(*g1)(x), (*g2)(x)}; },
      GradientSource::PolynomialSymbolic);
}

SurfaceHandle SurfaceHandle::from_functions(PointFunction f, GradientFunction grad) {
  if (!f || !grad) {
    fail(ErrorKind::InvalidArgument, "surface handle needs both callables");
  }
  return SurfaceHandle(std::move(f), std::move(grad), GradientSource::UserSupplied);
}

SurfaceHandle SurfaceHandle::from_function(PointFunction f, double h) {
  if (!f) fail(ErrorKind::InvalidArgument, "surface handle needs a callable");
  if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "difference step must be positive");
  auto grad = [f, h](const Point& x) {
    return Vec2{horizontal_derivative(f, x, {1.0, 0.0}, h),
                horizontal_derivative(f, x, {0.0, 1.0}, h)};
  };
  return SurfaceHandle(f, std::move(grad), GradientSource::FiniteDifference);
}

SurfaceHandle SurfaceHandle::translated(const Point& p) const {
  auto f = eval_;
  auto g = grad_;
  return SurfaceHandle([f, p](const Point& x) { return f(mul(p, x)); },
                       [g, p](const Point& x) { return g(mul(p, x)); }, source_);
}

double SurfaceHandle::gradient_mismatch(std::span<const Point> samples, double h) const {
  double worst = 0.0;
  for (const Point& x : samples) {
    const Vec2 g = grad_(x);
    const double d1 = horizontal_derivative(eval_, x, {1.0, 0.0}, h);
    const double d2 = horizontal_derivative(eval_, x, {0.0, 1.0}, h);
    worst = std::max({worst, std::abs(g.x - d1), std::abs(g.y - d2)});
  }
  return worst;
}

Vec2 y_derivatives(const SurfaceHandle& f, const Point& x, const Frame& frame) {
  const Vec2 g = f.grad_h(x);
  return {dot(g, frame.b1()), dot(g, frame.b2())};
}

}  // namespace heis
