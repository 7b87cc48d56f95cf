#pragma once

#include <functional>
#include <memory>
#include <span>

#include "heis/group.hpp"
#include "heis/polynomial.hpp"

namespace heis {

using GradientFunction = std::function<Vec2(const Point&)>;

enum class GradientSource { PolynomialSymbolic, UserSupplied, FiniteDifference };

/// A defining function f of a surface {f = 0} together with its horizontal
/// gradient (X1 f, X2 f). Cheap to copy; the callables are shared.
class SurfaceHandle {
 public:
  /// f = p - level with exact symbolic gradient.
  static SurfaceHandle from_polynomial(const PolySurface& surface);
  static SurfaceHandle from_polynomial(const Polynomial& p, double level = 0.0) {
    return from_polynomial(PolySurface{p, level});
  }
  static SurfaceHandle from_functions(PointFunction f, GradientFunction grad);
  /// Gradient by central differences along the left-invariant fields.
  static SurfaceHandle from_function(PointFunction f, double h = 1e-6);

  double operator()(const Point& x) const { return eval_(x); }
  Vec2 grad_h(const Point& x) const { return grad_(x); }
  GradientSource source() const { return source_; }

  /// x ↦ f(p·x); horizontal gradients are left-invariant so they translate
  /// the same way.
  SurfaceHandle translated(const Point& p) const;

  /// Largest deviation between grad_h and finite differences of the
  /// function along e1, e2 on the given samples.
  double gradient_mismatch(std::span<const Point> samples, double h = 1e-5) const;

 private:
  SurfaceHandle(PointFunction f, GradientFunction g, GradientSource s)
      : eval_(std::move(f)), grad_(std::move(g)), source_(s) {}

  PointFunction eval_;
  GradientFunction grad_;
  GradientSource source_;
};

/// (Y1 f, Y2 f) = (<grad_h f, b1>, <grad_h f, b2>).
Vec2 y_derivatives(const SurfaceHandle& f, const Point& x, const Frame& frame);

}  // namespace heis
