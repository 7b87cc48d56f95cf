#pragma once

// Characteristics of the intrinsic graph function φ̂2 in the vertical plane
// and numerical checks of the first-order formulas built on them.
//
// Along a characteristic τ' = 2 det C · φ̂2(η, τ), the graph function
// ν(η) = φ̂2(η, τ(η)) satisfies ν' = -(Y2 f2 / Y1 f2)(Φ2(η, τ(η))).

#include <vector>

#include "heis/flow.hpp"
#include "heis/graph.hpp"
#include "heis/surface.hpp"

namespace heis {

class CharField {
 public:
  explicit CharField(GraphPatch patch);

  const GraphPatch& patch() const { return patch_; }
  /// Characteristic speed factor 2 det C.
  double beta() const { return beta_; }

  /// 2 det C · φ̂2(η, τ).
  double rhs(double eta, double tau) const;
  /// -(Y2 f2 / Y1 f2) at Φ2(η, τ).
  double source(double eta, double tau) const;
  PlanarField rhs_field() const;
  PlanarField source_field() const;

 private:
  GraphPatch patch_;
  double beta_;
};

/// Characteristic through (0, tau0) marched in `direction` (+1 or -1) and
/// clipped to the intersection of `window` with the patch window.
PathSample characteristic(const CharField& cf, double tau0, const Rect& window, double step,
                          int direction = +1);

/// max over cells of |Δν/Δη - source(midpoint)| with ν = φ̂2 along the path.
double dafermos_residual(const CharField& cf, const PathSample& path);

/// -det[[Y1 f1, Y2 f1], [Y1 f2, Y2 f2]] / Y1 f2 at Φ2(η, path(η)).
double chain_rule_rhs(const SurfaceHandle& f1, const CharField& cf, double eta,
                      const PathSample& path);

/// Same determinant formula at an arbitrary point of the graph.
double chain_rule_value(const SurfaceHandle& f1, const CharField& cf, const Point& x);

/// Per difference step: the largest absolute and scaled errors. Scaled
/// errors divide by max(1, |exact|).
struct DifferenceReport {
  std::vector<double> steps;
  std::vector<double> abs_error;
  std::vector<double> scaled_error;
  /// Orders between consecutive steps whose errors lie above `noise_floor`.
  std::vector<double> orders;
  double noise_floor = 1e-11;

  /// Smallest of `orders`, or NaN if none could be measured.
  double observed_order() const;
};

/// Centered differences of η ↦ f1(Φ2(η, γ(η))) compared to chain_rule_rhs at
/// `samples` interior grid points of the path. γ is the characteristic
/// through the sample point, lifted locally with RK4 so the difference step
/// is independent of the path grid.
DifferenceReport chain_rule_check(const SurfaceHandle& f1, const CharField& cf,
                                  const PathSample& path, const std::vector<double>& h_sweep,
                                  int samples = 9);

struct TaylorBasePoint {
  VerticalCoords n_bar;  // (η̄2, τ̄1)
  Point x_bar;
  double eta1_bar = 0.0;
  double tau_bar = 0.0;

  static TaylorBasePoint make(const CharField& cf, VerticalCoords n_bar);
};

struct TaylorSample {
  double remainder = 0.0;
  double scale = 0.0;
};

/// Remainder of the first-order expansion of f1∘Φ2 at the base point and the
/// homogeneous size max(|η - η̄2|, sqrt|τ'|) of the increment, where
/// τ' = τ - τ̄1 - 2 (η - η̄2) η̄1 det C.
TaylorSample taylor_remainder(const SurfaceHandle& f1, const CharField& cf,
                              const TaylorBasePoint& base, VerticalCoords n);

/// Largest remainder/scale over points of homogeneous size r around the base.
double taylor_ratio(const SurfaceHandle& f1, const CharField& cf, const TaylorBasePoint& base,
                    double r, int samples = 64);

/// Centered differences of s ↦ f1(Φ2(n̄ + s z̄)), z̄ = (1, 2 η̄1 det C) in
/// (η, τ) coordinates, against the determinant formula at x̄.
DifferenceReport directional_derivative_check(const SurfaceHandle& f1, const CharField& cf,
                                              const TaylorBasePoint& base,
                                              const std::vector<double>& h_sweep);

/// max over cells of d(Φ2(γ(η_{i+1})), Φ2(γ(η_i))) / step.
double lift_difference_quotient(const CharField& cf, const PathSample& path);

}  // namespace heis
