#pragma once

// Intrinsic graph of a level set over the vertical subgroup.
//
// For n in N the graph coordinate φ̂2(n) is the unique s with
//   f2(n · (s b1)) = level,
// found by bracketing and bisection. Uniqueness rests on
// d/ds f2(n · (s b1)) = Y1 f2 having a fixed sign, which the patch checks on
// samples at construction and on every solve.

#include "heis/group.hpp"
#include "heis/surface.hpp"

namespace heis {

struct GraphOptions {
  double half_window_eta = 0.5;
  double half_window_tau = 0.5;
  /// Half width of the admissible range for the graph coordinate, centered
  /// at the base point's graph coordinate.
  double bracket_half_width = 2.0;
  /// Lower bound required for |Y1 f2| wherever it is sampled.
  double margin = 1e-3;
  /// Samples per axis for the construction-time margin check.
  int margin_grid = 9;
  /// Bisection stops once the bracket is shorter than this.
  double root_tolerance = 1e-12;
};

class GraphPatch {
 public:
  /// Patch through x0 with level f2(x0); the window is centered at the N
  /// coordinates of π_N(x0).
  static GraphPatch around(const Frame& frame, SurfaceHandle f2, const Point& x0,
                           const GraphOptions& options = {});

  /// Patch with explicit base, window and bracket.
  static GraphPatch create(const Frame& frame, SurfaceHandle f2, VerticalCoords base_n,
                           Rect window, Interval bracket, double level,
                           const GraphOptions& options = {});

  const Frame& frame() const { return frame_; }
  const SurfaceHandle& f2() const { return f2_; }
  VerticalCoords base_n() const { return base_n_; }
  double base_graph_coordinate() const { return base_s_; }
  const Rect& window() const { return window_; }
  Interval bracket() const { return bracket_; }
  double level() const { return level_; }
  const GraphOptions& options() const { return options_; }
  /// +1 or -1: the sign of Y1 f2 on the patch.
  int orientation() const { return orientation_; }

  /// Point n · (s b1).
  Point lift(VerticalCoords n, double s) const;
  /// f2(n · (s b1)) - level.
  double residual(VerticalCoords n, double s) const;

 private:
  GraphPatch(const Frame& frame, SurfaceHandle f2, VerticalCoords base_n, Rect window,
             Interval bracket, double level, const GraphOptions& options);
  void check_margin_on_window() const;

  Frame frame_;
  SurfaceHandle f2_;
  VerticalCoords base_n_;
  Rect window_;
  Interval bracket_;
  double level_;
  GraphOptions options_;
  double base_s_ = 0.0;
  int orientation_ = 1;

  friend double solve_graph_scalar(const GraphPatch&, VerticalCoords);
  double solve_from(VerticalCoords n, double start) const;
};

/// φ̂2(n). Throws NoSignChange or MarginViolated.
double solve_graph_scalar(const GraphPatch& patch, VerticalCoords n);

/// Φ2(n) = n · (φ̂2(n) b1).
Point graph_map(const GraphPatch& patch, VerticalCoords n);

}  // namespace heis
