#pragma once

// Intersection curve of two level sets {f1 = 0} ∩ {f2 = 0} through a common
// zero p with independent horizontal gradients.
//
// The problem is translated so that p is the origin, {f2 = 0} is written as
// an intrinsic graph Φ2 over the vertical subgroup, and the zero set of
// F = f1∘Φ2 is traced along the characteristics of φ̂2. The curve is lifted
// back by Γ = p·Φ2(ζ).

#include <cstdint>
#include <utility>
#include <vector>

#include "heis/characteristics.hpp"
#include "heis/flow.hpp"
#include "heis/graph.hpp"
#include "heis/surface.hpp"

namespace heis {

struct IntersectionOptions {
  GraphOptions graph{};
  TraceOptions trace{};
  /// |f1(p)|, |f2(p)| must not exceed this.
  double zero_tolerance = 1e-10;
  /// |∇H f1 × ∇H f2| ≥ margin · |∇H f1| |∇H f2| at p.
  double independence_margin = 1e-6;
};

struct IntersectionProblem {
  SurfaceHandle f1;
  SurfaceHandle f2;
  Point p;
  IntersectionOptions options{};

  /// Throws InvalidArgument, VanishingGradient or DependentNormals.
  void validate() const;
};

/// b1 along ∇H f2(p), so that Y1 f2(p) = |∇H f2(p)|.
Frame choose_frame(const SurfaceHandle& f2, const Point& p);

struct Curve {
  /// Normalized cumulative homogeneous distance along the samples.
  std::vector<double> params;
  std::vector<Point> points;
  /// ζ in the vertical plane of the translated problem.
  std::vector<VerticalCoords> planar;
  /// Family mean that produced each sample.
  std::vector<double> xi;

  Point base;
  Vec2 b1;
  double max_residual_f1 = 0.0;
  double max_residual_f2 = 0.0;
  /// Largest deviation of a sample from re-solving the graph at its own
  /// vertical projection.
  double membership_error = 0.0;
  TraceResult trace;
};

/// Throws DependentNormals, MarginViolated, MonotonicityViolated and the
/// other errors of the graph and trace stages.
Curve intersect_surfaces(const IntersectionProblem& problem);

/// Smallest distance in the homogeneous metric between consecutive samples.
double min_consecutive_distance(const std::vector<Point>& points);

// ---------------------------------------------------------------------------
// Oracles and metrics

struct Box3 {
  Point lo;
  Point hi;

  static Box3 cube(double half) { return {Point(-half, -half, -half), Point(half, half, half)}; }
  bool contains(const Point& x, double slack = 0.0) const;
};

/// Grid points of the box with |f1| + |f2| < eps. A nonpositive eps is
/// replaced by 2 · spacing · max(|∇f1| + |∇f2|), Euclidean gradients sampled
/// on a coarse grid.
std::vector<Point> brute_force_zero_cloud(const SurfaceHandle& f1, const SurfaceHandle& f2,
                                          const Box3& box, int grid_n, double eps = 0.0);

/// The eps used by brute_force_zero_cloud when none is given.
double auto_cloud_eps(const SurfaceHandle& f1, const SurfaceHandle& f2, const Box3& box,
                      int grid_n);

double directed_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b);
/// Symmetric Hausdorff distance in the homogeneous metric. Throws on empty
/// input.
double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b);

/// Distance from x to the coordinate segment [a, b], computed in closed form.
double segment_distance(const Point& x, const Point& a, const Point& b);
double polyline_distance(const Point& x, const std::vector<Point>& polyline);
/// max over points of the distance to the polyline.
double directed_polyline_hausdorff(const std::vector<Point>& points,
                                   const std::vector<Point>& polyline);
/// Symmetric distance between two polylines, sampling every segment of each
/// at `subdivisions` + 1 points.
double polyline_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b,
                          int subdivisions = 16);

// ---------------------------------------------------------------------------
// Cones

struct ConeParams {
  double alpha = 1.0;
  double r = 1.0;
  double lambda = 0.0;
};

/// z = vertex⁻¹·y lies in the cone: sqrt|z_t| ≤ α |z1| ≤ α r.
bool cone_contains(const Point& vertex, const Point& y, const ConeParams& cp);

/// Ordered index pairs (i, j), i ≠ j, with samples[j] in the cone at
/// samples[i].
std::vector<std::pair<std::size_t, std::size_t>> cone_property_check(
    const std::vector<Point>& samples, const ConeParams& cp);

/// min over the grid of |∇H f|.
double gradient_margin(const SurfaceHandle& f, const Box3& box, int grid_n);
/// min over the grid of the smaller singular value of rows (∇H f1, ∇H f2).
double gradient_margin(const SurfaceHandle& f1, const SurfaceHandle& f2, const Box3& box,
                       int grid_n);

/// Sampled differentiability modulus of (f1, f2) on the homogeneous ball
/// D(p, delta): pairs (x, x·z) with d ≤ t_max and their ratios
/// |f(x·z) - f(x) - ∇H f(x) z1| / ‖z‖.
struct ModulusSamples {
  std::vector<double> distance;
  std::vector<double> ratio;

  /// max ratio over pairs with distance ≤ t.
  double at(double t) const;
};

ModulusSamples sample_modulus(const SurfaceHandle& f1, const SurfaceHandle& f2, const Point& p,
                              double delta, double t_max, int grid_n, int per_point,
                              std::uint64_t seed);

struct ConeDerivation {
  ConeParams params;
  double t_eps = 0.0;
  double modulus = 0.0;
};

/// λ from the ball D(p, delta), then the largest dyadic t_ε < delta/4 with
/// ω(t_ε) < λ/(α+1), and r = t_ε / max(1, α).
ConeDerivation derive_cone(const SurfaceHandle& f1, const SurfaceHandle& f2, const Point& p,
                           double alpha, double delta, std::uint64_t seed = 1);

/// Empirical continuity of Γ: the largest homogeneous increment between
/// consecutive samples and the parameter increment where it occurs.
struct CurveModulus {
  double max_increment = 0.0;
  double param_increment = 0.0;
};
CurveModulus curve_modulus(const Curve& curve);

}  // namespace heis
