#include "heis/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "heis/error.hpp"

namespace heis {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double coord(const Point& x, int k) { return k == 0 ? x.x11 : (k == 1 ? x.x12 : x.t); }

}  // namespace

void IntersectionProblem::validate() const {
  const double v1 = f1(p), v2 = f2(p);
  if (std::abs(v1) > options.zero_tolerance || std::abs(v2) > options.zero_tolerance) {
    fail(ErrorKind::InvalidArgument, "base point is not a common zero: f1(p) = " + fmt(v1) +
                                         ", f2(p) = " + fmt(v2));
  }
  const Vec2 g1 = f1.grad_h(p), g2 = f2.grad_h(p);
  const double n1 = norm(g1), n2 = norm(g2);
  if (n1 < 1e-12 || n2 < 1e-12) {
    fail(ErrorKind::VanishingGradient,
         "a horizontal gradient vanishes at the base point, so the surface is not H-regular there");
  }
  if (std::abs(cross(g1, g2)) < options.independence_margin * n1 * n2) {
    fail(ErrorKind::DependentNormals,
         "horizontal normals at the base point are linearly dependent (|sin angle| = " +
             fmt(std::abs(cross(g1, g2)) / (n1 * n2)) +
             "); the surfaces need not meet in a curve without linear independence");
  }
}

Frame choose_frame(const SurfaceHandle& f2, const Point& p) {
  const Vec2 g = f2.grad_h(p);
  const double n = norm(g);
  if (!(n >= 1e-12)) {
    fail(ErrorKind::VanishingGradient, "horizontal gradient of f2 vanishes at the base point");
  }
  return make_frame({g.x / n, g.y / n});
}

double min_consecutive_distance(const std::vector<Point>& points) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) m = std::min(m, dist(points[i], points[i + 1]));
  return m;
}

Curve intersect_surfaces(const IntersectionProblem& problem) {
  problem.validate();
  const auto& opts = problem.options;
  const Frame frame = choose_frame(problem.f2, problem.p);
  const SurfaceHandle g1 = problem.f1.translated(problem.p);
  const SurfaceHandle g2 = problem.f2.translated(problem.p);
  const GraphPatch patch = GraphPatch::around(frame, g2, Point(), opts.graph);
  const CharField cf(patch);
  const PlanarFunction F = [&](double eta, double tau) {
    return g1(graph_map(patch, {eta, tau}));
  };

  TraceOptions topts = opts.trace;
  topts.origin_tolerance = std::max(topts.origin_tolerance, opts.zero_tolerance);
  Curve c;
  try {
    c.trace = level_trace(cf.rhs_field(), F, patch.window(), topts);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MonotonicityViolated) {
      fail(e.kind(), std::string(e.what()) +
                         "; f1 composed with the graph must be strictly monotone along "
                         "characteristics, which needs the chain-rule determinant to keep its "
                         "sign: shrink the window");
    }
    throw;
  }

  c.base = problem.p;
  c.b1 = frame.b1();
  c.xi = c.trace.xi;
  for (const PlanarPoint& z : c.trace.zeta) {
    const VerticalCoords n{z.eta, z.tau};
    const Point local = graph_map(patch, n);
    c.planar.push_back(n);
    c.points.push_back(mul(problem.p, local));
    c.max_residual_f1 = std::max(c.max_residual_f1, std::abs(g1(local)));
    c.max_residual_f2 = std::max(c.max_residual_f2, std::abs(g2(local)));
    const VerticalCoords back = coords_N(project_N(local, frame), frame, 1e-8);
    const Point again = graph_map(patch, back);
    c.membership_error = std::max(
        {c.membership_error, std::abs(again.x11 - local.x11), std::abs(again.x12 - local.x12),
         std::abs(again.t - local.t)});
  }
  c.params.assign(c.points.size(), 0.0);
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    c.params[i] = c.params[i - 1] + dist(c.points[i - 1], c.points[i]);
  }
  if (c.points.size() > 1 && c.params.back() > 0.0) {
    const double total = c.params.back();
    for (double& v : c.params) v /= total;
  }
  return c;
}

// ---------------------------------------------------------------------------

bool Box3::contains(const Point& x, double slack) const {
  for (int k = 0; k < 3; ++k) {
    if (coord(x, k) < coord(lo, k) - slack || coord(x, k) > coord(hi, k) + slack) return false;
  }
  return true;
}

namespace {

template <typename Fn>
void for_grid(const Box3& box, int n, Fn&& fn) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "grids need at least two points per axis");
  for (int i = 0; i < n; ++i) {
    const double a = box.lo.x11 + (box.hi.x11 - box.lo.x11) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double b = box.lo.x12 + (box.hi.x12 - box.lo.x12) * j / (n - 1);
      for (int k = 0; k < n; ++k) {
        fn(Point(a, b, box.lo.t + (box.hi.t - box.lo.t) * k / (n - 1)));
      }
    }
  }
}

double euclidean_gradient_norm(const SurfaceHandle& f, const Point& x, double h) {
  const double gx = (f(Point(x.x11 + h, x.x12, x.t)) - f(Point(x.x11 - h, x.x12, x.t))) / (2 * h);
  const double gy = (f(Point(x.x11, x.x12 + h, x.t)) - f(Point(x.x11, x.x12 - h, x.t))) / (2 * h);
  const double gt = (f(Point(x.x11, x.x12, x.t + h)) - f(Point(x.x11, x.x12, x.t - h))) / (2 * h);
  return std::sqrt(gx * gx + gy * gy + gt * gt);
}

}  // namespace

double auto_cloud_eps(const SurfaceHandle& f1, const SurfaceHandle& f2, const Box3& box,
                      int grid_n) {
  if (grid_n < 2) fail(ErrorKind::InvalidArgument, "grids need at least two points per axis");
  double spacing = 0.0;
  for (int k = 0; k < 3; ++k) spacing = std::max(spacing, (coord(box.hi, k) - coord(box.lo, k)) / (grid_n - 1));
  double g = 0.0;
  for_grid(box, 11, [&](const Point& x) {
    g = std::max(g, euclidean_gradient_norm(f1, x, 1e-6) + euclidean_gradient_norm(f2, x, 1e-6));
  });
  return 2.0 * spacing * g;
}

std::vector<Point> brute_force_zero_cloud(const SurfaceHandle& f1, const SurfaceHandle& f2,
                                          const Box3& box, int grid_n, double eps) {
  if (!(eps > 0.0)) eps = auto_cloud_eps(f1, f2, box, grid_n);
  std::vector<Point> out;
  for_grid(box, grid_n, [&](const Point& x) {
    if (std::abs(f1(x)) + std::abs(f2(x)) < eps) out.push_back(x);
  });
  return out;
}

double directed_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::InvalidArgument, "Hausdorff distance of an empty set");
  double worst = 0.0;
  for (const Point& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& y : b) {
      best = std::min(best, dist(x, y));
      if (best <= worst) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double segment_distance(const Point& x, const Point& a, const Point& b) {
  // z(u) = x⁻¹·(a + u(b - a)) has horizontal part h0 + u hd and vertical part
  // l0 + u ld. The minimum of max(|h|, sqrt|l|) sits at an endpoint, at the
  // minimizer of either term, or where the two terms cross.
  const Point z0 = mul(inv(x), a);
  const Point z1 = mul(inv(x), b);
  const Vec2 h0{z0.x11, z0.x12};
  const Vec2 hd{z1.x11 - z0.x11, z1.x12 - z0.x12};
  const double l0 = z0.t, ld = z1.t - z0.t;
  std::vector<double> cand{0.0, 1.0};
  const double hh = hd.x * hd.x + hd.y * hd.y;
  const double hl = h0.x * hd.x + h0.y * hd.y;
  if (hh > 0.0) cand.push_back(-hl / hh);
  if (ld != 0.0) cand.push_back(-l0 / ld);
  // |h|² = ±l: hh u² + (2 hl ∓ ld) u + |h0|² ∓ l0 = 0.
  for (double sg : {1.0, -1.0}) {
    const double qa = hh, qb = 2.0 * hl - sg * ld, qc = h0.x * h0.x + h0.y * h0.y - sg * l0;
    if (qa == 0.0) {
      if (qb != 0.0) cand.push_back(-qc / qb);
      continue;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) continue;
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    cand.push_back(q / qa);
    if (q != 0.0) cand.push_back(qc / q);
  }
  double best = std::numeric_limits<double>::infinity();
  for (double u : cand) {
    if (!std::isfinite(u)) continue;
    u = std::clamp(u, 0.0, 1.0);
    const double hx = h0.x + u * hd.x, hy = h0.y + u * hd.y;
    best = std::min(best, std::max(std::hypot(hx, hy), std::sqrt(std::abs(l0 + u * ld))));
  }
  return best;
}

double polyline_distance(const Point& x, const std::vector<Point>& polyline) {
  if (polyline.empty()) fail(ErrorKind::InvalidArgument, "empty polyline");
  if (polyline.size() == 1) return dist(x, polyline.front());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    best = std::min(best, segment_distance(x, polyline[i], polyline[i + 1]));
  }
  return best;
}

double directed_polyline_hausdorff(const std::vector<Point>& points,
                                   const std::vector<Point>& polyline) {
  if (points.empty()) fail(ErrorKind::InvalidArgument, "Hausdorff distance of an empty set");
  double worst = 0.0;
  for (const Point& x : points) worst = std::max(worst, polyline_distance(x, polyline));
  return worst;
}

namespace {

std::vector<Point> densify(const std::vector<Point>& poly, int subdivisions) {
  if (poly.size() < 2) return poly;
  std::vector<Point> out;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[i + 1];
    for (int k = 0; k < subdivisions; ++k) {
      const double u = static_cast<double>(k) / subdivisions;
      out.emplace_back(a.x11 + u * (b.x11 - a.x11), a.x12 + u * (b.x12 - a.x12),
                       a.t + u * (b.t - a.t));
    }
  }
  out.push_back(poly.back());
  return out;
}

}  // namespace

double polyline_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b,
                          int subdivisions) {
  if (subdivisions < 1) fail(ErrorKind::InvalidArgument, "subdivisions must be positive");
  return std::max(directed_polyline_hausdorff(densify(a, subdivisions), b),
                  directed_polyline_hausdorff(densify(b, subdivisions), a));
}

// ---------------------------------------------------------------------------

bool cone_contains(const Point& vertex, const Point& y, const ConeParams& cp) {
  const Point z = mul(inv(vertex), y);
  const double h = std::hypot(z.x11, z.x12);
  return std::sqrt(std::abs(z.t)) <= cp.alpha * h && h <= cp.r;
}

std::vector<std::pair<std::size_t, std::size_t>> cone_property_check(
    const std::vector<Point>& samples, const ConeParams& cp) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (i != j && cone_contains(samples[i], samples[j], cp)) out.emplace_back(i, j);
    }
  }
  return out;
}

namespace {

double smaller_singular_value(Vec2 r1, Vec2 r2) {
  // Singular values of [[a, b], [c, d]] from the invariants of M Mᵀ.
  const double fro2 = dot(r1, r1) + dot(r2, r2);
  const double det = std::abs(cross(r1, r2));
  const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
  const double big2 = 0.5 * (fro2 + disc);
  return big2 > 0.0 ? det / std::sqrt(big2) : 0.0;
}

}  // namespace

double gradient_margin(const SurfaceHandle& f, const Box3& box, int grid_n) {
  double m = std::numeric_limits<double>::infinity();
  for_grid(box, grid_n, [&](const Point& x) { m = std::min(m, norm(f.grad_h(x))); });
  return m;
}

double gradient_margin(const SurfaceHandle& f1, const SurfaceHandle& f2, const Box3& box,
                       int grid_n) {
  double m = std::numeric_limits<double>::infinity();
  for_grid(box, grid_n, [&](const Point& x) {
    m = std::min(m, smaller_singular_value(f1.grad_h(x), f2.grad_h(x)));
  });
  return m;
}

double ModulusSamples::at(double t) const {
  double m = 0.0;
  for (std::size_t i = 0; i < distance.size(); ++i) {
    if (distance[i] <= t) m = std::max(m, ratio[i]);
  }
  return m;
}

namespace {

// Grid points p·z of the homogeneous ball of radius delta.
std::vector<Point> ball_grid(const Point& p, double delta, int n) {
  std::vector<Point> out;
  for_grid(Box3{Point(-delta, -delta, -delta * delta), Point(delta, delta, delta * delta)}, n,
           [&](const Point& z) {
             if (std::hypot(z.x11, z.x12) <= delta * (1.0 + 1e-12)) out.push_back(mul(p, z));
           });
  return out;
}

}  // namespace

ModulusSamples sample_modulus(const SurfaceHandle& f1, const SurfaceHandle& f2, const Point& p,
                              double delta, double t_max, int grid_n, int per_point,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ModulusSamples out;
  for (const Point& x : ball_grid(p, delta, grid_n)) {
    const Vec2 a = f1.grad_h(x), b = f2.grad_h(x);
    const double v1 = f1(x), v2 = f2(x);
    for (int k = 0; k < per_point; ++k) {
      // Log-uniform size so small distances are represented.
      const double s = t_max * std::exp2(-20.0 * unit(rng));
      const double theta = 2.0 * M_PI * unit(rng);
      double hor = s, ver = s;
      if (unit(rng) < 0.5) hor *= unit(rng);
      else ver *= unit(rng);
      const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      const Point z(hor * std::cos(theta), hor * std::sin(theta), sign * ver * ver);
      const double d = hnorm(z);
      if (!(d > 0.0)) continue;
      const Point y = mul(x, z);
      const Vec2 z1 = z.horizontal();
      const double e1 = f1(y) - v1 - dot(a, z1);
      const double e2 = f2(y) - v2 - dot(b, z1);
      out.distance.push_back(d);
      out.ratio.push_back(std::hypot(e1, e2) / d);
    }
  }
  return out;
}

ConeDerivation derive_cone(const SurfaceHandle& f1, const SurfaceHandle& f2, const Point& p,
                           double alpha, double delta, std::uint64_t seed) {
  if (!(alpha > 0.0) || !(delta > 0.0)) {
    fail(ErrorKind::InvalidArgument, "cone opening and ball radius must be positive");
  }
  ConeDerivation out;
  double lambda = std::numeric_limits<double>::infinity();
  for (const Point& x : ball_grid(p, delta, 11)) {
    lambda = std::min(lambda, smaller_singular_value(f1.grad_h(x), f2.grad_h(x)));
  }
  out.params.alpha = alpha;
  out.params.lambda = lambda;
  if (!(lambda > 0.0)) {
    fail(ErrorKind::DependentNormals, "horizontal gradients are dependent somewhere in the ball");
  }
  const double t_max = 0.25 * delta * (1.0 - 1e-9);
  const ModulusSamples ms = sample_modulus(f1, f2, p, delta, t_max, 7, 64, seed);
  const double bound = lambda / (alpha + 1.0);
  for (int k = 0; k <= 40; ++k) {
    const double t = std::ldexp(t_max, -k);
    const double w = ms.at(t);
    if (w < bound) {
      out.t_eps = t;
      out.modulus = w;
      out.params.r = t / std::max(1.0, alpha);
      return out;
    }
  }
  fail(ErrorKind::MarginViolated, "sampled modulus never drops below lambda/(alpha+1)");
}

CurveModulus curve_modulus(const Curve& curve) {
  CurveModulus m;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const double d = dist(curve.points[i], curve.points[i + 1]);
    if (d > m.max_increment) {
      m.max_increment = d;
      m.param_increment = curve.params[i + 1] - curve.params[i];
    }
  }
  return m;
}

}  // namespace heis
