#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "heis/characteristics.hpp"
#include "heis/cli.hpp"
#include "heis/flow.hpp"
#include "heis/graph.hpp"
#include "heis/intersect.hpp"

namespace heis::cli {

namespace {

using Rng = std::mt19937_64;

SurfaceHandle poly(const Polynomial& p) { return SurfaceHandle::from_polynomial(p); }

Point random_point(Rng& rng, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  const double a = u(rng), b = u(rng), c = u(rng);
  return Point(a, b, c);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double point_error(const Point& a, const Point& b) {
  return std::max({rel(a.x11, b.x11), rel(a.x12, b.x12), rel(a.t, b.t)});
}

IntersectionProblem axis_problem() { return {poly(Polynomial::x11()), poly(Polynomial::x12()), Point(), {}}; }
IntersectionProblem skew_problem() {
  return {poly(Polynomial::x12()), poly(Polynomial::x11() + Polynomial::t()), Point(), {}};
}

CharField skew_field() {
  return CharField(GraphPatch::around(make_frame({1, 0}), poly(Polynomial::x11() + Polynomial::t()), Point()));
}

using Suite = std::function<void(Report&, std::uint64_t)>;

void group_suite(Report& r, std::uint64_t seed) {
  Rng rng(seed);
  double assoc = 0.0, inverse = 0.0, homog = 0.0, tri = 0.0, left = 0.0;
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const Point x = random_point(rng, 10), y = random_point(rng, 10), z = random_point(rng, 10);
    const double s = scale(rng);
    assoc = std::max(assoc, point_error(mul(mul(x, y), z), mul(x, mul(y, z))));
    inverse = std::max(inverse, hnorm(mul(x, inv(x))));
    homog = std::max(homog, std::abs(hnorm(dilate(s, x)) - s * hnorm(x)) / std::max(1.0, s * hnorm(x)));
    tri = std::max(tri, dist(x, z) - dist(x, y) - dist(y, z));
    left = std::max(left, std::abs(dist(mul(z, x), mul(z, y)) - dist(x, y)) / std::max(1.0, dist(x, y)));
  }
  r.checks.push_back(make_check("group", "associativity", assoc, 1e-12));
  r.checks.push_back(make_check("group", "inverse", inverse, 1e-12));
  r.checks.push_back(make_check("group", "homogeneity", homog, 1e-12));
  r.checks.push_back(make_check("group", "triangle_excess", tri, 1e-10));
  r.checks.push_back(make_check("group", "left_invariance", left, 1e-10));
}

void projection_suite(Report& r, std::uint64_t seed) {
  Rng rng(seed + 1);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Point x = random_point(rng, 10);
    const double a = angle(rng);
    const Frame f = make_frame({std::cos(a), std::sin(a)});
    worst = std::max(worst, point_error(mul(project_N(x, f), project_H(x, f)), x));
  }
  r.checks.push_back(make_check("projection", "roundtrip", worst, 1e-12));
  const Frame e1 = make_frame({1, 0});
  const Point x(1, 2, 3);
  r.checks.push_back(make_check("projection", "worked_example",
                                std::max(point_error(project_N(x, e1), Point(0, 2, 5)),
                                         point_error(project_H(x, e1), Point(1, 0, 0))),
                                1e-12));
}

void graph_suite(Report& r, std::uint64_t) {
  const GraphPatch flat = GraphPatch::around(make_frame({0, 1}), poly(Polynomial::x12()), Point());
  const GraphPatch skew = skew_field().patch();
  double res = 0.0, closed = 0.0;
  const int n = 21;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const VerticalCoords v{-0.5 + i / (n - 1.0), -0.5 + j / (n - 1.0)};
      res = std::max({res, std::abs(flat.f2()(graph_map(flat, v))), std::abs(skew.f2()(graph_map(skew, v)))});
      closed = std::max({closed, std::abs(solve_graph_scalar(flat, v)),
                         std::abs(solve_graph_scalar(skew, v) + v.tau / (1.0 - v.eta))});
    }
  }
  r.checks.push_back(make_check("graph", "level_residual", res, 1e-10));
  r.checks.push_back(make_check("graph", "closed_form", closed, 1e-10));
}

void characteristics_suite(Report& r, std::uint64_t) {
  const CharField cf = skew_field();
  const Rect right{0.0, 0.5, -0.5, 0.5};
  auto err = [&](double tau0, double step) {
    const PathSample p = characteristic(cf, tau0, right, step);
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double s = 1.0 - p.eta(i);
      e = std::max(e, std::abs(p.values[i] - tau0 * s * s));
    }
    return e;
  };
  double order = std::numeric_limits<double>::infinity();
  for (double tau0 : {-0.3, -0.1, 0.1, 0.3}) order = std::min(order, std::log2(err(tau0, 1e-2) / err(tau0, 5e-3)));
  r.checks.push_back(make_check("characteristics", "closed_form_order", order, 1.9, ">="));
  const double step = 5e-3;
  r.checks.push_back(make_check("characteristics", "dafermos_residual",
                                dafermos_residual(cf, characteristic(cf, 0.3, right, step)),
                                10.0 * step * step));
  PathSample wrong{0.0, 1e-2, std::vector<double>(41)};
  for (std::size_t i = 0; i < wrong.size(); ++i) wrong.values[i] = 0.1 + wrong.eta(i);
  r.checks.push_back(make_check("characteristics", "negative_control", dafermos_residual(cf, wrong), 0.05, ">="));
}

void chain_rule_suite(Report& r, std::uint64_t) {
  const CharField cf = skew_field();
  const PathSample p = characteristic(cf, 0.2, Rect{}, 1e-2);
  const DifferenceReport a = chain_rule_check(poly(Polynomial::x12()), cf, p, {1e-2, 1e-3, 1e-4});
  r.checks.push_back(make_check("chain_rule", "scaled_error_at_1e-4", a.scaled_error.back(), 1e-5));
  const Polynomial f2 = Polynomial::x11() + Polynomial::t() + 0.3 * Polynomial::monomial({0, 2, 0}) +
                        0.2 * Polynomial::monomial({1, 1, 0});
  const Polynomial f1 = Polynomial::x12() + 0.5 * Polynomial::monomial({2, 0, 0}) -
                        0.4 * Polynomial::monomial({0, 1, 1});
  const CharField pert(GraphPatch::around(make_frame({1, 0}), poly(f2), Point()));
  const PathSample q = characteristic(pert, 0.05, Rect{-0.3, 0.3, -0.3, 0.3}, 1e-2);
  const DifferenceReport b = chain_rule_check(poly(f1), pert, q, {4e-2, 2e-2, 1e-2, 5e-3});
  r.checks.push_back(make_check("chain_rule", "perturbed_order", b.observed_order(), 1.9, ">="));
}

void taylor_suite(Report& r, std::uint64_t) {
  const CharField cf = skew_field();
  const TaylorBasePoint o = TaylorBasePoint::make(cf, {0, 0});
  const SurfaceHandle quad = poly(Polynomial::x12() + Polynomial::monomial({2, 0, 0}));
  double prev = std::numeric_limits<double>::infinity();
  int violations = 0;
  for (int k = 2; k <= 8; ++k) {
    const double ratio = taylor_ratio(quad, cf, o, std::ldexp(1.0, -k));
    if (ratio > prev) ++violations;
    prev = ratio;
  }
  r.checks.push_back(make_check("taylor", "trend_violations", violations, 1.0));
  r.checks.push_back(make_check("taylor", "final_ratio", prev, 0.05));
}

void flow_suite(Report& r, std::uint64_t) {
  const PlanarField cusp = [](double, double tau) { return 3.0 * std::cbrt(tau * tau); };
  const Rect window{-0.5, 0.5, -1.0, 1.0};
  const ExtremalSolutions ext = extremal_solutions(cusp, 0.0, 0.0, {0.0, 0.5}, window, 1e-3);
  r.checks.push_back(make_check("flow", "min_solution_error", std::abs(ext.min_path.values.back()), 1e-3));
  r.checks.push_back(make_check("flow", "max_solution_error", std::abs(ext.max_path.values.back() - 0.125), 1e-3));
  const PathSample a = solve_on(cusp, 0.0, -1e-3, {-0.5, 0.5}, window, 1e-3);
  const PathSample b = solve_on(cusp, 0.0, 1e-3, {-0.5, 0.5}, window, 1e-3);
  FamilyOptions fo;
  fo.depth = 4;
  const FlowFamily fam = build_family(cusp, a, b, window, fo);
  r.checks.push_back(make_check("flow", "family_monotonicity", fam.monotonicity_violation(), 1e-9));
  r.checks.push_back(make_check("flow", "family_mean", fam.mean_error(), 1e-6));
  const PlanarFunction F = [](double e, double) { return e; };
  const TraceResult tr = level_trace(cusp, F, Rect{});
  const double spacing = 2.0 * tr.delta / 200;
  r.checks.push_back(make_check("flow", "coverage_gap", coverage_gap(tr, F, 201, 1e-12), 2.0 * spacing));
  r.checks.push_back(make_check("flow", "preimage_intervals",
                                preimages_are_intervals(tr.raw_zeta, 1e-12) ? 1.0 : 0.0, 1.0, ">="));
}

void intersect_suite(Report& r, std::uint64_t) {
  const Curve a = intersect_surfaces(axis_problem());
  const Curve b = intersect_surfaces(skew_problem());
  const double ta0 = a.points.front().t, ta1 = a.points.back().t;
  const double tb0 = b.points.front().t, tb1 = b.points.back().t;
  r.checks.push_back(make_check("intersect", "axis_hausdorff",
                                polyline_hausdorff(a.points, {Point(0, 0, ta0), Point(0, 0, ta1)}), 1e-8));
  r.checks.push_back(make_check("intersect", "skew_hausdorff",
                                polyline_hausdorff(b.points, {Point(-tb0, 0, tb0), Point(-tb1, 0, tb1)}), 1e-6));
  const Box3 box = Box3::cube(0.2);
  const int n = 61;
  const double bound = 2.0 * std::sqrt(0.4 / (n - 1));
  int k = 0;
  for (const auto* prob : {&a, &b}) {
    const IntersectionProblem p = k == 0 ? axis_problem() : skew_problem();
    std::vector<Point> inside;
    for (const Point& x : prob->points) {
      if (box.contains(x)) inside.push_back(x);
    }
    const auto cloud = brute_force_zero_cloud(p.f1, p.f2, box, n);
    r.checks.push_back(make_check("intersect", k == 0 ? "axis_cloud" : "skew_cloud",
                                  std::max(hausdorff(inside, cloud), directed_polyline_hausdorff(cloud, inside)),
                                  bound));
    ++k;
  }
  r.checks.push_back(make_check("intersect", "axis_distinct", min_consecutive_distance(a.points), 1e-12, ">="));
  r.checks.push_back(make_check("intersect", "skew_distinct", min_consecutive_distance(b.points), 1e-12, ">="));
}

void cone_suite(Report& r, std::uint64_t seed) {
  int k = 0;
  for (const IntersectionProblem& p : {axis_problem(), skew_problem()}) {
    const Curve c = intersect_surfaces(p);
    for (double alpha : {1.0, 2.0, 5.0}) {
      const ConeDerivation d = derive_cone(p.f1, p.f2, p.p, alpha, 0.2, seed);
      r.checks.push_back(make_check("cone", std::string(k == 0 ? "axis" : "skew") + "_violations_alpha_" +
                                                std::to_string(static_cast<int>(alpha)),
                                    static_cast<double>(cone_property_check(c.points, d.params).size()), 0.0));
    }
    ++k;
  }
  std::vector<Point> line;
  for (int i = 0; i <= 20; ++i) line.emplace_back(-0.1 + 0.01 * i, 0.0, 0.0);
  r.checks.push_back(make_check("cone", "horizontal_line_violations",
                                static_cast<double>(cone_property_check(line, {1.0, 0.05, 0.0}).size()), 1.0,
                                ">="));
}

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> s{
      {"group", group_suite},           {"projection", projection_suite},
      {"graph", graph_suite},           {"characteristics", characteristics_suite},
      {"chain_rule", chain_rule_suite}, {"taylor", taylor_suite},
      {"flow", flow_suite},             {"intersect", intersect_suite},
      {"cone", cone_suite},
  };
  return s;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : suites()) v.push_back(name);
    return v;
  }();
  return names;
}

Report verify(const std::string& suite, std::uint64_t seed) {
  Report r;
  r.command = "verify";
  bool found = false;
  for (const auto& [name, fn] : suites()) {
    if (suite == "all" || suite == name) {
      fn(r, seed);
      found = true;
    }
  }
  if (!found) fail(ErrorKind::Config, "suite: unknown suite '" + suite + "'");
  return r;
}

}  // namespace heis::cli
