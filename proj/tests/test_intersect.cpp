#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "heis/error.hpp"
#include "heis/intersect.hpp"

using namespace heis;

namespace {

SurfaceHandle poly(const Polynomial& p) { return SurfaceHandle::from_polynomial(p); }

IntersectionProblem problem_axis() {
  return {poly(Polynomial::x11()), poly(Polynomial::x12()), Point()};
}

IntersectionProblem problem_skew() {
  return {poly(Polynomial::x12()), poly(Polynomial::x11() + Polynomial::t()), Point()};
}

std::vector<Point> segment(Point a, Point b) { return {a, b}; }

std::vector<Point> inside(const std::vector<Point>& pts, const Box3& box) {
  std::vector<Point> out;
  for (const Point& p : pts) {
    if (box.contains(p)) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("frame choice follows the horizontal gradient") {
  const Frame a = choose_frame(poly(Polynomial::x12()), Point());
  CHECK(a.b1().x == 0.0);
  CHECK(a.b1().y == 1.0);
  const Frame b = choose_frame(poly(Polynomial::x11() + Polynomial::t()), Point());
  CHECK(b.b1().x == 1.0);
  CHECK(b.b1().y == 0.0);
  CHECK_THROWS_AS(choose_frame(poly(Polynomial::t()), Point()), Error);
}

TEST_CASE("problem validation") {
  IntersectionProblem same{poly(Polynomial::x12()), poly(Polynomial::x12()), Point()};
  try {
    same.validate();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DependentNormals);
  }
  IntersectionProblem off{poly(Polynomial::x11()), poly(Polynomial::x12()), Point(0.1, 0, 0)};
  CHECK_THROWS_AS(off.validate(), Error);
}

TEST_CASE("vertical axis") {
  const Curve c = intersect_surfaces(problem_axis());
  REQUIRE(c.points.size() >= 3);
  CHECK(c.max_residual_f1 <= 1e-8);
  CHECK(c.max_residual_f2 <= 1e-8);
  CHECK(c.membership_error <= 1e-10);
  const double t0 = c.points.front().t, t1 = c.points.back().t;
  CHECK(t0 == doctest::Approx(-0.25));
  CHECK(t1 == doctest::Approx(0.25));
  CHECK(polyline_hausdorff(c.points, segment(Point(0, 0, t0), Point(0, 0, t1))) <= 1e-8);
  CHECK(min_consecutive_distance(c.points) >= 1e-12);
  CHECK(c.params.front() == 0.0);
  CHECK(c.params.back() == 1.0);
}

TEST_CASE("skew line") {
  const Curve c = intersect_surfaces(problem_skew());
  REQUIRE(c.points.size() >= 3);
  CHECK(c.max_residual_f1 <= 1e-8);
  CHECK(c.max_residual_f2 <= 1e-8);
  CHECK(c.membership_error <= 1e-10);
  CHECK(c.trace.delta == doctest::Approx(0.125));
  for (const auto& n : c.planar) CHECK(std::abs(n.eta) <= 1e-12);
  const double t0 = c.points.front().t, t1 = c.points.back().t;
  CHECK(polyline_hausdorff(c.points, segment(Point(-t0, 0, t0), Point(-t1, 0, t1))) <= 1e-6);
}

TEST_CASE("swapping the surfaces keeps the image") {
  const Curve a = intersect_surfaces(problem_skew());
  IntersectionProblem swapped{poly(Polynomial::x11() + Polynomial::t()), poly(Polynomial::x12()),
                              Point()};
  const Curve b = intersect_surfaces(swapped);
  CHECK(polyline_hausdorff(a.points, b.points) <= 2e-3);
}

TEST_CASE("translated base point") {
  const Point p(0.1, -0.2, 0.05);
  // Left translates of the skew problem by p vanish at p.
  const SurfaceHandle f1 = poly(Polynomial::x12()).translated(inv(p));
  const SurfaceHandle f2 = poly(Polynomial::x11() + Polynomial::t()).translated(inv(p));
  const Curve c = intersect_surfaces({f1, f2, p});
  CHECK(c.max_residual_f1 <= 1e-8);
  CHECK(c.max_residual_f2 <= 1e-8);
  for (const Point& x : c.points) {
    CHECK(std::abs(f1(x)) <= 1e-8);
    CHECK(std::abs(f2(x)) <= 1e-8);
  }
}

TEST_CASE("dependent normals are reported") {
  IntersectionProblem same{poly(Polynomial::x12()), poly(Polynomial::x12()), Point()};
  CHECK_THROWS_AS(intersect_surfaces(same), Error);
}

TEST_CASE("hausdorff basics") {
  const std::vector<Point> a{Point()};
  const std::vector<Point> b{Point(3, 4, 0)};
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff(a, b) == doctest::Approx(5.0));
  const std::vector<Point> ab{Point(), Point(3, 4, 0)};
  CHECK(directed_hausdorff(a, ab) == 0.0);
  CHECK_THROWS_AS(hausdorff({}, a), Error);
  CHECK(segment_distance(Point(0, 0, 0.5), Point(0, 0, -1), Point(0, 0, 1)) <= 1e-7);
  CHECK(segment_distance(Point(0, 0, 4), Point(0, 0, -1), Point(0, 0, 1)) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("zero clouds") {
  const Box3 box = Box3::cube(1.0);
  const auto cloud = brute_force_zero_cloud(poly(Polynomial::x11()), poly(Polynomial::x12()), box, 21);
  REQUIRE(!cloud.empty());
  for (const Point& x : cloud) CHECK(std::hypot(x.x11, x.x12) <= 0.5);
  const Box3 far{Point(2, 2, 2), Point(3, 3, 3)};
  CHECK(brute_force_zero_cloud(poly(Polynomial::x11()), poly(Polynomial::x12()), far, 11).empty());
  const auto skew = brute_force_zero_cloud(poly(Polynomial::x12()),
                                           poly(Polynomial::x11() + Polynomial::t()), box, 41);
  REQUIRE(!skew.empty());
  for (const Point& x : skew) CHECK(polyline_distance(x, segment(Point(1, 0, -1), Point(-1, 0, 1))) <= 0.5);
}

TEST_CASE("oracle agreement on a coarse grid") {
  const Box3 box = Box3::cube(0.2);
  const int n = 41;
  const double spacing = 0.4 / (n - 1);
  for (const auto& prob : {problem_axis(), problem_skew()}) {
    const Curve c = intersect_surfaces(prob);
    const auto cloud = brute_force_zero_cloud(prob.f1, prob.f2, box, n);
    const auto gamma = inside(c.points, box);
    REQUIRE(!gamma.empty());
    CHECK(hausdorff(gamma, cloud) <= 2.0 * std::sqrt(spacing));
    CHECK(directed_polyline_hausdorff(cloud, gamma) <= 2.0 * std::sqrt(spacing));
  }
}

TEST_CASE("cones") {
  const ConeParams cp{1.0, 2.0, 0.0};
  CHECK(cone_contains(Point(), Point(), cp));
  CHECK(cone_contains(Point(), Point(1, 0, 0), cp));
  CHECK_FALSE(cone_contains(Point(), Point(0, 0, 1), cp));
  std::vector<Point> axis, line;
  for (int k = 0; k < 20; ++k) {
    axis.emplace_back(0, 0, 0.01 * k);
    line.emplace_back(0.01 * k, 0, 0);
  }
  for (double alpha : {0.1, 1.0, 10.0}) CHECK(cone_property_check(axis, {alpha, 1.0, 0.0}).empty());
  CHECK(!cone_property_check(line, {0.5, 0.05, 0.0}).empty());
  CHECK(cone_property_check({Point()}, cp).empty());
}

TEST_CASE("gradient margins") {
  const Box3 box = Box3::cube(0.1);
  CHECK(gradient_margin(poly(Polynomial::x11()), poly(Polynomial::x12()), box, 5) == doctest::Approx(1.0));
  CHECK(gradient_margin(poly(Polynomial::x12()), poly(Polynomial::x12()), box, 5) == 0.0);
  CHECK(gradient_margin(poly(Polynomial::x12()), poly(Polynomial::x11() + Polynomial::t()), box, 11) >= 0.88);
  CHECK(gradient_margin(poly(Polynomial::t()), box, 5) == 0.0);
}

TEST_CASE("derived cones separate the traced curves") {
  for (const auto& prob : {problem_axis(), problem_skew()}) {
    const Curve c = intersect_surfaces(prob);
    for (double alpha : {1.0, 2.0, 5.0}) {
      const ConeDerivation d = derive_cone(prob.f1, prob.f2, prob.p, alpha, 0.2);
      CHECK(d.params.r > 0.0);
      CHECK(d.modulus < d.params.lambda / (alpha + 1.0));
      CHECK(cone_property_check(c.points, d.params).empty());
    }
  }
  const CurveModulus m = curve_modulus(intersect_surfaces(problem_skew()));
  CHECK(m.max_increment > 0.0);
}

TEST_CASE("segment distance matches a dense scan") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Point x(U(rng), U(rng), U(rng)), a(U(rng), U(rng), U(rng)), b(U(rng), U(rng), U(rng));
    double scan = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 4000; ++k) {
      const double u = k / 4000.0;
      scan = std::min(scan, dist(x, Point(a.x11 + u * (b.x11 - a.x11), a.x12 + u * (b.x12 - a.x12),
                                          a.t + u * (b.t - a.t))));
    }
    const double d = segment_distance(x, a, b);
    CHECK(d <= scan + 1e-12);
    CHECK(d >= scan - 2e-2);
  }
}
