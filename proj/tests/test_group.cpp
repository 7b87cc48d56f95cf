#include <cmath>
#include <random>

#include "doctest.h"
#include "heis/error.hpp"
#include "heis/group.hpp"

using namespace heis;

namespace {

double max_diff(const Point& a, const Point& b) {
  return std::max({std::abs(a.x11 - b.x11), std::abs(a.x12 - b.x12), std::abs(a.t - b.t)});
}

Point random_point(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  return Point(u(rng), u(rng), u(rng));
}

}  // namespace

TEST_CASE("product of horizontal unit vectors picks up the area term") {
  CHECK(max_diff(mul(Point(1, 0, 0), Point(0, 1, 0)), Point(1, 1, 1)) == 0.0);
  CHECK(max_diff(mul(Point(0, 1, 0), Point(1, 0, 0)), Point(1, 1, -1)) == 0.0);
}

TEST_CASE("identity and inverse") {
  const Point x(1, 2, 3);
  CHECK(max_diff(inv(x), Point(-1, -2, -3)) == 0.0);
  CHECK(max_diff(mul(Point(), x), x) == 0.0);
  CHECK(max_diff(mul(x, inv(x)), Point()) == 0.0);
}

TEST_CASE("dilation, norm and distance on hand examples") {
  CHECK(max_diff(dilate(2, Point(1, 1, 1)), Point(2, 2, 4)) == 0.0);
  CHECK_THROWS_AS(dilate(0.0, Point(1, 1, 1)), Error);
  CHECK(hnorm(Point(3, 4, 0)) == doctest::Approx(5.0));
  CHECK(hnorm(Point(0, 0, 4)) == doctest::Approx(2.0));
  CHECK(dist(Point(), Point(3, 4, 0)) == doctest::Approx(5.0));
  CHECK_THROWS_AS(Point(NAN, 0, 0), Error);
}

TEST_CASE("algebraic laws on random samples") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 2000; ++k) {
    const Point x = random_point(rng, 10), y = random_point(rng, 10), z = random_point(rng, 10);
    CHECK(max_diff(mul(mul(x, y), z), mul(x, mul(y, z))) <= 1e-12 * 1e3);
    const double r = std::uniform_real_distribution<double>(0.1, 5.0)(rng);
    CHECK(std::abs(hnorm(dilate(r, x)) - r * hnorm(x)) <= 1e-12 * 1e2);
    CHECK(max_diff(dilate(r, mul(x, y)), mul(dilate(r, x), dilate(r, y))) <= 1e-9);
    CHECK(hnorm(mul(x, y)) <= hnorm(x) + hnorm(y) + 1e-12);
    CHECK(std::abs(dist(mul(z, x), mul(z, y)) - dist(x, y)) <= 1e-10 * 1e2);
  }
}

TEST_CASE("frames rotate b1 by a quarter turn") {
  const Frame a = make_frame({1, 0});
  CHECK(a.b2().x == 0.0);
  CHECK(a.b2().y == 1.0);
  CHECK(a.det() == 1.0);
  const Frame b = make_frame({0, 1});
  CHECK(b.b2().x == -1.0);
  CHECK(b.b2().y == 0.0);
  CHECK(b.det() == 1.0);
  CHECK_THROWS_AS(make_frame({0, 0}), Error);
  CHECK_THROWS_AS(make_frame({2, 0}), Error);
  CHECK_THROWS_AS(Frame::from_basis({1, 0}, {1, 0}), Error);
}

TEST_CASE("projections on the worked example") {
  const Frame f = make_frame({1, 0});
  const Point x(1, 2, 3);
  CHECK(max_diff(project_H(x, f), Point(1, 0, 0)) == 0.0);
  CHECK(max_diff(project_N(x, f), Point(0, 2, 5)) == 0.0);
  CHECK(max_diff(mul(Point(0, 2, 5), Point(1, 0, 0)), x) == 0.0);
  const Point n(0, 3, -1);
  CHECK(max_diff(project_N(n, f), n) == 0.0);
  CHECK(max_diff(project_H(n, f), Point()) == 0.0);
}

TEST_CASE("projection roundtrip for random frames") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int k = 0; k < 2000; ++k) {
    const double a = ang(rng);
    const Frame f = make_frame({std::cos(a), std::sin(a)});
    const Point x = random_point(rng, 10);
    const Point n = project_N(x, f);
    CHECK(max_diff(mul(n, project_H(x, f)), x) <= 1e-12 * 1e2);
    CHECK(std::abs(f.decompose(n.horizontal()).x) <= 1e-12 * 10);
  }
}

TEST_CASE("vertical subgroup coordinates") {
  const Frame f = make_frame({1, 0});
  CHECK(max_diff(embed_N({1, 2}, f), Point(0, 1, 2)) == 0.0);
  const VerticalCoords v = coords_N(embed_N({0.3, -0.7}, f), f);
  CHECK(v.eta == doctest::Approx(0.3));
  CHECK(v.tau == doctest::Approx(-0.7));
  CHECK_THROWS_AS(coords_N(Point(1, 0, 0), f), Error);
}

TEST_CASE("left-invariant derivative oracle") {
  const PointFunction x11 = [](const Point& p) { return p.x11; };
  const PointFunction t = [](const Point& p) { return p.t; };
  CHECK(horizontal_derivative(x11, Point(0.3, 0.2, 1), {1, 0}, 1e-4) == doctest::Approx(1.0));
  CHECK(std::abs(horizontal_derivative(t, Point(), {1, 0}, 1e-4)) <= 1e-12);
  CHECK(horizontal_derivative(t, Point(0, 1, 0), {1, 0}, 1e-4) == doctest::Approx(-1.0));
  CHECK(horizontal_derivative(t, Point(2, 0, 0), {0, 1}, 1e-4) == doctest::Approx(2.0));
}
