#include <cmath>
#include <random>

#include "doctest.h"
#include "heis/characteristics.hpp"
#include "heis/error.hpp"

using namespace heis;

namespace {

SurfaceHandle poly(const Polynomial& p) { return SurfaceHandle::from_polynomial(p); }

CharField flat_field() {
  return CharField(GraphPatch::around(make_frame({0, 1}), poly(Polynomial::x12()), Point()));
}

CharField skew_field() {
  return CharField(GraphPatch::around(make_frame({1, 0}), poly(Polynomial::x11() + Polynomial::t()),
                                      Point()));
}

double closed_form_error(const PathSample& p, double tau0) {
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = 1.0 - p.eta(i);
    e = std::max(e, std::abs(p.values[i] - tau0 * s * s));
  }
  return e;
}

}  // namespace

TEST_CASE("field values on the analytic patches") {
  const CharField flat = flat_field();
  CHECK(flat.beta() == 2.0);
  CHECK(std::abs(flat.rhs(0.3, -0.2)) <= 1e-12);
  CHECK(std::abs(flat.source(0.3, -0.2)) <= 1e-12);
  const CharField skew = skew_field();
  CHECK(skew.rhs(0.2, 0.1) == doctest::Approx(-2.0 * 0.1 / 0.8));
  // -(Y2 f2 / Y1 f2) = -x11 / (1 - x12) with x11 = -τ/(1-η).
  CHECK(skew.source(0.2, 0.1) == doctest::Approx(0.1 / 0.64));
}

TEST_CASE("characteristics of the analytic patches") {
  const CharField flat = flat_field();
  const PathSample line = characteristic(flat, 0.2, Rect{}, 1e-2);
  for (double v : line.values) CHECK(std::abs(v - 0.2) <= 1e-12);

  const CharField skew = skew_field();
  const PathSample zero = characteristic(skew, 0.0, Rect{}, 1e-2);
  for (double v : zero.values) CHECK(std::abs(v) <= 1e-12);

  for (double tau0 : {-0.3, -0.1, 0.1, 0.3}) {
    const double e1 = closed_form_error(characteristic(skew, tau0, Rect{}, 1e-2), tau0);
    const double e2 = closed_form_error(characteristic(skew, tau0, Rect{}, 5e-3), tau0);
    CHECK(e1 <= 1e-4);
    CHECK(std::log2(e1 / e2) >= 1.9);
  }
  const PathSample back = characteristic(skew, 0.1, Rect{}, 1e-2, -1);
  CHECK(back.eta0 == doctest::Approx(-0.5));
  CHECK(closed_form_error(back, 0.1) <= 1e-4);
}

TEST_CASE("dafermos residual") {
  const CharField flat = flat_field();
  CHECK(dafermos_residual(flat, characteristic(flat, 0.1, Rect{}, 1e-2)) <= 1e-12);
  const CharField skew = skew_field();
  for (double step : {1e-2, 5e-3}) {
    const PathSample p = characteristic(skew, 0.3, Rect{}, step);
    CHECK(dafermos_residual(skew, p) <= 10.0 * step * step);
  }
  PathSample wrong{0.0, 1e-2, std::vector<double>(41)};
  for (std::size_t i = 0; i < wrong.size(); ++i) wrong.values[i] = 0.1 + wrong.eta(i);
  CHECK(dafermos_residual(skew, wrong) > 0.05);
}

TEST_CASE("chain rule on the analytic pair") {
  const CharField skew = skew_field();
  const SurfaceHandle f1 = poly(Polynomial::x12());
  const PathSample p = characteristic(skew, 0.2, Rect{}, 1e-2);
  for (double eta : {0.0, 0.13, 0.37}) CHECK(chain_rule_rhs(f1, skew, eta, p) == doctest::Approx(1.0));
  const auto rep = chain_rule_check(f1, skew, p, {1e-2, 1e-3, 1e-4});
  CHECK(rep.scaled_error.back() <= 1e-5);
  const auto same = chain_rule_check(skew.patch().f2(), skew, p, {1e-2, 1e-3});
  for (double e : same.abs_error) CHECK(e <= 1e-9);
  CHECK(std::abs(chain_rule_rhs(skew.patch().f2(), skew, 0.1, p)) <= 1e-12);
}

TEST_CASE("chain rule on the flat pair") {
  const CharField flat = flat_field();
  const PathSample p = characteristic(flat, 0.1, Rect{}, 1e-2);
  CHECK(std::abs(chain_rule_rhs(poly(Polynomial::x11()), flat, 0.2, p)) == doctest::Approx(1.0));
}

TEST_CASE("chain rule converges at second order on a perturbed pair") {
  const Polynomial f2 = Polynomial::x11() + Polynomial::t() +
                        0.3 * Polynomial::monomial({0, 2, 0}) + 0.2 * Polynomial::monomial({1, 1, 0});
  const Polynomial f1 = Polynomial::x12() + 0.5 * Polynomial::monomial({2, 0, 0}) -
                        0.4 * Polynomial::monomial({0, 1, 1});
  const CharField cf(GraphPatch::around(make_frame({1, 0}), poly(f2), Point()));
  const PathSample p = characteristic(cf, 0.05, Rect{-0.3, 0.3, -0.3, 0.3}, 1e-2);
  const auto rep = chain_rule_check(poly(f1), cf, p, {4e-2, 2e-2, 1e-2, 5e-3});
  REQUIRE(!rep.orders.empty());
  CHECK(rep.observed_order() >= 1.9);
}

TEST_CASE("taylor remainder") {
  const CharField skew = skew_field();
  const TaylorBasePoint origin = TaylorBasePoint::make(skew, {0, 0});
  const TaylorSample zero = taylor_remainder(poly(Polynomial::x12()), skew, origin, {0, 0});
  CHECK(zero.remainder == 0.0);
  CHECK(zero.scale == 0.0);
  const SurfaceHandle lin = poly(Polynomial::x12());
  for (double eta : {-0.2, 0.1, 0.3}) {
    CHECK(std::abs(taylor_remainder(lin, skew, origin, {eta, 0.17}).remainder) <= 1e-12);
  }
  const SurfaceHandle quad = poly(Polynomial::x12() + Polynomial::monomial({2, 0, 0}));
  double prev = INFINITY;
  int violations = 0;
  for (int k = 2; k <= 8; ++k) {
    const double ratio = taylor_ratio(quad, skew, origin, std::ldexp(1.0, -k));
    if (ratio > prev) ++violations;
    prev = ratio;
  }
  CHECK(violations <= 1);
  CHECK(prev <= 0.05);
}

TEST_CASE("shifted base point") {
  const CharField skew = skew_field();
  const TaylorBasePoint b = TaylorBasePoint::make(skew, {0.1, 0.2});
  CHECK(b.eta1_bar == doctest::Approx(-0.2 / 0.9));
  CHECK(b.tau_bar == doctest::Approx(0.2 + (0.2 / 0.9) * 0.1));
  CHECK(std::abs(skew.patch().f2()(b.x_bar)) <= 1e-12);
  const SurfaceHandle quad = poly(Polynomial::x12() + Polynomial::monomial({2, 0, 0}));
  const auto rep = directional_derivative_check(quad, skew, b, {1e-2, 5e-3, 2.5e-3, 1e-3});
  CHECK(rep.abs_error.back() <= 1e-5);
  CHECK(rep.observed_order() >= 1.9);
  const TaylorBasePoint o = TaylorBasePoint::make(skew, {0, 0});
  const auto at0 = directional_derivative_check(poly(Polynomial::x12()), skew, o, {1e-3});
  CHECK(at0.abs_error[0] <= 1e-9);
  const auto self = directional_derivative_check(skew.patch().f2(), skew, b, {1e-3});
  CHECK(self.abs_error[0] <= 1e-9);
}

TEST_CASE("lifted characteristics have bounded difference quotients") {
  const CharField skew = skew_field();
  double q[3];
  int j = 0;
  for (double step : {1e-2, 5e-3, 2.5e-3}) {
    q[j++] = lift_difference_quotient(skew, characteristic(skew, 0.3, Rect{}, step));
  }
  CHECK(q[2] <= 2.0 * q[0]);
  CHECK(q[0] < 10.0);
}
