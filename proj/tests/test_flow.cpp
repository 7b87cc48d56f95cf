#include <cmath>

#include "doctest.h"
#include "heis/error.hpp"
#include "heis/flow.hpp"

using namespace heis;

namespace {

const PlanarField zero_field = [](double, double) { return 0.0; };
const PlanarField cusp = [](double, double tau) { return 3.0 * std::cbrt(tau * tau); };
const PlanarField contracting = [](double eta, double tau) { return -2.0 * tau / (1.0 - eta); };

double max_error(const PathSample& p, double (*exact)(double, double), double c) {
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) e = std::max(e, std::abs(p.values[i] - exact(p.eta(i), c)));
  return e;
}

double cube_plus(double eta) { return eta > 0.0 ? eta * eta * eta : 0.0; }

}  // namespace

TEST_CASE("integration of a tau-independent field") {
  const PlanarField h = [](double eta, double) { return 2.0 * eta; };
  const PathSample p = integrate(h, 0.0, 0.1, +1, Rect{}, 1e-2);
  CHECK(p.eta0 == 0.0);
  CHECK(p.eta_end() == doctest::Approx(0.5));
  CHECK(max_error(p, [](double e, double c) { return c + e * e; }, 0.1) <= 1e-12);
  const PathSample back = integrate(h, 0.0, 0.1, -1, Rect{}, 1e-2);
  CHECK(back.eta0 == doctest::Approx(-0.5));
  CHECK(back.values.back() == 0.1);
  const PathSample flat = integrate(zero_field, 0.0, 0.2, +1, Rect{}, 1e-2);
  for (double v : flat.values) CHECK(v == 0.2);
}

TEST_CASE("integration converges at second order on the separable example") {
  auto exact = [](double e, double c) { return c * (1.0 - e) * (1.0 - e); };
  const double e1 = max_error(integrate(contracting, 0.0, 0.3, +1, Rect{}, 1e-2), exact, 0.3);
  const double e2 = max_error(integrate(contracting, 0.0, 0.3, +1, Rect{}, 5e-3), exact, 0.3);
  CHECK(e1 <= 1e-4);
  CHECK(std::log2(e1 / e2) >= 1.9);
  const PathSample p = integrate(contracting, 0.0, 0.3, +1, Rect{}, 1e-2);
  CHECK(solution_residual(contracting, p) <= 10 * 1e-2);
}

TEST_CASE("window handling") {
  CHECK_THROWS_AS(integrate(zero_field, 0.0, 0.7, +1, Rect{}, 1e-2), Error);
  const PlanarField steep = [](double, double) { return 100.0; };
  CHECK_THROWS_AS(integrate(steep, 0.0, 0.499, +1, Rect{}, 1e-2), Error);
  const PathSample clipped = integrate(steep, 0.0, 0.0, +1, Rect{}, 1e-3);
  CHECK(clipped.values.back() <= 0.5);
  CHECK_THROWS_AS(solve_on(steep, 0.0, 0.0, {-0.5, 0.5}, Rect{}, 1e-3), Error);
  CHECK_THROWS_AS(solve_on(zero_field, 0.0, 0.0, {-0.5, 0.5}, Rect{}, 0.3), Error);
}

TEST_CASE("pointwise max and min of cusp solutions") {
  PathSample zero{-0.5, 1e-2, std::vector<double>(101, 0.0)};
  PathSample cube = zero;
  for (std::size_t i = 0; i < cube.size(); ++i) cube.values[i] = cube_plus(cube.eta(i));
  const PathSample m = pointwise_max(zero, cube);
  CHECK(max_error(m, [](double e, double) { return cube_plus(e); }, 0.0) == 0.0);
  CHECK(solution_residual(cusp, m) <= 10 * 1e-2);
  const PathSample lo = pointwise_min(zero, cube);
  for (std::size_t i = 0; i < lo.size(); ++i) CHECK(lo.values[i] <= m.values[i]);
  PathSample other{0.0, 1e-2, std::vector<double>(101, 0.0)};
  CHECK_THROWS_AS(pointwise_max(zero, other), Error);
}

TEST_CASE("extremal solutions") {
  const Interval span{0.0, 0.5};
  const Rect window{-0.5, 0.5, -1.0, 1.0};
  SUBCASE("Lipschitz field has a single solution") {
    const auto ext = extremal_solutions(contracting, 0.0, 0.2, span, window, 1e-3);
    auto exact = [](double e, double c) { return c * (1.0 - e) * (1.0 - e); };
    CHECK(max_error(ext.min_path, exact, 0.2) <= 1e-6);
    CHECK(max_error(ext.max_path, exact, 0.2) <= 1e-6);
    CHECK(ext.converged);
  }
  SUBCASE("cusp field opens a funnel") {
    const auto ext = extremal_solutions(cusp, 0.0, 0.0, span, window, 1e-3);
    CHECK(std::abs(ext.min_path.values.back()) <= 1e-3);
    CHECK(std::abs(ext.max_path.values.back() - 0.125) <= 1e-3);
    for (std::size_t i = 0; i < ext.min_path.size(); ++i) {
      CHECK(ext.min_path.values[i] <= ext.max_path.values[i]);
    }
  }
  SUBCASE("constant field") {
    const PlanarField c = [](double, double) { return 0.5; };
    const auto ext = extremal_solutions(c, 0.0, 0.0, span, window, 1e-2);
    CHECK(std::abs(ext.max_path.values.back() - 0.25) <= 1e-8);
    CHECK(std::abs(ext.min_path.values.back() - 0.25) <= 1e-8);
  }
}

TEST_CASE("funnel sections") {
  PathSample lo{-0.5, 1e-2, std::vector<double>(101, 0.0)};
  PathSample hi = lo, mid = lo, below = lo;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    hi.values[i] = cube_plus(hi.eta(i));
    const double s = mid.eta(i) - 0.2;
    mid.values[i] = s * s * s;
    below.values[i] = -1.0;
  }
  const PathSample same = funnel_section(lo, hi, lo);
  CHECK(same.values == lo.values);
  CHECK(funnel_section(lo, hi, below).values == lo.values);
  const PathSample glued = funnel_section(lo, hi, mid);
  CHECK(solution_residual(cusp, glued) <= 10 * 1e-2);
  CHECK(glued.values.back() == doctest::Approx(0.027));
  CHECK_THROWS_AS(funnel_section(hi, lo, mid), Error);
}

TEST_CASE("family of a Lipschitz field") {
  const Rect window{-0.5, 0.5, -1.0, 1.0};
  const Interval span{-0.5, 0.5};
  const PathSample a = solve_on(contracting, 0.0, -0.1, span, window, 1e-2);
  const PathSample b = solve_on(contracting, 0.0, 0.1, span, window, 1e-2);
  const FlowFamily fam = build_family(contracting, a, b, window);
  CHECK(fam.members.size() == 33);
  CHECK(fam.members.front().path.values == a.values);
  CHECK(fam.members.back().path.values == b.values);
  CHECK(fam.monotonicity_violation() <= 1e-9);
  CHECK(fam.mean_error() <= 1e-6);
  for (const auto& m : fam.members) CHECK(solution_residual(contracting, m.path) <= 10 * 1e-2);
  for (std::size_t k = 0; k + 1 < fam.members.size(); ++k) {
    CHECK(fam.members[k].path.values[50] < fam.members[k + 1].path.values[50]);
  }
  const FlowFamily same = build_family(contracting, a, a, window);
  for (const auto& m : same.members) CHECK(m.path.values == a.values);
  CHECK_THROWS_AS(build_family(contracting, b, a, window), Error);
}

TEST_CASE("family filling the cusp funnel") {
  const Rect window{-0.5, 0.5, -1.0, 1.0};
  const Interval span{-0.5, 0.5};
  const PathSample a = solve_on(cusp, 0.0, -1e-3, span, window, 1e-3);
  const PathSample b = solve_on(cusp, 0.0, 1e-3, span, window, 1e-3);
  FamilyOptions opts;
  opts.depth = 4;
  const FlowFamily fam = build_family(cusp, a, b, window, opts);
  CHECK(fam.monotonicity_violation() <= 1e-9);
  CHECK(fam.mean_error() <= 1e-6);
  for (const auto& m : fam.members) CHECK(solution_residual(cusp, m.path) <= 10 * 1e-3);
}

TEST_CASE("monotone roots") {
  PathSample c{-0.5, 1e-2, std::vector<double>(101, 0.2)};
  const PlanarFunction eta = [](double e, double) { return e; };
  const auto r0 = monotone_root(eta, c);
  REQUIRE(r0);
  CHECK(std::abs(r0->eta) <= 1e-12);
  CHECK(r0->tau == 0.2);
  const auto r1 = monotone_root([](double e, double t) { return e + t; }, c);
  REQUIRE(r1);
  CHECK(r1->eta == doctest::Approx(-0.2));
  CHECK_FALSE(monotone_root([](double e, double) { return e + 2.0; }, c));
  CHECK_THROWS_AS(monotone_root([](double e, double) { return e * e - 0.01; }, c), Error);
}

TEST_CASE("level trace of the vertical line") {
  const auto tr = level_trace(zero_field, [](double e, double) { return e; }, Rect{});
  CHECK(tr.delta == doctest::Approx(0.5));
  REQUIRE(tr.zeta.size() >= 2);
  for (const auto& z : tr.zeta) CHECK(std::abs(z.eta) <= 1e-12);
  CHECK(tr.zeta.front().tau == doctest::Approx(-0.25));
  CHECK(tr.zeta.back().tau == doctest::Approx(0.25));
  CHECK(tr.params.front() == 0.0);
  CHECK(tr.params.back() == 1.0);
  CHECK(coverage_gap(tr, [](double e, double) { return e; }, 101, 1e-12) <= 2.0 / 100);
  CHECK_THROWS_AS(level_trace(zero_field, [](double e, double) { return e + 0.1; }, Rect{}), Error);
}

TEST_CASE("level trace of the antidiagonal") {
  const PlanarFunction F = [](double e, double t) { return e + t; };
  const auto tr = level_trace(zero_field, F, Rect{});
  for (const auto& z : tr.zeta) CHECK(std::abs(z.eta + z.tau) <= 1e-10);
  CHECK(coverage_gap(tr, F, 101, 1e-12) <= 2.0 / 100);
}

TEST_CASE("level trace through the cusp funnel") {
  const PlanarFunction F = [](double e, double) { return e; };
  const auto tr = level_trace(cusp, F, Rect{});
  for (const auto& z : tr.zeta) CHECK(std::abs(z.eta) <= 1e-10);
  for (std::size_t i = 0; i + 1 < tr.zeta.size(); ++i) {
    CHECK(std::hypot(tr.zeta[i + 1].eta - tr.zeta[i].eta, tr.zeta[i + 1].tau - tr.zeta[i].tau) >= 1e-12);
  }
  CHECK(preimages_are_intervals(tr.raw_zeta, 1e-12));
  const double spacing = 2.0 * tr.delta / 200;
  CHECK(coverage_gap(tr, F, 201, 1e-12) <= 2.0 * spacing);
}
