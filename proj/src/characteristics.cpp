#include "heis/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heis/error.hpp"

namespace heis {

CharField::CharField(GraphPatch patch)
    : patch_(std::move(patch)), beta_(2.0 * patch_.frame().det()) {}

double CharField::rhs(double eta, double tau) const {
  return beta_ * solve_graph_scalar(patch_, {eta, tau});
}

double CharField::source(double eta, double tau) const {
  const Point x = graph_map(patch_, {eta, tau});
  const Vec2 y = y_derivatives(patch_.f2(), x, patch_.frame());
  return -y.y / y.x;
}

PlanarField CharField::rhs_field() const {
  return [self = *this](double eta, double tau) { return self.rhs(eta, tau); };
}

PlanarField CharField::source_field() const {
  return [self = *this](double eta, double tau) { return self.source(eta, tau); };
}

PathSample characteristic(const CharField& cf, double tau0, const Rect& window, double step,
                          int direction) {
  const Rect& pw = cf.patch().window();
  const Rect r{std::max(window.eta_min, pw.eta_min), std::min(window.eta_max, pw.eta_max),
               std::max(window.tau_min, pw.tau_min), std::min(window.tau_max, pw.tau_max)};
  return integrate(cf.rhs_field(), 0.0, tau0, direction, r, step);
}

double dafermos_residual(const CharField& cf, const PathSample& path) {
  std::vector<double> nu(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    nu[i] = solve_graph_scalar(cf.patch(), {path.eta(i), path.values[i]});
  }
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double slope = (nu[i + 1] - nu[i]) / path.step;
    const double g =
        cf.source(path.eta(i) + 0.5 * path.step, 0.5 * (path.values[i] + path.values[i + 1]));
    worst = std::max(worst, std::abs(slope - g));
  }
  return worst;
}

double chain_rule_value(const SurfaceHandle& f1, const CharField& cf, const Point& x) {
  const Frame& fr = cf.patch().frame();
  const Vec2 a = y_derivatives(f1, x, fr);
  const Vec2 b = y_derivatives(cf.patch().f2(), x, fr);
  return -(a.x * b.y - a.y * b.x) / b.x;
}

double chain_rule_rhs(const SurfaceHandle& f1, const CharField& cf, double eta,
                      const PathSample& path) {
  return chain_rule_value(f1, cf, graph_map(cf.patch(), {eta, path.at(eta)}));
}

double DifferenceReport::observed_order() const {
  if (orders.empty()) return std::numeric_limits<double>::quiet_NaN();
  return *std::min_element(orders.begin(), orders.end());
}

namespace {

void fill_orders(DifferenceReport& rep) {
  for (std::size_t j = 0; j + 1 < rep.steps.size(); ++j) {
    if (rep.abs_error[j] > rep.noise_floor && rep.abs_error[j + 1] > rep.noise_floor) {
      rep.orders.push_back(std::log(rep.abs_error[j] / rep.abs_error[j + 1]) /
                           std::log(rep.steps[j] / rep.steps[j + 1]));
    }
  }
}

// Classical RK4 from (eta, tau) to eta + h in four substeps.
double rk4_lift(const CharField& cf, double eta, double tau, double h) {
  const int n = 4;
  const double ds = h / n;
  for (int k = 0; k < n; ++k) {
    const double k1 = cf.rhs(eta, tau);
    const double k2 = cf.rhs(eta + 0.5 * ds, tau + 0.5 * ds * k1);
    const double k3 = cf.rhs(eta + 0.5 * ds, tau + 0.5 * ds * k2);
    const double k4 = cf.rhs(eta + ds, tau + ds * k3);
    tau += ds * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    eta += ds;
  }
  return tau;
}

}  // namespace

DifferenceReport chain_rule_check(const SurfaceHandle& f1, const CharField& cf,
                                  const PathSample& path, const std::vector<double>& h_sweep,
                                  int samples) {
  if (path.size() < 3 || samples < 1) {
    fail(ErrorKind::InvalidArgument, "chain rule check needs a path and at least one sample");
  }
  DifferenceReport rep;
  const Rect& pw = cf.patch().window();
  auto F = [&](double eta, double tau) { return f1(graph_map(cf.patch(), {eta, tau})); };
  for (double h : h_sweep) {
    if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "difference steps must be positive");
    double worst_abs = 0.0, worst_scaled = 0.0;
    for (int k = 1; k <= samples; ++k) {
      const auto i = static_cast<std::size_t>(
          std::llround(static_cast<double>(k) * static_cast<double>(path.size() - 1) /
                       (samples + 1)));
      const double eta = path.eta(i);
      const double tau = path.values[i];
      if (eta - h < pw.eta_min || eta + h > pw.eta_max) continue;
      const double fd =
          (F(eta + h, rk4_lift(cf, eta, tau, h)) - F(eta - h, rk4_lift(cf, eta, tau, -h))) /
          (2.0 * h);
      const double exact = chain_rule_value(f1, cf, graph_map(cf.patch(), {eta, tau}));
      const double err = std::abs(fd - exact);
      worst_abs = std::max(worst_abs, err);
      worst_scaled = std::max(worst_scaled, err / std::max(1.0, std::abs(exact)));
    }
    rep.steps.push_back(h);
    rep.abs_error.push_back(worst_abs);
    rep.scaled_error.push_back(worst_scaled);
  }
  fill_orders(rep);
  return rep;
}

TaylorBasePoint TaylorBasePoint::make(const CharField& cf, VerticalCoords n_bar) {
  TaylorBasePoint b;
  b.n_bar = n_bar;
  b.eta1_bar = solve_graph_scalar(cf.patch(), n_bar);
  b.x_bar = cf.patch().lift(n_bar, b.eta1_bar);
  b.tau_bar = n_bar.tau - b.eta1_bar * n_bar.eta * cf.patch().frame().det();
  return b;
}

TaylorSample taylor_remainder(const SurfaceHandle& f1, const CharField& cf,
                              const TaylorBasePoint& base, VerticalCoords n) {
  const double det = cf.patch().frame().det();
  const double d_eta = n.eta - base.n_bar.eta;
  const double tau_prime = n.tau - base.n_bar.tau - 2.0 * d_eta * base.eta1_bar * det;
  const double value = f1(graph_map(cf.patch(), n)) - f1(base.x_bar);
  TaylorSample out;
  out.remainder = value - d_eta * chain_rule_value(f1, cf, base.x_bar);
  out.scale = std::max(std::abs(d_eta), std::sqrt(std::abs(tau_prime)));
  return out;
}

double taylor_ratio(const SurfaceHandle& f1, const CharField& cf, const TaylorBasePoint& base,
                    double r, int samples) {
  if (!(r > 0.0) || samples < 4) fail(ErrorKind::InvalidArgument, "radius and samples must be positive");
  const double det = cf.patch().frame().det();
  double worst = 0.0;
  // Walk the boundary of {|Δη| ≤ r, |τ'| ≤ r²}.
  for (int k = 0; k < samples; ++k) {
    const double u = 4.0 * k / samples;
    const int side = static_cast<int>(u);
    const double w = 2.0 * (u - side) - 1.0;
    double d_eta = 0.0, tau_prime = 0.0;
    switch (side) {
      case 0: d_eta = r; tau_prime = w * r * r; break;
      case 1: d_eta = -w * r; tau_prime = r * r; break;
      case 2: d_eta = -r; tau_prime = -w * r * r; break;
      default: d_eta = w * r; tau_prime = -r * r; break;
    }
    const VerticalCoords n{base.n_bar.eta + d_eta,
                           base.n_bar.tau + tau_prime + 2.0 * d_eta * base.eta1_bar * det};
    const TaylorSample s = taylor_remainder(f1, cf, base, n);
    worst = std::max(worst, std::abs(s.remainder) / s.scale);
  }
  return worst;
}

DifferenceReport directional_derivative_check(const SurfaceHandle& f1, const CharField& cf,
                                              const TaylorBasePoint& base,
                                              const std::vector<double>& h_sweep) {
  DifferenceReport rep;
  const double slope = 2.0 * base.eta1_bar * cf.patch().frame().det();
  auto D = [&](double s) {
    return f1(graph_map(cf.patch(), {base.n_bar.eta + s, base.n_bar.tau + slope * s}));
  };
  const double exact = chain_rule_value(f1, cf, base.x_bar);
  for (double h : h_sweep) {
    if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "difference steps must be positive");
    const double err = std::abs((D(h) - D(-h)) / (2.0 * h) - exact);
    rep.steps.push_back(h);
    rep.abs_error.push_back(err);
    rep.scaled_error.push_back(err / std::max(1.0, std::abs(exact)));
  }
  fill_orders(rep);
  return rep;
}

double lift_difference_quotient(const CharField& cf, const PathSample& path) {
  double worst = 0.0;
  Point prev = graph_map(cf.patch(), {path.eta(0), path.values[0]});
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Point cur = graph_map(cf.patch(), {path.eta(i), path.values[i]});
    worst = std::max(worst, dist(prev, cur) / path.step);
    prev = cur;
  }
  return worst;
}

}  // namespace heis
