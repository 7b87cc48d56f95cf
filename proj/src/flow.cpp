#include "heis/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "heis/error.hpp"

namespace heis {

// ---------------------------------------------------------------------------
// PathSample

double PathSample::at(double eta) const {
  if (values.empty()) fail(ErrorKind::InvalidArgument, "empty path sample");
  if (values.size() == 1) return values.front();
  const double u = (eta - eta0) / step;
  if (u <= 0.0) return values.front();
  const auto last = static_cast<double>(values.size() - 1);
  if (u >= last) return values.back();
  const auto i = static_cast<std::size_t>(u);
  const double w = u - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

double PathSample::integral() const {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * step;
}

bool same_grid(const PathSample& a, const PathSample& b) {
  return a.size() == b.size() && std::abs(a.step - b.step) <= 1e-12 * a.step &&
         std::abs(a.eta0 - b.eta0) <= 1e-9 * a.step;
}

namespace {

void require_same_grid(const PathSample& a, const PathSample& b) {
  if (!same_grid(a, b)) {
    fail(ErrorKind::GridMismatch, "path samples live on different grids");
  }
}

double heun(const PlanarField& h, double eta, double tau, double k1, double ds) {
  const double pred = tau + ds * k1;
  return tau + 0.5 * ds * (k1 + h(eta + ds, pred));
}

// Heun steps from (eta_a, tau_a). Stops before leaving the window or after
// max_steps. The returned values start with tau_a and follow the marching
// direction.
//
// With a positive `tolerance` each grid cell is crossed in substeps chosen by
// step doubling so that the local error stays below tolerance per unit eta.
// Near non-Lipschitz points of h a plain step can jump over the thin band of
// equilibria of a shifted field and take off on the wrong branch. Tolerance
// is also capped relative to |tau|, which assumes the cusp sits at tau = 0
// after the usual translation of the base point to the origin.
std::vector<double> march(const PlanarField& h, double eta_a, double tau_a, int direction,
                          std::size_t max_steps, double step, const Rect& window,
                          double tolerance = 0.0) {
  std::vector<double> vals{tau_a};
  const double ds = direction * step;
  double tau = tau_a;
  const double slack = 1e-9 * step;
  double sub = 1.0;  // fraction of the grid step used by the last substep
  for (std::size_t k = 0; k < max_steps; ++k) {
    const double eta = eta_a + ds * static_cast<double>(k);
    const double eta_next = eta_a + ds * static_cast<double>(k + 1);
    if (eta_next < window.eta_min - slack || eta_next > window.eta_max + slack) break;
    double next = tau;
    bool inside = true;
    double done = 0.0;
    while (done < 1.0) {
      const double frac = tolerance > 0.0 ? std::min(sub, 1.0 - done) : 1.0;
      const double e = eta + ds * done;
      const double k1 = h(e, next);
      if (!window.contains(e + ds * frac, next + ds * frac * k1, slack)) {
        inside = false;
        break;
      }
      const double full = heun(h, e, next, k1, ds * frac);
      if (tolerance <= 0.0) {
        next = full;
        break;
      }
      const double half = heun(h, e, next, k1, 0.5 * ds * frac);
      if (!window.contains(e + 0.5 * ds * frac, half, slack)) {
        inside = false;
        break;
      }
      const double k_half = h(e + 0.5 * ds * frac, half);
      if (!window.contains(e + ds * frac, half + 0.5 * ds * frac * k_half, slack)) {
        inside = false;
        break;
      }
      const double two = heun(h, e + 0.5 * ds * frac, half, k_half, 0.5 * ds * frac);
      const double err = std::abs(two - full);
      // Relative control as well: the trapping band of a shifted field around
      // a cusp of h can be much thinner than the shift itself.
      const double allowed =
          std::max(std::min(tolerance, 1e-3 * std::abs(next)) * step * frac,
                   16.0 * std::numeric_limits<double>::epsilon() * std::abs(next));
      if (err > allowed && frac > 0x1p-40) {
        sub = 0.5 * frac;
        continue;
      }
      next = two;
      done += frac;
      if (err < allowed / 8.0) sub = std::min(1.0, 2.0 * frac);
    }
    if (!inside || !window.contains(eta_next, next, slack)) break;
    vals.push_back(next);
    tau = next;
  }
  return vals;
}

std::size_t steps_between(double from, double to, double step) {
  const double n = (to - from) / step;
  const double rounded = std::round(n);
  if (rounded < 0.0 || std::abs(n - rounded) > 1e-6) {
    fail(ErrorKind::GridMismatch, "span endpoints are not on the integration grid");
  }
  return static_cast<std::size_t>(rounded);
}

// Joins a backward march (starting at the anchor) and a forward march into a
// sample with increasing eta.
PathSample join(const std::vector<double>& backward, const std::vector<double>& forward,
                double eta_a, double step) {
  PathSample out;
  out.step = step;
  out.eta0 = eta_a - step * static_cast<double>(backward.size() - 1);
  out.values.assign(backward.rbegin(), backward.rend());
  out.values.insert(out.values.end(), forward.begin() + 1, forward.end());
  return out;
}

PathSample solve_shifted(const PlanarField& h, double eta_a, double tau_a, Interval span,
                         const Rect& window, double step, double forward_shift,
                         double backward_shift) {
  const std::size_t nb = steps_between(span.lo, eta_a, step);
  const std::size_t nf = steps_between(eta_a, span.hi, step);
  const PlanarField hf = [&](double e, double t) { return h(e, t) + forward_shift; };
  const PlanarField hb = [&](double e, double t) { return h(e, t) + backward_shift; };
  // Discretization error must stay well below the shift for the shifted
  // solutions to remain on the correct side.
  const double tol = 0.1 * std::max(std::abs(forward_shift), std::abs(backward_shift));
  auto fwd = march(forward_shift == 0.0 ? h : hf, eta_a, tau_a, +1, nf, step, window, tol);
  auto bwd = march(backward_shift == 0.0 ? h : hb, eta_a, tau_a, -1, nb, step, window, tol);
  if (fwd.size() != nf + 1 || bwd.size() != nb + 1) {
    std::ostringstream os;
    os << "solution through (" << eta_a << ", " << tau_a << ") leaves the window before covering ["
       << span.lo << ", " << span.hi << "]";
    fail(ErrorKind::WindowExit, os.str());
  }
  return join(bwd, fwd, eta_a, step);
}

}  // namespace

PathSample integrate(const PlanarField& h, double eta_a, double tau_a, int direction,
                     const Rect& window, double step) {
  if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "integration step must be positive");
  if (direction != 1 && direction != -1) {
    fail(ErrorKind::InvalidArgument, "direction must be +1 or -1");
  }
  if (!window.contains(eta_a, tau_a)) {
    fail(ErrorKind::WindowExit, "initial point lies outside the window");
  }
  auto vals = march(h, eta_a, tau_a, direction, std::numeric_limits<std::size_t>::max(), step,
                    window);
  if (vals.size() < 2) fail(ErrorKind::WindowExit, "solution leaves the window immediately");
  if (direction > 0) return PathSample{eta_a, step, std::move(vals)};
  return join(vals, {tau_a}, eta_a, step);
}

PathSample solve_on(const PlanarField& h, double eta_a, double tau_a, Interval span,
                    const Rect& window, double step) {
  if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "integration step must be positive");
  if (!window.contains(eta_a, tau_a)) {
    fail(ErrorKind::WindowExit, "initial point lies outside the window");
  }
  return solve_shifted(h, eta_a, tau_a, span, window, step, 0.0, 0.0);
}

PathSample pointwise_max(const PathSample& a, const PathSample& b) {
  require_same_grid(a, b);
  PathSample out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = std::max(a.values[i], b.values[i]);
  return out;
}

PathSample pointwise_min(const PathSample& a, const PathSample& b) {
  require_same_grid(a, b);
  PathSample out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = std::min(a.values[i], b.values[i]);
  return out;
}

double solution_residual(const PlanarField& h, const PathSample& path) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double slope = (path.values[i + 1] - path.values[i]) / path.step;
    const double mid_eta = path.eta(i) + 0.5 * path.step;
    const double mid_tau = 0.5 * (path.values[i] + path.values[i + 1]);
    worst = std::max(worst, std::abs(slope - h(mid_eta, mid_tau)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Extremal solutions

namespace {

// Aitken Δ² on the last three members, pointwise, guarded so that it only
// acts where the sequence actually contracts geometrically.
PathSample extrapolate(const std::vector<PathSample>& seq) {
  PathSample out = seq.back();
  if (seq.size() < 3) return out;
  const auto& p0 = seq[seq.size() - 3].values;
  const auto& p1 = seq[seq.size() - 2].values;
  const auto& p2 = seq.back().values;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d1 = p1[i] - p0[i];
    const double d2 = p2[i] - p1[i];
    if (d1 == 0.0 || d2 == 0.0) continue;
    const double r = d2 / d1;
    if (!(r > 0.0 && r < 0.9)) continue;
    out.values[i] = p2[i] + d2 * r / (1.0 - r);
  }
  return out;
}

double sup_distance(const PathSample& a, const PathSample& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

}  // namespace

ExtremalSolutions extremal_solutions(const PlanarField& h, double eta_a, double tau_a,
                                     Interval span, const Rect& window, double step,
                                     const ExtremalOptions& options) {
  if (options.eps_sequence.empty()) {
    fail(ErrorKind::InvalidArgument, "extremal solutions need a nonempty eps sequence");
  }
  if (!window.contains(eta_a, tau_a)) {
    fail(ErrorKind::WindowExit, "initial point lies outside the window");
  }
  std::vector<PathSample> lows, highs;
  for (double eps : options.eps_sequence) {
    if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps values must be positive");
    // Above every solution: start higher, push up forward and down backward.
    highs.push_back(solve_shifted(h, eta_a, tau_a + eps, span, window, step, +eps, -eps));
    lows.push_back(solve_shifted(h, eta_a, tau_a - eps, span, window, step, -eps, +eps));
  }

  ExtremalSolutions out;
  PathSample lo = extrapolate(lows);
  PathSample hi = extrapolate(highs);
  const std::size_t anchor = steps_between(span.lo, eta_a, step);
  lo.values[anchor] = tau_a;
  hi.values[anchor] = tau_a;
  out.min_path = pointwise_min(lo, hi);
  out.max_path = pointwise_max(lo, hi);
  if (lows.size() >= 2) {
    out.spread = std::max(sup_distance(lows.back(), lows[lows.size() - 2]),
                          sup_distance(highs.back(), highs[highs.size() - 2]));
  }
  out.converged = lows.size() >= 2 && out.spread <= options.convergence_tolerance;
  return out;
}

PathSample funnel_section(const PathSample& rho1, const PathSample& rho2, const PathSample& tau0,
                          double tolerance) {
  require_same_grid(rho1, rho2);
  require_same_grid(rho1, tau0);
  PathSample out = tau0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rho1.values[i] > rho2.values[i] + tolerance) {
      fail(ErrorKind::OrderingViolation, "funnel boundaries are not ordered");
    }
    out.values[i] = std::max(rho1.values[i], std::min(tau0.values[i], rho2.values[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monotone families

double FlowFamily::max_adjacent_gap() const {
  double g = 0.0;
  for (std::size_t k = 0; k + 1 < members.size(); ++k) {
    g = std::max(g, sup_distance(members[k].path, members[k + 1].path));
  }
  return g;
}

double FlowFamily::monotonicity_violation() const {
  double v = 0.0;
  for (std::size_t k = 0; k + 1 < members.size(); ++k) {
    const auto& a = members[k].path.values;
    const auto& b = members[k + 1].path.values;
    for (std::size_t i = 0; i < a.size(); ++i) v = std::max(v, a[i] - b[i]);
  }
  return v;
}

double FlowFamily::mean_error() const {
  double e = 0.0;
  for (const auto& m : members) e = std::max(e, std::abs(m.path.integral() - m.mu));
  return e;
}

namespace {

// Heun solution through (eta(anchor), v) kept between the barriers A ≤ B.
// Where it would cross a barrier it is projected onto it and continues from
// there, which glues solution pieces at common points.
PathSample clamped_solution(const PlanarField& h, const PathSample& lower,
                            const PathSample& upper, std::size_t anchor, double v) {
  PathSample out = lower;
  auto& vals = out.values;
  const double step = lower.step;
  vals[anchor] = std::clamp(v, lower.values[anchor], upper.values[anchor]);
  auto advance = [&](std::size_t from, std::size_t to) {
    const double ds = to > from ? step : -step;
    const double eta = lower.eta(from);
    const double tau = vals[from];
    const double k1 = h(eta, tau);
    const double pred = std::clamp(tau + ds * k1, lower.values[to], upper.values[to]);
    const double k2 = h(lower.eta(to), pred);
    vals[to] = std::clamp(tau + 0.5 * ds * (k1 + k2), lower.values[to], upper.values[to]);
  };
  for (std::size_t i = anchor; i + 1 < vals.size(); ++i) advance(i, i + 1);
  for (std::size_t i = anchor; i > 0; --i) advance(i, i - 1);
  return out;
}

struct MeanSelector {
  const PlanarField& h;
  const FamilyOptions& options;

  PathSample select(PathSample lower, PathSample upper, double mu) const {
    const double tol = options.mean_tolerance;
    for (int round = 0; round < options.max_refinements; ++round) {
      const double f_lower = lower.integral() - mu;
      const double f_upper = upper.integral() - mu;
      if (std::abs(f_lower) <= tol) return lower;
      if (std::abs(f_upper) <= tol) return upper;

      std::size_t anchor = 0;
      double gap = -1.0;
      for (std::size_t i = 0; i < lower.size(); ++i) {
        const double g = upper.values[i] - lower.values[i];
        if (g > gap) {
          gap = g;
          anchor = i;
        }
      }
      if (!(gap > 0.0)) break;

      auto candidate = [&](double v) { return clamped_solution(h, lower, upper, anchor, v); };
      double va = lower.values[anchor];
      double vb = upper.values[anchor];
      PathSample ca = candidate(va);
      PathSample cb = candidate(vb);
      double fa = ca.integral() - mu;
      double fb = cb.integral() - mu;

      if (fa > 0.0 && fb > 0.0) {
        upper = fa < fb ? std::move(ca) : std::move(cb);
        continue;
      }
      if (fa < 0.0 && fb < 0.0) {
        lower = fa > fb ? std::move(ca) : std::move(cb);
        continue;
      }
      if (std::abs(fa) <= tol) return ca;
      if (std::abs(fb) <= tol) return cb;

      // Illinois variant of regula falsi on the anchor value.
      int side = 0;
      PathSample best = std::abs(fa) < std::abs(fb) ? ca : cb;
      double best_f = std::min(std::abs(fa), std::abs(fb));
      for (int it = 0; it < options.max_iterations; ++it) {
        double v = (fb != fa) ? vb - fb * (vb - va) / (fb - fa) : 0.5 * (va + vb);
        if (!(v > std::min(va, vb) && v < std::max(va, vb))) v = 0.5 * (va + vb);
        PathSample c = candidate(v);
        const double fc = c.integral() - mu;
        if (std::abs(fc) < best_f) {
          best_f = std::abs(fc);
          best = c;
        }
        if (std::abs(fc) <= tol) return c;
        if ((fc > 0.0) == (fb > 0.0)) {
          vb = v;
          fb = fc;
          if (side == -1) fa *= 0.5;
          side = -1;
        } else {
          va = v;
          fa = fc;
          if (side == +1) fb *= 0.5;
          side = +1;
        }
        if (std::abs(vb - va) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                     std::max(1.0, std::max(std::abs(va), std::abs(vb)))) {
          break;
        }
      }
      if (best_f <= 1e-6) return best;
      std::ostringstream os;
      os << "mean " << mu << " not realized; closest candidate misses by " << best_f;
      fail(ErrorKind::MeanBisectionFailure, os.str());
    }
    std::ostringstream os;
    os << "mean " << mu << " not realized between the given solutions; remaining gap "
       << std::min(std::abs(lower.integral() - mu), std::abs(upper.integral() - mu));
    fail(ErrorKind::MeanBisectionFailure, os.str());
  }
};

}  // namespace

FlowFamily build_family(const PlanarField& h, const PathSample& tau_minus,
                        const PathSample& tau_plus, const Rect& window,
                        const FamilyOptions& options) {
  require_same_grid(tau_minus, tau_plus);
  if (options.depth < 0 || options.depth > 20) {
    fail(ErrorKind::InvalidArgument, "family depth must lie in [0, 20]");
  }
  for (std::size_t i = 0; i < tau_minus.size(); ++i) {
    if (tau_minus.values[i] > tau_plus.values[i] + 1e-12) {
      fail(ErrorKind::OrderingViolation, "tau_minus must lie below tau_plus");
    }
    if (!window.contains(tau_minus.eta(i), tau_minus.values[i], 1e-9) ||
        !window.contains(tau_plus.eta(i), tau_plus.values[i], 1e-9)) {
      fail(ErrorKind::WindowExit, "family boundaries must lie inside the window");
    }
  }

  FlowFamily fam;
  fam.mu_minus = tau_minus.integral();
  fam.mu_plus = tau_plus.integral();
  const std::size_t n = std::size_t{1} << options.depth;
  fam.members.resize(n + 1);
  auto target = [&](std::size_t k) {
    return fam.mu_minus + (fam.mu_plus - fam.mu_minus) * static_cast<double>(k) /
                              static_cast<double>(n);
  };
  fam.members.front() = {fam.mu_minus, tau_minus};
  fam.members.back() = {fam.mu_plus, tau_plus};

  MeanSelector selector{h, options};
  for (std::size_t stride = n / 2; stride >= 1; stride /= 2) {
    for (std::size_t k = stride; k < n; k += 2 * stride) {
      const double mu = target(k);
      fam.members[k] = {mu, selector.select(fam.members[k - stride].path,
                                            fam.members[k + stride].path, mu)};
    }
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Roots along monotone paths

namespace {

struct RootScan {
  std::optional<PlanarPoint> root;
  double margin = 0.0;
};

RootScan scan_root(const PlanarFunction& F, const PathSample& path, const RootOptions& options) {
  const std::size_t n = path.size();
  if (n < 2) fail(ErrorKind::InvalidArgument, "path needs at least two samples");
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = F(path.eta(i), path.values[i]);

  int pos = 0, neg = 0;
  double margin = std::numeric_limits<double>::infinity();
  double worst_reverse = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = vals[i + 1] - vals[i];
    margin = std::min(margin, std::abs(d));
    if (d > options.monotonicity_tolerance) ++pos;
    if (d < -options.monotonicity_tolerance) ++neg;
  }
  const int dir = pos >= neg ? 1 : -1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    worst_reverse = std::max(worst_reverse, -dir * (vals[i + 1] - vals[i]));
  }
  if ((pos > 0 && neg > 0) || (pos == 0 && neg == 0)) {
    std::ostringstream os;
    os << "F is not strictly monotone along the path (" << pos << " increasing, " << neg
       << " decreasing increments, worst reversal " << worst_reverse << ")";
    fail(ErrorKind::MonotonicityViolated, os.str());
  }

  RootScan out;
  out.margin = margin;
  for (std::size_t i = 0; i < n; ++i) {
    if (vals[i] == 0.0) {
      out.root = PlanarPoint{path.eta(i), path.values[i]};
      return out;
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if ((vals[i] < 0.0) == (vals[i + 1] < 0.0)) continue;
    double a = path.eta(i), b = path.eta(i + 1);
    double fa = vals[i], fb = vals[i + 1];
    auto G = [&](double eta) { return F(eta, path.at(eta)); };
    while (true) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      const double fm = G(m);
      if (fm == 0.0) {
        a = b = m;
        fa = fb = 0.0;
        break;
      }
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
    }
    double eta = std::abs(fa) <= std::abs(fb) ? a : b;
    if (fb != fa) eta = std::clamp(a - fa * (b - a) / (fb - fa), a, b);
    out.root = PlanarPoint{eta, path.at(eta)};
    return out;
  }
  return out;
}

double planar_distance(PlanarPoint a, PlanarPoint b) { return std::hypot(a.eta - b.eta, a.tau - b.tau); }

double segment_distance(PlanarPoint p, PlanarPoint a, PlanarPoint b) {
  const double dx = b.eta - a.eta, dy = b.tau - a.tau;
  const double len2 = dx * dx + dy * dy;
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp(((p.eta - a.eta) * dx + (p.tau - a.tau) * dy) / len2, 0.0, 1.0);
  return planar_distance(p, {a.eta + u * dx, a.tau + u * dy});
}

}  // namespace

std::optional<PlanarPoint> monotone_root(const PlanarFunction& F, const PathSample& path,
                                         const RootOptions& options) {
  return scan_root(F, path, options).root;
}

// ---------------------------------------------------------------------------
// Level trace

bool TraceResult::in_neighborhood(double eta, double tau, double slack) const {
  if (std::abs(eta) > delta + slack) return false;
  return tau >= lower_boundary.at(eta) - slack && tau <= upper_boundary.at(eta) + slack;
}

TraceResult level_trace(const PlanarField& h, const PlanarFunction& F, const Rect& window,
                        const TraceOptions& options) {
  if (std::abs(F(0.0, 0.0)) > options.origin_tolerance) {
    fail(ErrorKind::OriginNotZero, "F(0,0) = " + std::to_string(F(0.0, 0.0)) +
                                       " is not a zero; the trace is local at a known zero");
  }
  const double a = std::min(-window.eta_min, window.eta_max);
  const double b = std::min(-window.tau_min, window.tau_max);
  if (!(a > 0.0) || !(b > 0.0)) {
    fail(ErrorKind::InvalidArgument, "the window must contain the origin in its interior");
  }
  if (!(options.step > 0.0) || options.field_grid < 2) {
    fail(ErrorKind::InvalidArgument, "trace step and field grid must be positive");
  }
  const Rect R{-a, a, -b, b};

  TraceResult out;
  double M = 0.0;
  const int g = options.field_grid;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const double eta = -a + 2.0 * a * i / (g - 1);
      const double tau = -b + 2.0 * b * j / (g - 1);
      M = std::max(M, std::abs(h(eta, tau)));
    }
  }
  out.field_bound = M;
  out.delta = M > 0.0 ? std::min(a, b / (2.0 * M)) : a;
  const double half_steps = std::max(1.0, std::ceil(out.delta / options.step - 1e-9));
  const double step = out.delta / half_steps;
  const Interval span{-out.delta, out.delta};

  const auto ext = extremal_solutions(h, 0.0, 0.0, span, R, step, options.extremal);
  out.min_solution = ext.min_path;
  out.max_solution = ext.max_path;
  out.extremal_converged = ext.converged;

  const PathSample tau_plus = pointwise_max(solve_on(h, 0.0, 0.5 * b, span, R, step), ext.max_path);
  const PathSample tau_minus = pointwise_min(solve_on(h, 0.0, -0.5 * b, span, R, step), ext.min_path);

  const FlowFamily lower = build_family(h, tau_minus, ext.min_path, R, options.family);
  const FlowFamily upper = build_family(h, ext.max_path, tau_plus, R, options.family);
  out.family_gap = std::max(lower.max_adjacent_gap(), upper.max_adjacent_gap());

  auto brackets_zero = [&](const PathSample& p) {
    const double left = F(p.eta0, p.values.front());
    const double right = F(p.eta_end(), p.values.back());
    return (left < 0.0 && right > 0.0) || (left > 0.0 && right < 0.0);
  };
  // Contiguous ranges [nu0, nu_bar] and [mu_hat, mu0] of members whose
  // endpoint values of F have opposite signs.
  std::size_t nu0 = lower.members.size() - 1;
  while (nu0 > 0 && brackets_zero(lower.members[nu0 - 1].path)) --nu0;
  std::size_t mu0 = 0;
  while (mu0 + 1 < upper.members.size() && brackets_zero(upper.members[mu0 + 1].path)) ++mu0;

  std::vector<const FamilyMember*> selected;
  for (std::size_t k = nu0; k < lower.members.size(); ++k) selected.push_back(&lower.members[k]);
  for (std::size_t k = 0; k <= mu0; ++k) selected.push_back(&upper.members[k]);
  out.lower_boundary = lower.members[nu0].path;
  out.upper_boundary = upper.members[mu0].path;

  for (const FamilyMember* m : selected) {
    const RootScan scan = scan_root(F, m->path, options.root);
    if (!scan.root) continue;
    out.raw_zeta.push_back(*scan.root);
    out.raw_xi.push_back(m->mu);
    out.monotonicity_margins.push_back(scan.margin);
  }
  if (out.raw_zeta.empty()) {
    fail(ErrorKind::NoSignChange, "no family member crosses the zero set of F");
  }

  for (std::size_t i = 0; i < out.raw_zeta.size(); ++i) {
    if (!out.zeta.empty() &&
        planar_distance(out.zeta.back(), out.raw_zeta[i]) <= options.collapse_tolerance) {
      continue;
    }
    out.zeta.push_back(out.raw_zeta[i]);
    out.xi.push_back(out.raw_xi[i]);
  }
  out.params.assign(out.zeta.size(), 0.0);
  for (std::size_t i = 1; i < out.zeta.size(); ++i) {
    out.params[i] = out.params[i - 1] + planar_distance(out.zeta[i - 1], out.zeta[i]);
  }
  if (out.zeta.size() > 1 && out.params.back() > 0.0) {
    const double total = out.params.back();
    for (double& p : out.params) p /= total;
  }
  return out;
}

double coverage_gap(const TraceResult& trace, const PlanarFunction& F, int grid_n, double eps) {
  if (grid_n < 2) fail(ErrorKind::InvalidArgument, "coverage grid needs at least two points");
  double tau_lo = std::numeric_limits<double>::infinity();
  double tau_hi = -tau_lo;
  for (double v : trace.lower_boundary.values) tau_lo = std::min(tau_lo, v);
  for (double v : trace.upper_boundary.values) tau_hi = std::max(tau_hi, v);
  double worst = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const double eta = -trace.delta + 2.0 * trace.delta * i / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      const double tau = tau_lo + (tau_hi - tau_lo) * j / (grid_n - 1);
      if (!trace.in_neighborhood(eta, tau) || std::abs(F(eta, tau)) >= eps) continue;
      const PlanarPoint p{eta, tau};
      double d = std::numeric_limits<double>::infinity();
      if (trace.zeta.size() == 1) d = planar_distance(p, trace.zeta.front());
      for (std::size_t k = 0; k + 1 < trace.zeta.size(); ++k) {
        d = std::min(d, segment_distance(p, trace.zeta[k], trace.zeta[k + 1]));
      }
      worst = std::max(worst, d);
    }
  }
  return worst;
}

bool preimages_are_intervals(std::span<const PlanarPoint> points, double tolerance) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 2; j < points.size(); ++j) {
      if (planar_distance(points[i], points[j]) > tolerance) continue;
      for (std::size_t k = i + 1; k < j; ++k) {
        if (planar_distance(points[i], points[k]) > tolerance) return false;
      }
    }
  }
  return true;
}

}  // namespace heis
