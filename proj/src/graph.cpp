#include "heis/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heis/error.hpp"

namespace heis {

namespace {

std::string describe(VerticalCoords n) {
  std::ostringstream os;
  os << "(eta=" << n.eta << ", tau=" << n.tau << ")";
  return os.str();
}

}  // namespace

GraphPatch::GraphPatch(const Frame& frame, SurfaceHandle f2, VerticalCoords base_n,
                       Rect window, Interval bracket, double level,
                       const GraphOptions& options)
    : frame_(frame),
      f2_(std::move(f2)),
      base_n_(base_n),
      window_(window),
      bracket_(bracket),
      level_(level),
      options_(options) {
  if (!(options.margin > 0.0) || options.margin_grid < 2 ||
      !(options.root_tolerance > 0.0)) {
    fail(ErrorKind::InvalidArgument, "graph options: margin, grid and tolerance must be positive");
  }
  if (!(bracket.hi > bracket.lo)) {
    fail(ErrorKind::InvalidArgument, "graph bracket must be a nonempty interval");
  }
  if (!window.contains(base_n)) {
    fail(ErrorKind::InvalidArgument, "base point " + describe(base_n) + " lies outside the window");
  }
}

GraphPatch GraphPatch::around(const Frame& frame, SurfaceHandle f2, const Point& x0,
                              const GraphOptions& options) {
  const VerticalCoords n0 = coords_N(project_N(x0, frame), frame);
  const double s0 = frame.decompose(x0.horizontal()).x;
  const Rect window = Rect::centered(n0, options.half_window_eta, options.half_window_tau);
  const Interval bracket{s0 - options.bracket_half_width, s0 + options.bracket_half_width};
  const double level = f2(x0);
  GraphPatch patch(frame, std::move(f2), n0, window, bracket, level, options);
  const double y1 = y_derivatives(patch.f2_, x0, frame).x;
  if (std::abs(y1) < options.margin) {
    fail(ErrorKind::MarginViolated,
         "|Y1 f2| = " + std::to_string(std::abs(y1)) + " at the base point is below the margin");
  }
  patch.orientation_ = y1 > 0.0 ? 1 : -1;
  patch.base_s_ = s0;
  patch.check_margin_on_window();
  return patch;
}

GraphPatch GraphPatch::create(const Frame& frame, SurfaceHandle f2, VerticalCoords base_n,
                              Rect window, Interval bracket, double level,
                              const GraphOptions& options) {
  GraphPatch patch(frame, std::move(f2), base_n, window, bracket, level, options);
  const double mid = 0.5 * (bracket.lo + bracket.hi);
  const double y1 = y_derivatives(patch.f2_, patch.lift(base_n, mid), frame).x;
  if (std::abs(y1) < options.margin) {
    fail(ErrorKind::MarginViolated,
         "|Y1 f2| at the bracket midpoint over the base is below the margin");
  }
  patch.orientation_ = y1 > 0.0 ? 1 : -1;
  patch.base_s_ = patch.solve_from(base_n, mid);
  patch.check_margin_on_window();
  return patch;
}

Point GraphPatch::lift(VerticalCoords n, double s) const {
  return mul(embed_N(n, frame_), along_b1(s, frame_));
}

double GraphPatch::residual(VerticalCoords n, double s) const {
  return f2_(lift(n, s)) - level_;
}

void GraphPatch::check_margin_on_window() const {
  const int m = options_.margin_grid;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const VerticalCoords n{
          window_.eta_min + (window_.eta_max - window_.eta_min) * i / (m - 1),
          window_.tau_min + (window_.tau_max - window_.tau_min) * j / (m - 1)};
      // solve_from verifies the margin at the explored bracket and the root.
      solve_from(n, base_s_);
    }
  }
}

double GraphPatch::solve_from(VerticalCoords n, double start) const {
  auto check_margin = [&](double s) {
    const double y1 = y_derivatives(f2_, lift(n, s), frame_).x;
    if (orientation_ * y1 < options_.margin) {
      fail(ErrorKind::MarginViolated,
           "Y1 f2 = " + std::to_string(y1) + " at graph coordinate " + std::to_string(s) +
               " over " + describe(n) + " violates the sign/margin condition");
    }
  };

  start = std::clamp(start, bracket_.lo, bracket_.hi);
  const double g0 = residual(n, start);
  if (g0 == 0.0) {
    check_margin(start);
    return start;
  }

  // Expand geometrically around the start until the sign changes.
  double half = (bracket_.hi - bracket_.lo) / 512.0;
  double a = 0.0, b = 0.0, ga = 0.0, gb = 0.0;
  while (true) {
    a = std::max(bracket_.lo, start - half);
    b = std::min(bracket_.hi, start + half);
    ga = residual(n, a);
    gb = residual(n, b);
    if (ga == 0.0 || gb == 0.0 || (ga < 0.0) != (gb < 0.0)) break;
    if (a == bracket_.lo && b == bracket_.hi) {
      fail(ErrorKind::NoSignChange,
           "no sign change of the level-set residual in the bracket over " + describe(n));
    }
    half *= 2.0;
  }
  check_margin(a);
  check_margin(b);

  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  while (b - a > options_.root_tolerance) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double gm = residual(n, m);
    if (gm == 0.0) {
      a = b = m;
      ga = gb = 0.0;
      break;
    }
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
      gb = gm;
    }
  }
  // One secant step inside the final bracket removes the bisection floor.
  double s = 0.5 * (a + b);
  if (gb != ga) s = std::clamp(a - ga * (b - a) / (gb - ga), a, b);
  return s;
}

double solve_graph_scalar(const GraphPatch& patch, VerticalCoords n) {
  if (!patch.window().contains(n, 1e-12)) {
    fail(ErrorKind::InvalidArgument, "point " + describe(n) + " lies outside the patch window");
  }
  return patch.solve_from(n, patch.base_graph_coordinate());
}

Point graph_map(const GraphPatch& patch, VerticalCoords n) {
  return patch.lift(n, solve_graph_scalar(patch, n));
}

}  // namespace heis
