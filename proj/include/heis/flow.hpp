#pragma once

// Monotone flow selection for a continuous planar field τ' = h(η, τ) whose
// solutions may be non-unique, and tracing of the zero set of a function F
// that is strictly monotone along every solution.
//
// Pipeline of level_trace:
//   1. rectangle R = [-a,a]×[-b,b], M = max_R |h|, δ = min(a, b/(2M));
//   2. extremal solutions τ̄ ≤ τ̂ through the origin on I_δ = [-δ, δ];
//   3. flanking solutions τ-(0) = -b/2, τ+(0) = +b/2 with τ- ≤ τ̄, τ̂ ≤ τ+;
//   4. monotone families τ- → τ̄ and τ̂ → τ+ parametrized by the mean
//      ∫ τ over I_δ;
//   5. the unique zero of F on each member, then removal of repeated
//      points so the resulting curve is injective.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "heis/group.hpp"

namespace heis {

using PlanarField = std::function<double(double eta, double tau)>;

struct PlanarPoint {
  double eta = 0.0;
  double tau = 0.0;
};

/// Scalar function sampled on a uniform grid eta0 + i·step.
struct PathSample {
  double eta0 = 0.0;
  double step = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double eta(std::size_t i) const { return eta0 + step * static_cast<double>(i); }
  double eta_end() const { return eta(values.empty() ? 0 : values.size() - 1); }
  Interval span() const { return {eta0, eta_end()}; }
  /// Piecewise-linear interpolation; clamps outside the grid.
  double at(double eta) const;
  /// Trapezoid integral over the grid.
  double integral() const;
};

bool same_grid(const PathSample& a, const PathSample& b);

/// Heun integration from (eta_a, tau_a) in the given direction (+1/-1),
/// stopping at the last grid point inside the window. The returned sample is
/// always stored with increasing eta. Throws WindowExit if not even one step
/// stays inside.
PathSample integrate(const PlanarField& h, double eta_a, double tau_a, int direction,
                     const Rect& window, double step);

/// Two-sided Heun solution through (eta_a, tau_a) covering `span` exactly.
/// eta_a - span.lo and span.hi - eta_a must be multiples of `step`.
/// Throws WindowExit if the solution leaves the window before covering the
/// span.
PathSample solve_on(const PlanarField& h, double eta_a, double tau_a, Interval span,
                    const Rect& window, double step);

PathSample pointwise_max(const PathSample& a, const PathSample& b);
PathSample pointwise_min(const PathSample& a, const PathSample& b);

/// max over cells of |Δτ/Δη - h(midpoint)|.
double solution_residual(const PlanarField& h, const PathSample& path);

struct ExtremalSolutions {
  PathSample min_path;
  PathSample max_path;
  /// Max deviation between the last two members of the ε sequence.
  double spread = 0.0;
  bool converged = false;
};

struct ExtremalOptions {
  std::vector<double> eps_sequence{1e-6, 1e-8, 1e-10};
  double convergence_tolerance = 1e-3;
};

/// Approximate minimal and maximal solutions through (eta_a, tau_a) on span.
/// Uses sub/super-solutions of the shifted problems (field h ∓ ε, data
/// τ_a ∓ ε), extrapolated as ε → 0. Non-convergence is reported in the
/// result rather than thrown.
ExtremalSolutions extremal_solutions(const PlanarField& h, double eta_a, double tau_a,
                                     Interval span, const Rect& window, double step,
                                     const ExtremalOptions& options = {});

/// max(rho1, min(tau0, rho2)). Throws OrderingViolation if rho1 > rho2.
PathSample funnel_section(const PathSample& rho1, const PathSample& rho2,
                          const PathSample& tau0, double tolerance = 1e-12);

struct FamilyMember {
  double mu = 0.0;
  PathSample path;
};

struct FlowFamily {
  std::vector<FamilyMember> members;
  double mu_minus = 0.0;
  double mu_plus = 0.0;

  /// Largest sup-norm distance between adjacent members.
  double max_adjacent_gap() const;
  /// Largest amount by which a later member dips below an earlier one.
  double monotonicity_violation() const;
  /// Largest |∫ τ_μ - μ|.
  double mean_error() const;
};

struct FamilyOptions {
  int depth = 5;
  double mean_tolerance = 1e-9;
  int max_refinements = 60;
  int max_iterations = 200;
};

/// Dyadic monotone family between two ordered solutions on the same grid.
/// Members are solutions of the field obtained by gluing (max/min) Heun
/// solutions, ordered pointwise, with prescribed means. Throws
/// MeanBisectionFailure if a target mean cannot be realized.
FlowFamily build_family(const PlanarField& h, const PathSample& tau_minus,
                        const PathSample& tau_plus, const Rect& window,
                        const FamilyOptions& options = {});

using PlanarFunction = std::function<double(double eta, double tau)>;

struct RootOptions {
  double root_tolerance = 1e-10;
  /// Increments of the opposite sign smaller than this are treated as noise.
  double monotonicity_tolerance = 1e-12;
};

/// The unique zero of η ↦ F(η, path(η)), or nullopt if there is no sign
/// change. Throws MonotonicityViolated if the sampled values are not
/// strictly monotone.
std::optional<PlanarPoint> monotone_root(const PlanarFunction& F, const PathSample& path,
                                         const RootOptions& options = {});

struct TraceOptions {
  double step = 1e-3;
  FamilyOptions family{};
  ExtremalOptions extremal{};
  RootOptions root{};
  double origin_tolerance = 1e-10;
  /// Samples per axis for estimating max |h| on the rectangle.
  int field_grid = 41;
  /// Consecutive points closer than this are merged.
  double collapse_tolerance = 1e-12;
};

struct TraceResult {
  /// Injective curve: parameters in [0,1] (normalized planar arc length),
  /// the family mean of each point and the point itself.
  std::vector<double> params;
  std::vector<double> xi;
  std::vector<PlanarPoint> zeta;
  /// Zeros before collapsing repeated points, ordered by family mean.
  std::vector<double> raw_xi;
  std::vector<PlanarPoint> raw_zeta;
  double delta = 0.0;
  double field_bound = 0.0;
  /// The neighbourhood U is bounded by these two family members on I_δ.
  PathSample lower_boundary;
  PathSample upper_boundary;
  PathSample min_solution;
  PathSample max_solution;
  /// Smallest |increment| of F along each member (same order as raw_xi).
  std::vector<double> monotonicity_margins;
  double family_gap = 0.0;
  bool extremal_converged = false;

  bool in_neighborhood(double eta, double tau, double slack = 0.0) const;
};

TraceResult level_trace(const PlanarField& h, const PlanarFunction& F, const Rect& window,
                        const TraceOptions& options = {});

/// Largest distance from a grid zero of F inside U to the traced polyline.
/// Grid zeros are grid points with |F| below eps.
double coverage_gap(const TraceResult& trace, const PlanarFunction& F, int grid_n, double eps);

/// True when equal entries only occur on contiguous index ranges.
bool preimages_are_intervals(std::span<const PlanarPoint> points, double tolerance);

}  // namespace heis
