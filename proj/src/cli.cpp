#include "heis/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "heis/characteristics.hpp"
#include "heis/flow.hpp"
#include "heis/graph.hpp"

namespace heis::cli {

using nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Intersect: return "intersect";
    case Command::Characteristics: return "characteristics";
    case Command::Trace: return "trace";
    case Command::Verify: return "verify";
  }
  return "?";
}

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  fail(ErrorKind::Config, path + ": " + what);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) config_error(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) config_error(path, "must be positive");
  return v;
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) config_error(path, "expected a string");
  return j.get<std::string>();
}

int exponent(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (v < 0.0 || v != std::floor(v) || v > Polynomial::kDefaultMaxDegree) {
    config_error(path, "exponents must be integers between 0 and " +
                           std::to_string(Polynomial::kDefaultMaxDegree));
  }
  return static_cast<int>(v);
}

Polynomial parse_terms(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) config_error(path, "expected a nonempty array of [i, j, k, c]");
  std::vector<Term> terms;
  for (std::size_t m = 0; m < j.size(); ++m) {
    const std::string tp = path + "[" + std::to_string(m) + "]";
    const json& q = j[m];
    if (!q.is_array() || q.size() != 4) config_error(tp, "expected [i, j, k, coefficient]");
    terms.push_back({{exponent(q[0], tp + "[0]"), exponent(q[1], tp + "[1]"), exponent(q[2], tp + "[2]")},
                     number(q[3], tp + "[3]")});
  }
  try {
    return Polynomial(terms);
  } catch (const Error& e) {
    config_error(path, e.what());
  }
}

PolySurface parse_surface(const json& j, const std::string& path) {
  if (j.is_array()) return {parse_terms(j, path), 0.0};
  if (!j.is_object()) config_error(path, "expected a term array or {\"terms\", \"level\"}");
  PolySurface s;
  bool have_terms = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "terms") {
      s.poly = parse_terms(value, path + ".terms");
      have_terms = true;
    } else if (key == "level") {
      s.level = number(value, path + ".level");
    } else {
      config_error(path + "." + key, "unknown key");
    }
  }
  if (!have_terms) config_error(path + ".terms", "missing");
  return s;
}

Command parse_command(const json& j) {
  const std::string c = text(j, "command");
  for (Command k : {Command::Intersect, Command::Characteristics, Command::Trace, Command::Verify}) {
    if (c == to_string(k)) return k;
  }
  config_error("command", "unknown command '" + c + "'");
}

}  // namespace

RunConfig parse_config(std::string_view text_in, std::optional<Command> invoked) {
  json doc;
  try {
    doc = json::parse(text_in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) config_error("(root)", "expected an object");
  RunConfig c;
  if (doc.contains("command")) {
    c.command = parse_command(doc["command"]);
    if (invoked && *invoked != c.command) {
      config_error("command", "config is for '" + std::string(to_string(c.command)) + "', not '" +
                                  std::string(to_string(*invoked)) + "'");
    }
  } else if (invoked) {
    c.command = *invoked;
  } else {
    config_error("command", "missing");
  }
  bool have_surfaces = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") continue;
    if (key == "surfaces") {
      if (!value.is_array()) config_error("surfaces", "expected an array");
      if (value.size() > 2) config_error("surfaces", "at most two surfaces");
      for (std::size_t k = 0; k < value.size(); ++k) {
        c.surfaces.push_back(parse_surface(value[k], "surfaces[" + std::to_string(k) + "]"));
      }
      have_surfaces = true;
    } else if (key == "base_point") {
      if (!value.is_array() || value.size() != 3) config_error("base_point", "expected [x11, x12, t]");
      c.base_point = Point(number(value[0], "base_point[0]"), number(value[1], "base_point[1]"),
                           number(value[2], "base_point[2]"));
    } else if (key == "window") {
      c.window = positive(value, "window");
    } else if (key == "step") {
      c.step = positive(value, "step");
    } else if (key == "grid") {
      const double g = number(value, "grid");
      if (g != std::floor(g) || g < 3 || g > 10001) config_error("grid", "expected an integer in [3, 10001]");
      c.grid = static_cast<int>(g);
    } else if (key == "tolerance") {
      c.tolerance = positive(value, "tolerance");
    } else if (key == "tau0") {
      if (!value.is_array() || value.empty()) config_error("tau0", "expected a nonempty array");
      c.tau0.clear();
      for (std::size_t k = 0; k < value.size(); ++k) {
        c.tau0.push_back(number(value[k], "tau0[" + std::to_string(k) + "]"));
      }
    } else if (key == "output") {
      c.output = text(value, "output");
    } else if (key == "report") {
      c.report = text(value, "report");
    } else if (key == "suite") {
      c.suite = text(value, "suite");
    } else if (key == "seed") {
      const double s = number(value, "seed");
      if (s < 0 || s != std::floor(s)) config_error("seed", "expected a nonnegative integer");
      c.seed = static_cast<std::uint64_t>(s);
    } else {
      config_error(key, "unknown key");
    }
  }

  if (c.step >= c.window) config_error("step", "must be smaller than the window");
  switch (c.command) {
    case Command::Intersect:
    case Command::Trace:
      if (!have_surfaces || c.surfaces.empty()) config_error("surfaces[0]", "missing first surface");
      if (c.surfaces.size() < 2) config_error("surfaces[1]", "missing second surface");
      break;
    case Command::Characteristics:
      if (!have_surfaces || c.surfaces.empty()) config_error("surfaces[0]", "missing surface");
      for (std::size_t k = 0; k < c.tau0.size(); ++k) {
        if (std::abs(c.tau0[k]) > c.window) {
          config_error("tau0[" + std::to_string(k) + "]", "outside the window");
        }
      }
      break;
    case Command::Verify: {
      const auto& names = suite_names();
      if (c.suite != "all" && std::find(names.begin(), names.end(), c.suite) == names.end()) {
        config_error("suite", "unknown suite '" + c.suite + "'");
      }
      break;
    }
  }
  return c;
}

RunConfig load_config(const std::string& path, std::optional<Command> invoked) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), invoked);
}

Polynomial polynomial_from_quadruples(const std::vector<std::array<double, 4>>& terms) {
  json j = json::array();
  for (const auto& q : terms) j.push_back({q[0], q[1], q[2], q[3]});
  return parse_terms(j, "terms");
}

// ---------------------------------------------------------------------------

Check make_check(std::string suite, std::string name, double value, double tolerance,
                 std::string relation) {
  Check c{std::move(suite), std::move(name), value, tolerance, std::move(relation), false};
  c.pass = c.relation == ">=" ? value >= tolerance : value <= tolerance;
  return c;
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    j["checks"].push_back(nlohmann::ordered_json{{"suite", c.suite},
                           {"name", c.name},
                           {"value", num(c.value)},
                           {"tolerance", num(c.tolerance)},
                           {"relation", c.relation},
                           {"pass", c.pass}});
  }
  nlohmann::ordered_json v = nlohmann::ordered_json::object();
  for (const auto& [k, x] : values) v[k] = num(x);
  j["values"] = v;
  j["all_pass"] = all_pass();
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::vector<CurveRow> curve_rows(const Curve& curve) {
  std::vector<CurveRow> rows;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    rows.push_back({curve.xi[i], curve.planar[i].eta, curve.planar[i].tau, curve.points[i]});
  }
  return rows;
}

namespace {

constexpr const char* kHeader = "xi,eta,tau,x11,x12,t";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << kHeader << '\n';
  for (const CurveRow& r : rows) {
    out << g17(r.xi) << ',' << g17(r.eta) << ',' << g17(r.tau) << ',' << g17(r.x.x11) << ','
        << g17(r.x.x12) << ',' << g17(r.x.t) << '\n';
  }
}

std::vector<CurveRow> read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    fail(ErrorKind::Config, std::string("curve CSV must start with '") + kHeader + "'");
  }
  std::vector<CurveRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double v[6];
    int n = 0;
    while (std::getline(ss, cell, ',')) {
      if (n == 6) fail(ErrorKind::Config, "line " + std::to_string(lineno) + ": too many columns");
      try {
        std::size_t used = 0;
        v[n] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail(ErrorKind::Config, "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      ++n;
    }
    if (n != 6) fail(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected 6 columns");
    rows.push_back({v[0], v[1], v[2], Point(v[3], v[4], v[5])});
  }
  return rows;
}

Report validate_rows(const std::vector<CurveRow>& rows, const SurfaceHandle& f1,
                     const SurfaceHandle& f2, double tolerance) {
  Report r;
  double e1 = 0.0, e2 = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    e1 = std::max(e1, std::abs(f1(rows[i].x)));
    e2 = std::max(e2, std::abs(f2(rows[i].x)));
    if (i > 0) gap = std::min(gap, dist(rows[i - 1].x, rows[i].x));
  }
  r.checks.push_back(make_check("round_trip", "rows", static_cast<double>(rows.size()), 1.0, ">="));
  r.checks.push_back(make_check("round_trip", "residual_f1", e1, tolerance));
  r.checks.push_back(make_check("round_trip", "residual_f2", e2, tolerance));
  if (rows.size() > 1) {
    r.checks.push_back(make_check("round_trip", "min_consecutive_distance", gap, 1e-12, ">="));
  }
  return r;
}

// ---------------------------------------------------------------------------

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidArgument:
      return 2;
    default:
      return 1;
  }
}

std::string explain(const Error& e) {
  std::string head;
  switch (e.kind()) {
    case ErrorKind::DependentNormals:
      head = "dependent normals: the horizontal normals of the two surfaces must be linearly "
             "independent at the base point";
      break;
    case ErrorKind::VanishingGradient:
      head = "vanishing gradient: each surface must have a nonzero horizontal gradient "
             "(H-regularity)";
      break;
    case ErrorKind::MarginViolated:
      head = "margin violated: Y1 f2 must stay bounded away from zero on the graph window, "
             "which the implicit function theorem for intrinsic graphs requires";
      break;
    case ErrorKind::MonotonicityViolated:
      head = "monotonicity violated: f1 along the graph must be strictly monotone on every "
             "family member, which follows from independent horizontal normals near the base "
             "point";
      break;
    case ErrorKind::Config:
      head = "config error";
      break;
    default:
      head = std::string(to_string(e.kind()));
      break;
  }
  return head + ": " + e.what();
}

namespace {

SurfaceHandle handle(const PolySurface& s) { return SurfaceHandle::from_polynomial(s); }

IntersectionProblem make_problem(const RunConfig& c) {
  IntersectionProblem p{handle(c.surfaces[0]), handle(c.surfaces[1]), c.base_point, {}};
  p.options.graph.half_window_eta = c.window;
  p.options.graph.half_window_tau = c.window;
  p.options.trace.step = c.step;
  p.options.trace.field_grid = c.grid;
  return p;
}

void emit_csv(const RunConfig& c, const std::vector<CurveRow>& rows, Outcome& out) {
  std::ostringstream ss;
  write_curve_csv(ss, rows);
  if (c.output.empty()) {
    out.csv = ss.str();
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f || !(f << ss.str())) fail(ErrorKind::Config, "cannot write '" + c.output + "'");
}

void add_curve_checks(Report& r, const Curve& curve, const IntersectionProblem& p, double tol) {
  r.checks.push_back(make_check("intersect", "samples", static_cast<double>(curve.points.size()), 2.0, ">="));
  r.checks.push_back(make_check("intersect", "residual_f1", curve.max_residual_f1, tol));
  r.checks.push_back(make_check("intersect", "residual_f2", curve.max_residual_f2, tol));
  r.checks.push_back(make_check("intersect", "membership_error", curve.membership_error, tol));
  r.checks.push_back(make_check("intersect", "min_consecutive_distance",
                                min_consecutive_distance(curve.points), 1e-12, ">="));
  std::stringstream ss;
  write_curve_csv(ss, curve_rows(curve));
  const Report back = validate_rows(read_curve_csv(ss), p.f1, p.f2, tol);
  r.checks.insert(r.checks.end(), back.checks.begin(), back.checks.end());

  const CurveModulus m = curve_modulus(curve);
  r.values.emplace_back("delta", curve.trace.delta);
  r.values.emplace_back("field_bound", curve.trace.field_bound);
  r.values.emplace_back("family_gap", curve.trace.family_gap);
  r.values.emplace_back("extremal_converged", curve.trace.extremal_converged ? 1.0 : 0.0);
  r.values.emplace_back("max_increment", m.max_increment);
  r.values.emplace_back("param_increment", m.param_increment);
}

Report run_intersect(const RunConfig& c, Outcome& out) {
  const IntersectionProblem p = make_problem(c);
  const Curve curve = intersect_surfaces(p);
  Report r;
  add_curve_checks(r, curve, p, c.tolerance);
  emit_csv(c, curve_rows(curve), out);
  return r;
}

Report run_trace(const RunConfig& c, Outcome& out) {
  const IntersectionProblem p = make_problem(c);
  const Curve curve = intersect_surfaces(p);
  Report r;
  add_curve_checks(r, curve, p, c.tolerance);

  const Frame frame = choose_frame(p.f2, p.p);
  const SurfaceHandle g1 = p.f1.translated(p.p);
  const GraphPatch patch = GraphPatch::around(frame, p.f2.translated(p.p), Point(), p.options.graph);
  const PlanarFunction F = [&](double eta, double tau) { return g1(graph_map(patch, {eta, tau})); };
  const TraceResult& tr = curve.trace;
  const int n = 2 * c.grid - 1;
  const double spacing = 2.0 * tr.delta / (n - 1);
  r.checks.push_back(make_check("trace", "coverage_gap", coverage_gap(tr, F, n, c.tolerance),
                                2.0 * spacing));
  r.checks.push_back(make_check("trace", "preimage_intervals",
                                preimages_are_intervals(tr.raw_zeta, 1e-12) ? 1.0 : 0.0, 1.0, ">="));
  double margin = std::numeric_limits<double>::infinity();
  for (double m : tr.monotonicity_margins) margin = std::min(margin, m);
  r.checks.push_back(make_check("trace", "monotonicity_margin", margin, 0.0, ">="));
  r.values.emplace_back("raw_zeros", static_cast<double>(tr.raw_zeta.size()));
  r.values.emplace_back("collapsed_zeros", static_cast<double>(tr.zeta.size()));
  emit_csv(c, curve_rows(curve), out);
  return r;
}

Report run_characteristics(const RunConfig& c, Outcome& out) {
  const SurfaceHandle f2 = handle(c.surfaces.back());
  const Frame frame = choose_frame(f2, c.base_point);
  GraphOptions go;
  go.half_window_eta = c.window;
  go.half_window_tau = c.window;
  const CharField cf(GraphPatch::around(frame, f2.translated(c.base_point), Point(), go));
  const Rect window = Rect::centered({0.0, 0.0}, c.window, c.window);

  Report r;
  std::ostringstream csv;
  csv << "tau0,eta,tau,x11,x12,t\n";
  for (double tau0 : c.tau0) {
    const PathSample path = characteristic(cf, tau0, window, c.step);
    char tag_buf[48];
    std::snprintf(tag_buf, sizeof tag_buf, "[tau0=%g]", tau0);
    const std::string tag = tag_buf;
    r.checks.push_back(make_check("characteristics", "dafermos_residual" + tag,
                                  dafermos_residual(cf, path), 10.0 * c.step * c.step));
    r.values.emplace_back("lift_difference_quotient" + tag, lift_difference_quotient(cf, path));
    if (c.surfaces.size() == 2 && path.size() >= 3) {
      const SurfaceHandle f1 = handle(c.surfaces[0]).translated(c.base_point);
      const DifferenceReport dr = chain_rule_check(f1, cf, path, {1e-2, 1e-3, 1e-4});
      r.checks.push_back(make_check("characteristics", "chain_rule_scaled_error" + tag,
                                    dr.scaled_error.back(), 1e-5));
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
      const Point x = mul(c.base_point, graph_map(cf.patch(), {path.eta(i), path.values[i]}));
      csv << g17(tau0) << ',' << g17(path.eta(i)) << ',' << g17(path.values[i]) << ',' << g17(x.x11)
          << ',' << g17(x.x12) << ',' << g17(x.t) << '\n';
    }
  }
  if (c.output.empty()) {
    out.csv = csv.str();
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f || !(f << csv.str())) fail(ErrorKind::Config, "cannot write '" + c.output + "'");
  }
  return r;
}

}  // namespace

Outcome run(const RunConfig& config) {
  Outcome out;
  try {
    Report r;
    switch (config.command) {
      case Command::Intersect: r = run_intersect(config, out); break;
      case Command::Trace: r = run_trace(config, out); break;
      case Command::Characteristics: r = run_characteristics(config, out); break;
      case Command::Verify: r = verify(config.suite, config.seed); break;
    }
    r.command = std::string(to_string(config.command));
    if (!config.report.empty()) {
      std::ofstream f(config.report, std::ios::binary);
      if (!f || !(f << r.to_json())) fail(ErrorKind::Config, "cannot write '" + config.report + "'");
    }
    if (!r.all_pass()) {
      out.exit_code = 1;
      for (const Check& ch : r.checks) {
        if (!ch.pass) {
          out.message += "check failed: " + ch.suite + "/" + ch.name + " = " + g17(ch.value) +
                         " (needs " + ch.relation + " " + g17(ch.tolerance) + ")\n";
        }
      }
    }
    out.report = std::move(r);
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e.kind());
    out.message = explain(e);
  }
  return out;
}

}  // namespace heis::cli
