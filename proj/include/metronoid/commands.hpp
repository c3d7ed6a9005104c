#pragma once

// Command implementations behind the metronoid CLI. Each command returns
// its full output text and an exit code so the same code path can be
// driven from tests.

#include "metronoid/constructions.hpp"
#include "metronoid/io.hpp"
#include "metronoid/polygon.hpp"
#include "metronoid/verify.hpp"
#include "metronoid/vertex_index.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace metronoid::cli {

struct Options {
  std::string command;
  std::vector<std::string> args;  // positionals after the command (and subcommand)
  std::uint64_t seed = 0;
  std::optional<std::size_t> count;
  std::optional<int> net;
  std::optional<double> tol;
  std::string out;
  bool oracle = false;
  std::string suite;  // verify / tables
  std::optional<int> cases;
};

struct Result {
  std::string text;
  int code = 0;
};

namespace detail {

using io::Json;

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline const std::string& arg(const Options& o, std::size_t i, const char* what) {
  if (i >= o.args.size()) throw Error(o.command + ": missing argument <" + what + ">");
  return o.args[i];
}

inline double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(std::string("expected a number for ") + what + ", got \"" + s + "\"");
  }
}

inline int to_int(const std::string& s, const char* what) {
  double v = to_double(s, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(std::string("expected an integer for ") + what);
  return static_cast<int>(v);
}

/// "1,0,-2" -> (1, 0, -2).
inline Vector parse_vector(const std::string& s, const char* what) {
  std::vector<double> xs;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    xs.push_back(to_double(s.substr(start, comma - start), what));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return make_vector(xs);
}

inline std::pair<std::string, std::string> split_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

/// A JSON file, or one of ball:n, cube:n, cross:n, simplex:n (with an
/// optional :radius for the first three).
inline ConvexBody parse_body(const std::string& spec) {
  if (std::filesystem::exists(spec)) return io::body_from_json(io::parse_json(io::read_file(spec), spec), spec);
  auto [kind, rest] = split_spec(spec);
  auto [dim, radius] = split_spec(rest);
  if (dim.empty()) throw Error("body: \"" + spec + "\" is neither a file nor kind:n");
  const int n = to_int(dim, "body dimension");
  const double r = radius.empty() ? 1.0 : to_double(radius, "body radius");
  if (kind == "ball") return ConvexBody::ball(n, r);
  if (kind == "cube") return ConvexBody::cube(n, r);
  if (kind == "cross") return ConvexBody::cross_polytope(n, r);
  if (kind == "simplex") return centered_simplex(n);
  throw Error("body: unknown builtin \"" + kind + "\" (ball, cube, cross, simplex)");
}

/// delta_0 + sum_i k (delta_{e_i/k} + delta_{-e_i/k}) in the plane.
inline DiscreteMeasure figure_measure(double k) {
  require(k > 0.0, "origin-cross: k must be positive");
  DiscreteMeasure mu(2);
  mu.add(Vector::Zero(2), 1.0);
  for (int i = 0; i < 2; ++i) {
    mu.add(unit(2, i) / k, k);
    mu.add(-unit(2, i) / k, k);
  }
  return mu;
}

/// A JSON file, or cross:n, origin-cross:k, dirac:x1,...,xn, sphere:n[:mass]
/// (sampled with --count and --seed).
inline DiscreteMeasure parse_measure(const std::string& spec, const Options& o) {
  if (std::filesystem::exists(spec)) {
    io::Json j = io::parse_json(io::read_file(spec), spec);
    // a sampler description draws its measure; anything else is a measure
    if (j.is_object() && j.contains("kind")) return sample(io::sampler_from_json(j, spec));
    return io::measure_from_json(j, spec);
  }
  auto [kind, rest] = split_spec(spec);
  if (rest.empty()) throw Error("measure: \"" + spec + "\" is neither a file nor a builtin");
  if (kind == "cross") return cross_polytope_measure(to_int(rest, "measure dimension"));
  if (kind == "origin-cross") return figure_measure(to_double(rest, "origin-cross k"));
  if (kind == "dirac") {
    Vector x = parse_vector(rest, "dirac point");
    DiscreteMeasure mu(static_cast<int>(x.size()));
    mu.add(x, 1.0);
    return mu;
  }
  if (kind == "sphere") {
    auto [dim, mass] = split_spec(rest);
    return sample_sphere(to_int(dim, "sphere dimension"), 1.0, mass.empty() ? 1.0 : to_double(mass, "sphere mass"),
                         o.count.value_or(10000), o.seed);
  }
  throw Error("measure: unknown builtin \"" + kind + "\" (cross, origin-cross, dirac, sphere)");
}

inline io::RunConfig config(const Options& o, const std::string& command) {
  io::RunConfig cfg;
  cfg.command = command;
  cfg.inputs = o.args;
  cfg.output = o.out;
  cfg.seed = o.seed;
  if (o.count) cfg.params["count"] = *o.count;
  if (o.net) cfg.params["net"] = *o.net;
  if (o.tol) cfg.params["tol"] = *o.tol;
  if (o.oracle) cfg.params["oracle"] = true;
  if (!o.suite.empty()) cfg.params["suite"] = o.suite;
  if (o.cases) cfg.params["cases"] = *o.cases;
  return cfg;
}

inline DirectionNet net_for(const Options& o, int n) { return DirectionNet::standard(n, o.seed, o.net.value_or(0)); }

inline Json with_meta(const io::RunConfig& cfg) {
  Json j;
  j["meta"] = cfg.to_json();
  return j;
}

inline Result emit(const Json& j, int code = 0) { return {io::dump(j), code}; }

inline Json containment_json(const ContainmentReport& c) {
  Json j;
  j["pass"] = c.pass;
  j["exact"] = c.exact;
  j["worst_slack"] = c.worst_slack;
  j["net_size"] = c.net_size;
  j["screen_pass"] = c.screen_pass;
  j["screen_worst"] = c.screen_worst;
  if (c.witness.size() > 0) j["witness"] = io::to_json(c.witness);
  return j;
}

inline Vector default_direction(const ConvexBody& body) {
  if (is_simplex(body)) {
    Vector v = body.points().col(0);
    return v / v.norm();
  }
  return unit(body.dim(), 0);
}

}  // namespace detail

// ------------------------------------------------------------------ support

inline Result cmd_support(const Options& o) {
  auto cfg = detail::config(o, "support");
  DiscreteMeasure mu = detail::parse_measure(detail::arg(o, 0, "measure"), o);
  Metronoid m(mu);
  std::vector<Vector> dirs;
  if (o.args.size() > 1) {
    Vector th = detail::parse_vector(o.args[1], "direction");
    require_dim(th, m.dim(), "direction");
    require(th.norm() > 0.0, "support: zero direction");
    dirs.push_back(th / th.norm());
  } else {
    dirs = detail::net_for(o, m.dim()).directions();
  }
  const double tol = o.tol.value_or(1e-9);
  struct Row {
    double h, h_lp;
    Vector y;
  };
  auto rows = parallel_map<Row>(dirs.size(), [&](std::size_t k) {
    Row r{msupport(m, dirs[k]), 0.0, extreme_point(m, dirs[k])};
    if (o.oracle) r.h_lp = msupport_lp(m, dirs[k]);
    return r;
  });
  bool agree_all = true;
  auto agrees = [&](const Row& r) { return std::abs(r.h - r.h_lp) <= tol * std::max(1.0, std::abs(r.h)); };
  for (const auto& r : rows) agree_all = agree_all && (!o.oracle || agrees(r));
  const int code = agree_all ? 0 : 1;

  if (detail::ends_with(o.out, ".csv")) {
    std::vector<std::string> header;
    for (int i = 0; i < m.dim(); ++i) header.push_back("theta_" + std::to_string(i + 1));
    header.push_back("h");
    for (int i = 0; i < m.dim(); ++i) header.push_back("y_" + std::to_string(i + 1));
    if (o.oracle) {
      header.push_back("h_lp");
      header.push_back("agree");
    }
    io::CsvWriter csv(cfg, header);
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      std::vector<std::string> cells;
      for (int i = 0; i < m.dim(); ++i) cells.push_back(io::format_double(dirs[k](i)));
      cells.push_back(io::format_double(rows[k].h));
      for (int i = 0; i < m.dim(); ++i) cells.push_back(io::format_double(rows[k].y(i)));
      if (o.oracle) {
        cells.push_back(io::format_double(rows[k].h_lp));
        cells.push_back(agrees(rows[k]) ? "pass" : "fail");
      }
      csv.row(cells);
    }
    return {csv.str(), code};
  }
  auto j = detail::with_meta(cfg);
  j["mass"] = m.mass();
  io::Json arr = io::Json::array();
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    io::Json r;
    r["theta"] = io::to_json(dirs[k]);
    r["h"] = rows[k].h;
    r["y"] = io::to_json(rows[k].y);
    if (o.oracle) {
      r["h_lp"] = rows[k].h_lp;
      r["agree"] = agrees(rows[k]);
    }
    arr.push_back(r);
  }
  j["rows"] = arr;
  if (o.oracle) j["agree"] = agree_all;
  return detail::emit(j, code);
}

// ------------------------------------------------------------------- member

inline Result cmd_member(const Options& o) {
  auto cfg = detail::config(o, "member");
  Metronoid m(detail::parse_measure(detail::arg(o, 0, "measure"), o));
  Vector x = detail::parse_vector(detail::arg(o, 1, "point"), "point");
  require_dim(x, m.dim(), "point");
  DirectionNet net = detail::net_for(o, m.dim());
  auto cert = membership(m, x, &net, o.tol.value_or(tol::kBoundary));
  auto j = detail::with_meta(cfg);
  j["point"] = io::to_json(x);
  j["status"] = to_string(cert.status);
  if (cert.status != MemberStatus::Outside) {
    j["lambda"] = io::to_json(cert.lambda);
    j["min_slack"] = cert.min_slack;
    j["combination"] = io::to_json(Vector(m.positions() * cert.lambda));
  }
  return detail::emit(j);
}

// ----------------------------------------------------------------- vertices

inline Result cmd_vertices(const Options& o) {
  auto cfg = detail::config(o, "vertices");
  Metronoid m(detail::parse_measure(detail::arg(o, 0, "measure"), o));
  if (!vertices_available(m)) {
    throw DomainError("vertices: brute force needs at most " + std::to_string(kBruteForceMaxAtoms) + " atoms in n >= 3");
  }
  auto verts = vertices(m);
  auto j = detail::with_meta(cfg);
  j["method"] = m.dim() == 2 ? "sweep-2d" : "bruteforce";
  io::Json arr = io::Json::array();
  for (const auto& v : verts) arr.push_back(io::to_json(v));
  j["count"] = verts.size();
  j["vertices"] = arr;
  int code = 0;
  if (o.oracle && m.dim() == 2 && m.size() <= kBruteForceMaxAtoms) {
    auto a = metronoid::detail::sort_ccw(vertices_sweep_2d(m));
    auto b = metronoid::detail::sort_ccw(vertices_bruteforce(m));
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      bool hit = false;
      for (const auto& q : b) hit = hit || (a[i] - q).cwiseAbs().maxCoeff() <= 1e-9;
      same = hit;
    }
    j["bruteforce_agrees"] = same;
    code = same ? 0 : 1;
  }
  return detail::emit(j, code);
}

// ------------------------------------------------------------------- figure

inline Result cmd_figure(const Options& o) {
  auto cfg = detail::config(o, "figure");
  DiscreteMeasure mu = detail::parse_measure(detail::arg(o, 0, "measure"), o);
  if (mu.dim() != 2) throw DomainError("figure: the measure must be planar (n = 2)");
  return {io::figure_svg(io::figure_layers(mu), cfg), 0};
}

// ---------------------------------------------------------------- construct

namespace detail {

inline Json construction_json(const ConstructionReport& rep, const TableRow& row) {
  Json j;
  j["atoms"] = rep.measure.size();
  j["mass"] = rep.mass;
  j["cost"] = rep.cost;
  j["scale"] = rep.scale;
  j["bound_mass"] = rep.bound_mass;
  j["bound_cost"] = rep.bound_cost;
  j["containment"] = containment_json(rep.containment);
  j["outer_ratio"] = rep.outer_ratio;
  j["support_error"] = rep.support_error;
  j["verdict"] = row.verdict;
  return j;
}

inline const std::vector<std::string>& dstar_header() {
  static const std::vector<std::string> h{"n",          "R",          "mass",       "cost",   "bound_mass",
                                          "bound_cost", "contain_lo", "contain_hi", "verdict"};
  return h;
}

inline void add_row(io::CsvWriter& csv, const TableRow& r) {
  csv.add(r.n, r.r, r.mass, r.cost, r.bound_mass, r.bound_cost, r.contain_lo, r.contain_hi, r.verdict);
}

}  // namespace detail

inline Result cmd_construct(const Options& o) {
  const std::string& which = detail::arg(o, 0, "sphere|uniform");
  auto cfg = detail::config(o, "construct " + which);
  ConstructionReport rep;
  TableRow row;
  if (which == "sphere") {
    const int n = detail::to_int(detail::arg(o, 1, "n"), "n");
    const std::size_t count = o.count.value_or(10000);
    rep = sphere_construction(n, count, o.seed, detail::net_for(o, n), o.tol.value_or(0.02));
    row = evaluate_dstar_Dstar(rep, ConvexBody::ball(n), std::sqrt(static_cast<double>(n)));
  } else if (which == "uniform") {
    ConvexBody body = detail::parse_body(detail::arg(o, 1, "body"));
    const double r = detail::to_double(detail::arg(o, 2, "R"), "R");
    const std::size_t count = o.count.value_or(200000);
    rep = uniform_body_construction(body, r, count, o.seed, detail::net_for(o, body.dim()), o.tol.value_or(1e-2));
    row = evaluate_dstar_Dstar(rep, body, r);
  } else {
    throw Error("construct: expected \"sphere\" or \"uniform\", got \"" + which + "\"");
  }
  const int code = row.verdict ? 0 : 1;
  if (detail::ends_with(o.out, ".csv")) {
    io::CsvWriter csv(cfg, detail::dstar_header());
    detail::add_row(csv, row);
    return {csv.str(), code};
  }
  auto j = detail::with_meta(cfg);
  j["report"] = detail::construction_json(rep, row);
  return detail::emit(j, code);
}

// ------------------------------------------------------- tail and Grunbaum

namespace detail {

inline Json estimate_json(const VolumeEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["samples"] = e.samples;
  return j;
}

/// Shared by tailbound and grunbaum: bound check with a 3 sigma guard and,
/// in the plane, the exact clipping oracle.
inline Result volume_command(const Options& o, const std::string& name, double r) {
  auto cfg = detail::config(o, name);
  ConvexBody body = parse_body(arg(o, 0, "body"));
  const std::size_t first_dir = name == "tailbound" ? 2 : 1;
  Vector u = o.args.size() > first_dir ? parse_vector(o.args[first_dir], "direction") : default_direction(body);
  require_dim(u, body.dim(), "direction");
  u /= u.norm();
  const std::size_t samples = o.count.value_or(1000000);
  const int n = body.dim();
  VolumeEstimate est = std::isinf(r) ? grunbaum_ratio(body, u, samples, o.seed)
                                     : tail_volume_ratio(body, u, r, samples, o.seed);
  const double bound = std::isinf(r) ? std::exp(-1.0) : tail_bound(n, r);
  const double guard = 3.0 * est.std_error;
  auto j = with_meta(cfg);
  j["body"] = io::body_to_json(body);
  j["direction"] = io::to_json(u);
  if (!std::isinf(r)) j["R"] = r;
  j["level"] = std::isinf(r) ? 0.0 : support(body, u) / r;
  j["estimate"] = estimate_json(est);
  j["bound"] = bound;
  const bool pass = est.value >= bound - guard;
  j["bound_pass"] = pass;
  bool agree = true;
  if (n == 2) {
    const double level = std::isinf(r) ? 0.0 : support(body, u) / r;
    const double exact = exact_cap_fraction_2d(body, u, level);
    agree = std::abs(exact - est.value) <= guard;
    j["exact"] = exact;
    j["exact_agrees"] = agree;
    j["exact_bound_pass"] = exact >= bound;
  }
  if (!std::isinf(r)) {
    // Sharper statement that survives the simplex case: the cap beyond
    // h/R contains the homothetic copy (1 - 1/R) of the Grunbaum half.
    j["corrected_bound"] = std::pow(1.0 - 1.0 / r, n) / std::exp(1.0);
  }
  return emit(j, pass && agree ? 0 : 1);
}

}  // namespace detail

inline Result cmd_tailbound(const Options& o) {
  const double r = detail::to_double(detail::arg(o, 1, "R"), "R");
  return detail::volume_command(o, "tailbound", r);
}

inline Result cmd_grunbaum(const Options& o) {
  return detail::volume_command(o, "grunbaum", std::numeric_limits<double>::infinity());
}

// --------------------------------------------------------------------- cert

inline Result cmd_cert(const Options& o) {
  const std::string& which = detail::arg(o, 0, "cross|ball");
  auto cfg = detail::config(o, "cert " + which);
  const int n = detail::to_int(detail::arg(o, 1, "n"), "n");
  Certificate c;
  if (which == "cross") {
    c = cross_polytope_certificate(n);
  } else if (which == "ball") {
    DirectionNet net = detail::net_for(o, n);
    c = ball_certificate(n, o.count.value_or(10000), o.seed, o.tol.value_or(0.02), &net);
  } else {
    throw Error("cert: expected \"cross\" or \"ball\", got \"" + which + "\"");
  }
  auto j = detail::with_meta(cfg);
  const auto body = io::certificate_to_json(c);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  if (which == "ball") j["closed_form_cost"] = ball_certificate_cost(n);
  return detail::emit(j, c.valid() ? 0 : 1);
}

// ------------------------------------------------------------- fvein-search

inline Result cmd_fvein_search(const Options& o) {
  auto cfg = detail::config(o, "fvein-search");
  ConvexBody body = detail::parse_body(detail::arg(o, 0, "body"));
  const int m = detail::to_int(detail::arg(o, 1, "m"), "m");
  SearchOptions opt;
  opt.seed = o.seed;
  if (o.count) opt.iterations = static_cast<int>(*o.count);
  if (o.tol) opt.tol = *o.tol;
  auto res = fvein_search(body, m, opt);
  auto j = detail::with_meta(cfg);
  j["found"] = res.found;
  if (res.found) {
    const auto cert = io::certificate_to_json(res.certificate);
    for (auto it = cert.begin(); it != cert.end(); ++it) j[it.key()] = it.value();
    io::Json gens = io::Json::array();
    for (const auto& g : res.generators) gens.push_back(io::to_json(g));
    j["generators"] = gens;
    j["cover_exact"] = res.cover.exact;
    j["cover_ratio"] = res.cover.exact_ratio;
    j["best_restart"] = res.best_restart;
    j["iterations"] = opt.iterations;
    j["restarts"] = opt.restarts;
  }
  return detail::emit(j, res.found ? 0 : 1);
}

// ---------------------------------------------------------- centroid energy

namespace detail {

/// Uniform probability on {+-e_i}.
inline DiscreteMeasure cross_family(int n) {
  DiscreteMeasure mu(n);
  for (int i = 0; i < n; ++i) {
    mu.add(unit(n, i), 1.0 / (2 * n));
    mu.add(-unit(n, i), 1.0 / (2 * n));
  }
  return mu;
}

inline DiscreteMeasure sphere_family(int n, std::size_t count, std::uint64_t seed) {
  return sample_sphere(n, 1.0, 1.0, count, seed);
}

/// max over the net of |h_{M(nu + delta_0)} - h_{Z_1(nu)} / 2| for nu the
/// symmetrization of mu.
inline double bridge_gap(const DiscreteMeasure& mu, const DirectionNet& net) {
  DiscreteMeasure nu = symmetrize(mu);
  DiscreteMeasure with_origin = nu;
  with_origin.add(Vector::Zero(mu.dim()), 1.0);
  Metronoid m(with_origin);
  auto h = msupport_net(m, net);
  double gap = 0.0;
  for (std::size_t k = 0; k < net.size(); ++k) gap = std::max(gap, std::abs(h[k] - 0.5 * centroid_support(nu, net[k])));
  return gap;
}

}  // namespace detail

inline Result cmd_centroid_energy(const Options& o) {
  auto cfg = detail::config(o, "centroid-energy");
  const std::string& spec = detail::arg(o, 0, "sphere|cross|measure");
  DiscreteMeasure mu(1);
  std::optional<double> closed;
  if (spec == "sphere" || spec == "cross") {
    const int n = detail::to_int(detail::arg(o, 1, "n"), "n");
    if (spec == "sphere") {
      mu = detail::sphere_family(n, o.count.value_or(10000), o.seed);
      closed = 1.0 / mean_abs_inner(n);
    } else {
      mu = detail::cross_family(n);
      closed = static_cast<double>(n);
    }
  } else {
    mu = detail::parse_measure(spec, o);
  }
  const int n = mu.dim();
  const double energy = centroid_energy(mu);
  const double gap = detail::bridge_gap(mu, DirectionNet::standard(n, o.seed, o.net.value_or(256)));
  auto j = detail::with_meta(cfg);
  j["n"] = n;
  j["atoms"] = mu.size();
  j["energy"] = energy;
  j["sqrt_n"] = std::sqrt(static_cast<double>(n));
  j["screen_pass"] = energy >= std::sqrt(static_cast<double>(n));
  if (closed) {
    j["closed_form"] = *closed;
    j["relative_error"] = std::abs(energy - *closed) / *closed;
  }
  j["bridge_gap"] = gap;
  j["bridge_holds"] = gap <= 1e-10;
  return detail::emit(j, gap <= 1e-10 ? 0 : 1);
}

// --------------------------------------------------------------- discretize

inline Result cmd_discretize(const Options& o) {
  auto cfg = detail::config(o, "discretize");
  DiscreteMeasure mu = detail::parse_measure(detail::arg(o, 0, "measure"), o);
  GridSpec grid;
  grid.eps = detail::to_double(detail::arg(o, 1, "eps"), "eps");
  double reach = 0.0;
  for (const auto& a : mu) reach = std::max(reach, a.x.lpNorm<Eigen::Infinity>());
  grid.range = o.args.size() > 2 ? detail::to_double(o.args[2], "range") : std::max(1.0, std::ceil(reach));
  grid.resolution = o.args.size() > 3 ? detail::to_int(o.args[3], "resolution")
                                      : required_resolution(mu.dim(), total_mass(mu), grid.eps);
  auto d = discretize_grid_full(mu, grid);
  Metronoid before(mu), snapped(d.snapped), after(d.measure);
  DirectionNet net = detail::net_for(o, mu.dim());
  const double e = grid.eps;
  std::size_t violations = 0, nested = 0;
  for (const auto& th : net) {
    const double h = msupport(before, th), hs = msupport(snapped, th), ho = msupport(after, th);
    if (hs < (1 - 2 * e) * h - 1e-12 || hs > (1 + 2 * e) * h + 1e-12) ++violations;
    if (ho < h - 1e-12 || ho > (1 + 2 * e) / (1 - 2 * e) * h + 1e-12) ++nested;
  }
  auto j = detail::with_meta(cfg);
  j["range"] = grid.range;
  j["resolution"] = grid.resolution;
  j["eps"] = grid.eps;
  j["mass_in"] = total_mass(mu);
  j["mass_out"] = total_mass(d.measure);
  j["net_size"] = net.size();
  j["snapped_violations"] = violations;
  j["rescaled_violations"] = nested;
  j["measure"] = io::measure_to_json(d.measure);
  return detail::emit(j, violations == 0 && nested == 0 ? 0 : 1);
}

// ------------------------------------------------------------------- tables

inline std::string table_dstar(const Options& o, const io::RunConfig& cfg) {
  io::CsvWriter csv(cfg, detail::dstar_header());
  // Rows: cube then cross-polytope for n = 2, 3 and R in {2, n}; then the
  // sphere construction for n = 2, 3 at R = sqrt(n).
  for (const char* kind : {"cube", "cross"}) {
    for (int n : {2, 3}) {
      std::vector<double> rs{2.0};
      if (n != 2) rs.push_back(static_cast<double>(n));
      for (double r : rs) {
        ConvexBody body = std::string(kind) == "cube" ? ConvexBody::cube(n) : ConvexBody::cross_polytope(n);
        auto rep = uniform_body_construction(body, r, o.count.value_or(200000), o.seed, detail::net_for(o, n),
                                             o.tol.value_or(1e-2));
        detail::add_row(csv, evaluate_dstar_Dstar(rep, body, r));
      }
    }
  }
  for (int n : {2, 3}) {
    auto rep = sphere_construction(n, o.count.value_or(10000), o.seed, detail::net_for(o, n), o.tol.value_or(0.02));
    detail::add_row(csv, evaluate_dstar_Dstar(rep, ConvexBody::ball(n), std::sqrt(static_cast<double>(n))));
  }
  return csv.str();
}

inline std::string table_fvein(const io::RunConfig& cfg) {
  io::CsvWriter csv(cfg, {"n", "exact", "ball_cost", "sqrt_2pin"});
  for (int n : {1, 2, 3, 4, 5, 6, 7, 8, 10, 50, 100}) {
    const double exact = n <= 8 ? cross_polytope_certificate(n).cost
                                : transport_cost(cross_polytope_measure(n), ConvexBody::cross_polytope(n));
    csv.add(n, exact, ball_certificate_cost(n), std::sqrt(2.0 * std::numbers::pi * n));
  }
  return csv.str();
}

inline std::string table_centroid(const Options& o, const io::RunConfig& cfg) {
  io::CsvWriter csv(cfg, {"n", "family", "energy", "sqrt_n"});
  for (int n = 2; n <= 8; ++n) {
    const double rn = std::sqrt(static_cast<double>(n));
    csv.add(n, "sphere", centroid_energy(detail::sphere_family(n, o.count.value_or(10000), o.seed)), rn);
    csv.add(n, "cross", centroid_energy(detail::cross_family(n)), rn);
  }
  return csv.str();
}

inline Result cmd_tables(const Options& o) {
  const std::string suite = o.args.empty() ? o.suite : o.args[0];
  auto cfg = detail::config(o, "tables");
  cfg.params["suite"] = suite;
  if (suite == "dstar") return {table_dstar(o, cfg), 0};
  if (suite == "fvein") return {table_fvein(cfg), 0};
  if (suite == "centroid-energy") return {table_centroid(o, cfg), 0};
  throw Error("tables: unknown suite \"" + suite + "\" (dstar, fvein, centroid-energy)");
}

inline Result cmd_verify(const Options& o) {
  auto cfg = detail::config(o, "verify");
  auto report = run_verify(o.suite, o.seed, o.cases);
  auto j = detail::with_meta(cfg);
  j["pass"] = report.pass;
  j["suites"] = report.json;
  return detail::emit(j, report.pass ? 0 : 1);
}

inline Result run(const Options& o) {
  const std::string& c = o.command;
  if (c == "support") return cmd_support(o);
  if (c == "member") return cmd_member(o);
  if (c == "vertices") return cmd_vertices(o);
  if (c == "figure") return cmd_figure(o);
  if (c == "construct") return cmd_construct(o);
  if (c == "tailbound") return cmd_tailbound(o);
  if (c == "grunbaum") return cmd_grunbaum(o);
  if (c == "cert") return cmd_cert(o);
  if (c == "fvein-search") return cmd_fvein_search(o);
  if (c == "centroid-energy") return cmd_centroid_energy(o);
  if (c == "discretize") return cmd_discretize(o);
  if (c == "tables") return cmd_tables(o);
  if (c == "verify") return cmd_verify(o);
  throw Error("unknown command \"" + c + "\"");
}

}  // namespace metronoid::cli
