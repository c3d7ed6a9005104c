#pragma once

// JSON, CSV and SVG input/output. Numbers are written with %.17g so that
// every double round-trips; the JSON emitter is custom for that reason.

#include "metronoid/vertex_index.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace metronoid::io {

using Json = nlohmann::ordered_json;

class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  ParseError(const std::string& source, const std::string& path, const std::string& what)
      : Error(source + ": " + (path.empty() ? std::string() : path + ": ") + what) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

// Short arrays of scalars stay on one line.
inline bool is_flat(const Json& j) {
  if (!j.is_array() || j.size() > 16) return false;
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

inline void dump_into(std::string& out, const Json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::null: out += "null"; break;
    case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case Json::value_t::number_float: {
      double x = j.get<double>();
      // JSON has no infinities; they travel as strings.
      if (std::isfinite(x)) {
        out += format_double(x);
      } else {
        escape_into(out, format_double(x));
      }
      break;
    }
    case Json::value_t::string: escape_into(out, j.get_ref<const std::string&>()); break;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      const bool flat = is_flat(j);
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_into(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        escape_into(out, it.key());
        out += indent < 0 ? ":" : ": ";
        dump_into(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      break;
    }
    default: throw Error("json: cannot serialize value");
  }
}

}  // namespace detail

inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_into(out, j, indent, 0);
  if (indent >= 0) out += '\n';
  return out;
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

/// Doubles that may be infinite, as read back from `dump`.
inline double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error("expected a number");
}

// ---------------------------------------------------------------------------
// Run metadata

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string output;
  std::uint64_t seed = 0;
  Json params = Json::object();  // counts, net sizes, tolerance overrides

  Json to_json() const {
    Json j;
    j["program"] = "metronoid";
    j["version"] = kVersion;
    j["command"] = command;
    j["inputs"] = inputs;
    j["output"] = output;
    j["seed"] = seed;
    j["params"] = params;
    return j;
  }
};

// ---------------------------------------------------------------------------
// Parsing

inline Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at ..." prefix.
    if (auto p = what.find(": "); p != std::string::npos) what = what.substr(p + 2);
    throw ParseError(source, line, col, what);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

namespace detail {

struct Reader {
  std::string source;

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ParseError(source, path, what);
  }
  const Json& field(const Json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing field \"") + key + "\"");
    return *it;
  }
  double number(const Json& j, const std::string& path) const {
    try {
      return number_from_json(j);
    } catch (const Error&) {
      fail(path, "expected a number");
    }
  }
  int integer(const Json& j, const std::string& path) const {
    if (!j.is_number_integer() && !j.is_number_unsigned()) fail(path, "expected an integer");
    return j.get<int>();
  }
  Vector vec(const Json& j, const std::string& path, int n) const {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    if (n >= 0 && static_cast<int>(j.size()) != n)
      fail(path, "expected " + std::to_string(n) + " coordinates, got " + std::to_string(j.size()));
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
      if (!std::isfinite(v(static_cast<Eigen::Index>(i)))) fail(path, "non-finite coordinate");
    }
    return v;
  }
};

}  // namespace detail

inline ConvexBody body_from_json(const Json& j, const std::string& source = "body") {
  detail::Reader r{source};
  const auto& type = r.field(j, "", "type");
  if (!type.is_string()) r.fail("type", "expected a string");
  BodyKind kind;
  try {
    kind = body_kind_from_string(type.get<std::string>());
  } catch (const Error& e) {
    r.fail("type", e.what());
  }
  const int n = r.integer(r.field(j, "", "dim"), "dim");
  if (n < 1) r.fail("dim", "must be >= 1");
  try {
    if (kind == BodyKind::Ball || kind == BodyKind::Cube || kind == BodyKind::CrossPolytope) {
      double radius = 1.0;
      if (j.contains("radius")) radius = r.number(j["radius"], "radius");
      if (!(radius > 0.0) || !std::isfinite(radius)) r.fail("radius", "must be positive and finite");
      if (kind == BodyKind::Ball) return ConvexBody::ball(n, radius);
      if (kind == BodyKind::Cube) return ConvexBody::cube(n, radius);
      return ConvexBody::cross_polytope(n, radius);
    }
    const auto& pts = r.field(j, "", "points");
    if (!pts.is_array() || pts.empty()) r.fail("points", "expected a non-empty array");
    std::vector<Vector> v;
    for (std::size_t i = 0; i < pts.size(); ++i) v.push_back(r.vec(pts[i], "points[" + std::to_string(i) + "]", n));
    return ConvexBody::from_points(kind, v);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    r.fail("", e.what());
  }
}

inline Json body_to_json(const ConvexBody& b) {
  Json j;
  j["type"] = to_string(b.kind());
  j["dim"] = b.dim();
  if (b.is_analytic()) {
    j["radius"] = b.radius();
  } else {
    Json pts = Json::array();
    for (Eigen::Index c = 0; c < b.points().cols(); ++c) pts.push_back(to_json(Vector(b.points().col(c))));
    j["points"] = pts;
  }
  return j;
}

inline DiscreteMeasure measure_from_json(const Json& j, const std::string& source = "measure") {
  detail::Reader r{source};
  const int n = r.integer(r.field(j, "", "dim"), "dim");
  if (n < 1) r.fail("dim", "must be >= 1");
  const auto& atoms = r.field(j, "", "atoms");
  if (!atoms.is_array()) r.fail("atoms", "expected an array");
  DiscreteMeasure mu(n);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string at = "atoms[" + std::to_string(i) + "]";
    Vector x = r.vec(r.field(atoms[i], at, "x"), at + ".x", n);
    double w = r.number(r.field(atoms[i], at, "w"), at + ".w");
    if (!(w > 0.0) || !std::isfinite(w)) r.fail(at + ".w", "weight must be positive and finite, got " + format_double(w));
    mu.add(std::move(x), w);
  }
  return mu;
}

inline Json measure_to_json(const DiscreteMeasure& mu) {
  Json j;
  j["dim"] = mu.dim();
  Json atoms = Json::array();
  for (const auto& a : mu) {
    Json e;
    e["x"] = to_json(a.x);
    e["w"] = a.w;
    atoms.push_back(e);
  }
  j["atoms"] = atoms;
  return j;
}

inline SamplerSpec sampler_from_json(const Json& j, const std::string& source = "sampler") {
  detail::Reader r{source};
  SamplerSpec s;
  const auto& kind = r.field(j, "", "kind");
  if (kind == "sphere_uniform") {
    s.kind = SamplerKind::SphereUniform;
  } else if (kind == "body_uniform") {
    s.kind = SamplerKind::BodyUniform;
  } else {
    r.fail("kind", "expected \"sphere_uniform\" or \"body_uniform\"");
  }
  if (j.contains("dim")) s.dim = r.integer(j["dim"], "dim");
  if (j.contains("radius")) s.radius = r.number(j["radius"], "radius");
  if (j.contains("total_mass")) s.total_mass = r.number(j["total_mass"], "total_mass");
  if (j.contains("body")) s.body = body_from_json(j["body"], source + ": body");
  if (j.contains("scale")) s.scale = r.number(j["scale"], "scale");
  if (j.contains("count")) {
    int c = r.integer(j["count"], "count");
    if (c < 1) r.fail("count", "must be >= 1");
    s.count = static_cast<std::size_t>(c);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) r.fail("seed", "expected an integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (s.kind == SamplerKind::BodyUniform && !s.body) r.fail("", "body_uniform needs a \"body\"");
  if (s.body) s.dim = s.body->dim();
  return s;
}

inline Json sampler_to_json(const SamplerSpec& s) {
  Json j;
  j["kind"] = s.kind == SamplerKind::SphereUniform ? "sphere_uniform" : "body_uniform";
  j["dim"] = s.dim;
  j["radius"] = s.radius;
  j["total_mass"] = s.total_mass;
  if (s.body) j["body"] = body_to_json(*s.body);
  j["scale"] = s.scale;
  j["count"] = s.count;
  j["seed"] = s.seed;
  return j;
}

inline Json certificate_to_json(const Certificate& c) {
  Json j;
  j["body"] = body_to_json(c.body);
  j["measure"] = measure_to_json(c.measure);
  j["cost"] = c.cost;
  j["kind"] = to_string(c.kind);
  j["net_size"] = c.verified.net_size;
  j["worst_slack"] = c.verified.worst_slack;
  j["verified"] = c.valid();
  return j;
}

inline Certificate certificate_from_json(const Json& j, const std::string& source = "certificate") {
  detail::Reader r{source};
  Certificate c;
  c.body = body_from_json(r.field(j, "", "body"), source + ": body");
  c.measure = measure_from_json(r.field(j, "", "measure"), source + ": measure");
  c.cost = r.number(r.field(j, "", "cost"), "cost");
  const auto& kind = r.field(j, "", "kind");
  if (kind == "exact") {
    c.kind = CertificateKind::Exact;
  } else if (kind == "sampled") {
    c.kind = CertificateKind::Sampled;
  } else {
    r.fail("kind", "expected \"exact\" or \"sampled\"");
  }
  if (j.contains("net_size")) c.verified.net_size = j["net_size"].get<std::size_t>();
  if (j.contains("worst_slack")) c.verified.worst_slack = r.number(j["worst_slack"], "worst_slack");
  return c;
}

// ---------------------------------------------------------------------------
// CSV. The first line is "# " followed by the run metadata as one-line JSON.

class CsvWriter {
 public:
  CsvWriter(const RunConfig& cfg, std::vector<std::string> header) : columns_(header.size()) {
    out_ = "# " + dump(cfg.to_json(), -1) + "\n";
    row(header);
  }

  template <class... Cells>
  void add(const Cells&... cells) {
    row({cell(cells)...});
  }

  void row(const std::vector<std::string>& cells) {
    require(cells.size() == columns_, "csv: row has the wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }

  const std::string& str() const { return out_; }

  static std::string cell(double x) { return format_double(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "pass" : "fail"; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(const std::string& s) { return s; }

 private:
  std::size_t columns_;
  std::string out_;
};

// ---------------------------------------------------------------------------
// SVG figure of a planar measure: hull of the atoms (red), the one-sided
// zonotope of the weighted atoms (blue) and M(mu) (purple).

struct FigureLayers {
  Polygon hull;
  Polygon zonotope;
  Polygon metronoid;
};

inline Polygon zonotope_polygon_2d(const DiscreteMeasure& mu) {
  std::vector<Vector> gens;
  for (const auto& a : mu) {
    if (!is_origin(a.x)) gens.push_back(a.w * a.x);
  }
  if (gens.empty()) return {Eigen::Vector2d::Zero()};
  return polygon_of(ConvexBody::zonotope_one_sided(gens));
}

inline FigureLayers figure_layers(const DiscreteMeasure& mu) {
  require(mu.dim() == 2, "figure: measure must be planar (n = 2)");
  FigureLayers f;
  std::vector<Eigen::Vector2d> xs;
  for (const auto& a : mu) xs.emplace_back(a.x(0), a.x(1));
  f.hull = convex_hull_2d(xs);
  f.zonotope = zonotope_polygon_2d(mu);
  for (const auto& v : vertices_sweep_2d(Metronoid(mu))) f.metronoid.emplace_back(v(0), v(1));
  return f;
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string svg_shape(const Polygon& p, const char* color, double stroke, double dot) {
  auto pt = [](const Eigen::Vector2d& v) { return format_double(v.x()) + "," + format_double(-v.y()); };
  std::string s;
  if (p.size() == 1) {
    s = "<circle cx=\"" + format_double(p[0].x()) + "\" cy=\"" + format_double(-p[0].y()) + "\" r=\"" +
        format_double(dot) + "\" fill=\"" + color + "\"/>";
  } else if (p.size() == 2) {
    s = "<polyline points=\"" + pt(p[0]) + " " + pt(p[1]) + "\" fill=\"none\" stroke=\"" + color +
        "\" stroke-width=\"" + format_double(stroke) + "\"/>";
  } else {
    s = "<polygon points=\"";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + pt(p[i]);
    s += std::string("\" fill=\"") + color + "\" fill-opacity=\"0.25\" stroke=\"" + color + "\" stroke-width=\"" +
         format_double(stroke) + "\"/>";
  }
  return s;
}

}  // namespace detail

inline std::string figure_svg(const FigureLayers& f, const RunConfig& cfg) {
  double lo_x = metronoid::detail::kInf, lo_y = metronoid::detail::kInf, hi_x = -metronoid::detail::kInf, hi_y = -metronoid::detail::kInf;
  for (const Polygon* p : {&f.hull, &f.zonotope, &f.metronoid}) {
    for (const auto& v : *p) {
      lo_x = std::min(lo_x, v.x());
      hi_x = std::max(hi_x, v.x());
      lo_y = std::min(lo_y, -v.y());
      hi_y = std::max(hi_y, -v.y());
    }
  }
  double w = hi_x - lo_x, h = hi_y - lo_y;
  double span = std::max({w, h, 1e-3});
  if (w <= 0.0) w = span;
  if (h <= 0.0) h = span;
  const double mx = 0.1 * w, my = 0.1 * h;
  const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
  const double vx = cx - 0.5 * w - mx, vy = cy - 0.5 * h - my, vw = w + 2.0 * mx, vh = h + 2.0 * my;
  const double stroke = 0.004 * span, dot = 0.015 * span;

  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + format_double(vx) + " " + format_double(vy) + " " +
       format_double(vw) + " " + format_double(vh) + "\">\n";
  s += "<metadata>" + detail::xml_escape(dump(cfg.to_json(), -1)) + "</metadata>\n";
  s += "<g id=\"hull\">" + detail::svg_shape(f.hull, "red", stroke, dot) + "</g>\n";
  s += "<g id=\"zonotope\">" + detail::svg_shape(f.zonotope, "blue", stroke, dot) + "</g>\n";
  s += "<g id=\"metronoid\">" + detail::svg_shape(f.metronoid, "purple", stroke, dot) + "</g>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace metronoid::io
