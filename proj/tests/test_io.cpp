#include "metronoid.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <numbers>

using namespace metronoid;

namespace {

cli::Options opts(std::string command, std::vector<std::string> args) {
  cli::Options o;
  o.command = std::move(command);
  o.args = std::move(args);
  return o;
}

}  // namespace

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(-0.0), "0");
  EXPECT_EQ(io::format_double(2.0), "2");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(std::strtod(io::format_double(std::numbers::pi).c_str(), nullptr), std::numbers::pi);
}

TEST(Json, MeasureRoundTrip) {
  DiscreteMeasure mu(2);
  mu.add(make_vector({0.1, -1.0 / 3.0}), 0.7);
  mu.add(make_vector({1e-300, 5.0}), 1.0 / 7.0);
  auto back = io::measure_from_json(io::parse_json(io::dump(io::measure_to_json(mu)), "t"));
  ASSERT_EQ(back.size(), mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    EXPECT_EQ(back[i].x, mu[i].x);
    EXPECT_EQ(back[i].w, mu[i].w);
  }
}

TEST(Json, BodyRoundTrip) {
  std::vector<ConvexBody> bodies{ConvexBody::ball(3, 2.5), ConvexBody::cube(2), ConvexBody::cross_polytope(4),
                                 centered_simplex(2),
                                 ConvexBody::zonotope_symmetric({make_vector({1.0, 0.2}), make_vector({0.0, 1.0})})};
  for (const auto& b : bodies) {
    auto back = io::body_from_json(io::parse_json(io::dump(io::body_to_json(b)), "t"));
    EXPECT_EQ(back.kind(), b.kind());
    EXPECT_EQ(back.dim(), b.dim());
    const Vector th = Vector::LinSpaced(b.dim(), 0.3, 1.1);
    EXPECT_EQ(support(back, th), support(b, th));
  }
}

TEST(Json, SamplerAndCertificate) {
  auto s = io::sampler_from_json(io::parse_json(
      R"({"kind": "body_uniform", "body": {"type": "cube", "dim": 2}, "scale": 2, "count": 100, "seed": 3})", "t"));
  EXPECT_EQ(s.kind, SamplerKind::BodyUniform);
  EXPECT_EQ(s.dim, 2);
  EXPECT_EQ(total_mass(sample(s)), std::exp(2.0));
  auto again = io::sampler_from_json(io::sampler_to_json(s));
  EXPECT_EQ(io::dump(io::sampler_to_json(again)), io::dump(io::sampler_to_json(s)));

  auto cert = cross_polytope_certificate(2);
  auto j = io::certificate_to_json(cert);
  for (const char* key : {"body", "measure", "cost", "kind", "net_size", "worst_slack"}) EXPECT_TRUE(j.contains(key));
  auto back = io::certificate_from_json(j);
  EXPECT_EQ(back.cost, 4.0);
  EXPECT_EQ(back.kind, CertificateKind::Exact);
}

TEST(Json, ParseErrorsCarryLines) {
  try {
    io::parse_json("{\n  \"dim\": 2,\n  \"atoms\": [\n    {\"x\": [1, 2] \"w\": 1}\n  ]\n}", "m.json");
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_NE(std::string(e.what()).find("m.json:4:"), std::string::npos);
  }
}

TEST(Json, NegativeWeightRejected) {
  auto j = io::parse_json(R"({"dim": 1, "atoms": [{"x": [1], "w": 2}, {"x": [0.5], "w": -0.25}]})", "bad");
  try {
    io::measure_from_json(j, "bad.json");
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("atoms[1].w"), std::string::npos);
  }
  EXPECT_THROW(io::measure_from_json(io::parse_json(R"({"dim": 2, "atoms": [{"x": [1], "w": 1}]})", "t")),
               io::ParseError);
  EXPECT_THROW(io::body_from_json(io::parse_json(R"({"type": "blob", "dim": 2})", "t")), io::ParseError);
}

TEST(Csv, HeaderAndMetadata) {
  io::RunConfig cfg;
  cfg.command = "tables";
  cfg.seed = 9;
  io::CsvWriter csv(cfg, {"a", "b"});
  csv.add(1, 0.5);
  const std::string& s = csv.str();
  EXPECT_EQ(s.rfind("# {", 0), 0u);
  EXPECT_NE(s.find("\"seed\":9"), std::string::npos);
  EXPECT_NE(s.find("\na,b\n1,0.5\n"), std::string::npos);
  EXPECT_THROW(csv.add(1), Error);
}

TEST(Svg, ThreeColouredLayers) {
  cli::Options o = opts("figure", {"origin-cross:0.25"});
  auto r = cli::run(o);
  EXPECT_EQ(r.code, 0);
  for (const char* c : {"red", "blue", "purple", "<metadata>", "viewBox"}) EXPECT_NE(r.text.find(c), std::string::npos);
  EXPECT_EQ(r.text, cli::run(o).text);
  EXPECT_THROW(cli::run(opts("figure", {"cross:3"})), Error);
}

TEST(Svg, CrossPolytopeLayersCoincide) {
  DiscreteMeasure mu(2);
  for (int i = 0; i < 2; ++i) {
    mu.add(unit(2, i), 1.0);
    mu.add(-unit(2, i), 1.0);
  }
  auto f = io::figure_layers(mu);
  EXPECT_NEAR(polygon_area(f.metronoid), 2.0, 1e-12);
  EXPECT_NEAR(polygon_area(f.hull), 2.0, 1e-12);
}

TEST(Cli, SupportRowsAndOracle) {
  auto o = opts("support", {"cross:2", "1,0"});
  o.oracle = true;
  auto r = cli::run(o);
  EXPECT_EQ(r.code, 0);
  auto j = io::parse_json(r.text, "out");
  EXPECT_EQ(j["meta"]["command"], "support");
  EXPECT_EQ(j["rows"][0]["h"].get<double>(), 1.0);
  EXPECT_TRUE(j["rows"][0]["agree"].get<bool>());
}

TEST(Cli, EveryOutputCarriesMetadata) {
  std::vector<cli::Options> runs{opts("member", {"cross:2", "0.5,0"}), opts("vertices", {"cross:2"}),
                                 opts("cert", {"cross", "3"}), opts("grunbaum", {"ball:2"})};
  runs.back().count = 20000;
  for (auto& o : runs) {
    o.seed = 4;
    auto r = cli::run(o);
    auto j = io::parse_json(r.text, o.command);
    EXPECT_EQ(j["meta"]["seed"], 4) << o.command;
    EXPECT_EQ(j["meta"]["version"], kVersion) << o.command;
    EXPECT_EQ(r.text, cli::run(o).text) << o.command;
  }
}

TEST(Cli, TablesFveinRow) {
  auto o = opts("tables", {"fvein"});
  auto r = cli::run(o);
  EXPECT_NE(r.text.find("\nn,exact,ball_cost,sqrt_2pin\n"), std::string::npos);
  EXPECT_NE(r.text.find("\n3,6,3.9999999999999991,4.3416075273496055\n"), std::string::npos) << r.text;
  EXPECT_THROW(cli::run(opts("tables", {"nope"})), Error);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  auto o = opts("verify", {});
  o.suite = "metronoid";
  o.cases = 10;
  set_max_threads(1);
  auto a = cli::run(o).text;
  set_max_threads(4);
  auto b = cli::run(o).text;
  set_max_threads(0);
  EXPECT_EQ(a, b);
}

TEST(Cli, UnknownCommand) { EXPECT_THROW(cli::run(opts("frobnicate", {})), Error); }
