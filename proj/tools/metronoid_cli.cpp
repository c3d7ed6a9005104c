#include "metronoid/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

int main(int argc, char** argv) {
  using namespace metronoid;
  CLI::App app{"Metronoids of discrete measures: support, membership, certificates, tables."};
  app.set_version_flag("--version", std::string(kVersion));

  cli::Options o;
  std::size_t count = 0;
  int net = 0, cases = 0;
  double tol = 0.0;
  app.add_option("command", o.command,
                 "support | member | vertices | figure | construct | tailbound | grunbaum | cert | fvein-search | "
                 "centroid-energy | discretize | tables | verify")
      ->required();
  app.add_option("args", o.args, "command arguments (measure/body specs, directions, sizes)");
  app.add_option("--seed", o.seed, "RNG seed");
  auto* count_opt = app.add_option("--count", count, "atom / sample / iteration budget");
  auto* net_opt = app.add_option("--net", net, "direction net size");
  auto* tol_opt = app.add_option("--tol", tol, "tolerance override");
  app.add_option("--out", o.out, "output file (.csv selects CSV where supported)");
  app.add_flag("--oracle", o.oracle, "cross-check against the LP oracle");
  app.add_option("--suite", o.suite, "verify / tables suite");
  auto* cases_opt = app.add_option("--cases", cases, "random cases per verify property");
  app.footer(
      "Bodies: ball:n[:r], cube:n[:r], cross:n[:r], simplex:n, or a body JSON file.\n"
      "Measures: cross:n, origin-cross:k, dirac:x1,..,xn, sphere:n[:mass], or a measure or sampler JSON file.\n"
      "METRONOID_THREADS caps the worker count; results do not depend on it.");
  CLI11_PARSE(app, argc, argv);
  if (*count_opt) o.count = count;
  if (*net_opt) o.net = net;
  if (*tol_opt) o.tol = tol;
  if (*cases_opt) o.cases = cases;

  try {
    auto res = cli::run(o);
    if (!o.out.empty() && o.out != "-") {
      io::write_file(o.out, res.text);
    } else {
      std::fwrite(res.text.data(), 1, res.text.size(), stdout);
    }
    return res.code;
  } catch (const std::exception& e) {
    std::cerr << "metronoid " << o.command << ": " << e.what() << "\n";
    return 2;
  }
}
