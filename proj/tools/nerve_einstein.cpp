// Command-line pipeline: isotropy data, subalgebra lattice, flag complex
// homology with a contractibility certificate, and an Einstein metric search
// for compact homogeneous spaces assembled from classical groups.
//
// Exit codes: 0 success, 2 config parse error, 3 unsupported space,
// 4 resource cap exceeded.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "nerve/report.hpp"

using namespace nerve;

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::ConfigError: return 2;
    case Errc::TooManySummands:
    case Errc::ComplexTooLarge: return 4;
    default: return 3;
  }
}

struct Cli {
  std::string command;
  std::string configPath;
  std::uint64_t seed = 1;
  double tMax = 200.0;
  std::string outPath;
  std::string format = "json";
  std::string facetsPath;
  int node = 0;
  int samples = 201;
  double curveTMax = 20.0;
};

std::pair<SpaceConfig, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ConfigError, "cannot open config '" + path + "'");
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Json j;
  try {
    j = Json::parse(raw);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ConfigError, std::string("json parse: ") + e.what());
  }
  return {parse_config(j), raw};
}

void emit(const Cli& cli, const AnalysisResult& res, std::uint64_t hash) {
  Json j = report_json(res, hash, cli.seed);
  if (!cli.outPath.empty()) {
    std::ofstream out(cli.outPath);
    out << j.dump(2) << "\n";
    std::cout << report_text(res);
  } else if (cli.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << report_text(res);
  }
}

int run_curve(const Cli& cli) {
  auto [cfg, raw] = load_config(cli.configPath);
  HomogeneousSpace space = build_space(cfg);
  auto poset = enumerate_intermediate(space);
  if (cli.node < 0 || cli.node >= int(poset.nodes.size()))
    fail(Errc::FlagNotInPoset, "curve --node out of range (lattice has " +
                                   std::to_string(poset.nodes.size()) + " nodes)");
  std::vector<double> grid;
  for (int i = 0; i < cli.samples; ++i) grid.push_back(cli.curveTMax * i / double(cli.samples - 1));
  auto asym = canonical_asymptotics(space, poset.nodes[cli.node].indexSet, grid);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!cli.outPath.empty()) {
    file.open(cli.outPath);
    os = &file;
  }
  (*os) << "t,sc";
  for (int i = 0; i < space.ell(); ++i) (*os) << ",r_" << (i + 1);
  (*os) << "\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Metric m = geodesic_metric(space, asym.v, grid[k]);
    auto rep = ricci_eigenvalues(space, m);
    (*os) << grid[k] << "," << asym.sc[k];
    for (int i = 0; i < space.ell(); ++i) (*os) << "," << rep.r[i];
    (*os) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nerve-einstein: invariant Einstein metrics on compact homogeneous spaces"};
  Cli cli;
  app.add_option("command", cli.command, "describe | lattice | homology | einstein | curve | report")
      ->required();
  app.add_option("config", cli.configPath, "JSON space configuration")->required();
  app.add_option("--seed", cli.seed, "search seed");
  app.add_option("--t-max", cli.tMax, "flow time horizon");
  app.add_option("--out", cli.outPath, "artifact output path");
  app.add_option("--format", cli.format, "json | text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--facets", cli.facetsPath, "export the flag complex facet list");
  app.add_option("--node", cli.node, "curve: lattice node index");
  app.add_option("--samples", cli.samples, "curve: sample count");
  app.add_option("--curve-t-max", cli.curveTMax, "curve: parameter range upper end");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    if (cli.command == "curve") return run_curve(cli);
    PipelineOptions opts;
    opts.seed = cli.seed;
    opts.tMax = cli.tMax;
    if (cli.command == "describe") {
      opts.runLattice = opts.runHomology = opts.runSolver = false;
    } else if (cli.command == "lattice") {
      opts.runHomology = opts.runSolver = false;
    } else if (cli.command == "homology") {
      opts.runSolver = false;
    } else if (cli.command == "einstein") {
      opts.runHomology = false;
    } else if (cli.command != "report") {
      std::cerr << "unknown command '" << cli.command << "'\n";
      return 2;
    }
    auto [cfg, raw] = load_config(cli.configPath);
    AnalysisResult res = run_pipeline(cfg, opts);
    if (!cli.facetsPath.empty() && res.complex) {
      std::ofstream f(cli.facetsPath);
      write_facets(f, *res.complex);
    }
    emit(cli, res, fnv1a64(raw));
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
