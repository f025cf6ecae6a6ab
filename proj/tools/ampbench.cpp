#include "ampbench/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

namespace {

// Writes to --out when given, stdout otherwise.
struct OutputSink {
  std::ofstream file;
  std::ostream& stream(const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
  }
};

void apply_thread_cap() {
  if (const char* env = std::getenv("AMPBENCH_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"amplification limits for Gaussian-distributed coherent states"};
  app.require_subcommand(1);

  double lambda = 0.4;
  double eta = 1.3;
  double eta_min = 0.0, eta_max = 2.8;
  int eta_steps = 141;
  bool conjugate = false;
  double g = -1.0;
  int N = 60;
  int grid_order = 48;
  int mc_samples = 0;
  std::uint64_t seed = 0;
  std::string input, out, format;
  app.add_option("--lambda", lambda, "prior inverse width");
  app.add_option("--eta", eta, "target gain (eta' for figure 1a)");
  app.add_option("--eta-min", eta_min);
  app.add_option("--eta-max", eta_max);
  app.add_option("--eta-steps", eta_steps);
  app.add_flag("--conjugate", conjugate, "phase-conjugation task");
  app.add_option("--g", g, "filter gain (<= 0 selects the optimal gain)");
  app.add_option("--N", N, "filter cutoff");
  app.add_option("--grid-order", grid_order, "Gauss-Hermite order per axis");
  app.add_option("--mc-samples", mc_samples, "Monte Carlo grid instead of quadrature");
  app.add_option("--seed", seed);
  app.add_option("--input", input, "input file (certify)");
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  std::string which = "1b";
  CLI::App* cmd_figure = app.add_subcommand("figure", "emit figure data (CSV)");
  cmd_figure->add_option("--which", which)->check(CLI::IsMember({"1a", "1b"}));
  CLI::App* cmd_bounds = app.add_subcommand("bounds", "tabulate bounds (JSON)");
  CLI::App* cmd_nla = app.add_subcommand("nla-sweep", "filter convergence sweep (CSV)");
  std::string suite = "all";
  CLI::App* cmd_verify = app.add_subcommand("verify", "run property suites (JSON)");
  cmd_verify->add_option("--suite", suite)
      ->check(CLI::IsMember({"all", "theorem1", "gaussian", "nla", "epr", "backends"}));
  CLI::App* cmd_certify =
      app.add_subcommand("certify", "certify homodyne samples (JSON)");
  for (CLI::App* cmd : {cmd_figure, cmd_bounds, cmd_nla, cmd_verify, cmd_certify})
    cmd->fallthrough();  // shared numeric/IO flags live on the parent

  CLI11_PARSE(app, argc, argv);

  try {
    bool want_csv = cmd_figure->parsed() || cmd_nla->parsed();
    if (!format.empty() && format != (want_csv ? "csv" : "json"))
      throw std::runtime_error("unsupported --format for this command");

    OutputSink sink;
    std::ostream& os = sink.stream(out);
    if (cmd_figure->parsed()) {
      if (which == "1a")
        ampbench::cli::run_figure_1a(os, eta, lambda);
      else
        ampbench::cli::run_figure_1b(os, lambda, {eta_min, eta_max, eta_steps});
    } else if (cmd_bounds->parsed()) {
      os << ampbench::cli::bounds_table(lambda, eta, conjugate).dump(2) << '\n';
    } else if (cmd_nla->parsed()) {
      ampbench::cli::run_nla_sweep(os, g, N, lambda, eta);
    } else if (cmd_verify->parsed()) {
      return ampbench::cli::run_verify(os, suite, seed);
    } else if (cmd_certify->parsed()) {
      if (input.empty()) throw std::runtime_error("certify requires --input");
      std::ifstream is(input, std::ios::binary);
      if (!is) throw std::runtime_error("cannot open input file: " + input);
      return ampbench::cli::run_certify(is, os, lambda);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
