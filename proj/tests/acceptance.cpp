// End-to-end acceptance checks; one pass/fail line per criterion.
#include "ampbench/cli.hpp"
#include "ampbench/verify.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace ampbench;

namespace {

struct Criterion {
  int id;
  bool pass = true;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + AMPBENCH_CLI_PATH + "\" " + args;
  return std::system(cmd.c_str());
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// criterion 1: figure 1b curves at lambda = 0.4
void criterion1(Criterion& c, const std::filesystem::path& tmp) {
  auto t0 = std::chrono::steady_clock::now();
  std::filesystem::path out = tmp / "fig1b.csv";
  c.require(run_cli("figure --which 1b --lambda 0.4 --eta-min 0 --eta-max 2.8 "
                    "--eta-steps 141 --out " + out.string()) == 0,
            "figure 1b command failed");
  if (!c.pass) return;
  auto rows = read_csv(out);
  c.require(rows.size() == 142, "row count");
  bool found_14 = false, found_17 = false, found_196 = false, found_0 = false;
  for (size_t i = 1; i < rows.size(); ++i) {
    double eta = std::stod(rows[i][0]);
    double bn = std::stod(rows[i][1]), bc = std::stod(rows[i][2]);
    double gm = std::stod(rows[i][3]);
    double an = std::stod(rows[i][4]), ac = std::stod(rows[i][5]);
    if (std::abs(eta - 1.4) < 1e-9) {
      found_14 = true;
      c.require(std::abs(bn - 0.5) < 1e-12, "bound_normal(1.4) != 0.5");
    }
    if (eta < 1.4 - 1e-9) c.require(bn == 0.5, "bound_normal flat below kink");
    if (eta > 1.4 + 1e-9) c.require(bn > 0.5, "bound_normal rises past kink");
    if (std::abs(eta - 1.7) < 1e-9) {
      found_17 = true;
      double want = std::pow(std::sqrt(1.7) - 1.0, 2) / 0.4 + 0.5;
      c.require(std::abs(gm - want) < 1e-9, "gaussian_min(1.7)");
    }
    if (std::abs(eta - 1.96) < 1e-9) {
      found_196 = true;
      c.require(std::abs(gm - 0.9) < 1e-9, "gaussian_min(1.96) != 0.9");
    }
    if (eta == 0.0) {
      found_0 = true;
      c.require(bn == 0.5 && bc == 0.5 && gm == 0.5 && an == 0.5 && ac == 0.5,
                "eta=0 row != 1/2");
    }
    if (eta > 1.0 + 1e-9)
      c.require(an > bn, "aup_normal must exceed bound_normal for eta > 1");
    if (eta > 1e-9)
      c.require(ac > bc, "aup_conj must exceed bound_conj for eta > 0");
  }
  c.require(found_14 && found_17 && found_196 && found_0, "grid rows missing");
  c.require(elapsed_s(t0) < 1.0, "runtime over 1 s");
}

// criterion 2: figure 1a boundary products at eta' = 1.3
void criterion2(Criterion& c, const std::filesystem::path& tmp) {
  auto t0 = std::chrono::steady_clock::now();
  std::filesystem::path out = tmp / "fig1a.csv";
  c.require(run_cli("figure --which 1a --eta 1.3 --lambda 0.4 --out " +
                    out.string()) == 0,
            "figure 1a command failed");
  if (!c.pass) return;
  auto rows = read_csv(out);
  int normal = 0, conj = 0, theorem = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    double prod = std::stod(rows[i][2]) * std::stod(rows[i][3]);
    if (rows[i][1] == "boundary_normal") {
      ++normal;
      c.require(std::abs(prod - 0.64) < 1e-12, "normal product != 0.64");
    } else if (rows[i][1] == "boundary_conj") {
      ++conj;
      c.require(std::abs(prod - 3.24) < 1e-12, "conjugate product != 3.24");
    } else {
      ++theorem;
      c.require(prod >= 0.64 - 1e-12, "theorem-1 curve below the boundary");
    }
  }
  c.require(normal == 81 && conj == 81 && theorem == 162, "curve row counts");
  c.require(elapsed_s(t0) < 1.0, "runtime over 1 s");
}

// criterion 3: theorem-1 margins on 200 seeded random channels
void criterion3(Criterion& c) {
  auto t0 = std::chrono::steady_clock::now();
  verify::SuiteReport rep = verify::theorem1_suite(1);
  for (const auto& check : rep.checks)
    c.require(check.pass, check.name + " margin " + std::to_string(check.margin));
  c.require(elapsed_s(t0) < 300.0, "runtime over 5 min");
}

// criterion 4: Gaussian channels saturate theorem 1 at the optimal gain,
// plain and squeezer-conjugated
void criterion4(Criterion& c) {
  auto t0 = std::chrono::steady_clock::now();
  double lambda = 0.4, r = 0.3;
  IntegrationGrid grid = IntegrationGrid::gauss(8);
  double amax =
      gauss_hermite(8).nodes.cwiseAbs().maxCoeff() * std::sqrt(2.0 / lambda);
  for (double eta : {0.5, 0.8, 2.0, 2.5}) {
    double G = eta <= 1.0 ? eta : eta / 1.96;
    int dim = recommended_dim(std::sqrt(std::max(G, 1.0)) * amax);
    KrausChannel ch = G <= 1.0 ? gaussian_attenuator_channel(G, dim)
                               : gaussian_amp_channel(G, dim);
    Theorem1Report rep = theorem1_margin(
        msd_estimate(ch, Task::symmetric(eta), Prior(lambda), grid));
    c.require(rep.product.margin <= 1e-6 && rep.product.margin >= -1e-9,
              "saturation failed at eta " + std::to_string(eta));
    c.require(rep.brackets_nonnegative, "negative bracket at eta " +
                                            std::to_string(eta));
    // squeezer-wrapped channel saturates the asymmetric-gain task
    int dim_s = recommended_dim(std::sqrt(std::max(G, 1.0)) * amax *
                                std::exp(r));
    KrausChannel base = G <= 1.0 ? gaussian_attenuator_channel(G, dim_s)
                                 : gaussian_amp_channel(G, dim_s);
    Task task(eta * std::exp(-2.0 * r), eta * std::exp(2.0 * r));
    Theorem1Report srep = theorem1_margin(msd_estimate(
        squeezer_conjugated(base, r), task, Prior(lambda), grid));
    c.require(srep.product.margin <= 1e-6 && srep.product.margin >= -1e-9,
              "squeezed saturation failed at eta " + std::to_string(eta) +
                  " margin " + std::to_string(srep.product.margin));
  }
  c.require(elapsed_s(t0) < 600.0, "runtime over 10 min");
}

// criterion 5: NLA convergence values and the non-Gaussian advantage
void criterion5(Criterion& c) {
  auto t0 = std::chrono::steady_clock::now();
  double lambda = 0.4;
  double v12 =
      nla_msd(NlaConfig(std::sqrt(1.2), 60), lambda, 1.2).vbar_prob;
  c.require(std::abs(v12 - 0.5) < 1e-3, "vbar_prob(eta=1.2) off 0.5");
  double v17 =
      nla_msd(NlaConfig(1.4 / std::sqrt(1.7), 60), lambda, 1.7).vbar_prob;
  double want17 = 1.7 / 1.4 - 0.5;
  c.require(std::abs(v17 - want17) < 1e-3, "vbar_prob(eta=1.7) off 0.714286");
  c.require(v12 < gaussian_min_msd(1.2, lambda), "no advantage at eta=1.2");
  c.require(v17 < gaussian_min_msd(1.7, lambda), "no advantage at eta=1.7");

  IntegrationGrid grid = IntegrationGrid::gauss(64);
  for (double g : {1.0, 1.2})
    for (int N : {0, 4, 8, 12}) {
      int dim = N + 4;
      NlaPerformance perf = nla_msd(NlaConfig(g, N), lambda, 1.2);
      MomentSummary s = msd_estimate(nla_channel(NlaConfig(g, N), dim),
                                     Task::symmetric(1.2), Prior(lambda), grid);
      c.require(std::abs(0.5 * (s.vbar_x + s.vbar_p) - perf.vbar) < 1e-6 &&
                    std::abs(s.p_s - perf.p_s) < 1e-6,
                "closed form vs simulation at N " + std::to_string(N));
    }
  c.require(elapsed_s(t0) < 120.0, "runtime over 2 min");
}

// criterion 6: the proof identity between bipartite moments and ensemble MSDs
void criterion6(Criterion& c) {
  auto t0 = std::chrono::steady_clock::now();
  IntegrationGrid grid = IntegrationGrid::gauss(32);
  int dim = 12;
  ChoiIdentityResult idr =
      choi_msd_identity(identity_channel(dim), 0.5, 1.0, 1.0, grid);
  c.require(idr.max_abs_diff < 1e-6, "identity-channel diff " +
                                         std::to_string(idr.max_abs_diff));
  for (int k = 0; k < 20; ++k) {
    ChoiIdentityResult r = choi_msd_identity(
        random_operation(dim, 1 + k % 3, k % 2 == 0, 400 + k), 0.5, 1.0, 1.0,
        grid);
    c.require(r.max_abs_diff < 1e-6, "random channel " + std::to_string(k) +
                                         " diff " +
                                         std::to_string(r.max_abs_diff));
  }
  c.require(elapsed_s(t0) < 300.0, "runtime over 5 min");
}

// criterion 7: distillation certification end to end
void criterion7(Criterion& c) {
  auto t0 = std::chrono::steady_clock::now();
  double lambda = 0.4;
  IntegrationGrid grid = IntegrationGrid::gauss(8);
  int dim = recommended_dim(
      gauss_hermite(8).nodes.cwiseAbs().maxCoeff() * std::sqrt(2.0 / lambda));
  MomentSummary s = msd_estimate(identity_channel(dim),
                                 Task::symmetric(1.0 + lambda), Prior(lambda),
                                 grid);
  double m = 0.5 * (s.vbar_x + s.vbar_p) / s.p_s;
  double thr = std::pow(std::sqrt(1.4) - 1.0, 2) / 0.4 + 0.5;
  c.require(std::abs(m - thr) < 1e-6, "identity M off the threshold");
  c.require(std::abs(delta_from_msd(s).raw - epr_tmss(1.0 / std::sqrt(1.4))) <
                1e-6,
            "identity delta_raw off epr_tmss(1/sqrt(1.4))");

  double xi = 0.5, g = 1.2;
  int dim2 = 64;
  auto [branches, w] = apply_bipartite_pure(nla_channel(NlaConfig(g, 40), dim2),
                                            two_mode_squeezed_state(xi, dim2));
  EprValue v = epr_uncertainty(branches);
  c.require(std::abs(v.raw - 0.25) < 1e-6, "filtered EPR value off 0.25");
  c.require(v.raw < epr_tmss(xi), "no distillation gain");

  // ensemble-side certificate at the matching Choi point lambda = 3, eta = 4
  double lam2 = 3.0;
  IntegrationGrid grid2 = IntegrationGrid::gauss(24);
  int dim3 = recommended_dim(
      g * gauss_hermite(24).nodes.cwiseAbs().maxCoeff() * std::sqrt(2.0 / lam2));
  Certificate cert = distillation_certificate(
      msd_estimate(nla_channel(NlaConfig(g, 40), dim3),
                   Task::symmetric(1.0 + lam2), Prior(lam2), grid2));
  c.require(cert.physical, "filtered certificate not physical");
  c.require(cert.beats_gaussian, "filtered certificate fails beats_gaussian");
  c.require(elapsed_s(t0) < 120.0, "runtime over 2 min");
}

// criterion 8: fidelity bounds and the small-lambda conjugation limit
void criterion8(Criterion& c) {
  auto t0 = std::chrono::steady_clock::now();
  double f = mp_conjugator_fidelity(1.0, Task::symmetric(1.0, true),
                                    Prior(1e-6), 48);
  c.require(std::abs(f - 0.5) < 1e-3, "conjugation fidelity off 1/2: " +
                                          std::to_string(f));
  Prior prior(0.8);
  Task task = Task::symmetric(1.2);
  IntegrationGrid grid = IntegrationGrid::gauss(12);
  int dim = recommended_dim(
      1.3 * gauss_hermite(12).nodes.cwiseAbs().maxCoeff() *
      std::sqrt(2.0 / prior.lambda));
  std::vector<KrausChannel> channels{
      identity_channel(dim), gaussian_amp_channel(1.5, dim),
      gaussian_attenuator_channel(0.6, dim), nla_channel(NlaConfig(1.2, 8), dim),
      random_operation(dim, 2, true, 12), random_operation(dim, 3, false, 13)};
  for (size_t i = 0; i < channels.size(); ++i) {
    double fi = fidelity_estimate(channels[i], task, prior, grid);
    double ps = msd_estimate(channels[i], task, prior, grid).p_s;
    c.require(fi <= ps + 1e-9,
              "F > P_s on channel " + std::to_string(i));
  }
  c.require(elapsed_s(t0) < 120.0, "runtime over 2 min");
}

}  // namespace

int main() {
  std::filesystem::path tmp =
      std::filesystem::temp_directory_path() / "ampbench-acceptance";
  std::filesystem::create_directories(tmp);

  std::vector<Criterion> results;
  auto run = [&](int id, auto&& fn) {
    Criterion c{id};
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    results.push_back(c);
  };

  run(1, [&](Criterion& c) { criterion1(c, tmp); });
  run(2, [&](Criterion& c) { criterion2(c, tmp); });
  run(3, [](Criterion& c) { criterion3(c); });
  run(4, [](Criterion& c) { criterion4(c); });
  run(5, [](Criterion& c) { criterion5(c); });
  run(6, [](Criterion& c) { criterion6(c); });
  run(7, [](Criterion& c) { criterion7(c); });
  run(8, [](Criterion& c) { criterion8(c); });

  bool all = true;
  for (const auto& c : results) {
    std::cout << "criterion " << c.id << ": " << (c.pass ? "pass" : "FAIL");
    if (!c.pass) {
      std::cout << " (" << c.failures.front();
      if (c.failures.size() > 1)
        std::cout << "; +" << c.failures.size() - 1 << " more";
      std::cout << ")";
    }
    std::cout << '\n';
    all = all && c.pass;
  }
  return all ? 0 : 1;
}
