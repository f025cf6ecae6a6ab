// Property suites behind the `verify` CLI command: theorem-1 margins on
// random operations, Gaussian closed-form and cross-backend agreement, NLA
// closed-form vs Fock simulation, and the EPR/distillation checks.
#pragma once

#include "ampbench/bounds.hpp"
#include "ampbench/channels.hpp"
#include "ampbench/ensemble.hpp"
#include "ampbench/epr.hpp"
#include "ampbench/nla.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ampbench::verify {

struct Check {
  std::string name;
  double margin = 0.0;  // >= 0 means pass
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"margin", c.margin}, {"pass", c.pass}});
  return {{"suite", r.suite}, {"pass", r.all_pass()}, {"checks", checks}};
}

namespace detail {

inline void add_check(SuiteReport& rep, const std::string& name, double margin,
                      double tol) {
  rep.checks.push_back({name, margin, margin >= -tol});
}

// heterodyne-grid numeric moments of the measure-and-prepare conjugator
inline ModeMoments mp_conjugator_numeric_moments(double G, Complex alpha,
                                                 int order = 48) {
  GaussHermiteRule rule = gauss_hermite(order);
  double mx = 0, mp = 0, mx2 = 0, mp2 = 0;
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) {
      Complex beta = alpha + Complex(rule.nodes(i), rule.nodes(j));
      double w = rule.weights(i) * rule.weights(j) / M_PI;
      double xb = std::sqrt(2.0 * G) * beta.real();
      double pb = -std::sqrt(2.0 * G) * beta.imag();
      mx += w * xb;
      mp += w * pb;
      mx2 += w * (xb * xb + 0.5);
      mp2 += w * (pb * pb + 0.5);
    }
  return {mx, mp, mx2 - mx * mx, mp2 - mp * mp};
}

}  // namespace detail

// 200 seeded random operations at D=14, symmetric gains; every theorem-1
// margin and both brackets must be nonnegative.
inline SuiteReport theorem1_suite(std::uint64_t seed, int n_channels = 200,
                                  int dim = 14, int order = 20) {
  SuiteReport rep{"theorem1", {}};
  IntegrationGrid grid = IntegrationGrid::gauss(order);
  for (int c = 0; c < n_channels; ++c) {
    KrausChannel ch = random_operation(dim, 1 + c % 4, c % 2 == 1, seed + c);
    double worst = std::numeric_limits<double>::infinity();
    for (double lambda : {0.4, 1.0})
      for (double eta : {0.8, 1.4, 2.5}) {
        Theorem1Report t = theorem1_margin(
            msd_estimate(ch, Task::symmetric(eta), Prior(lambda), grid));
        worst = std::min({worst, t.product.margin, t.bracket_x, t.bracket_p});
      }
    detail::add_check(rep, "random_channel_" + std::to_string(c), worst, 1e-9);
  }
  return rep;
}

// Fock-simulated Gaussian amplifier/attenuator MSD against the closed form.
inline SuiteReport gaussian_suite(int order = 8) {
  SuiteReport rep{"gaussian", {}};
  for (double G : {0.5, 1.0, 1.7, 2.5})
    for (double lambda : {0.2, 0.4, 1.0}) {
      Prior prior(lambda);
      IntegrationGrid grid = IntegrationGrid::gauss(order);
      GaussHermiteRule rule = gauss_hermite(order);
      double alpha_max =
          rule.nodes.cwiseAbs().maxCoeff() * std::sqrt(2.0 / lambda);
      int dim = recommended_dim(std::sqrt(std::max(G, 1.0)) * alpha_max);
      KrausChannel ch = G >= 1.0 ? gaussian_amp_channel(G, dim)
                                 : gaussian_attenuator_channel(G, dim);
      for (double eta : {0.8, 1.4, 2.5}) {
        MomentSummary s = msd_estimate(ch, Task::symmetric(eta), prior, grid);
        double closed = gaussian_amp_msd_closed(G, eta, lambda);
        double err = std::max(std::abs(s.vbar_x - closed),
                              std::abs(s.vbar_p - closed));
        detail::add_check(rep,
                          "closed_form_G" + std::to_string(G) + "_l" +
                              std::to_string(lambda) + "_e" + std::to_string(eta),
                          1e-6 - err, 0.0);
      }
    }
  return rep;
}

// Cross-backend agreement: Fock-channel expectation values against the
// moment calculus on a probe grid of coherent states with |alpha| <= 3.
inline SuiteReport backends_suite() {
  SuiteReport rep{"backends", {}};
  std::vector<Complex> probes{{0, 0}, {1, 0}, {0, 1.5}, {-2, 1}, {2.1, -2.1}, {3, 0}};
  struct Probe {
    std::string name;
    GaussianChannelSpec spec;
  };
  std::vector<Probe> specs{{"amplifier_2", GaussianChannelSpec::amplifier(2.0)},
                           {"amplifier_1.3", GaussianChannelSpec::amplifier(1.3)},
                           {"attenuator_0.6", GaussianChannelSpec::attenuator(0.6)},
                           {"squeezer_0.3", GaussianChannelSpec::squeezer(0.3)},
                           {"identity", GaussianChannelSpec::identity()}};
  int dim = recommended_dim(3.0 * std::sqrt(2.0) * 1.5);
  for (const auto& pr : specs) {
    double err = 0.0;
    KrausChannel ch = [&] {
      switch (pr.spec.kind) {
        case GaussianKind::amplifier:
          return gaussian_amp_channel(pr.spec.parameter, dim);
        case GaussianKind::attenuator:
          return gaussian_attenuator_channel(pr.spec.parameter, dim);
        case GaussianKind::squeezer:
          return squeezer_conjugated(identity_channel(dim), pr.spec.parameter);
        default:
          return identity_channel(dim);
      }
    }();
    for (Complex a : probes) {
      GaussianState in = coherent_gaussian(std::sqrt(2.0) * a.real(),
                                           std::sqrt(2.0) * a.imag());
      ModeMoments want = moments(apply_gaussian_channel(in, pr.spec))[0];
      QuadratureMoments acc{};
      for (const auto& branch :
           apply_to_pure(ch, coherent_state(a, dim).amps)) {
        QuadratureMoments m = pure_moments(branch);
        acc.weight += m.weight;
        acc.mx += m.mx;
        acc.mp += m.mp;
        acc.mx2 += m.mx2;
        acc.mp2 += m.mp2;
      }
      double mx = acc.mx / acc.weight, mp_ = acc.mp / acc.weight;
      err = std::max({err, std::abs(mx - want.mean_x), std::abs(mp_ - want.mean_p),
                      std::abs(acc.mx2 / acc.weight - mx * mx - want.var_x),
                      std::abs(acc.mp2 / acc.weight - mp_ * mp_ - want.var_p)});
    }
    detail::add_check(rep, "fock_vs_moments_" + pr.name, 1e-6 - err, 0.0);
  }
  // measure-and-prepare conjugator against numeric heterodyne integration
  {
    double err = 0.0;
    GaussianChannelSpec spec = GaussianChannelSpec::mp_conjugator(1.0);
    for (Complex a : probes) {
      GaussianState in = coherent_gaussian(std::sqrt(2.0) * a.real(),
                                           std::sqrt(2.0) * a.imag());
      ModeMoments want = moments(apply_gaussian_channel(in, spec))[0];
      ModeMoments got = detail::mp_conjugator_numeric_moments(1.0, a);
      err = std::max({err, std::abs(got.mean_x - want.mean_x),
                      std::abs(got.mean_p - want.mean_p),
                      std::abs(got.var_x - want.var_x),
                      std::abs(got.var_p - want.var_p)});
    }
    detail::add_check(rep, "fock_vs_moments_mp_conjugator", 1e-6 - err, 0.0);
  }
  return rep;
}

// NLA closed form vs Fock simulation, script-N invariance, and the
// non-Gaussian advantage window.
inline SuiteReport nla_suite(std::uint64_t seed = 0) {
  SuiteReport rep{"nla", {}};
  (void)seed;
  IntegrationGrid grid = IntegrationGrid::gauss(64);
  for (double g : {1.0, 1.1, 1.2})
    for (int N : {0, 3, 8, 12})
      for (double lambda : {0.4, 1.0}) {
        double eta = 1.2;
        NlaConfig cfg(g, N);
        NlaPerformance perf = nla_msd(cfg, lambda, eta);
        // the filter truncates at N, so a small space is already exact
        int dim = N + 4;
        MomentSummary s = msd_estimate(nla_channel(cfg, dim),
                                       Task::symmetric(eta), Prior(lambda), grid);
        double err = std::max(
            {std::abs(0.5 * (s.vbar_x + s.vbar_p) - perf.vbar),
             std::abs(s.p_s - perf.p_s)});
        detail::add_check(rep,
                          "closed_vs_fock_g" + std::to_string(g) + "_N" +
                              std::to_string(N) + "_l" + std::to_string(lambda),
                          1e-6 - err, 0.0);
      }
  // normalization invariance of vbar_prob
  {
    NlaPerformance a = nla_msd(NlaConfig(1.2, 10), 0.4, 1.5);
    NlaPerformance b = nla_msd(NlaConfig(1.2, 10, 0.25 * std::pow(1.2, -20.0)),
                               0.4, 1.5);
    detail::add_check(rep, "normalization_invariance",
                      1e-12 - std::abs(a.vbar_prob - b.vbar_prob), 0.0);
  }
  // advantage over the Gaussian minimum inside (1, (1+lambda)^2)
  for (double eta : {1.2, 1.5, 1.7}) {
    double lambda = 0.4;
    NlaPerformance perf =
        nla_msd(NlaConfig(nla_optimal_gain(eta, lambda), 300), lambda, eta);
    detail::add_check(rep, "advantage_eta" + std::to_string(eta),
                      gaussian_min_msd(eta, lambda) - 1e-3 - perf.vbar_prob, 0.0);
  }
  return rep;
}

// Gaussian no-go on the EPR uncertainty, NLA distillation, the corollary
// floor for random operations, and the choi identity.
inline SuiteReport epr_suite(std::uint64_t seed, int n_random = 200) {
  SuiteReport rep{"epr", {}};
  // Gaussian no-go: Delta((E⊗I)psi_xi) >= Delta(psi_xi)
  for (double xi : {0.3, 0.5, 0.7})
    for (double G : {0.5, 1.0, 2.0}) {
      int dim = 48;
      KrausChannel ch = G >= 1.0 ? gaussian_amp_channel(G, dim)
                                 : gaussian_attenuator_channel(G, dim);
      auto [branches, ps] =
          apply_bipartite_pure(ch, two_mode_squeezed_state(xi, dim));
      (void)ps;
      EprValue delta = epr_uncertainty(branches);
      detail::add_check(rep,
                        "gaussian_nogo_xi" + std::to_string(xi) + "_G" +
                            std::to_string(G),
                        delta.raw - epr_tmss(xi), 1e-7);
    }
  // NLA filtering maps psi_xi to psi_{g xi} and reduces Delta
  for (double g : {1.2, 1.5}) {
    double xi = 0.5;
    int dim = 64, N = 40;
    auto [branches, ps] = apply_bipartite_pure(
        nla_channel(NlaConfig(g, N), dim), two_mode_squeezed_state(xi, dim));
    (void)ps;
    EprValue delta = epr_uncertainty(branches);
    double err = std::abs(delta.raw - epr_tmss(g * xi));
    detail::add_check(rep, "nla_distill_g" + std::to_string(g), 1e-6 - err, 0.0);
    detail::add_check(rep, "nla_strict_gain_g" + std::to_string(g),
                      epr_tmss(xi) - epr_tmss(g * xi), 0.0);
  }
  // corollary floor for random operations at the Choi point
  {
    int dim = 12;
    double lambda = 0.4;
    IntegrationGrid grid = IntegrationGrid::gauss(20);
    double worst = std::numeric_limits<double>::infinity();
    for (int c = 0; c < n_random; ++c) {
      KrausChannel ch = random_operation(dim, 1 + c % 3, c % 2 == 0, seed + c);
      MomentSummary s = msd_estimate(ch, Task::symmetric(1.0 + lambda),
                                     Prior(lambda), grid);
      worst = std::min(worst, delta_from_msd(s).raw);
    }
    detail::add_check(rep, "corollary_floor_random", worst, 1e-7);
  }
  // threshold ordering per lambda
  for (double lambda : {0.1, 0.4, 1.0, 3.0, 10.0}) {
    double d = std::sqrt(1.0 + lambda) - 1.0;
    double t2 = d * d / lambda + 0.5;
    detail::add_check(rep, "threshold_order_l" + std::to_string(lambda),
                      std::min(t2 - 0.5, 1.5 - t2), 0.0);
  }
  // choi proof identity for identity and random channels
  {
    IntegrationGrid grid = IntegrationGrid::gauss(32);
    int dim = 12;
    double worst = std::numeric_limits<double>::infinity();
    ChoiIdentityResult idr =
        choi_msd_identity(identity_channel(dim), 0.5, 1.0, 1.0, grid);
    detail::add_check(rep, "choi_identity_channel", 1e-6 - idr.max_abs_diff, 0.0);
    for (int c = 0; c < 5; ++c) {
      ChoiIdentityResult r = choi_msd_identity(
          random_operation(dim, 2, c % 2 == 1, seed + 7 + c), 0.5, 1.0, 1.0, grid);
      worst = std::min(worst, 1e-6 - r.max_abs_diff);
    }
    detail::add_check(rep, "choi_random_channels", worst, 0.0);
  }
  return rep;
}

inline std::vector<SuiteReport> run_suites(const std::string& which,
                                           std::uint64_t seed) {
  std::vector<SuiteReport> out;
  bool all = which == "all";
  if (all || which == "theorem1") out.push_back(theorem1_suite(seed));
  if (all || which == "gaussian") out.push_back(gaussian_suite());
  if (all || which == "backends") out.push_back(backends_suite());
  if (all || which == "nla") out.push_back(nla_suite(seed));
  if (all || which == "epr") out.push_back(epr_suite(seed));
  if (out.empty()) throw std::invalid_argument("unknown suite: " + which);
  return out;
}

}  // namespace ampbench::verify
