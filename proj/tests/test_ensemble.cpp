#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ampbench/ensemble.hpp"

#include <sstream>

using namespace ampbench;

TEST_CASE("prior moments") {
  // ∫ p_λ e^{-|a|^2} d^2a = λ/(1+λ); k=1 adds a factor 1/(1+λ)
  CHECK(prior_moment(0.4, 0) == doctest::Approx(0.4 / 1.4).epsilon(1e-14));
  CHECK(prior_moment(0.4, 1) == doctest::Approx(0.4 / (1.4 * 1.4)).epsilon(1e-14));
  CHECK(prior_moment(2.0, 3) ==
        doctest::Approx(2.0 * 6.0 / std::pow(3.0, 4)).epsilon(1e-14));
  CHECK_THROWS_AS(prior_moment(0.0, 1), std::invalid_argument);
}

TEST_CASE("identity-channel MSD has the closed form 1/2 + (1-sqrt(eta))^2/lambda") {
  double lambda = 0.4, eta = 1.7;
  IntegrationGrid grid = IntegrationGrid::gauss(8);
  int dim = recommended_dim(
      gauss_hermite(8).nodes.cwiseAbs().maxCoeff() * std::sqrt(2.0 / lambda));
  MomentSummary s = msd_estimate(identity_channel(dim),
                                 Task::symmetric(eta), Prior(lambda), grid);
  double d = 1.0 - std::sqrt(eta);
  CHECK(s.p_s == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.vbar_x == doctest::Approx(0.5 + d * d / lambda).epsilon(1e-9));
  CHECK(s.vbar_p == doctest::Approx(0.5 + d * d / lambda).epsilon(1e-9));
}

TEST_CASE("Gaussian amplifier MSD: simulation, closed form, and moment route agree") {
  double G = 1.7, lambda = 0.4, eta = 1.3;
  IntegrationGrid grid = IntegrationGrid::gauss(8);
  double amax =
      gauss_hermite(8).nodes.cwiseAbs().maxCoeff() * std::sqrt(2.0 / lambda);
  int dim = recommended_dim(std::sqrt(G) * amax);
  MomentSummary fock = msd_estimate(gaussian_amp_channel(G, dim),
                                    Task::symmetric(eta), Prior(lambda), grid);
  MomentSummary calc = msd_gaussian({GaussianChannelSpec::amplifier(G)},
                                    Task::symmetric(eta), Prior(lambda));
  double closed = gaussian_amp_msd_closed(G, eta, lambda);
  CHECK(fock.vbar_x == doctest::Approx(closed).epsilon(1e-8));
  CHECK(calc.vbar_x == doctest::Approx(closed).epsilon(1e-12));
  CHECK(calc.vbar_p == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("phase-conjugation sign convention") {
  // the conjugator matches the conjugate-task target, so only the readded
  // vacuum units and the gain mismatch remain
  double G = 1.2, lambda = 0.5, eta = 1.0;
  MomentSummary s = msd_gaussian({GaussianChannelSpec::mp_conjugator(G)},
                                 Task::symmetric(eta, true), Prior(lambda));
  double d = std::sqrt(G) - std::sqrt(eta);
  CHECK(s.vbar_x == doctest::Approx(G + 0.5 + d * d / lambda).epsilon(1e-12));
  CHECK(s.vbar_x == doctest::Approx(s.vbar_p).epsilon(1e-12));
  // against the normal task the p deviation keeps the full 2 sqrt(G eta)/λ
  MomentSummary n = msd_gaussian({GaussianChannelSpec::mp_conjugator(G)},
                                 Task::symmetric(eta, false), Prior(lambda));
  double dp = std::sqrt(G) + std::sqrt(eta);
  CHECK(n.vbar_p == doctest::Approx(G + 0.5 + dp * dp / lambda).epsilon(1e-12));
}

TEST_CASE("Monte Carlo grid converges to the quadrature value") {
  double lambda = 1.0, eta = 1.4;
  MomentSummary q = msd_estimate(identity_channel(90), Task::symmetric(eta),
                                 Prior(lambda), IntegrationGrid::gauss(8));
  MomentSummary mc =
      msd_estimate(identity_channel(90), Task::symmetric(eta), Prior(lambda),
                   IntegrationGrid::monte_carlo(200000, 3));
  CHECK(mc.vbar_x == doctest::Approx(q.vbar_x).epsilon(0.02));
  CHECK(mc.p_s == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("truncation policy flag") {
  CHECK_THROWS_AS(
      msd_estimate(identity_channel(16), Task::symmetric(1.0), Prior(0.4),
                   IntegrationGrid::gauss(8), true),
      TruncationError);
}

TEST_CASE("fidelity never exceeds the success probability") {
  IntegrationGrid grid = IntegrationGrid::gauss(12);
  Prior prior(0.8);
  Task task = Task::symmetric(1.2);
  int dim = recommended_dim(
      1.3 * gauss_hermite(12).nodes.cwiseAbs().maxCoeff() *
      std::sqrt(2.0 / prior.lambda));
  for (const KrausChannel& ch :
       {identity_channel(dim), nla_channel(NlaConfig(1.2, 8), dim),
        gaussian_amp_channel(1.2, dim)}) {
    double f = fidelity_estimate(ch, task, prior, grid);
    MomentSummary s = msd_estimate(ch, task, prior, grid);
    CHECK(f <= s.p_s + 1e-9);
    CHECK(f >= 0.0);
  }
}

TEST_CASE("conjugator fidelity matches the heterodyne closed form") {
  // F = λ / ((1+G)λ + (sqrt G - sqrt η)^2)
  for (double lambda : {0.5, 0.1}) {
    for (double G : {1.0, 2.0}) {
      double eta = 1.3;
      double got = mp_conjugator_fidelity(G, Task::symmetric(eta, true),
                                          Prior(lambda), 48);
      double d = std::sqrt(G) - std::sqrt(eta);
      double want = lambda / ((1.0 + G) * lambda + d * d);
      CHECK(got == doctest::Approx(want).epsilon(1e-7));
    }
  }
}

TEST_CASE("sample estimation recovers identity-channel moments") {
  std::vector<SampleRecord> recs;
  std::mt19937_64 rng(11);
  double lambda = 0.4, eta = 1.0 + lambda;
  std::normal_distribution<double> prior(0.0, std::sqrt(0.5 / lambda));
  std::normal_distribution<double> vac(0.0, std::sqrt(0.5));
  for (int i = 0; i < 40000; ++i) {
    SampleRecord r;
    r.shot_id = i;
    r.alpha_re = prior(rng);
    r.alpha_im = prior(rng);
    r.quad = i % 2 ? Quadrature::p : Quadrature::x;
    r.value = std::sqrt(2.0) *
                  (r.quad == Quadrature::x ? r.alpha_re : r.alpha_im) +
              vac(rng);
    r.herald = 1;
    recs.push_back(r);
  }
  SampleEstimate est =
      estimate_from_samples(recs, Task::symmetric(eta), lambda);
  double want = 0.5 + std::pow(1.0 - std::sqrt(eta), 2) / lambda;
  CHECK(est.summary.p_s == 1.0);
  CHECK(est.se_x > 0.0);
  CHECK(std::abs(est.summary.vbar_x - want) < 5.0 * est.se_x);
  CHECK(std::abs(est.summary.vbar_p - want) < 5.0 * est.se_p);
}

TEST_CASE("sample estimation failure modes") {
  CHECK_THROWS_AS(estimate_from_samples({}, Task::symmetric(1.4), 0.4),
                  InsufficientDataError);
  std::vector<SampleRecord> only_x(10);
  for (int i = 0; i < 10; ++i) {
    only_x[i].shot_id = i;
    only_x[i].quad = Quadrature::x;
    only_x[i].herald = 1;
  }
  CHECK_THROWS_AS(estimate_from_samples(only_x, Task::symmetric(1.4), 0.4),
                  InsufficientDataError);
}

TEST_CASE("sample CSV round trip is byte exact") {
  std::vector<SampleRecord> recs{{0, 0.1234567890123456, -2.5, Quadrature::x,
                                  1.0 / 3.0, 1},
                                 {1, -1e-17, 0.0, Quadrature::p, -7.25, 0}};
  std::ostringstream first;
  write_samples_csv(first, recs);
  std::istringstream is(first.str());
  std::vector<SampleRecord> back = read_samples_csv(is);
  std::ostringstream second;
  write_samples_csv(second, back);
  CHECK(first.str() == second.str());
  CHECK(back[0].value == recs[0].value);
  CHECK(back[1].alpha_re == recs[1].alpha_re);
}

TEST_CASE("sample CSV parse errors carry line numbers") {
  std::istringstream bad_header("nope\n");
  CHECK_THROWS_WITH_AS(read_samples_csv(bad_header),
                       "line 1: expected sample CSV header", CsvParseError);
  std::istringstream bad_quad(
      "shot_id,alpha_re,alpha_im,quad,value,herald\n0,0,0,y,1.0,1\n");
  CHECK_THROWS_AS(read_samples_csv(bad_quad), CsvParseError);
  std::istringstream bad_herald(
      "shot_id,alpha_re,alpha_im,quad,value,herald\n0,0,0,x,1.0,2\n");
  try {
    read_samples_csv(bad_herald);
    CHECK(false);
  } catch (const CsvParseError& e) {
    CHECK(std::string(e.what()).rfind("line 2", 0) == 0);
  }
}
