// The Gaussian-distributed coherent-state ensemble and its averaged
// observables: success probability, mean square deviations (MSD), and
// fidelities, by quadrature integration, closed form, or sample estimation.
#pragma once

#include "ampbench/channels.hpp"
#include "ampbench/fock.hpp"
#include "ampbench/gaussian.hpp"
#include "ampbench/integration.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ampbench {

struct Prior {
  double lambda;  // inverse width, > 0
  explicit Prior(double l) : lambda(l) {
    if (!(l > 0.0)) throw std::invalid_argument("prior: lambda must be > 0");
  }
};

struct Task {
  double eta_x = 1.0;
  double eta_p = 1.0;
  bool conjugate = false;

  Task(double ex, double ep, bool conj = false)
      : eta_x(ex), eta_p(ep), conjugate(conj) {
    if (!(ex > 0.0) || !(ep > 0.0))
      throw std::invalid_argument("task: gains must be > 0");
  }
  static Task symmetric(double eta, bool conj = false) {
    return Task(eta, eta, conj);
  }
  double eta() const { return std::sqrt(eta_x * eta_p); }
};

struct MomentSummary {
  double p_s = 0.0;
  double vbar_x = 0.0;
  double vbar_p = 0.0;
  std::optional<double> fidelity;
  Task task{1.0, 1.0};
  double lambda = 0.0;
};

// closed-form prior integral: ∫ p_λ e^{-|a|^2} |a|^{2k} d^2a = λ k!/(1+λ)^{k+1}
inline double prior_moment(double lambda, int k) {
  if (!(lambda > 0.0)) throw std::invalid_argument("prior_moment: lambda > 0");
  if (k < 0) throw std::invalid_argument("prior_moment: k >= 0");
  return lambda * std::exp(std::lgamma(k + 1.0) -
                           (k + 1.0) * std::log1p(lambda));
}

// Eq.-level closed form for the Gaussian amplifier MSD:
// (1/λ)(√G - √η)^2 + (G + |G-1|)/2.
inline double gaussian_amp_msd_closed(double G, double eta, double lambda) {
  if (G < 0.0 || !(eta > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("gaussian_amp_msd_closed: bad arguments");
  double d = std::sqrt(G) - std::sqrt(eta);
  return d * d / lambda + 0.5 * (G + std::abs(G - 1.0));
}

namespace detail {

// Visit each point of the prior-weighted grid: callback(alpha, weight),
// where sum of weights approximates ∫ p_λ(a) (...) d^2a.
template <typename F>
void for_each_prior_node(const Prior& prior, const IntegrationGrid& grid, F&& f) {
  double root_lambda = std::sqrt(prior.lambda);
  if (grid.scheme == GridScheme::gauss_hermite) {
    GaussHermiteRule rule = gauss_hermite(grid.order);
    for (int i = 0; i < grid.order; ++i)
      for (int j = 0; j < grid.order; ++j) {
        Complex alpha(rule.nodes(i) / root_lambda, rule.nodes(j) / root_lambda);
        f(alpha, rule.weights(i) * rule.weights(j) / M_PI);
      }
  } else {
    std::mt19937_64 rng(grid.seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / prior.lambda));
    double w = 1.0 / grid.samples;
    for (int s = 0; s < grid.samples; ++s) {
      double re = gauss(rng);
      double im = gauss(rng);
      f(Complex(re, im), w);
    }
  }
}

inline double grid_max_amplitude(const Prior& prior, const IntegrationGrid& grid) {
  if (grid.scheme == GridScheme::gauss_hermite) {
    GaussHermiteRule rule = gauss_hermite(grid.order);
    double m = rule.nodes.cwiseAbs().maxCoeff();
    return m * std::sqrt(2.0 / prior.lambda);
  }
  return 6.0 * std::sqrt(0.5 / prior.lambda);  // ~6 sigma
}

}  // namespace detail

// MSD of Eq.-defbarxp kind by numerical integration over the ensemble.
// The deviation operator is (z ∓ √η_z z_a) with the + sign on p iff the
// task is phase conjugation.
inline MomentSummary msd_estimate(const KrausChannel& channel, const Task& task,
                                  const Prior& prior, const IntegrationGrid& grid,
                                  bool require_truncation_policy = false) {
  if (require_truncation_policy) {
    double amax = detail::grid_max_amplitude(prior, grid);
    if (channel.dim < recommended_dim(amax))
      throw TruncationError("msd_estimate: channel dimension below fock policy");
  }
  KahanSum ps, vx, vp;
  double sx = std::sqrt(task.eta_x);
  double sp = std::sqrt(task.eta_p);
  double p_sign = task.conjugate ? +1.0 : -1.0;
  detail::for_each_prior_node(prior, grid, [&](Complex alpha, double w) {
    Vec psi = coherent_state(alpha, channel.dim).amps;
    double x_a = std::sqrt(2.0) * alpha.real();
    double p_a = std::sqrt(2.0) * alpha.imag();
    double tr = 0, dev_x = 0, dev_p = 0;
    for (const Vec& branch : apply_to_pure(channel, psi)) {
      QuadratureMoments m = pure_moments(branch);
      tr += m.weight;
      dev_x += m.mx2 - 2.0 * sx * x_a * m.mx + task.eta_x * x_a * x_a * m.weight;
      dev_p += m.mp2 + 2.0 * p_sign * sp * p_a * m.mp +
               task.eta_p * p_a * p_a * m.weight;
    }
    ps.add(w * tr);
    vx.add(w * dev_x);
    vp.add(w * dev_p);
    if (!std::isfinite(w * tr))
      throw std::runtime_error("msd_estimate: integration weight overflow");
  });
  MomentSummary s;
  s.p_s = ps.value();
  s.vbar_x = vx.value();
  s.vbar_p = vp.value();
  s.task = task;
  s.lambda = prior.lambda;
  return s;
}

// Moment-calculus route for chains of Gaussian channel specs; exact in the
// prior integral (∫ p_λ z_a^2 = 1/λ).
inline MomentSummary msd_gaussian(const std::vector<GaussianChannelSpec>& chain,
                                  const Task& task, const Prior& prior) {
  LinearResponse lr = linear_response(chain);
  double p_sign = task.conjugate ? +1.0 : -1.0;
  double dx = lr.gain(0, 0) - std::sqrt(task.eta_x);
  double dp = lr.gain(1, 1) + p_sign * std::sqrt(task.eta_p);
  MomentSummary s;
  s.p_s = 1.0;  // every supported spec is trace preserving
  s.vbar_x = lr.cov(0, 0) + dx * dx / prior.lambda;
  s.vbar_p = lr.cov(1, 1) + dp * dp / prior.lambda;
  s.task = task;
  s.lambda = prior.lambda;
  return s;
}

// Average fidelity F = ∫ p_λ <t(a)| E(rho_a) |t(a)> with t(a) = √η a, or
// √η a* for conjugation; η = √(η_x η_p).
inline double fidelity_estimate(const KrausChannel& channel, const Task& task,
                                const Prior& prior, const IntegrationGrid& grid) {
  double root_eta = std::sqrt(task.eta());
  KahanSum f;
  detail::for_each_prior_node(prior, grid, [&](Complex alpha, double w) {
    Vec psi = coherent_state(alpha, channel.dim).amps;
    Complex t = root_eta * (task.conjugate ? std::conj(alpha) : alpha);
    Vec target = coherent_state(t, channel.dim).amps;
    double acc = 0;
    for (const Vec& branch : apply_to_pure(channel, psi))
      acc += std::norm(target.dot(branch));
    f.add(w * acc);
  });
  return f.value();
}

// Fidelity of the measure-and-prepare conjugator, heterodyne outcome
// integrated numerically; dimension free, valid at arbitrarily small λ.
inline double mp_conjugator_fidelity(double G, const Task& task,
                                     const Prior& prior, int order = 48) {
  if (G < 0.0) throw std::invalid_argument("mp_conjugator_fidelity: G >= 0");
  GaussHermiteRule rule = gauss_hermite(order);
  double root_g = std::sqrt(G);
  double root_eta = std::sqrt(task.eta());
  KahanSum f;
  detail::for_each_prior_node(prior, IntegrationGrid::gauss(order),
                              [&](Complex alpha, double w) {
    Complex t = root_eta * (task.conjugate ? std::conj(alpha) : alpha);
    KahanSum inner;
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j) {
        Complex beta = alpha + Complex(rule.nodes(i), rule.nodes(j));
        Complex prep = root_g * std::conj(beta);
        inner.add(rule.weights(i) * rule.weights(j) / M_PI *
                  std::exp(-std::norm(prep - t)));
      }
    f.add(w * inner.value());
  });
  return f.value();
}

// -- homodyne sample records ------------------------------------------------

struct SampleRecord {
  long shot_id = 0;
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  Quadrature quad = Quadrature::x;
  double value = 0.0;
  int herald = 0;
};

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SampleEstimate {
  MomentSummary summary;
  double se_x = 0.0;  // jackknife standard errors on vbar
  double se_p = 0.0;
};

// p_s = heralded fraction; vbar_z = p_s * conditional mean of
// (value ∓ √η_z z_a)^2 over heralded z-shots (matches the unnormalized trace
// definition of the MSD).
inline SampleEstimate estimate_from_samples(const std::vector<SampleRecord>& records,
                                            const Task& task, double prior_lambda) {
  if (records.empty()) throw InsufficientDataError("no sample records");
  const double n = static_cast<double>(records.size());
  double sx = std::sqrt(task.eta_x), sp = std::sqrt(task.eta_p);
  double p_sign = task.conjugate ? +1.0 : -1.0;
  long heralded = 0;
  long hx = 0, hp = 0;
  KahanSum dx2, dp2;
  std::vector<double> dev2(records.size(), 0.0);
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.herald) continue;
    ++heralded;
    if (r.quad == Quadrature::x) {
      double d = r.value - sx * std::sqrt(2.0) * r.alpha_re;
      dev2[i] = d * d;
      dx2.add(d * d);
      ++hx;
    } else {
      double d = r.value + p_sign * sp * std::sqrt(2.0) * r.alpha_im;
      dev2[i] = d * d;
      dp2.add(d * d);
      ++hp;
    }
  }
  if (hx == 0 || hp == 0)
    throw InsufficientDataError("need heralded shots in both quadratures");
  double p_s = heralded / n;
  SampleEstimate est;
  est.summary.p_s = p_s;
  est.summary.vbar_x = p_s * dx2.value() / hx;
  est.summary.vbar_p = p_s * dp2.value() / hp;
  est.summary.task = task;
  est.summary.lambda = prior_lambda;

  // leave-one-out jackknife on each vbar
  auto jackknife = [&](Quadrature q, double sum_d2, long hq) {
    KahanSum acc, acc2;
    long cnt = 0;
    auto push = [&](double v, long times) {
      acc.add(v * times);
      acc2.add(v * v * times);
      cnt += times;
    };
    // removing a non-heralded shot
    push((heralded / (n - 1.0)) * (sum_d2 / hq), static_cast<long>(n) - heralded);
    // removing a heralded shot of the other quadrature
    push(((heralded - 1.0) / (n - 1.0)) * (sum_d2 / hq), heralded - hq);
    for (size_t i = 0; i < records.size(); ++i) {
      if (!records[i].herald || records[i].quad != q) continue;
      push(((heralded - 1.0) / (n - 1.0)) * ((sum_d2 - dev2[i]) / (hq - 1.0)), 1);
    }
    double mean = acc.value() / cnt;
    double var = (cnt - 1.0) / cnt * (acc2.value() / cnt - mean * mean) * cnt;
    return std::sqrt(std::max(0.0, var));
  };
  if (hx > 1 && hp > 1 && n > 1) {
    est.se_x = jackknife(Quadrature::x, dx2.value(), hx);
    est.se_p = jackknife(Quadrature::p, dp2.value(), hp);
  }
  return est;
}

// -- sample CSV (header: shot_id,alpha_re,alpha_im,quad,value,herald) -------

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline void write_samples_csv(std::ostream& os, const std::vector<SampleRecord>& rs) {
  os << "shot_id,alpha_re,alpha_im,quad,value,herald\n";
  for (const auto& r : rs)
    os << r.shot_id << ',' << format_double(r.alpha_re) << ','
       << format_double(r.alpha_im) << ',' << (r.quad == Quadrature::x ? 'x' : 'p')
       << ',' << format_double(r.value) << ',' << r.herald << '\n';
}

struct CsvParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<SampleRecord> read_samples_csv(std::istream& is) {
  std::vector<SampleRecord> out;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line.rfind("shot_id", 0) != 0)
        throw CsvParseError("line 1: expected sample CSV header");
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      throw CsvParseError("line " + std::to_string(lineno) + ": expected 6 fields");
    try {
      SampleRecord r;
      r.shot_id = std::stol(fields[0]);
      r.alpha_re = std::stod(fields[1]);
      r.alpha_im = std::stod(fields[2]);
      if (fields[3] == "x")
        r.quad = Quadrature::x;
      else if (fields[3] == "p")
        r.quad = Quadrature::p;
      else
        throw std::invalid_argument("quad must be x or p");
      r.value = std::stod(fields[4]);
      r.herald = std::stoi(fields[5]);
      if (r.herald != 0 && r.herald != 1)
        throw std::invalid_argument("herald must be 0 or 1");
      if (!std::isfinite(r.alpha_re) || !std::isfinite(r.alpha_im) ||
          !std::isfinite(r.value))
        throw std::invalid_argument("non-finite field");
      out.push_back(r);
    } catch (const std::exception& e) {
      throw CsvParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace ampbench
