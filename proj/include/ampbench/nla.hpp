// Closed-form performance of the noiseless linear amplifier filter: MSD,
// success probability, optimal gain choices, and the large-N asymptote.
#pragma once

#include "ampbench/bounds.hpp"
#include "ampbench/channels.hpp"

#include <cmath>
#include <vector>

namespace ampbench {

struct NlaPerformance {
  double vbar = 0.0;       // unnormalized MSD (symmetric V = Vx = Vp)
  double p_s = 0.0;
  double vbar_prob = 0.0;  // vbar / p_s
  NlaConfig config;
  double lambda = 0.0;
  double eta = 0.0;
};

namespace detail {

// log-sum-exp over terms log_coeff + n*log_ratio (+ optional log(n+1)); keeps
// large-N geometric sums finite when g^2/(1+λ) > 1.
inline double logsumexp(const std::vector<double>& logs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double l : logs) m = std::max(m, l);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - m);
  return m + std::log(s);
}

}  // namespace detail

inline NlaPerformance nla_msd(const NlaConfig& config, double lambda, double eta) {
  if (!(lambda > 0.0) || !(eta > 0.0))
    throw std::invalid_argument("nla_msd: lambda and eta must be > 0");
  const double g = config.g;
  const int N = config.cutoff;
  const double log_ratio = 2.0 * std::log(g) - std::log1p(lambda);

  std::vector<double> vbar_terms;
  std::vector<double> ps_terms;
  // (g-√η)^2 Σ_{n<N} g^{2n}(n+1)/(1+λ)^{n+1}
  double d = g - std::sqrt(eta);
  if (d != 0.0) {
    double log_c = 2.0 * std::log(std::abs(d)) - std::log1p(lambda);
    for (int n = 0; n < N; ++n)
      vbar_terms.push_back(log_c + n * log_ratio + std::log(n + 1.0));
  }
  // η g^{2N}(N+1)/(1+λ)^{N+1}
  vbar_terms.push_back(std::log(eta) + N * log_ratio + std::log(N + 1.0) -
                       std::log1p(lambda));
  // (1/2) Σ_{n<=N} g^{2n}/(1+λ)^n
  for (int n = 0; n <= N; ++n) {
    vbar_terms.push_back(std::log(0.5) + n * log_ratio);
    ps_terms.push_back(n * log_ratio);
  }
  double log_front = std::log(config.normalization) + std::log(lambda) -
                     std::log1p(lambda);
  double log_vbar = log_front + detail::logsumexp(vbar_terms);
  double log_ps = log_front + detail::logsumexp(ps_terms);

  NlaPerformance perf{std::exp(log_vbar), std::exp(log_ps),
                      std::exp(log_vbar - log_ps), config, lambda, eta};
  return perf;
}

// Optimal filter gain inside the non-Gaussian-advantage window
// η ∈ (1, (1+λ)^2): √η below the kink, (1+λ)/√η above.
inline double nla_optimal_gain(double eta, double lambda) {
  if (!(eta > 1.0) || !(eta < (1.0 + lambda) * (1.0 + lambda)))
    throw std::domain_error("nla_optimal_gain: eta outside (1, (1+lambda)^2)");
  return eta <= 1.0 + lambda ? std::sqrt(eta) : (1.0 + lambda) / std::sqrt(eta);
}

// N → ∞ limit of vbar_prob at the optimal gain; by construction the same
// expression as the symmetric normal-task bound.
inline double nla_asymptote(double eta, double lambda) {
  if (!(eta > 0.0) || !(eta < (1.0 + lambda) * (1.0 + lambda)))
    throw std::domain_error("nla_asymptote: eta outside (0, (1+lambda)^2)");
  return symmetric_msd_bound(eta, lambda, false);
}

}  // namespace ampbench
