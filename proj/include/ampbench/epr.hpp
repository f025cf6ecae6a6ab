// EPR uncertainty, the MSD bridge at the Choi point η = 1+λ, distillation
// certificates, and the bipartite-vs-ensemble second-moment identity.
#pragma once

#include "ampbench/bounds.hpp"
#include "ampbench/channels.hpp"
#include "ampbench/ensemble.hpp"

#include <json.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <vector>

namespace ampbench {

struct EprValue {
  double delta = 1.0;  // min(1, raw)
  double raw = 0.0;
};

// Δ(ψ_ξ) = (1-ξ)^2 / (1-ξ^2)
inline double epr_tmss(double xi) {
  if (xi < 0.0 || xi >= 1.0) throw std::invalid_argument("epr_tmss: xi in [0,1)");
  return (1.0 - xi) * (1.0 - xi) / (1.0 - xi * xi);
}

// raw = (1/2)<Δ^2(x_A - x_B) + Δ^2(p_A + p_B)> for a normalized state given
// through its (already weight-normalized) two-mode moments.
inline EprValue epr_from_moments(const TwoModeMoments& t) {
  double mdx = t.xA - t.xB;
  double mdp = t.pA + t.pB;
  double var_x = t.xA2 + t.xB2 - 2.0 * t.xAxB - mdx * mdx;
  double var_p = t.pA2 + t.pB2 + 2.0 * t.pApB - mdp * mdp;
  double raw = 0.5 * (var_x + var_p);
  return {std::min(1.0, raw), raw};
}

inline TwoModeMoments normalized(TwoModeMoments t) {
  double w = t.weight;
  t.weight = 1.0;
  t.xA /= w;  t.pA /= w;  t.xB /= w;  t.pB /= w;
  t.xA2 /= w; t.pA2 /= w; t.xB2 /= w; t.pB2 /= w;
  t.xAxB /= w; t.pApB /= w;
  return t;
}

inline EprValue epr_uncertainty(const StateVector& psi) {
  if (psi.modes != 2)
    throw std::invalid_argument("epr_uncertainty: two-mode state required");
  TwoModeMoments t = two_mode_moments(psi);
  if (std::abs(t.weight - 1.0) > 1e-8)
    throw std::invalid_argument("epr_uncertainty: state must be normalized");
  return epr_from_moments(normalized(t));
}

// Mixture of pure branches (e.g. the branch vectors of a filtered state);
// normalized by the total weight before the variances are taken.
inline EprValue epr_uncertainty(const std::vector<StateVector>& branches) {
  if (branches.empty())
    throw std::invalid_argument("epr_uncertainty: empty branch list");
  TwoModeMoments acc{};
  for (const auto& b : branches) {
    TwoModeMoments t = two_mode_moments(b);
    acc.weight += t.weight;
    acc.xA += t.xA;   acc.pA += t.pA;   acc.xB += t.xB;   acc.pB += t.pB;
    acc.xA2 += t.xA2; acc.pA2 += t.pA2; acc.xB2 += t.xB2; acc.pB2 += t.pB2;
    acc.xAxB += t.xAxB; acc.pApB += t.pApB;
  }
  if (acc.weight <= 0.0)
    throw std::invalid_argument("epr_uncertainty: zero-weight ensemble");
  return epr_from_moments(normalized(acc));
}

inline EprValue epr_uncertainty(const DensityMatrix& J) {
  if (J.modes != 2)
    throw std::invalid_argument("epr_uncertainty: two-mode state required");
  if (std::abs(J.trace() - 1.0) > 1e-8)
    throw std::invalid_argument("epr_uncertainty: state must be normalized");
  int d = J.dim;
  Mat id = Mat::Identity(d, d);
  Mat x = quadrature_operator(Quadrature::x, d).entries;
  Mat p = quadrature_operator(Quadrature::p, d).entries;
  Mat x2 = quadrature_squared_operator(Quadrature::x, d).entries;
  Mat p2 = quadrature_squared_operator(Quadrature::p, d).entries;
  auto expect = [&](const Mat& op) {
    return (op * J.entries).trace().real();
  };
  Mat dxm = Eigen::kroneckerProduct(x, id).eval() -
            Eigen::kroneckerProduct(id, x).eval();
  Mat dpm = Eigen::kroneckerProduct(p, id).eval() +
            Eigen::kroneckerProduct(id, p).eval();
  Mat dx2 = Eigen::kroneckerProduct(x2, id).eval() +
            Eigen::kroneckerProduct(id, x2).eval() -
            2.0 * Eigen::kroneckerProduct(x, x).eval();
  Mat dp2 = Eigen::kroneckerProduct(p2, id).eval() +
            Eigen::kroneckerProduct(id, p2).eval() +
            2.0 * Eigen::kroneckerProduct(p, p).eval();
  double mx = expect(dxm), mp = expect(dpm);
  double raw = 0.5 * (expect(dx2) - mx * mx + expect(dp2) - mp * mp);
  return {std::min(1.0, raw), raw};
}

// Bridge from measured MSDs to the EPR uncertainty; only valid at the Choi
// point η_x = η_p = 1 + λ of the normal task.
inline EprValue delta_from_msd(const MomentSummary& s) {
  double want = 1.0 + s.lambda;
  if (s.task.conjugate || std::abs(s.task.eta_x - want) > 1e-9 ||
      std::abs(s.task.eta_p - want) > 1e-9)
    throw std::invalid_argument(
        "delta_from_msd: requires the normal task at eta_x = eta_p = 1 + lambda");
  double raw = 0.5 * (s.vbar_x + s.vbar_p) / s.p_s - 0.5;
  return {std::min(1.0, std::max(0.0, raw)), raw};
}

struct Certificate {
  MomentSummary summary;
  EprValue delta;
  bool physical = false;        // Σ V_z/P_s >= 1 (corollary floor)
  bool beats_gaussian = false;  // strict violation of the Gaussian bound
  bool beats_eb = false;        // below the entanglement-breaking line
  double margin_physical = 0.0;
  double margin_gaussian = 0.0;
  double margin_eb = 0.0;
  double threshold_gaussian = 0.0;  // in average-MSD (M) units
};

// Thresholds in M = (V_x + V_p)/(2 P_s) units: physical floor 1/2, Gaussian
// no-go (√(1+λ)-1)^2/λ + 1/2, entanglement-breaking line 3/2.
inline Certificate distillation_certificate(const MomentSummary& s) {
  Certificate cert;
  cert.summary = s;
  cert.delta = delta_from_msd(s);
  double m = 0.5 * (s.vbar_x + s.vbar_p) / s.p_s;
  double d = std::sqrt(1.0 + s.lambda) - 1.0;
  cert.threshold_gaussian = d * d / s.lambda + 0.5;
  cert.margin_physical = m - 0.5;
  cert.margin_gaussian = cert.threshold_gaussian - m;
  cert.margin_eb = 1.5 - m;
  cert.physical = cert.margin_physical >= -kBoundTol;
  cert.beats_gaussian = cert.physical && cert.margin_gaussian > kBoundTol;
  cert.beats_eb = cert.physical && cert.margin_eb > kBoundTol;
  return cert;
}

inline nlohmann::json to_json(const Certificate& c) {
  return {{"p_s", c.summary.p_s},
          {"vbar_x_prob", c.summary.vbar_x / c.summary.p_s},
          {"vbar_p_prob", c.summary.vbar_p / c.summary.p_s},
          {"delta_raw", c.delta.raw},
          {"delta", c.delta.delta},
          {"thresholds",
           {{"physical", 0.5},
            {"gaussian", c.threshold_gaussian},
            {"eb", 1.5}}},
          {"verdicts",
           {{"physical", c.physical},
            {"beats_gaussian", c.beats_gaussian},
            {"beats_eb", c.beats_eb}}},
          {"lambda", c.summary.lambda}};
}

struct ChoiIdentityResult {
  double lhs_x = 0.0, lhs_p = 0.0;  // bipartite second moments on J
  double rhs_x = 0.0, rhs_p = 0.0;  // ensemble MSD expression
  double max_abs_diff = 0.0;
  double p_s_bipartite = 0.0;
  double p_s_ensemble = 0.0;
};

// Cross-check of the proof identity: tr[(x_A - g_x x_B)^2 J] and
// tr[(p_A + g_p p_B)^2 J] on J = (E⊗I)(ψ_ξ)/P_s against the ensemble
// expression V_z/P_s - g_z^2/2 at η_z = (1+λ)g_z^2, λ = (1-ξ^2)/ξ^2.
// The phase-conjugation variant uses g_p < 0.
inline ChoiIdentityResult choi_msd_identity(const KrausChannel& channel, double xi,
                                            double g_x, double g_p,
                                            const IntegrationGrid& grid) {
  if (!(xi > 0.0 && xi < 1.0))
    throw std::invalid_argument("choi_msd_identity: xi in (0,1)");
  if (g_x < 0.0)
    throw std::invalid_argument("choi_msd_identity: g_x must be >= 0");
  int d = channel.dim;
  StateVector psi = two_mode_squeezed_state(xi, d);
  auto [branches, p_s] = apply_bipartite_pure(channel, psi);

  ChoiIdentityResult res;
  res.p_s_bipartite = p_s;
  double lx = 0.0, lp = 0.0;
  for (const auto& b : branches) {
    TwoModeMoments t = two_mode_moments(b);
    lx += t.xA2 + g_x * g_x * t.xB2 - 2.0 * g_x * t.xAxB;
    lp += t.pA2 + g_p * g_p * t.pB2 + 2.0 * g_p * t.pApB;
  }
  res.lhs_x = lx / p_s;
  res.lhs_p = lp / p_s;

  double lambda = (1.0 - xi * xi) / (xi * xi);
  bool conjugate = g_p < 0.0;
  Task task((1.0 + lambda) * g_x * g_x, (1.0 + lambda) * g_p * g_p, conjugate);
  MomentSummary s = msd_estimate(channel, task, Prior(lambda), grid);
  res.p_s_ensemble = s.p_s;
  res.rhs_x = s.vbar_x / s.p_s - 0.5 * g_x * g_x;
  res.rhs_p = s.vbar_p / s.p_s - 0.5 * g_p * g_p;
  res.max_abs_diff = std::max(std::abs(res.lhs_x - res.rhs_x),
                              std::abs(res.lhs_p - res.rhs_p));
  return res;
}

}  // namespace ampbench
