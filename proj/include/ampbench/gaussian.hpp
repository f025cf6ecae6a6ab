// Moment-level (mean + covariance) calculus for Gaussian states and channels.
// Quadrature ordering is (x1, p1[, x2, p2]) project-wide.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ampbench {

struct GaussianState {
  int modes = 1;
  Eigen::VectorXd mean;  // 2*modes
  Eigen::MatrixXd cov;   // 2*modes x 2*modes, symmetric
};

inline GaussianState vacuum_state(int modes = 1) {
  GaussianState s;
  s.modes = modes;
  s.mean = Eigen::VectorXd::Zero(2 * modes);
  s.cov = 0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  return s;
}

inline GaussianState coherent_gaussian(double x, double p) {
  GaussianState s = vacuum_state(1);
  s.mean << x, p;
  return s;
}

// Symplectic form for the (x1,p1,...) ordering.
inline Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

// Physicality: cov + (i/2) Omega >= 0, checked through the Hermitian
// eigenvalues.
inline double physicality_defect(const GaussianState& s) {
  Eigen::MatrixXcd h = s.cov.cast<std::complex<double>>() +
                       std::complex<double>(0, 0.5) *
                           symplectic_form(s.modes).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  return -es.eigenvalues().minCoeff();
}

inline bool is_physical(const GaussianState& s, double tol = 1e-10) {
  return physicality_defect(s) <= tol;
}

enum class GaussianKind { amplifier, attenuator, squeezer, mp_conjugator, identity };

struct GaussianChannelSpec {
  GaussianKind kind = GaussianKind::identity;
  double parameter = 0.0;  // gain G or squeezing r

  static GaussianChannelSpec amplifier(double G) {
    if (G < 1.0) throw std::invalid_argument("amplifier gain must be >= 1");
    return {GaussianKind::amplifier, G};
  }
  static GaussianChannelSpec attenuator(double G) {
    if (G < 0.0 || G > 1.0)
      throw std::invalid_argument("attenuator gain must be in [0,1]");
    return {GaussianKind::attenuator, G};
  }
  static GaussianChannelSpec squeezer(double r) {
    return {GaussianKind::squeezer, r};
  }
  static GaussianChannelSpec mp_conjugator(double G) {
    if (G < 0.0) throw std::invalid_argument("mp_conjugator gain must be >= 0");
    return {GaussianKind::mp_conjugator, G};
  }
  static GaussianChannelSpec identity() { return {GaussianKind::identity, 0.0}; }
};

inline GaussianState apply_gaussian_channel(const GaussianState& in,
                                            const GaussianChannelSpec& spec) {
  if (in.modes != 1)
    throw std::invalid_argument("apply_gaussian_channel: single-mode state required");
  if (!is_physical(in))
    throw std::invalid_argument("apply_gaussian_channel: unphysical input covariance");
  GaussianState out = in;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  switch (spec.kind) {
    case GaussianKind::identity:
      break;
    case GaussianKind::amplifier: {
      double G = spec.parameter;
      out.mean = std::sqrt(G) * in.mean;
      out.cov = G * in.cov + 0.5 * (G - 1.0) * id;
      break;
    }
    case GaussianKind::attenuator: {
      double G = spec.parameter;
      out.mean = std::sqrt(G) * in.mean;
      out.cov = G * in.cov + 0.5 * (1.0 - G) * id;
      break;
    }
    case GaussianKind::squeezer: {
      Eigen::Matrix2d s;
      s << std::exp(-spec.parameter), 0, 0, std::exp(spec.parameter);
      out.mean = s * in.mean;
      out.cov = s * in.cov * s.transpose();
      break;
    }
    case GaussianKind::mp_conjugator: {
      // heterodyne, conjugate, re-prepare: outcome covariance is the
      // Q-function covariance cov + I/2
      double G = spec.parameter;
      Eigen::Matrix2d z;
      z << 1, 0, 0, -1;
      out.mean.resize(2);
      out.mean << std::sqrt(G) * in.mean(0), -std::sqrt(G) * in.mean(1);
      out.cov = G * (z * (in.cov + 0.5 * id) * z) + 0.5 * id;
      break;
    }
  }
  return out;
}

struct ModeMoments {
  double mean_x, mean_p, var_x, var_p;
};

inline std::vector<ModeMoments> moments(const GaussianState& s) {
  std::vector<ModeMoments> out;
  for (int k = 0; k < s.modes; ++k)
    out.push_back({s.mean(2 * k), s.mean(2 * k + 1), s.cov(2 * k, 2 * k),
                   s.cov(2 * k + 1, 2 * k + 1)});
  return out;
}

// Linear response of a chain of single-mode Gaussian channels on coherent
// inputs: output mean = M * (x_a, p_a), output covariance V independent of
// the input amplitude. M stays diagonal for every supported kind.
struct LinearResponse {
  Eigen::Matrix2d gain;  // M
  Eigen::Matrix2d cov;   // V
};

inline LinearResponse linear_response(const std::vector<GaussianChannelSpec>& chain) {
  LinearResponse r{Eigen::Matrix2d::Identity(),
                   0.5 * Eigen::Matrix2d::Identity()};
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  for (const auto& spec : chain) {
    switch (spec.kind) {
      case GaussianKind::identity:
        break;
      case GaussianKind::amplifier: {
        double G = spec.parameter;
        r.gain = std::sqrt(G) * r.gain;
        r.cov = G * r.cov + 0.5 * (G - 1.0) * id;
        break;
      }
      case GaussianKind::attenuator: {
        double G = spec.parameter;
        r.gain = std::sqrt(G) * r.gain;
        r.cov = G * r.cov + 0.5 * (1.0 - G) * id;
        break;
      }
      case GaussianKind::squeezer: {
        Eigen::Matrix2d s;
        s << std::exp(-spec.parameter), 0, 0, std::exp(spec.parameter);
        r.gain = s * r.gain;
        r.cov = s * r.cov * s.transpose();
        break;
      }
      case GaussianKind::mp_conjugator: {
        double G = spec.parameter;
        Eigen::Matrix2d z;
        z << 1, 0, 0, -1;
        r.gain = std::sqrt(G) * z * r.gain;
        r.cov = G * (z * (r.cov + 0.5 * id) * z) + 0.5 * id;
        break;
      }
    }
  }
  return r;
}

}  // namespace ampbench
