// Truncated Fock-space states and operators (single and two mode).
//
// Conventions: hbar = 1, [x,p] = i, x = (a + a^dag)/sqrt(2),
// p = (a - a^dag)/(i sqrt(2)); coherent states have variance 1/2.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ampbench {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Raised when a requested evaluation would push significant amplitude past
// the truncation boundary.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StateVector {
  int dim = 0;    // per-mode truncation D
  int modes = 1;  // 1 or 2
  Vec amps;       // length D (one mode) or D*D, index n_A*D + n_B

  double squared_norm() const { return amps.squaredNorm(); }
};

struct DensityMatrix {
  int dim = 0;
  int modes = 1;
  Mat entries;  // D x D or D^2 x D^2

  double trace() const { return entries.trace().real(); }
};

enum class OperatorTag { annihilation, x, p, x2, p2, squeezer, custom };

struct OperatorMatrix {
  int dim = 0;
  Mat entries;
  OperatorTag tag = OperatorTag::custom;
  double unitarity_defect = 0.0;  // meaningful for squeezer only
};

inline void require_dim(int dim) {
  if (dim < 2) throw std::invalid_argument("truncation dimension must be >= 2");
}

// Default truncation policy: keeps the Poisson tail below ~1e-12 for
// amplitudes up to m.
inline int recommended_dim(double max_amplitude) {
  double m = std::abs(max_amplitude);
  return static_cast<int>(std::ceil(m * m + 10.0 * m + 20.0));
}

inline StateVector coherent_state(Complex alpha, int dim) {
  require_dim(dim);
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw std::invalid_argument("coherent_state: non-finite amplitude");
  StateVector psi{dim, 1, Vec(dim)};
  // c_n = e^{-|a|^2/2} a^n / sqrt(n!), built by recurrence
  Complex c = std::exp(-0.5 * std::norm(alpha));
  psi.amps(0) = c;
  for (int n = 1; n < dim; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    psi.amps(n) = c;
  }
  return psi;
}

inline Mat annihilation_matrix(int dim) {
  require_dim(dim);
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

enum class Quadrature { x, p };

inline OperatorMatrix quadrature_operator(Quadrature which, int dim) {
  require_dim(dim);
  Mat a = annihilation_matrix(dim);
  Mat ad = a.adjoint();
  OperatorMatrix op;
  op.dim = dim;
  if (which == Quadrature::x) {
    op.entries = (a + ad) / std::sqrt(2.0);
    op.tag = OperatorTag::x;
  } else {
    op.entries = (a - ad) / (Complex(0, 1) * std::sqrt(2.0));
    op.tag = OperatorTag::p;
  }
  return op;
}

// Faithful D x D block of the untruncated x^2 (or p^2): built at dimension
// D+2 and cropped, so second moments of states supported below D are exact.
inline OperatorMatrix quadrature_squared_operator(Quadrature which, int dim) {
  require_dim(dim);
  Mat z = quadrature_operator(which, dim + 2).entries;
  OperatorMatrix op;
  op.dim = dim;
  op.entries = (z * z).topLeftCorner(dim, dim);
  op.tag = which == Quadrature::x ? OperatorTag::x2 : OperatorTag::p2;
  return op;
}

// exp(r (a^2 - a^dag^2)/2) on the truncated space. The matrix is not exactly
// unitary at finite D; the defect ||S^dag S - I|| is reported as metadata.
inline OperatorMatrix squeeze_operator(double r, int dim, double r_max = 2.0) {
  require_dim(dim);
  if (std::abs(r) > r_max)
    throw std::invalid_argument("squeeze_operator: |r| exceeds r_max");
  Mat a = annihilation_matrix(dim);
  Mat gen = 0.5 * r * (a * a - (a * a).adjoint());
  OperatorMatrix op;
  op.dim = dim;
  op.entries = gen.exp();
  op.tag = OperatorTag::squeezer;
  op.unitarity_defect =
      (op.entries.adjoint() * op.entries - Mat::Identity(dim, dim)).norm();
  return op;
}

inline StateVector two_mode_squeezed_state(double xi, int dim) {
  require_dim(dim);
  if (xi < 0.0 || xi >= 1.0)
    throw std::invalid_argument("two_mode_squeezed_state: xi must be in [0,1)");
  StateVector psi{dim, 2, Vec::Zero(dim * dim)};
  double c = std::sqrt(1.0 - xi * xi);
  for (int n = 0; n < dim; ++n) {
    psi.amps(n * dim + n) = c;
    c *= xi;
  }
  return psi;
}

inline DensityMatrix density(const StateVector& psi) {
  return DensityMatrix{psi.dim, psi.modes, psi.amps * psi.amps.adjoint()};
}

enum class Subsystem { A, B };

inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  if (rho.modes != 2)
    throw std::invalid_argument("partial_trace: two-mode input required");
  int d = rho.dim;
  Mat out = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex s = 0;
      for (int k = 0; k < d; ++k)
        s += keep == Subsystem::A ? rho.entries(i * d + k, j * d + k)
                                  : rho.entries(k * d + i, k * d + j);
      out(i, j) = s;
    }
  return DensityMatrix{d, 1, std::move(out)};
}

// -- O(D) moment helpers for pure states ------------------------------------
//
// Ladder identities give exact first/second quadrature moments of a state
// supported on the truncated space:
//   <x^2> = 1/2 + <n> + Re<a^2>,  <p^2> = 1/2 + <n> - Re<a^2>.

struct QuadratureMoments {
  double weight;   // <psi|psi>
  double mx, mp;   // <x>, <p> (unnormalized by weight)
  double mx2, mp2; // <x^2>, <p^2> (unnormalized)
};

inline QuadratureMoments pure_moments(const Vec& c) {
  const int d = static_cast<int>(c.size());
  Complex a1 = 0, a2 = 0;
  double n_mean = 0, w = 0;
  for (int n = 0; n < d; ++n) {
    double cn2 = std::norm(c(n));
    w += cn2;
    n_mean += n * cn2;
    if (n + 1 < d) a1 += std::conj(c(n)) * c(n + 1) * std::sqrt(n + 1.0);
    if (n + 2 < d)
      a2 += std::conj(c(n)) * c(n + 2) * std::sqrt((n + 1.0) * (n + 2.0));
  }
  QuadratureMoments m{};
  m.weight = w;
  m.mx = std::sqrt(2.0) * a1.real();
  m.mp = std::sqrt(2.0) * a1.imag();
  m.mx2 = 0.5 * w + n_mean + a2.real();
  m.mp2 = 0.5 * w + n_mean - a2.real();
  return m;
}

// Two-mode pure-state moments needed for EPR-type combinations.
// Coefficients indexed c[n*D + m] = <n|_A <m|_B psi.
struct TwoModeMoments {
  double weight;
  double xA, pA, xB, pB;        // first moments (unnormalized)
  double xA2, pA2, xB2, pB2;    // second moments (unnormalized)
  double xAxB, pApB;            // cross moments (unnormalized)
};

inline TwoModeMoments two_mode_moments(const StateVector& psi) {
  if (psi.modes != 2)
    throw std::invalid_argument("two_mode_moments: two-mode state required");
  const int d = psi.dim;
  const Vec& c = psi.amps;
  auto idx = [d](int n, int m) { return n * d + m; };
  Complex aA = 0, aB = 0, aA2 = 0, aB2 = 0, aAaB = 0, aAbD = 0;
  double nA = 0, nB = 0, w = 0;
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      Complex cc = std::conj(c(idx(n, m)));
      if (cc == Complex(0, 0)) continue;
      double c2 = std::norm(c(idx(n, m)));
      w += c2;
      nA += n * c2;
      nB += m * c2;
      if (n + 1 < d) aA += cc * c(idx(n + 1, m)) * std::sqrt(n + 1.0);
      if (m + 1 < d) aB += cc * c(idx(n, m + 1)) * std::sqrt(m + 1.0);
      if (n + 2 < d)
        aA2 += cc * c(idx(n + 2, m)) * std::sqrt((n + 1.0) * (n + 2.0));
      if (m + 2 < d)
        aB2 += cc * c(idx(n, m + 2)) * std::sqrt((m + 1.0) * (m + 2.0));
      if (n + 1 < d && m + 1 < d)
        aAaB += cc * c(idx(n + 1, m + 1)) * std::sqrt((n + 1.0) * (m + 1.0));
      if (n + 1 < d && m >= 1)
        aAbD += cc * c(idx(n + 1, m - 1)) * std::sqrt((n + 1.0) * m);
    }
  TwoModeMoments t{};
  t.weight = w;
  t.xA = std::sqrt(2.0) * aA.real();
  t.pA = std::sqrt(2.0) * aA.imag();
  t.xB = std::sqrt(2.0) * aB.real();
  t.pB = std::sqrt(2.0) * aB.imag();
  t.xA2 = 0.5 * w + nA + aA2.real();
  t.pA2 = 0.5 * w + nA - aA2.real();
  t.xB2 = 0.5 * w + nB + aB2.real();
  t.pB2 = 0.5 * w + nB - aB2.real();
  // x_A x_B = Re(a_A a_B) + Re(a_A b^dag), p_A p_B = Re(a_A b^dag) - Re(a_A a_B)
  t.xAxB = aAaB.real() + aAbD.real();
  t.pApB = aAbD.real() - aAaB.real();
  return t;
}

inline bool is_hermitian(const Mat& m, double tol = 1e-12) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace ampbench
