// Kraus-form quantum operations: the noiseless linear amplifier filter,
// Gaussian amplifier/attenuator dilations, squeezer-wrapped compositions,
// and a seeded random-operation generator for property tests.
//
// Kraus operators are stored sparse (the dilation families are single
// diagonals); an optional dense post-unitary represents S E(.) S^dag
// compositions without densifying the family.
#pragma once

#include "ampbench/fock.hpp"

#include <json.hpp>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ampbench {

using SpMat = Eigen::SparseMatrix<Complex>;

struct NlaConfig {
  double g = 1.0;        // per-photon gain, >= 1
  int cutoff = 0;        // N
  double normalization;  // script-N in (0, g^{-2N}]

  NlaConfig(double g_, int N_, double norm_ = -1.0)
      : g(g_), cutoff(N_), normalization(norm_) {
    if (g < 1.0) throw std::invalid_argument("nla: g must be >= 1");
    if (N_ < 0) throw std::invalid_argument("nla: cutoff must be >= 0");
    double cap = std::pow(g, -2.0 * N_);
    if (normalization < 0.0) normalization = cap;  // saturate by default
    if (normalization <= 0.0 || normalization > cap * (1.0 + 1e-12))
      throw std::invalid_argument("nla: normalization must be in (0, g^{-2N}]");
  }
};

struct KrausChannel {
  int dim = 0;
  std::vector<SpMat> kraus_ops;
  std::optional<Mat> post;  // unitary applied after every Kraus op
  std::string label;

  Mat effective_op(size_t i) const {
    Mat k = Mat(kraus_ops[i]);
    return post ? Mat(*post * k) : k;
  }

  // max eigenvalue of sum K^dag K - I; <= tol means trace-non-increasing
  double trace_excess() const {
    Mat s = -Mat::Identity(dim, dim);
    Mat pp = post ? Mat(post->adjoint() * *post) : Mat::Identity(dim, dim);
    for (const auto& k : kraus_ops) s += Mat(k).adjoint() * pp * Mat(k);
    Eigen::SelfAdjointEigenSolver<Mat> es(s);
    return es.eigenvalues().maxCoeff();
  }
};

inline KrausChannel identity_channel(int dim) {
  require_dim(dim);
  SpMat id(dim, dim);
  id.setIdentity();
  return {dim, {id}, std::nullopt, "identity"};
}

inline KrausChannel nla_channel(const NlaConfig& cfg, int dim) {
  require_dim(dim);
  std::vector<Eigen::Triplet<Complex>> trip;
  double root_norm = std::sqrt(cfg.normalization);
  double gn = 1.0;
  for (int n = 0; n <= cfg.cutoff && n < dim; ++n) {
    trip.emplace_back(n, n, root_norm * gn);
    gn *= cfg.g;
  }
  SpMat q(dim, dim);
  q.setFromTriplets(trip.begin(), trip.end());
  return {dim, {q}, std::nullopt, "nla"};
}

// Phase-insensitive amplifier A_G via the two-mode-squeezer dilation with a
// vacuum ancilla; ladder form K_k[n+k, n] = sech(r)^{n+1} tanh(r)^k
// sqrt(binom(n+k, k)) with cosh^2 r = G.
inline KrausChannel gaussian_amp_channel(double G, int dim) {
  require_dim(dim);
  if (G < 1.0) throw std::invalid_argument("gaussian_amp: G must be >= 1");
  double log_sech = -0.5 * std::log(G);
  double tanh_r = std::sqrt(1.0 - 1.0 / G);
  KrausChannel ch{dim, {}, std::nullopt, "gaussian_amp"};
  for (int k = 0; k < dim; ++k) {
    if (k > 0 && tanh_r == 0.0) break;
    std::vector<Eigen::Triplet<Complex>> trip;
    for (int n = 0; n + k < dim; ++n) {
      double lg = 0.5 * (std::lgamma(n + k + 1.0) - std::lgamma(n + 1.0) -
                         std::lgamma(k + 1.0));
      double lt = k > 0 ? k * std::log(tanh_r) : 0.0;
      trip.emplace_back(n + k, n, std::exp(lg + (n + 1.0) * log_sech + lt));
    }
    SpMat kk(dim, dim);
    kk.setFromTriplets(trip.begin(), trip.end());
    ch.kraus_ops.push_back(std::move(kk));
  }
  return ch;
}

// Attenuator via beam-splitter dilation with vacuum, transmissivity G:
// B_k[n-k, n] = sqrt(binom(n, k)) sqrt(1-G)^k sqrt(G)^{n-k}.
inline KrausChannel gaussian_attenuator_channel(double G, int dim) {
  require_dim(dim);
  if (G < 0.0 || G > 1.0)
    throw std::invalid_argument("gaussian_attenuator: G must be in [0,1]");
  KrausChannel ch{dim, {}, std::nullopt, "gaussian_attenuator"};
  for (int k = 0; k < dim; ++k) {
    if (k > 0 && G == 1.0) break;
    std::vector<Eigen::Triplet<Complex>> trip;
    for (int n = k; n < dim; ++n) {
      if (n - k > 0 && G == 0.0) continue;
      double lg = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n - k + 1.0) -
                         std::lgamma(k + 1.0));
      double lk = k > 0 ? 0.5 * k * std::log(1.0 - G) : 0.0;
      double ln = n - k > 0 ? 0.5 * (n - k) * std::log(G) : 0.0;
      trip.emplace_back(n - k, n, std::exp(lg + lk + ln));
    }
    SpMat kk(dim, dim);
    kk.setFromTriplets(trip.begin(), trip.end());
    ch.kraus_ops.push_back(std::move(kk));
  }
  return ch;
}

// rho -> S E(rho) S^dag, tracked as a post-unitary
inline KrausChannel squeezer_conjugated(KrausChannel inner, double r) {
  Mat s = squeeze_operator(r, inner.dim).entries;
  inner.post = inner.post ? Mat(s * *inner.post) : s;
  inner.label = "squeezed(" + inner.label + ")";
  return inner;
}

inline std::pair<DensityMatrix, double> apply(const KrausChannel& ch,
                                              const DensityMatrix& rho) {
  if (rho.dim != ch.dim || rho.modes != 1)
    throw std::invalid_argument("apply: dimension mismatch");
  Mat out = Mat::Zero(ch.dim, ch.dim);
  for (size_t i = 0; i < ch.kraus_ops.size(); ++i) {
    Mat k = ch.effective_op(i);
    out += k * rho.entries * k.adjoint();
  }
  DensityMatrix r{ch.dim, 1, std::move(out)};
  return {r, r.trace()};
}

// Branch vectors K_i |psi> of a pure input; trace-free fast path for moment
// accumulation.
inline std::vector<Vec> apply_to_pure(const KrausChannel& ch, const Vec& psi) {
  if (psi.size() != ch.dim)
    throw std::invalid_argument("apply_to_pure: dimension mismatch");
  std::vector<Vec> out;
  out.reserve(ch.kraus_ops.size());
  for (const auto& k : ch.kraus_ops) {
    Vec v = k * psi;
    out.push_back(ch.post ? Vec(*ch.post * v) : std::move(v));
  }
  return out;
}

// (E ⊗ I)(J) for a two-mode pure state, returned as branch vectors plus the
// total weight P_s.
inline std::pair<std::vector<StateVector>, double> apply_bipartite_pure(
    const KrausChannel& ch, const StateVector& psi) {
  if (psi.modes != 2 || psi.dim != ch.dim)
    throw std::invalid_argument("apply_bipartite_pure: dimension mismatch");
  int d = ch.dim;
  using RowMat =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> c(psi.amps.data(), d, d);  // c(n_A, n_B)
  std::vector<StateVector> out;
  double weight = 0.0;
  for (const auto& k : ch.kraus_ops) {
    RowMat m = k * c;
    if (ch.post) m = (*ch.post * m).eval();
    StateVector branch{d, 2, Eigen::Map<Vec>(m.data(), d * d)};
    weight += branch.squared_norm();
    out.push_back(std::move(branch));
  }
  return {out, weight};
}

inline std::pair<DensityMatrix, double> apply_bipartite(const KrausChannel& ch,
                                                        const DensityMatrix& J) {
  if (J.modes != 2 || J.dim != ch.dim)
    throw std::invalid_argument("apply_bipartite: dimension mismatch");
  int d = ch.dim;
  Mat out = Mat::Zero(d * d, d * d);
  Mat id = Mat::Identity(d, d);
  for (size_t i = 0; i < ch.kraus_ops.size(); ++i) {
    Mat kk = Eigen::kroneckerProduct(ch.effective_op(i), id).eval();
    out += kk * J.entries * kk.adjoint();
  }
  DensityMatrix r{d, 2, std::move(out)};
  return {r, r.trace()};
}

// Kraus ops drawn as row blocks of a Haar-ish isometry (QR of a Gaussian
// matrix); optionally composed with a random strict contraction.
inline KrausChannel random_operation(int dim, int num_kraus, bool trace_decreasing,
                                     std::uint64_t seed) {
  require_dim(dim);
  if (num_kraus < 1) throw std::invalid_argument("random_operation: k >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat big(dim * num_kraus, dim);
  for (int i = 0; i < big.rows(); ++i)
    for (int j = 0; j < big.cols(); ++j)
      big(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(big);
  Mat iso = qr.householderQ() * Mat::Identity(dim * num_kraus, dim);
  Mat contraction = Mat::Identity(dim, dim);
  if (trace_decreasing) {
    Mat w(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) w(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Mat> qw(w);
    Mat u = qw.householderQ();
    std::uniform_real_distribution<double> s(0.1, 0.9);
    Eigen::VectorXd sing(dim);
    for (int i = 0; i < dim; ++i) sing(i) = s(rng);
    contraction = u * sing.asDiagonal() * u.adjoint();
  }
  KrausChannel ch{dim, {}, std::nullopt, "random"};
  for (int b = 0; b < num_kraus; ++b)
    ch.kraus_ops.push_back(
        Mat(iso.middleRows(b * dim, dim) * contraction).sparseView());
  return ch;
}

// -- JSON channel descriptors (CLI wire format) -----------------------------

struct ChannelSpec {
  std::string kind;  // gaussian_amp | gaussian_attenuator | nla |
                     // squeezer_conjugated | identity
  double G = 1.0;
  double g = 1.0;
  int N = 0;
  double normalization = -1.0;
  double r = 0.0;
  std::shared_ptr<ChannelSpec> inner;
};

inline nlohmann::json to_json(const ChannelSpec& s) {
  nlohmann::json j{{"kind", s.kind}};
  if (s.kind == "gaussian_amp" || s.kind == "gaussian_attenuator") j["G"] = s.G;
  if (s.kind == "nla") {
    j["g"] = s.g;
    j["N"] = s.N;
    if (s.normalization > 0.0) j["normalization"] = s.normalization;
  }
  if (s.kind == "squeezer_conjugated") {
    j["r"] = s.r;
    j["inner"] = s.inner ? to_json(*s.inner) : nlohmann::json{{"kind", "identity"}};
  }
  return j;
}

inline ChannelSpec channel_spec_from_json(const nlohmann::json& j) {
  ChannelSpec s;
  s.kind = j.at("kind").get<std::string>();
  if (s.kind == "gaussian_amp" || s.kind == "gaussian_attenuator")
    s.G = j.at("G").get<double>();
  else if (s.kind == "nla") {
    s.g = j.at("g").get<double>();
    s.N = j.at("N").get<int>();
    s.normalization = j.value("normalization", -1.0);
  } else if (s.kind == "squeezer_conjugated") {
    s.r = j.at("r").get<double>();
    s.inner = std::make_shared<ChannelSpec>(channel_spec_from_json(j.at("inner")));
  } else if (s.kind != "identity") {
    throw std::invalid_argument("unknown channel kind: " + s.kind);
  }
  return s;
}

inline KrausChannel build_channel(const ChannelSpec& spec, int dim) {
  if (spec.kind == "identity") return identity_channel(dim);
  if (spec.kind == "gaussian_amp") return gaussian_amp_channel(spec.G, dim);
  if (spec.kind == "gaussian_attenuator")
    return gaussian_attenuator_channel(spec.G, dim);
  if (spec.kind == "nla")
    return nla_channel(NlaConfig(spec.g, spec.N, spec.normalization), dim);
  if (spec.kind == "squeezer_conjugated") {
    ChannelSpec inner = spec.inner ? *spec.inner : ChannelSpec{"identity"};
    return squeezer_conjugated(build_channel(inner, dim), spec.r);
  }
  throw std::invalid_argument("unknown channel kind: " + spec.kind);
}

}  // namespace ampbench
