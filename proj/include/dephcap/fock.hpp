#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dephcap {

using cplx = std::complex<double>;

/// Amplitudes of a single-mode state in the Fock basis |0>, ..., |dim-1>,
/// together with the probability mass lost to truncation.
class FockVector {
 public:
  /// Throws std::invalid_argument unless norm_deficit >= 0 and
  /// |amplitudes|^2 + norm_deficit == 1 within 1e-12.
  FockVector(Eigen::VectorXcd amplitudes, double norm_deficit);

  /// Normalizes `amplitudes` (deficit 0). Rejects the zero vector.
  static FockVector normalized(Eigen::VectorXcd amplitudes);
  static FockVector basis(std::size_t n, std::size_t dim);

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  double norm_deficit() const { return norm_deficit_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  double squared_norm() const { return amplitudes_.squaredNorm(); }

  /// <this|other>. Vectors of different length are compared on the common prefix.
  cplx inner(const FockVector& other) const;

 private:
  Eigen::VectorXcd amplitudes_;
  double norm_deficit_;
};

/// Mean-photon-number-carrying distribution over Fock labels 0..d-1.
class ProbabilityDistribution {
 public:
  /// Entries must be >= 0 (roundoff down to -1e-14 is clipped) and sum to 1
  /// within 1e-12.
  explicit ProbabilityDistribution(std::vector<double> p);

  static ProbabilityDistribution uniform(std::size_t d);
  static ProbabilityDistribution point(std::size_t n, std::size_t d);

  std::span<const double> values() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t n) const { return p_[n]; }
  /// sum_n n p_n
  double energy() const { return energy_; }
  /// Shannon entropy in bits.
  double shannon_entropy() const;

 private:
  std::vector<double> p_;
  double energy_ = 0.0;
};

/// G[m][n] = <psi_m|psi_n> for a list of unit vectors.
class GramMatrix {
 public:
  /// Validates Hermiticity and unit diagonal (1e-12), and PSD (min eig >= -1e-10).
  explicit GramMatrix(Eigen::MatrixXcd entries);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  cplx operator()(std::size_t m, std::size_t n) const { return entries_(m, n); }
  double min_eigenvalue() const;

 private:
  Eigen::MatrixXcd entries_;
};

/// Truncated coherent state |alpha> on d_env Fock levels. Amplitudes are built
/// in log space, so |alpha|^2 far above 700 does not overflow.
FockVector coherent_vector(cplx alpha, std::size_t d_env);

/// <alpha|beta> = exp(-(|alpha|^2 + |beta|^2)/2 + conj(alpha) beta).
cplx coherent_overlap(cplx alpha, cplx beta);

GramMatrix gram_matrix(std::span<const cplx> amplitudes);

/// Gram matrix of explicit (possibly truncated) vectors from numerical inner
/// products; diagonal entries are 1 - norm_deficit.
Eigen::MatrixXcd vector_gram(std::span<const FockVector> vectors);

/// Amplitudes -i sqrt(gamma) n, n = 0..d-1: the environment states of the
/// dephasing dilation.
std::vector<cplx> dephasing_env_amplitudes(double gamma, std::size_t d);

/// Environment truncation ceil(mu + 10 sqrt(mu) + 20) for Poisson mean mu;
/// keeps the tail of every coherent state with |alpha|^2 <= mu below 1e-12.
std::size_t env_truncation(double mu);

/// Probability that a Poisson(mu) variable is >= n (upper tail), accurate in
/// both the bulk and the far tail.
double poisson_upper_tail(double mu, std::size_t n);

}  // namespace dephcap
