#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dephcap/entropy.hpp"
#include "dephcap/fock.hpp"

namespace dephcap {

/// Channel rho -> sum_j K_j rho K_j^dagger, with each K_j of size d_out x d_in.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Eigen::MatrixXcd> kraus);

  const std::vector<Eigen::MatrixXcd>& operators() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }
  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  /// max |sum_j K_j^dagger K_j - I|
  double completeness_residual() const { return residual_; }
  bool is_trace_preserving(double tol = 1e-10) const { return residual_ <= tol; }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  std::vector<Eigen::MatrixXcd> kraus_;
  std::size_t d_in_ = 0;
  std::size_t d_out_ = 0;
  double residual_ = 0.0;
};

/// Closed form of the dephasing channel: rho[n][m] * exp(-gamma (n - m)^2 / 2).
DensityMatrix dephasing_apply(const DensityMatrix& rho, double gamma);
Eigen::MatrixXcd dephasing_apply(const Eigen::MatrixXcd& rho, double gamma);

/// Diagonal Kraus family K_j(n,n) = exp(-gamma n^2/2) (-i sqrt(gamma) n)^j / sqrt(j!),
/// grown until the completeness residual is at most tail_tol.
KrausChannel dephasing_kraus(double gamma, std::size_t d, double tail_tol = 1e-12);

/// Complementary (environment) output of the dephasing channel for the
/// diagonal input p: label n carries the coherent state |-i sqrt(gamma) n>,
/// truncated by env_truncation(gamma (d-1)^2).
CQState complementary_cq_output(const ProbabilityDistribution& p, double gamma);

/// Kraus operators of a pure-loss beamsplitter of amplitude transmissivity
/// eta on a d-level truncation, k = 0..k_max:
///   B_k = sum_m sqrt(C(m+k, k)) (1 - eta^2)^(k/2) eta^m |m><m+k|.
/// The family is complete on the truncation once k_max >= d - 1; a smaller
/// k_max shows up as a completeness residual.
KrausChannel beamsplitter_kraus(double eta, std::size_t d, std::size_t k_max);

/// Image of a coherent amplitude under the beamsplitter: beta -> eta beta.
cplx beamsplitter_coherent_amplitude(cplx beta, double eta);

inline constexpr double kBalancedTransmissivity = 0.70710678118654752440;

enum class QubitFamily { A, B };

struct QubitSquashParams {
  QubitFamily family = QubitFamily::A;
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi]
};

/// The two-Kraus symmetric qubit channels.
///   A: K1 = [[sin t, 0], [0, 1/sqrt2]],  K2 = [[0, 1/sqrt2], [e^{i phi} cos t, 0]]
///   B: K1 = [[1, 0], [0, sin t / sqrt2]], K2 = [[0, sin t / sqrt2], [0, e^{i phi} cos t]]
KrausChannel symmetric_qubit_kraus(const QubitSquashParams& params);

/// Environment output Tr(K_i rho K_j^dagger) on the register indexed by Kraus label.
Eigen::MatrixXcd complementary_from_kraus(const KrausChannel& ch, const Eigen::MatrixXcd& rho);
DensityMatrix complementary_from_kraus(const KrausChannel& ch, const DensityMatrix& rho);

/// Orthonormalization of a list of vectors; e_0 is the first vector.
struct GramSchmidtEmbedding {
  std::vector<FockVector> basis;
  /// Column j holds <e_i|v_j>; upper triangular.
  Eigen::MatrixXcd coordinates;
  double gram_determinant = 0.0;
};

/// Rejects (std::domain_error) sets whose Gram determinant is at most 1e-12.
GramSchmidtEmbedding gram_schmidt_embed(std::span<const FockVector> vectors);

}  // namespace dephcap
