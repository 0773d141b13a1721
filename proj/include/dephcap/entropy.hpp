#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dephcap/fock.hpp"

namespace dephcap {

/// Hermitian, unit-trace, positive-semidefinite matrix.
///
/// Construction rejects a Hermiticity residual above 1e-9 (and symmetrizes
/// anything below it) and a trace off by more than 1e-10. Positivity is
/// checked whenever the spectrum is taken: eigenvalues in [-psd_tolerance, 0)
/// are treated as roundoff and clipped, anything more negative throws.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries, double psd_tolerance = 1e-10);

  static DensityMatrix diagonal(std::span<const double> p);
  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  static DensityMatrix maximally_mixed(std::size_t d);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  double psd_tolerance() const { return psd_tolerance_; }

  /// Eigenvalues clipped to [0, 1]; throws std::domain_error below -psd_tolerance.
  Eigen::VectorXd eigenvalues() const;

 private:
  Eigen::MatrixXcd entries_;
  double psd_tolerance_;
};

/// Entropy in bits of a spectrum, with 0 log 0 = 0. Values in [-tol, 0) are
/// clipped; anything below -tol throws std::domain_error.
double spectrum_entropy(const Eigen::VectorXd& eigenvalues, double tol = 1e-10);

double von_neumann_entropy(const DensityMatrix& rho);

/// Eigen-decomposition of the weighted Gram matrix sqrt(p_m p_n) G[m][n],
/// whose nonzero spectrum equals that of sum_n p_n |psi_n><psi_n|.
struct MixtureSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // columns
};
MixtureSpectrum pure_mixture_spectrum(std::span<const double> p, const Eigen::MatrixXcd& gram);

/// S(sum_n p_n |psi_n><psi_n|) in bits, from the Gram matrix of the psi_n.
double entropy_of_pure_mixture(const ProbabilityDistribution& p, const GramMatrix& g);

/// Classical-quantum state sum_n p_n |n><n| (x) rho_n. Conditionals are either
/// all pure (kept as Fock vectors, possibly truncated) or all mixed.
class CQState {
 public:
  static CQState pure(ProbabilityDistribution probs, std::vector<FockVector> conditionals);
  static CQState mixed(ProbabilityDistribution probs, std::vector<DensityMatrix> conditionals);

  const ProbabilityDistribution& probs() const { return probs_; }
  std::size_t labels() const { return probs_.size(); }
  std::size_t conditional_dim() const;
  bool is_pure() const { return !pure_.empty(); }
  const std::vector<FockVector>& pure_conditionals() const { return pure_; }
  /// Conditional n as a density matrix (materialized for pure conditionals).
  DensityMatrix conditional(std::size_t n) const;

  /// Entropy of the average conditional sum_n p_n rho_n, in bits. Pure
  /// conditionals go through the Gram trick, so the environment dimension
  /// never enters an eigensolver.
  double average_entropy() const;
  /// sum_n p_n S(rho_n).
  double mean_conditional_entropy() const;

 private:
  CQState(ProbabilityDistribution probs, std::vector<FockVector> pure,
          std::vector<DensityMatrix> mixed);

  ProbabilityDistribution probs_;
  std::vector<FockVector> pure_;
  std::vector<DensityMatrix> mixed_;
};

/// I(S;E) = S(sum p_n rho_n) - sum p_n S(rho_n).
double holevo_information(const CQState& cq);

enum class Register { S = 0, E = 1, F = 2 };

struct TripartiteDims {
  std::size_t s = 1;
  std::size_t e = 1;
  std::size_t f = 1;
  std::size_t total() const { return s * e * f; }
};

/// Density matrix on H_S (x) H_E (x) H_F, with S the most significant index.
class TripartiteState {
 public:
  TripartiteState(DensityMatrix rho, TripartiteDims dims);

  const DensityMatrix& density() const { return rho_; }
  const TripartiteDims& dims() const { return dims_; }
  std::size_t dim(Register r) const;

  /// Reduced state on the registers with keep[r] = true (S, E, F order).
  DensityMatrix reduced(bool keep_s, bool keep_e, bool keep_f) const;
  /// Entropy of the reduced state on the listed registers.
  double entropy_of(std::initializer_list<Register> regs) const;

 private:
  DensityMatrix rho_;
  TripartiteDims dims_;
};

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

TripartiteState product_state(const DensityMatrix& s, const DensityMatrix& e, const DensityMatrix& f);

/// Embeds a CQ state as S (classical labels) (x) E, with a trivial F.
TripartiteState embed_cq(const CQState& cq);

/// I(A;B) between two distinct registers.
double mutual_information(const TripartiteState& state, Register a, Register b);
/// I(S;EF).
double mutual_information_s_ef(const TripartiteState& state);

inline constexpr std::size_t kDefaultDimensionCap = 4096;

/// I(X;Y|C) where C = `conditioning` and X, Y are the other two registers:
/// S(XC) + S(YC) - S(XYC) - S(C). Rejects states above `dim_cap`.
double conditional_mutual_information(const TripartiteState& state, Register conditioning,
                                      std::size_t dim_cap = kDefaultDimensionCap);

}  // namespace dephcap
