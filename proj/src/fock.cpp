#include "dephcap/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dephcap {

namespace {

constexpr double kNormTol = 1e-12;

double log_poisson_term(double mu, std::size_t m) {
  const double md = static_cast<double>(m);
  return -mu + md * std::log(mu) - std::lgamma(md + 1.0);
}

}  // namespace

FockVector::FockVector(Eigen::VectorXcd amplitudes, double norm_deficit)
    : amplitudes_(std::move(amplitudes)), norm_deficit_(norm_deficit) {
  if (amplitudes_.size() == 0) throw std::invalid_argument("FockVector: empty amplitude list");
  if (!(norm_deficit_ >= 0.0)) throw std::invalid_argument("FockVector: negative norm deficit");
  const double total = amplitudes_.squaredNorm() + norm_deficit_;
  if (std::abs(total - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "FockVector: squared norm + deficit = " << total << " (expected 1)";
    throw std::invalid_argument(os.str());
  }
}

FockVector FockVector::normalized(Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw std::invalid_argument("FockVector: cannot normalize the zero vector");
  amplitudes /= n;
  return FockVector(std::move(amplitudes), 0.0);
}

FockVector FockVector::basis(std::size_t n, std::size_t dim) {
  if (n >= dim) throw std::invalid_argument("FockVector::basis: label outside truncation");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(n)) = 1.0;
  return FockVector(std::move(v), 0.0);
}

cplx FockVector::inner(const FockVector& other) const {
  const Eigen::Index k = std::min(amplitudes_.size(), other.amplitudes_.size());
  return amplitudes_.head(k).dot(other.amplitudes_.head(k));
}

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw std::invalid_argument("ProbabilityDistribution: empty");
  double sum = 0.0;
  for (double& v : p_) {
    if (!std::isfinite(v) || v < -1e-14)
      throw std::invalid_argument("ProbabilityDistribution: entries must be non-negative");
    v = std::max(v, 0.0);
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "ProbabilityDistribution: entries sum to " << sum;
    throw std::invalid_argument(os.str());
  }
  for (std::size_t n = 0; n < p_.size(); ++n) energy_ += static_cast<double>(n) * p_[n];
}

ProbabilityDistribution ProbabilityDistribution::uniform(std::size_t d) {
  if (d == 0) throw std::invalid_argument("ProbabilityDistribution::uniform: d = 0");
  return ProbabilityDistribution(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

ProbabilityDistribution ProbabilityDistribution::point(std::size_t n, std::size_t d) {
  if (n >= d) throw std::invalid_argument("ProbabilityDistribution::point: label outside support");
  std::vector<double> p(d, 0.0);
  p[n] = 1.0;
  return ProbabilityDistribution(std::move(p));
}

double ProbabilityDistribution::shannon_entropy() const {
  double h = 0.0;
  for (double v : p_)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

GramMatrix::GramMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw std::invalid_argument("GramMatrix: must be square and non-empty");
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kNormTol) throw std::invalid_argument("GramMatrix: not Hermitian");
  for (Eigen::Index i = 0; i < entries_.rows(); ++i)
    if (std::abs(entries_(i, i) - 1.0) > kNormTol)
      throw std::invalid_argument("GramMatrix: diagonal must be 1");
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
  if (min_eigenvalue() < -1e-10) throw std::invalid_argument("GramMatrix: not positive semidefinite");
}

double GramMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

FockVector coherent_vector(cplx alpha, std::size_t d_env) {
  if (d_env == 0) throw std::invalid_argument("coherent_vector: d_env must be positive");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d_env));
  const double mod2 = std::norm(alpha);
  if (mod2 == 0.0) {
    amps(0) = 1.0;
    return FockVector(std::move(amps), 0.0);
  }
  const double log_mod = 0.5 * std::log(mod2);
  const double phase = std::arg(alpha);
  for (std::size_t m = 0; m < d_env; ++m) {
    const double md = static_cast<double>(m);
    const double log_abs = -0.5 * mod2 + md * log_mod - 0.5 * std::lgamma(md + 1.0);
    amps(static_cast<Eigen::Index>(m)) = std::polar(std::exp(log_abs), md * phase);
  }
  const double tail = poisson_upper_tail(mod2, d_env);
  // The tail is exact; the head sum carries roundoff, so reconcile within it.
  const double deficit = std::abs(amps.squaredNorm() + tail - 1.0) <= kNormTol
                             ? tail
                             : std::max(0.0, 1.0 - amps.squaredNorm());
  return FockVector(std::move(amps), deficit);
}

cplx coherent_overlap(cplx alpha, cplx beta) {
  const cplx exponent = -0.5 * (std::norm(alpha) + std::norm(beta)) + std::conj(alpha) * beta;
  return std::exp(exponent);
}

GramMatrix gram_matrix(std::span<const cplx> amplitudes) {
  if (amplitudes.empty()) throw std::invalid_argument("gram_matrix: empty amplitude list");
  const auto d = static_cast<Eigen::Index>(amplitudes.size());
  Eigen::MatrixXcd g(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    g(m, m) = 1.0;
    for (Eigen::Index n = m + 1; n < d; ++n) {
      g(m, n) = coherent_overlap(amplitudes[m], amplitudes[n]);
      g(n, m) = std::conj(g(m, n));
    }
  }
  return GramMatrix(std::move(g));
}

Eigen::MatrixXcd vector_gram(std::span<const FockVector> vectors) {
  const auto d = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXcd g(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    g(m, m) = vectors[m].squared_norm();
    for (Eigen::Index n = m + 1; n < d; ++n) {
      g(m, n) = vectors[m].inner(vectors[n]);
      g(n, m) = std::conj(g(m, n));
    }
  }
  return g;
}

std::vector<cplx> dephasing_env_amplitudes(double gamma, std::size_t d) {
  if (gamma < 0.0) throw std::invalid_argument("dephasing_env_amplitudes: gamma must be >= 0");
  std::vector<cplx> out(d);
  const double s = std::sqrt(gamma);
  for (std::size_t n = 0; n < d; ++n) out[n] = cplx(0.0, -s * static_cast<double>(n));
  return out;
}

std::size_t env_truncation(double mu) {
  if (mu < 0.0) throw std::invalid_argument("env_truncation: negative mean");
  return static_cast<std::size_t>(std::ceil(mu + 10.0 * std::sqrt(mu) + 20.0));
}

double poisson_upper_tail(double mu, std::size_t n) {
  if (mu < 0.0) throw std::invalid_argument("poisson_upper_tail: negative mean");
  if (n == 0) return 1.0;
  if (mu == 0.0) return 0.0;
  if (static_cast<double>(n) > mu) {
    // Terms decrease from n onward; sum until they stop contributing.
    double sum = 0.0;
    for (std::size_t m = n;; ++m) {
      const double term = std::exp(log_poisson_term(mu, m));
      sum += term;
      if (term <= sum * 1e-18 || term < 1e-320) break;
    }
    return std::min(sum, 1.0);
  }
  double head = 0.0;
  for (std::size_t m = 0; m < n; ++m) head += std::exp(log_poisson_term(mu, m));
  return std::max(0.0, 1.0 - head);
}

}  // namespace dephcap
