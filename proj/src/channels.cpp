#include "dephcap/channels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dephcap {

KrausChannel::KrausChannel(std::vector<Eigen::MatrixXcd> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw std::invalid_argument("KrausChannel: no operators");
  d_out_ = static_cast<std::size_t>(kraus_.front().rows());
  d_in_ = static_cast<std::size_t>(kraus_.front().cols());
  const auto n = static_cast<Eigen::Index>(d_in_);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& k : kraus_) {
    if (static_cast<std::size_t>(k.rows()) != d_out_ || static_cast<std::size_t>(k.cols()) != d_in_)
      throw std::invalid_argument("KrausChannel: operators must share a shape");
    acc.noalias() += k.adjoint() * k;
  }
  residual_ = (acc - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd KrausChannel::apply(const Eigen::MatrixXcd& rho) const {
  if (static_cast<std::size_t>(rho.rows()) != d_in_ || rho.rows() != rho.cols())
    throw std::invalid_argument("KrausChannel::apply: input dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d_out_), static_cast<Eigen::Index>(d_out_));
  for (const auto& k : kraus_) out.noalias() += k * rho * k.adjoint();
  return out;
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply(rho.entries()), rho.psd_tolerance());
}

Eigen::MatrixXcd dephasing_apply(const Eigen::MatrixXcd& rho, double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("dephasing_apply: gamma must be >= 0");
  Eigen::MatrixXcd out = rho;
  for (Eigen::Index m = 0; m < rho.cols(); ++m)
    for (Eigen::Index n = 0; n < rho.rows(); ++n) {
      const double diff = static_cast<double>(n - m);
      out(n, m) *= std::exp(-0.5 * gamma * diff * diff);
    }
  return out;
}

DensityMatrix dephasing_apply(const DensityMatrix& rho, double gamma) {
  return DensityMatrix(dephasing_apply(rho.entries(), gamma), rho.psd_tolerance());
}

KrausChannel dephasing_kraus(double gamma, std::size_t d, double tail_tol) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("dephasing_kraus: gamma must be >= 0");
  if (d == 0) throw std::invalid_argument("dephasing_kraus: d must be positive");
  const auto dn = static_cast<Eigen::Index>(d);
  const double top = static_cast<double>(d - 1);
  const double mu_max = gamma * top * top;
  if (mu_max == 0.0) return KrausChannel({Eigen::MatrixXcd::Identity(dn, dn)});

  // Completeness on level n is a Poisson(gamma n^2) head sum; the largest
  // level needs the most terms.
  std::size_t j_max = static_cast<std::size_t>(mu_max);
  while (poisson_upper_tail(mu_max, j_max + 1) > 0.5 * tail_tol) ++j_max;

  const double floor = std::numeric_limits<double>::epsilon() * static_cast<double>(j_max + 1);
  if (tail_tol < floor) {
    std::ostringstream os;
    os << "dephasing_kraus: tail_tol " << tail_tol << " is below the summation roundoff floor " << floor
       << " for gamma (d-1)^2 = " << mu_max;
    throw std::domain_error(os.str());
  }

  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(j_max + 1);
  const double sqrt_gamma = std::sqrt(gamma);
  for (std::size_t j = 0; j <= j_max; ++j) {
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(dn, dn);
    const double jd = static_cast<double>(j);
    // (-i)^j
    const cplx phase = std::polar(1.0, -0.5 * std::numbers::pi * static_cast<double>(j % 4));
    for (Eigen::Index n = 0; n < dn; ++n) {
      const double nd = static_cast<double>(n);
      if (n == 0) {
        k(0, 0) = (j == 0) ? 1.0 : 0.0;
        continue;
      }
      const double log_abs = -0.5 * gamma * nd * nd + jd * std::log(sqrt_gamma * nd) - 0.5 * std::lgamma(jd + 1.0);
      k(n, n) = phase * std::exp(log_abs);
    }
    ops.push_back(std::move(k));
  }
  KrausChannel ch(std::move(ops));
  if (ch.completeness_residual() > tail_tol) {
    std::ostringstream os;
    os << "dephasing_kraus: completeness residual " << ch.completeness_residual() << " exceeds tail_tol " << tail_tol;
    throw std::domain_error(os.str());
  }
  return ch;
}

CQState complementary_cq_output(const ProbabilityDistribution& p, double gamma) {
  const std::size_t d = p.size();
  const double top = static_cast<double>(d - 1);
  const std::size_t d_env = env_truncation(gamma * top * top);
  std::vector<FockVector> env;
  env.reserve(d);
  for (const cplx alpha : dephasing_env_amplitudes(gamma, d)) env.push_back(coherent_vector(alpha, d_env));
  return CQState::pure(p, std::move(env));
}

KrausChannel beamsplitter_kraus(double eta, std::size_t d, std::size_t k_max) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("beamsplitter_kraus: eta must lie in (0, 1)");
  if (d == 0) throw std::invalid_argument("beamsplitter_kraus: d must be positive");
  const auto dn = static_cast<Eigen::Index>(d);
  const double log_eta = std::log(eta);
  const double log_loss = 0.5 * std::log1p(-eta * eta);
  std::vector<Eigen::MatrixXcd> ops;
  for (std::size_t k = 0; k <= k_max; ++k) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dn, dn);
    const double kd = static_cast<double>(k);
    for (std::size_t m = 0; m + k < d; ++m) {
      const double md = static_cast<double>(m);
      const double log_binom = std::lgamma(md + kd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(md + 1.0);
      b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m + k)) =
          std::exp(0.5 * log_binom + kd * log_loss + md * log_eta);
    }
    ops.push_back(std::move(b));
  }
  return KrausChannel(std::move(ops));
}

cplx beamsplitter_coherent_amplitude(cplx beta, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("beamsplitter_coherent_amplitude: eta must lie in (0, 1]");
  return eta * beta;
}

KrausChannel symmetric_qubit_kraus(const QubitSquashParams& params) {
  if (params.theta < 0.0 || params.theta > std::numbers::pi)
    throw std::invalid_argument("symmetric_qubit_kraus: theta must lie in [0, pi]");
  if (params.phi < 0.0 || params.phi > 2.0 * std::numbers::pi)
    throw std::invalid_argument("symmetric_qubit_kraus: phi must lie in [0, 2 pi]");
  const double s = std::sin(params.theta);
  const double c = std::cos(params.theta);
  const cplx e = std::polar(1.0, params.phi);
  const double h = std::numbers::sqrt2 / 2.0;
  Eigen::Matrix2cd k1 = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd k2 = Eigen::Matrix2cd::Zero();
  if (params.family == QubitFamily::A) {
    k1(0, 0) = s;
    k1(1, 1) = h;
    k2(0, 1) = h;
    k2(1, 0) = e * c;
  } else {
    k1(0, 0) = 1.0;
    k1(1, 1) = h * s;
    k2(0, 1) = h * s;
    k2(1, 1) = e * c;
  }
  return KrausChannel({Eigen::MatrixXcd(k1), Eigen::MatrixXcd(k2)});
}

Eigen::MatrixXcd complementary_from_kraus(const KrausChannel& ch, const Eigen::MatrixXcd& rho) {
  if (static_cast<std::size_t>(rho.rows()) != ch.d_in() || rho.rows() != rho.cols())
    throw std::invalid_argument("complementary_from_kraus: input dimension mismatch");
  const auto& ks = ch.operators();
  const auto r = static_cast<Eigen::Index>(ks.size());
  std::vector<Eigen::MatrixXcd> k_rho;
  k_rho.reserve(ks.size());
  for (const auto& k : ks) k_rho.push_back(k * rho);
  Eigen::MatrixXcd out(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      // Tr(K_i rho K_j^dagger) = sum of (K_i rho) .* conj(K_j)
      out(i, j) = (k_rho[static_cast<std::size_t>(i)].array() * ks[static_cast<std::size_t>(j)].array().conjugate()).sum();
  return out;
}

DensityMatrix complementary_from_kraus(const KrausChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix(complementary_from_kraus(ch, rho.entries()), rho.psd_tolerance());
}

GramSchmidtEmbedding gram_schmidt_embed(std::span<const FockVector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("gram_schmidt_embed: no vectors");
  for (const auto& v : vectors)
    if (v.dim() != vectors.front().dim())
      throw std::invalid_argument("gram_schmidt_embed: vectors must share a dimension");
  if (vectors.size() > vectors.front().dim())
    throw std::domain_error("gram_schmidt_embed: more vectors than dimensions");

  const Eigen::MatrixXcd g = vector_gram(vectors);
  const double det = g.determinant().real();
  if (!(det > 1e-12)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    const double lo = std::max(es.eigenvalues().minCoeff(), 0.0);
    std::ostringstream os;
    os << "gram_schmidt_embed: vectors are nearly dependent (Gram determinant " << det
       << ", condition estimate " << (lo > 0.0 ? es.eigenvalues().maxCoeff() / lo : INFINITY) << ")";
    throw std::domain_error(os.str());
  }

  GramSchmidtEmbedding out;
  out.gram_determinant = det;
  const auto k = static_cast<Eigen::Index>(vectors.size());
  out.coordinates = Eigen::MatrixXcd::Zero(k, k);
  for (const auto& v : vectors) {
    Eigen::VectorXcd w = v.amplitudes();
    // Two passes of modified Gram-Schmidt keep the basis orthonormal to roundoff.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : out.basis) w -= e.amplitudes().dot(w) * e.amplitudes();
    out.basis.push_back(FockVector::normalized(std::move(w)));
  }
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      out.coordinates(i, j) = out.basis[static_cast<std::size_t>(i)].inner(vectors[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace dephcap
