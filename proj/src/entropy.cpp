#include "dephcap/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dephcap {

namespace {

constexpr double kHermitianReject = 1e-9;
constexpr double kTraceTol = 1e-10;

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::domain_error("Hermitian eigensolver failed");
  return es.eigenvalues();
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, double psd_tolerance)
    : entries_(std::move(entries)), psd_tolerance_(psd_tolerance) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw std::invalid_argument("DensityMatrix: must be square and non-empty");
  if (!entries_.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
  const double residual = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (residual > kHermitianReject) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (max |rho - rho^dagger| = " << residual << ")";
    throw std::invalid_argument(os.str());
  }
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
  const double tr = entries_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " differs from 1";
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> p) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(p.size()),
                                              static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = p[i];
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return DensityMatrix(Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(d));
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::VectorXd ev = hermitian_eigenvalues(entries_);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -psd_tolerance_) {
      std::ostringstream os;
      os << "DensityMatrix: eigenvalue " << ev(i) << " below -" << psd_tolerance_;
      throw std::domain_error(os.str());
    }
    ev(i) = std::clamp(ev(i), 0.0, 1.0);
  }
  return ev;
}

double spectrum_entropy(const Eigen::VectorXd& eigenvalues, double tol) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double v = eigenvalues(i);
    if (v < -tol) {
      std::ostringstream os;
      os << "spectrum_entropy: eigenvalue " << v << " is not roundoff";
      throw std::domain_error(os.str());
    }
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) { return spectrum_entropy(rho.eigenvalues()); }

MixtureSpectrum pure_mixture_spectrum(std::span<const double> p, const Eigen::MatrixXcd& gram) {
  const auto d = static_cast<Eigen::Index>(p.size());
  if (gram.rows() != d || gram.cols() != d)
    throw std::invalid_argument("pure_mixture_spectrum: Gram matrix does not match distribution");
  Eigen::VectorXd sq(d);
  for (Eigen::Index i = 0; i < d; ++i) sq(i) = std::sqrt(std::max(p[i], 0.0));
  Eigen::MatrixXcd weighted = sq.asDiagonal() * gram * sq.asDiagonal();
  weighted = 0.5 * (weighted + weighted.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(weighted);
  if (es.info() != Eigen::Success) throw std::domain_error("pure_mixture_spectrum: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double entropy_of_pure_mixture(const ProbabilityDistribution& p, const GramMatrix& g) {
  return spectrum_entropy(pure_mixture_spectrum(p.values(), g.entries()).eigenvalues);
}

CQState::CQState(ProbabilityDistribution probs, std::vector<FockVector> pure,
                 std::vector<DensityMatrix> mixed)
    : probs_(std::move(probs)), pure_(std::move(pure)), mixed_(std::move(mixed)) {}

CQState CQState::pure(ProbabilityDistribution probs, std::vector<FockVector> conditionals) {
  if (conditionals.size() != probs.size())
    throw std::invalid_argument("CQState: one conditional per label required");
  for (const auto& v : conditionals)
    if (v.dim() != conditionals.front().dim())
      throw std::invalid_argument("CQState: conditionals must share a dimension");
  return CQState(std::move(probs), std::move(conditionals), {});
}

CQState CQState::mixed(ProbabilityDistribution probs, std::vector<DensityMatrix> conditionals) {
  if (conditionals.size() != probs.size())
    throw std::invalid_argument("CQState: one conditional per label required");
  for (const auto& r : conditionals)
    if (r.dim() != conditionals.front().dim())
      throw std::invalid_argument("CQState: conditionals must share a dimension");
  return CQState(std::move(probs), {}, std::move(conditionals));
}

std::size_t CQState::conditional_dim() const {
  return is_pure() ? pure_.front().dim() : mixed_.front().dim();
}

DensityMatrix CQState::conditional(std::size_t n) const {
  if (!is_pure()) return mixed_.at(n);
  // Truncated vectors lose at most 1e-12 of norm; renormalize for the dense form.
  const Eigen::VectorXcd& a = pure_.at(n).amplitudes();
  return DensityMatrix::pure(a / a.norm());
}

double CQState::average_entropy() const {
  if (is_pure()) return spectrum_entropy(pure_mixture_spectrum(probs_.values(), vector_gram(pure_)).eigenvalues);
  const auto d = static_cast<Eigen::Index>(conditional_dim());
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t n = 0; n < labels(); ++n) avg += probs_[n] * mixed_[n].entries();
  return von_neumann_entropy(DensityMatrix(std::move(avg)));
}

double CQState::mean_conditional_entropy() const {
  if (is_pure()) return 0.0;
  double h = 0.0;
  for (std::size_t n = 0; n < labels(); ++n)
    if (probs_[n] > 0.0) h += probs_[n] * von_neumann_entropy(mixed_[n]);
  return h;
}

double holevo_information(const CQState& cq) {
  return cq.average_entropy() - cq.mean_conditional_entropy();
}

TripartiteState::TripartiteState(DensityMatrix rho, TripartiteDims dims)
    : rho_(std::move(rho)), dims_(dims) {
  if (dims_.s == 0 || dims_.e == 0 || dims_.f == 0)
    throw std::invalid_argument("TripartiteState: factor dimensions must be positive");
  if (dims_.total() != rho_.dim()) {
    std::ostringstream os;
    os << "TripartiteState: factor dimensions " << dims_.s << "x" << dims_.e << "x" << dims_.f
       << " do not match matrix dimension " << rho_.dim();
    throw std::invalid_argument(os.str());
  }
}

std::size_t TripartiteState::dim(Register r) const {
  switch (r) {
    case Register::S: return dims_.s;
    case Register::E: return dims_.e;
    case Register::F: return dims_.f;
  }
  return 0;
}

DensityMatrix TripartiteState::reduced(bool keep_s, bool keep_e, bool keep_f) const {
  const std::array<std::size_t, 3> d{dims_.s, dims_.e, dims_.f};
  const std::array<bool, 3> keep{keep_s, keep_e, keep_f};
  std::size_t kept_dim = 1;
  for (int r = 0; r < 3; ++r)
    if (keep[r]) kept_dim *= d[r];
  const std::size_t total = dims_.total();

  // Split every full index into (kept, traced) compact indices.
  std::vector<std::size_t> kept_idx(total), traced_idx(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::array<std::size_t, 3> digit{i / (d[1] * d[2]), (i / d[2]) % d[1], i % d[2]};
    std::size_t k = 0, t = 0;
    for (int r = 0; r < 3; ++r) {
      if (keep[r])
        k = k * d[r] + digit[r];
      else
        t = t * d[r] + digit[r];
    }
    kept_idx[i] = k;
    traced_idx[i] = t;
  }

  const Eigen::MatrixXcd& full = rho_.entries();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(kept_dim),
                                                static_cast<Eigen::Index>(kept_dim));
  for (std::size_t j = 0; j < total; ++j)
    for (std::size_t i = 0; i < total; ++i)
      if (traced_idx[i] == traced_idx[j])
        out(static_cast<Eigen::Index>(kept_idx[i]), static_cast<Eigen::Index>(kept_idx[j])) +=
            full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return DensityMatrix(std::move(out), rho_.psd_tolerance());
}

double TripartiteState::entropy_of(std::initializer_list<Register> regs) const {
  bool keep[3] = {false, false, false};
  for (Register r : regs) keep[static_cast<int>(r)] = true;
  if (!keep[0] && !keep[1] && !keep[2]) return 0.0;
  return von_neumann_entropy(reduced(keep[0], keep[1], keep[2]));
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

TripartiteState product_state(const DensityMatrix& s, const DensityMatrix& e, const DensityMatrix& f) {
  return TripartiteState(DensityMatrix(kron(kron(s.entries(), e.entries()), f.entries())),
                         {s.dim(), e.dim(), f.dim()});
}

TripartiteState embed_cq(const CQState& cq) {
  const std::size_t ds = cq.labels();
  const std::size_t de = cq.conditional_dim();
  const auto de_i = static_cast<Eigen::Index>(de);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(ds * de), static_cast<Eigen::Index>(ds * de));
  for (std::size_t n = 0; n < ds; ++n)
    m.block(static_cast<Eigen::Index>(n) * de_i, static_cast<Eigen::Index>(n) * de_i, de_i, de_i) =
        cq.probs()[n] * cq.conditional(n).entries();
  return TripartiteState(DensityMatrix(std::move(m)), {ds, de, 1});
}

double mutual_information(const TripartiteState& state, Register a, Register b) {
  if (a == b) throw std::invalid_argument("mutual_information: registers must differ");
  return state.entropy_of({a}) + state.entropy_of({b}) - state.entropy_of({a, b});
}

double mutual_information_s_ef(const TripartiteState& state) {
  return state.entropy_of({Register::S}) + state.entropy_of({Register::E, Register::F}) -
         von_neumann_entropy(state.density());
}

double conditional_mutual_information(const TripartiteState& state, Register conditioning,
                                      std::size_t dim_cap) {
  if (state.dims().total() > dim_cap) {
    std::ostringstream os;
    os << "conditional_mutual_information: dimension " << state.dims().total() << " exceeds cap " << dim_cap;
    throw std::invalid_argument(os.str());
  }
  Register x = Register::S, y = Register::E;
  switch (conditioning) {
    case Register::S: x = Register::E; y = Register::F; break;
    case Register::E: x = Register::S; y = Register::F; break;
    case Register::F: x = Register::S; y = Register::E; break;
  }
  return state.entropy_of({x, conditioning}) + state.entropy_of({y, conditioning}) -
         von_neumann_entropy(state.density()) - state.entropy_of({conditioning});
}

}  // namespace dephcap
