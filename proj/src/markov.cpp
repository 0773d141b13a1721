#include "dephcap/markov.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dephcap {

namespace {

Eigen::MatrixXcd basis_projector(std::size_t n, std::size_t d) {
  const auto dn = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dn, dn);
  m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 1.0;
  return m;
}

void check_labels(std::span<const double> p, std::size_t count) {
  if (p.empty() || p.size() != count)
    throw std::invalid_argument("Markov example: one state per label required");
  (void)ProbabilityDistribution{std::vector<double>(p.begin(), p.end())};
}

std::size_t common_dim(std::span<const DensityMatrix> states) {
  for (const auto& s : states)
    if (s.dim() != states.front().dim()) throw std::invalid_argument("Markov example: states must share a dimension");
  return states.front().dim();
}

}  // namespace

MarkovOrder::MarkovOrder(Register f, Register m, Register l) : first(f), middle(m), last(l) {
  if (f == m || m == l || f == l) throw std::invalid_argument("MarkovOrder: registers must be distinct");
}

MarkovCheck is_qmc(const TripartiteState& state, const MarkovOrder& order, double tol) {
  const double cmi = conditional_mutual_information(state, order.middle);
  return {cmi <= tol, cmi};
}

SymmetricMarkovCheck is_sqmc(const TripartiteState& state, double tol) {
  SymmetricMarkovCheck out;
  out.cmi_given_e = conditional_mutual_information(state, Register::E);
  out.cmi_given_f = conditional_mutual_information(state, Register::F);
  out.holds = out.cmi_given_e <= tol && out.cmi_given_f <= tol;
  return out;
}

TripartiteState qmc_example(std::span<const double> p, std::span<const DensityMatrix> etas) {
  check_labels(p, etas.size());
  const std::size_t k = p.size();
  const std::size_t df = common_dim(etas);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k * k * df), static_cast<Eigen::Index>(k * k * df));
  for (std::size_t n = 0; n < k; ++n)
    m += p[n] * kron(kron(basis_projector(n, k), basis_projector(n, k)), etas[n].entries());
  return TripartiteState(DensityMatrix(std::move(m)), {k, k, df});
}

TripartiteState qmc_example_swapped(std::span<const double> p, std::span<const DensityMatrix> xis) {
  check_labels(p, xis.size());
  const std::size_t k = p.size();
  const std::size_t de = common_dim(xis);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k * de * k), static_cast<Eigen::Index>(k * de * k));
  for (std::size_t n = 0; n < k; ++n)
    m += p[n] * kron(kron(basis_projector(n, k), xis[n].entries()), basis_projector(n, k));
  return TripartiteState(DensityMatrix(std::move(m)), {k, de, k});
}

TripartiteState sqmc_example(std::span<const double> p, std::span<const DensityMatrix> omegas) {
  check_labels(p, omegas.size());
  const std::size_t k = p.size();
  const std::size_t ds = common_dim(omegas);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(ds * k * k), static_cast<Eigen::Index>(ds * k * k));
  for (std::size_t n = 0; n < k; ++n)
    m += p[n] * kron(kron(omegas[n].entries(), basis_projector(n, k)), basis_projector(n, k));
  return TripartiteState(DensityMatrix(std::move(m)), {ds, k, k});
}

TripartiteState sqmci_example_isometry(const CQState& sigma_se) {
  const std::size_t k = sigma_se.labels();
  const std::size_t de = sigma_se.conditional_dim();
  const auto de_i = static_cast<Eigen::Index>(de);

  // Recover each conditional as a unit vector and check purity/orthogonality.
  std::vector<Eigen::VectorXcd> e;
  e.reserve(k);
  for (std::size_t n = 0; n < k; ++n) {
    const DensityMatrix rho = sigma_se.conditional(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries());
    const Eigen::Index top = de_i - 1;
    if (std::abs(es.eigenvalues()(top) - 1.0) > 1e-10)
      throw std::domain_error("sqmci_example_isometry: conditionals must be pure");
    e.push_back(es.eigenvectors().col(top));
  }
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t n = m + 1; n < k; ++n) {
      const double ov = std::norm(e[m].dot(e[n]));
      if (ov > 1e-10) {
        std::ostringstream os;
        os << "sqmci_example_isometry: conditionals " << m << " and " << n << " overlap (|<e_m|e_n>|^2 = " << ov
           << "); no isometry copies non-orthogonal states";
        throw std::domain_error(os.str());
      }
    }

  // V|e_l> = |e_l>|f_l>: on the span of the conditionals, V = sum_l |e_l, f_l><e_l|.
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(de_i * static_cast<Eigen::Index>(k), de_i);
  for (std::size_t l = 0; l < k; ++l) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(k));
    f(static_cast<Eigen::Index>(l)) = 1.0;
    Eigen::VectorXcd ef(de_i * static_cast<Eigen::Index>(k));
    for (Eigen::Index a = 0; a < de_i; ++a) ef.segment(a * static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = e[l](a) * f;
    v += ef * e[l].adjoint();
  }

  const TripartiteState se = embed_cq(sigma_se);
  const Eigen::MatrixXcd s_id = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  const Eigen::MatrixXcd w = kron(s_id, v);
  Eigen::MatrixXcd out = w * se.density().entries() * w.adjoint();
  return TripartiteState(DensityMatrix(std::move(out)), {k, de, k});
}

TripartiteState apply_environment_isometry(const DensityMatrix& sigma_se, std::size_t d_s, const Eigen::MatrixXcd& v,
                                           std::size_t d_e_out, std::size_t d_f_out) {
  if (d_s == 0 || sigma_se.dim() % d_s != 0)
    throw std::invalid_argument("apply_environment_isometry: S dimension does not divide the state");
  const std::size_t d_e = sigma_se.dim() / d_s;
  if (static_cast<std::size_t>(v.cols()) != d_e || static_cast<std::size_t>(v.rows()) != d_e_out * d_f_out)
    throw std::invalid_argument("apply_environment_isometry: isometry shape mismatch");
  const auto de = static_cast<Eigen::Index>(d_e);
  if ((v.adjoint() * v - Eigen::MatrixXcd::Identity(de, de)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("apply_environment_isometry: V is not an isometry");
  const Eigen::MatrixXcd w = kron(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(d_s), static_cast<Eigen::Index>(d_s)), v);
  return TripartiteState(DensityMatrix(w * sigma_se.entries() * w.adjoint(), sigma_se.psd_tolerance()),
                         {d_s, d_e_out, d_f_out});
}

HalvingReport sqmci_halving_check(const TripartiteState& state, double tol) {
  const SymmetricMarkovCheck sym = is_sqmc(state, tol);
  if (!sym.holds) {
    std::ostringstream os;
    os << "sqmci_halving_check: state is not Markov in both orders (I(S;F|E) = " << sym.cmi_given_e
       << ", I(S;E|F) = " << sym.cmi_given_f << ")";
    throw std::domain_error(os.str());
  }
  HalvingReport r;
  r.i_se = mutual_information(state, Register::S, Register::E);
  r.i_sf = mutual_information(state, Register::S, Register::F);
  r.half_sum = 0.5 * (r.i_se + r.i_sf);
  r.equal = std::abs(r.i_se - r.i_sf) <= tol;
  return r;
}

}  // namespace dephcap
