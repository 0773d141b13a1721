#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dephcap/entropy.hpp"

namespace dephcap {

/// Chain first <-> middle <-> last; the state is a Markov chain in this order
/// when I(first; last | middle) vanishes.
struct MarkovOrder {
  Register first = Register::S;
  Register middle = Register::E;
  Register last = Register::F;

  MarkovOrder() = default;
  /// Throws std::invalid_argument unless the three labels are distinct.
  MarkovOrder(Register first, Register middle, Register last);
};

inline constexpr double kMarkovTol = 1e-9;

struct MarkovCheck {
  bool holds = false;
  double cmi = 0.0;
};

MarkovCheck is_qmc(const TripartiteState& state, const MarkovOrder& order, double tol = kMarkovTol);

struct SymmetricMarkovCheck {
  bool holds = false;
  double cmi_given_e = 0.0;  // I(S;F|E)
  double cmi_given_f = 0.0;  // I(S;E|F)
};

/// Markov in both orders S <-> E <-> F and S <-> F <-> E.
SymmetricMarkovCheck is_sqmc(const TripartiteState& state, double tol = kMarkovTol);

/// sum_n p_n |n><n| (x) |n><n| (x) eta_n, a chain S <-> E <-> F.
TripartiteState qmc_example(std::span<const double> p, std::span<const DensityMatrix> etas);
/// sum_n p_n |n><n| (x) xi_n (x) |n><n|, a chain S <-> F <-> E.
TripartiteState qmc_example_swapped(std::span<const double> p, std::span<const DensityMatrix> xis);
/// sum_n p_n Omega_n (x) |n><n| (x) |n><n|, Markov in both orders.
TripartiteState sqmc_example(std::span<const double> p, std::span<const DensityMatrix> omegas);

/// Applies the copying isometry V = sum_l |e_l, f_l><e_l| to a cq state whose
/// conditionals are mutually orthogonal pure states e_l. F gets one level per
/// label. Non-orthogonal (overlap^2 > 1e-10) or mixed conditionals throw
/// std::domain_error; for coherent environments this is exactly why no such
/// isometry exists.
TripartiteState sqmci_example_isometry(const CQState& sigma_se);

/// Applies an isometry V: E -> E'F' (columns orthonormal, d_e' d_f' rows) to a
/// bipartite state on S (x) E.
TripartiteState apply_environment_isometry(const DensityMatrix& sigma_se, std::size_t d_s,
                                           const Eigen::MatrixXcd& v, std::size_t d_e_out,
                                           std::size_t d_f_out);

struct HalvingReport {
  double i_se = 0.0;
  double i_sf = 0.0;
  double half_sum = 0.0;
  bool equal = false;
};

/// For a state Markov in both orders, (I(S;E) + I(S;F))/2 == I(S;E).
/// Throws std::domain_error when the state is not an SQMC.
HalvingReport sqmci_halving_check(const TripartiteState& state, double tol = kMarkovTol);

}  // namespace dephcap
